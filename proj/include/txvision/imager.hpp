// txvision: vision-based attack detection for Ethereum transactions
// Copyright 2026 The txvision Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <filesystem>
#include <vector>

#include "txvision/errors.hpp"
#include "txvision/types.hpp"
#include "txvision/wei.hpp"

namespace txvision {

/// Standard-scaler statistics for the numeric features [gas, input length].
/// Fitted on the training split only and then applied unchanged to test and
/// live data.
struct ScalerParams {
  VectorXd mean;
  VectorXd std_dev;
  /// Columns whose observed deviation was zero; their std is substituted
  /// with 1 so the standardized feature is identically zero.
  std::vector<bool> degenerate;

  Index dim() const { return mean.size(); }

  void save(const std::filesystem::path& path) const;
  static ScalerParams load(const std::filesystem::path& path);
};

/// Geometry of the rendered image: `h_prime` rows carry the resampled
/// feature vector, one extra row carries the transaction value.
struct ImageSpec {
  Index h_prime = 23;
  Index width = 24;

  Index height() const { return h_prime + 1; }

  /// Both image sides must be divisible by 4 (two stride-2 convolutions).
  void validate() const;
};

struct TxImage {
  MatrixXd pixels;  // height() x width
  int label = -1;   // 0..6, or -1 when unlabeled
};

/// Per-column mean and population standard deviation. Needs at least 2 rows.
ScalerParams fit_scaler(const std::vector<std::array<double, 2>>& numeric_rows);

/// (m - mean) / std, elementwise.
VectorXd standardize(const ScalerParams& params, const VectorXd& m);

/// [numeric features, opcode features] in that order.
VectorXd assemble(const VectorXd& u, const VectorXd& u_op);

/// Linear resampling of a vector onto `out_len` evenly spaced points over
/// the same [0, 1] parameter range. Input length must be >= 2.
template <typename Scalar>
VecX<Scalar> linear_resample(const VecX<Scalar>& x, Index out_len) {
  const Index n = x.size();
  if (n < 2)
    throw ConsistencyError("linear_resample: need at least 2 input points");
  if (out_len < 1)
    throw ConsistencyError("linear_resample: output length must be positive");

  VecX<Scalar> out(out_len);
  if (out_len == 1) {
    out[0] = x[0];
    return out;
  }
  const double step =
      static_cast<double>(n - 1) / static_cast<double>(out_len - 1);
  for (Index k = 0; k < out_len; ++k) {
    const double pos = static_cast<double>(k) * step;
    Index j = static_cast<Index>(pos);
    if (j >= n - 1) j = n - 2;  // keep the bracket in range at the right edge
    const double frac = pos - static_cast<double>(j);
    out[k] = static_cast<Scalar>((1.0 - frac) * static_cast<double>(x[j]) +
                                 frac * static_cast<double>(x[j + 1]));
  }
  return out;
}

/// Resamples x to h_prime*width points and lays them out row-major.
MatrixXd interpolate_reshape(const VectorXd& x, const ImageSpec& spec);

/// Value row intensity: 0 for v == 0, else 255 * log10(v) / 18 clamped to
/// [0, 255]. Monotone non-decreasing in v.
double encode_value(const Wei& v);

/// Full image: resampled features on top, constant value row at the bottom.
TxImage build_image(const VectorXd& x, const Wei& value, const ImageSpec& spec);

/// Batch container for encoded images: header (count, dims, label presence)
/// plus float32 pixels (sample-major, rows within a sample) and one label
/// byte per image when labeled.
struct ImageBatch {
  Index height = 0;
  Index width = 0;
  bool labeled = false;
  std::vector<MatrixXf> pixels;
  std::vector<std::uint8_t> labels;

  void save(const std::filesystem::path& path) const;
  static ImageBatch load(const std::filesystem::path& path);
};

}  // namespace txvision
