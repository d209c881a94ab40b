// txvision: vision-based attack detection for Ethereum transactions
// Copyright 2026 The txvision Authors.
// SPDX-License-Identifier: Apache-2.0
#include "txvision/imager.hpp"

#include <algorithm>
#include <array>
#include <fstream>

#include "txvision/container_io.hpp"

namespace txvision {

namespace {
constexpr const char* kScalerMagic = "txvision.scaler.v1";
constexpr const char* kImagesMagic = "txvision.images.v1";
}  // namespace

void ImageSpec::validate() const {
  if (h_prime < 1 || width < 1)
    throw ConsistencyError("image spec: dimensions must be positive");
  if (height() % 4 != 0 || width % 4 != 0)
    throw ConsistencyError("image spec: H and W must be divisible by 4, got " +
                           std::to_string(height()) + "x" + std::to_string(width));
}

ScalerParams fit_scaler(const std::vector<std::array<double, 2>>& numeric_rows) {
  if (numeric_rows.size() < 2)
    throw ConsistencyError("scaler: need at least 2 rows to fit");

  const double n = static_cast<double>(numeric_rows.size());
  ScalerParams p;
  p.mean = VectorXd::Zero(2);
  p.std_dev = VectorXd::Zero(2);
  p.degenerate.assign(2, false);

  for (const auto& row : numeric_rows) {
    p.mean[0] += row[0];
    p.mean[1] += row[1];
  }
  p.mean /= n;

  for (const auto& row : numeric_rows) {
    p.std_dev[0] += (row[0] - p.mean[0]) * (row[0] - p.mean[0]);
    p.std_dev[1] += (row[1] - p.mean[1]) * (row[1] - p.mean[1]);
  }
  p.std_dev = (p.std_dev / n).cwiseSqrt();  // population deviation

  for (Index c = 0; c < 2; ++c) {
    if (p.std_dev[c] == 0.0) {
      p.std_dev[c] = 1.0;
      p.degenerate[c] = true;
    }
  }
  return p;
}

VectorXd standardize(const ScalerParams& params, const VectorXd& m) {
  if (m.size() != params.dim())
    throw ConsistencyError("scaler: feature dimension mismatch");
  return (m - params.mean).cwiseQuotient(params.std_dev);
}

VectorXd assemble(const VectorXd& u, const VectorXd& u_op) {
  if (u.size() == 0)
    throw ConsistencyError("assemble: numeric feature vector is empty");
  if (!u.allFinite() || !u_op.allFinite())
    throw ConsistencyError("assemble: non-finite feature values");
  VectorXd x(u.size() + u_op.size());
  x << u, u_op;
  return x;
}

MatrixXd interpolate_reshape(const VectorXd& x, const ImageSpec& spec) {
  spec.validate();
  const VectorXd r = linear_resample(x, spec.h_prime * spec.width);
  MatrixXd img(spec.h_prime, spec.width);
  for (Index h = 0; h < spec.h_prime; ++h)
    for (Index w = 0; w < spec.width; ++w) img(h, w) = r[h * spec.width + w];
  return img;
}

double encode_value(const Wei& v) {
  if (v.is_zero()) return 0.0;
  const double a = 255.0 * v.log10() / 18.0;
  return std::clamp(a, 0.0, 255.0);
}

TxImage build_image(const VectorXd& x, const Wei& value, const ImageSpec& spec) {
  TxImage image;
  image.pixels.resize(spec.height(), spec.width);
  image.pixels.topRows(spec.h_prime) = interpolate_reshape(x, spec);
  image.pixels.row(spec.h_prime).setConstant(encode_value(value));
  return image;
}

void ScalerParams::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("scaler: cannot open for writing: " + path.string());

  std::string degen;
  for (std::size_t i = 0; i < degenerate.size(); ++i) {
    if (i > 0) degen.push_back(',');
    degen.push_back(degenerate[i] ? '1' : '0');
  }
  io::write_header(os, kScalerMagic,
                   {{"dim", std::to_string(mean.size())}, {"degenerate", degen}});
  io::write_array(os, mean.data(), static_cast<std::size_t>(mean.size()));
  io::write_array(os, std_dev.data(), static_cast<std::size_t>(std_dev.size()));
  if (!os) throw IoError("scaler: write failed: " + path.string());
}

ScalerParams ScalerParams::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("scaler: cannot open: " + path.string());
  const io::Header h = io::read_header(is, kScalerMagic);

  const Index dim = static_cast<Index>(h.require_int("dim"));
  ScalerParams p;
  p.mean.resize(dim);
  p.std_dev.resize(dim);
  io::read_array(is, p.mean.data(), static_cast<std::size_t>(dim), "scaler");
  io::read_array(is, p.std_dev.data(), static_cast<std::size_t>(dim), "scaler");

  const std::string& degen = h.require("degenerate");
  for (const char c : degen)
    if (c != ',') p.degenerate.push_back(c == '1');
  if (static_cast<Index>(p.degenerate.size()) != dim)
    throw ParseError("scaler: degenerate flags do not match dim");
  return p;
}

void ImageBatch::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("images: cannot open for writing: " + path.string());

  io::write_header(os, kImagesMagic,
                   {{"count", std::to_string(pixels.size())},
                    {"height", std::to_string(height)},
                    {"width", std::to_string(width)},
                    {"labels", labeled ? "1" : "0"}});
  std::vector<float> row_major(static_cast<std::size_t>(height * width));
  for (const MatrixXf& img : pixels) {
    if (img.rows() != height || img.cols() != width)
      throw ConsistencyError("images: inconsistent image dimensions in batch");
    for (Index h = 0; h < height; ++h)
      for (Index w = 0; w < width; ++w)
        row_major[static_cast<std::size_t>(h * width + w)] = img(h, w);
    io::write_array(os, row_major.data(), row_major.size());
  }
  if (labeled) {
    if (labels.size() != pixels.size())
      throw ConsistencyError("images: label count does not match image count");
    io::write_array(os, labels.data(), labels.size());
  }
  if (!os) throw IoError("images: write failed: " + path.string());
}

ImageBatch ImageBatch::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("images: cannot open: " + path.string());
  const io::Header h = io::read_header(is, kImagesMagic);

  ImageBatch batch;
  const auto count = h.require_int("count");
  batch.height = static_cast<Index>(h.require_int("height"));
  batch.width = static_cast<Index>(h.require_int("width"));
  batch.labeled = h.require("labels") == "1";

  std::vector<float> row_major(
      static_cast<std::size_t>(batch.height * batch.width));
  batch.pixels.reserve(static_cast<std::size_t>(count));
  for (long long i = 0; i < count; ++i) {
    io::read_array(is, row_major.data(), row_major.size(), "images");
    MatrixXf img(batch.height, batch.width);
    for (Index r = 0; r < batch.height; ++r)
      for (Index w = 0; w < batch.width; ++w)
        img(r, w) = row_major[static_cast<std::size_t>(r * batch.width + w)];
    batch.pixels.push_back(std::move(img));
  }
  if (batch.labeled) {
    batch.labels.resize(static_cast<std::size_t>(count));
    io::read_array(is, batch.labels.data(), batch.labels.size(), "images");
  }
  return batch;
}

}  // namespace txvision
