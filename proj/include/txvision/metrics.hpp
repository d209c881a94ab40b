// txvision: vision-based attack detection for Ethereum transactions
// Copyright 2026 The txvision Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "txvision/types.hpp"

namespace txvision {

/// Row index = true class, column index = predicted class.
struct ConfusionMatrix {
  Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic> counts;
  std::vector<std::string> class_names;

  Index num_classes() const { return counts.rows(); }
  long long total() const { return counts.sum(); }

  std::string to_csv() const;
};

/// Accuracy plus macro-averaged precision/recall. A class whose prediction
/// column (or truth row) is empty contributes 0 to the macro mean and raises
/// the corresponding warning flag.
struct Scores {
  double accuracy = 0.0;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  bool zero_column_classes = false;
  bool zero_row_classes = false;
};

ConfusionMatrix confusion(const std::vector<int>& preds,
                          const std::vector<int>& labels, int num_classes,
                          std::vector<std::string> class_names = {});

Scores scores(const ConfusionMatrix& cm);

/// "99.5200"-style rendering of a [0,1] metric as a percentage.
std::string format_percent(double metric);

}  // namespace txvision
