// txvision: vision-based attack detection for Ethereum transactions
// Copyright 2026 The txvision Authors.
// SPDX-License-Identifier: Apache-2.0
#include "txvision/metrics.hpp"

#include <cstdio>
#include <sstream>

#include "txvision/errors.hpp"

namespace txvision {

ConfusionMatrix confusion(const std::vector<int>& preds,
                          const std::vector<int>& labels, int num_classes,
                          std::vector<std::string> class_names) {
  if (preds.size() != labels.size())
    throw ConsistencyError("confusion: preds and labels differ in length");
  if (num_classes < 1)
    throw ConsistencyError("confusion: need at least one class");

  ConfusionMatrix cm;
  cm.counts.setZero(num_classes, num_classes);
  if (class_names.empty()) {
    for (int c = 0; c < num_classes; ++c)
      class_names.push_back("class" + std::to_string(c));
  }
  cm.class_names = std::move(class_names);

  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (labels[i] < 0 || labels[i] >= num_classes || preds[i] < 0 ||
        preds[i] >= num_classes)
      throw ConsistencyError("confusion: class id out of range at sample " +
                             std::to_string(i));
    ++cm.counts(labels[i], preds[i]);
  }
  return cm;
}

Scores scores(const ConfusionMatrix& cm) {
  const long long total = cm.total();
  if (total == 0) throw ConsistencyError("scores: empty confusion matrix");

  const Index c = cm.num_classes();
  Scores s;
  s.accuracy = static_cast<double>(cm.counts.trace()) / static_cast<double>(total);

  double precision_sum = 0.0;
  double recall_sum = 0.0;
  for (Index i = 0; i < c; ++i) {
    const long long col = cm.counts.col(i).sum();
    const long long row = cm.counts.row(i).sum();
    const long long diag = cm.counts(i, i);
    if (col == 0)
      s.zero_column_classes = true;
    else
      precision_sum += static_cast<double>(diag) / static_cast<double>(col);
    if (row == 0)
      s.zero_row_classes = true;
    else
      recall_sum += static_cast<double>(diag) / static_cast<double>(row);
  }
  s.macro_precision = precision_sum / static_cast<double>(c);
  s.macro_recall = recall_sum / static_cast<double>(c);
  return s;
}

std::string ConfusionMatrix::to_csv() const {
  std::ostringstream os;
  os << "true\\pred";
  for (const auto& name : class_names) os << ',' << name;
  os << '\n';
  for (Index i = 0; i < num_classes(); ++i) {
    os << class_names[static_cast<std::size_t>(i)];
    for (Index j = 0; j < num_classes(); ++j) os << ',' << counts(i, j);
    os << '\n';
  }
  return os.str();
}

std::string format_percent(double metric) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", metric * 100.0);
  return buf;
}

}  // namespace txvision
