// txvision: vision-based attack detection for Ethereum transactions
// Copyright 2026 The txvision Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

#include "txvision/disasm.hpp"
#include "txvision/types.hpp"

namespace txvision {

/// TF-IDF over opcode mnemonics. The vocabulary is the lexicographically
/// sorted set of terms seen at fit time and is frozen afterwards; transform
/// ignores terms outside it. IDF uses the natural log of
/// corpus_size / (doc_count + 1), so a term present in every document gets a
/// negative weight — kept as-is, not clamped.
class TfidfModel {
 public:
  /// Builds the model from a non-empty corpus. Throws ConsistencyError on an
  /// empty corpus.
  static TfidfModel fit(const std::vector<OpcodeSequence>& corpus);

  /// Raw term count times IDF, in vocabulary order. Unknown terms are
  /// ignored; an empty sequence maps to the zero vector.
  VectorXd transform(const OpcodeSequence& seq) const;

  Index d_op() const { return static_cast<Index>(vocabulary_.size()); }
  std::size_t corpus_size() const { return corpus_size_; }
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  const VectorXd& idf() const { return idf_; }

  /// Index of a term in the vocabulary, or -1 when absent.
  Index term_index(const std::string& term) const;

  void save(const std::filesystem::path& path) const;
  static TfidfModel load(const std::filesystem::path& path);

 private:
  TfidfModel() = default;
  void rebuild_index();

  std::vector<std::string> vocabulary_;
  VectorXd idf_;
  std::size_t corpus_size_ = 0;
  std::unordered_map<std::string, Index> index_;
};

}  // namespace txvision
