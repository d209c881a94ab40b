// txvision: vision-based attack detection for Ethereum transactions
// Copyright 2026 The txvision Authors.
// SPDX-License-Identifier: Apache-2.0
#include "txvision/tfidf.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "txvision/container_io.hpp"
#include "txvision/errors.hpp"

namespace txvision {

namespace {
constexpr const char* kMagic = "txvision.tfidf.v1";
}

TfidfModel TfidfModel::fit(const std::vector<OpcodeSequence>& corpus) {
  if (corpus.empty())
    throw ConsistencyError("tfidf: cannot fit on an empty corpus");

  // Document frequency per term. std::map keeps the vocabulary sorted.
  std::map<std::string, std::size_t> doc_count;
  for (const OpcodeSequence& doc : corpus) {
    const std::set<std::string> uniq(doc.tokens.begin(), doc.tokens.end());
    for (const std::string& t : uniq) ++doc_count[t];
  }

  TfidfModel model;
  model.corpus_size_ = corpus.size();
  model.vocabulary_.reserve(doc_count.size());
  model.idf_.resize(static_cast<Index>(doc_count.size()));

  Index j = 0;
  const double n = static_cast<double>(corpus.size());
  for (const auto& [term, df] : doc_count) {
    model.vocabulary_.push_back(term);
    model.idf_[j++] = std::log(n / (static_cast<double>(df) + 1.0));
  }
  model.rebuild_index();
  return model;
}

VectorXd TfidfModel::transform(const OpcodeSequence& seq) const {
  VectorXd counts = VectorXd::Zero(d_op());
  for (const std::string& tok : seq.tokens) {
    const auto it = index_.find(tok);
    if (it != index_.end()) counts[it->second] += 1.0;
  }
  return counts.cwiseProduct(idf_);
}

Index TfidfModel::term_index(const std::string& term) const {
  const auto it = index_.find(term);
  return it == index_.end() ? Index{-1} : it->second;
}

void TfidfModel::rebuild_index() {
  index_.clear();
  index_.reserve(vocabulary_.size());
  for (Index i = 0; i < d_op(); ++i) index_.emplace(vocabulary_[i], i);
}

void TfidfModel::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("tfidf: cannot open for writing: " + path.string());

  std::string vocab;
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
    if (i > 0) vocab.push_back(',');
    vocab += vocabulary_[i];
  }
  io::write_header(os, kMagic,
                   {{"log_base", "e"},
                    {"d_op", std::to_string(vocabulary_.size())},
                    {"corpus_size", std::to_string(corpus_size_)},
                    {"vocabulary", vocab}});
  io::write_array(os, idf_.data(), static_cast<std::size_t>(idf_.size()));
  if (!os) throw IoError("tfidf: write failed: " + path.string());
}

TfidfModel TfidfModel::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("tfidf: cannot open: " + path.string());
  const io::Header h = io::read_header(is, kMagic);

  if (h.require("log_base") != "e")
    throw ParseError("tfidf: unsupported log base '" + h.require("log_base") + "'");

  TfidfModel model;
  model.corpus_size_ = static_cast<std::size_t>(h.require_int("corpus_size"));

  const auto d_op = h.require_int("d_op");
  std::stringstream vocab(h.require("vocabulary"));
  std::string term;
  while (std::getline(vocab, term, ',')) model.vocabulary_.push_back(term);
  if (static_cast<long long>(model.vocabulary_.size()) != d_op)
    throw ParseError("tfidf: vocabulary size does not match d_op");

  model.idf_.resize(static_cast<Index>(d_op));
  io::read_array(is, model.idf_.data(), static_cast<std::size_t>(d_op), "tfidf");
  model.rebuild_index();
  return model;
}

}  // namespace txvision
