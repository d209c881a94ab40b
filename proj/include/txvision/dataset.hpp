// txvision: vision-based attack detection for Ethereum transactions
// Copyright 2026 The txvision Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "txvision/disasm.hpp"
#include "txvision/wei.hpp"

namespace txvision {

inline constexpr int kNumClasses = 7;
inline constexpr std::array<const char*, kNumClasses> kClassNames = {
    "NORMAL", "DoS", "OaU", "FoT", "Re", "DeC", "FDV"};

struct TxRecord {
  Bytecode input;
  std::uint64_t gas = 0;
  Wei value;
  int label = -1;  // 0..6, or -1 for unlabeled live data
};

struct LabeledDataset {
  std::vector<TxRecord> records;
  std::string split_tag = "unsplit";

  std::array<std::size_t, kNumClasses> class_counts() const;
  std::size_t size() const { return records.size(); }
};

/// CSV schema: header `input_hex,gas,value,label`; gas and value are decimal,
/// input_hex optionally 0x-prefixed, label an integer 0..6 or empty for
/// unlabeled rows. Fields must not contain commas; no quoting is supported.
struct LoadResult {
  LabeledDataset dataset;
  struct RowError {
    std::size_t line;  // 1-based, header is line 1
    std::string message;
  };
  std::vector<RowError> errors;
};

/// Parses the CSV. Missing/renamed columns throw ParseError; malformed rows
/// are collected in the error report instead of being silently dropped.
LoadResult load_csv(const std::filesystem::path& path);

void save_csv(const LabeledDataset& dataset, const std::filesystem::path& path);

/// load_csv plus a check that the per-class totals equal the published BTAT
/// census (302,749 transactions). Throws ConsistencyError on mismatch.
LoadResult load_btat_csv(const std::filesystem::path& path);

inline constexpr std::array<std::size_t, kNumClasses> kBtatClassTotals = {
    152423, 22994, 29254, 41732, 22682, 22455, 11209};

/// Seeded synthetic corpus with `per_class` records of each class.
///
/// Each class embeds a distinctive opcode motif into random filler code and
/// draws gas/value/length from class-correlated ranges:
///
///   NORMAL  mixed stack/memory/flow ops; moderate gas; value 0..10 ETH
///   DoS     GAS/GT/JUMPI polling loops; gas near the 30M block cap; value 0
///   OaU     dense ADD/MUL/SUB/EXP/ADDMOD/MULMOD arithmetic; small value
///   FoT     nearly empty input (0..8 ops); gas ~21000; value 0
///   Re      repeated CALL blocks with CALLER/BALANCE; value 0.1..100 ETH
///   DeC     DELEGATECALL blocks (always >= 1) with EXTCODESIZE/CALLDATACOPY
///   FDV     bare PUSH4/EQ/JUMPI function-selector dispatch; value 0
LabeledDataset synth_generate(std::size_t per_class, std::uint64_t seed);

/// Deterministic stratified split; per-class test counts are
/// round(n_c * test_fraction). Throws ConsistencyError if the fraction is
/// outside (0, 1) or any class has fewer than 2 records.
std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& dataset,
                                                double test_fraction,
                                                std::uint64_t seed);

/// Index form of `split`, exposed so callers can reason about membership.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    const LabeledDataset& dataset, double test_fraction, std::uint64_t seed);

}  // namespace txvision
