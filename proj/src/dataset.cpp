// txvision: vision-based attack detection for Ethereum transactions
// Copyright 2026 The txvision Authors.
// SPDX-License-Identifier: Apache-2.0
#include "txvision/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "txvision/errors.hpp"
#include "txvision/opcodes.hpp"
#include "txvision/rng.hpp"

namespace txvision {

namespace {

// Opcode bytes used by the synthetic generator.
enum Op : std::uint8_t {
  STOP = 0x00, ADD = 0x01, MUL = 0x02, SUB = 0x03, ADDMOD = 0x08,
  MULMOD = 0x09, EXP = 0x0a, GT = 0x11, EQ = 0x14, ISZERO = 0x15,
  NOT_ = 0x19, BALANCE = 0x31, CALLER = 0x33, CALLVALUE = 0x34,
  CALLDATALOAD = 0x35, CALLDATASIZE = 0x36, CALLDATACOPY = 0x37,
  CODESIZE = 0x38, EXTCODESIZE = 0x3b, POP = 0x50, MLOAD = 0x51,
  MSTORE = 0x52, SLOAD = 0x54, SSTORE = 0x55, JUMPI = 0x57, GAS = 0x5a,
  JUMPDEST = 0x5b, PUSH1 = 0x60, PUSH2 = 0x61, PUSH4 = 0x63, DUP1 = 0x80,
  DUP2 = 0x81, SWAP1 = 0x90, CALL = 0xf1, RETURN = 0xf3,
  DELEGATECALL = 0xf4,
};

/// Emits opcodes with freshly drawn immediates, so the assembled bytecode
/// disassembles back to exactly the emitted mnemonic sequence.
class CodeBuilder {
 public:
  explicit CodeBuilder(std::mt19937_64& rng) : rng_(rng) {}

  void emit(std::uint8_t op) {
    bytes_.push_back(op);
    for (int i = 0; i < opcode_info(op).immediate; ++i)
      bytes_.push_back(static_cast<std::uint8_t>(uniform_index(rng_, 256)));
  }

  void emit_all(std::initializer_list<std::uint8_t> ops) {
    for (const auto op : ops) emit(op);
  }

  Bytecode take() { return Bytecode(std::move(bytes_)); }

 private:
  std::mt19937_64& rng_;
  std::vector<std::uint8_t> bytes_;
};

constexpr std::uint8_t kMixedPool[] = {
    PUSH1, PUSH2, DUP1, DUP2, SWAP1, POP,    MLOAD,        MSTORE,
    SLOAD, SSTORE, JUMPDEST, CALLVALUE, CALLDATALOAD, ISZERO,
    EQ,    JUMPI, CALLDATASIZE, CODESIZE};

void emit_filler(CodeBuilder& cb, std::mt19937_64& rng, std::int64_t count) {
  for (std::int64_t i = 0; i < count; ++i)
    cb.emit(kMixedPool[uniform_index(rng, std::size(kMixedPool))]);
}

Wei random_wei(std::mt19937_64& rng, int min_digits, int max_digits) {
  const auto digits = uniform_int(rng, min_digits, max_digits);
  std::string s;
  s.push_back(static_cast<char>('1' + uniform_index(rng, 9)));
  for (std::int64_t i = 1; i < digits; ++i)
    s.push_back(static_cast<char>('0' + uniform_index(rng, 10)));
  return Wei::from_dec(s);
}

TxRecord make_record(int label, std::mt19937_64& rng) {
  CodeBuilder cb(rng);
  TxRecord rec;
  rec.label = label;

  switch (label) {
    case 0: {  // NORMAL: broad mix, no dominant motif
      emit_filler(cb, rng, uniform_int(rng, 60, 200));
      rec.gas = static_cast<std::uint64_t>(uniform_int(rng, 21000, 300000));
      rec.value = uniform_real(rng) < 0.3 ? Wei()
                                          : random_wei(rng, 16, 20);
      break;
    }
    case 1: {  // DoS: gas-polling loops, gas near the block cap
      emit_filler(cb, rng, uniform_int(rng, 5, 15));
      const auto blocks = uniform_int(rng, 8, 24);
      for (std::int64_t b = 0; b < blocks; ++b)
        cb.emit_all({JUMPDEST, PUSH2, SLOAD, GAS, GT, PUSH2, JUMPI});
      emit_filler(cb, rng, uniform_int(rng, 5, 15));
      rec.gas = static_cast<std::uint64_t>(uniform_int(rng, 27000000, 30000000));
      rec.value = Wei();
      break;
    }
    case 2: {  // OaU: dense wrap-prone arithmetic
      emit_filler(cb, rng, uniform_int(rng, 5, 15));
      const auto blocks = uniform_int(rng, 10, 30);
      for (std::int64_t b = 0; b < blocks; ++b) {
        cb.emit_all({PUSH1, DUP1, ADD, PUSH1, MUL, SUB, NOT_});
        if (uniform_real(rng) < 0.5) cb.emit_all({PUSH1, EXP});
        if (uniform_real(rng) < 0.3) cb.emit_all({PUSH1, PUSH1, ADDMOD});
        if (uniform_real(rng) < 0.3) cb.emit_all({PUSH1, PUSH1, MULMOD});
      }
      rec.gas = static_cast<std::uint64_t>(uniform_int(rng, 50000, 500000));
      rec.value = uniform_real(rng) < 0.5 ? Wei() : random_wei(rng, 1, 15);
      break;
    }
    case 3: {  // FoT: spam — nearly empty input, minimal gas, zero value
      const auto ops = uniform_int(rng, 0, 8);
      for (std::int64_t i = 0; i < ops; ++i)
        cb.emit(uniform_real(rng) < 0.6 ? PUSH1 : STOP);
      rec.gas = static_cast<std::uint64_t>(uniform_int(rng, 21000, 25000));
      rec.value = Wei();
      break;
    }
    case 4: {  // Re: repeated external calls before state settles
      emit_filler(cb, rng, uniform_int(rng, 5, 15));
      const auto blocks = uniform_int(rng, 6, 20);
      for (std::int64_t b = 0; b < blocks; ++b) {
        if (uniform_real(rng) < 0.4) cb.emit_all({CALLER, BALANCE});
        cb.emit_all({PUSH1, PUSH1, PUSH1, PUSH1, CALLER, PUSH2, CALL, ISZERO});
      }
      rec.gas = static_cast<std::uint64_t>(uniform_int(rng, 100000, 1000000));
      rec.value = random_wei(rng, 18, 21);
      break;
    }
    case 5: {  // DeC: delegatecall proxying into untrusted code
      emit_filler(cb, rng, uniform_int(rng, 5, 15));
      const auto blocks = uniform_int(rng, 3, 12);
      for (std::int64_t b = 0; b < blocks; ++b)
        cb.emit_all({CALLDATASIZE, PUSH1, PUSH1, CALLDATACOPY, PUSH2,
                     EXTCODESIZE, PUSH1, DELEGATECALL});
      emit_filler(cb, rng, uniform_int(rng, 5, 15));
      rec.gas = static_cast<std::uint64_t>(uniform_int(rng, 80000, 400000));
      rec.value = uniform_real(rng) < 0.2 ? Wei() : random_wei(rng, 10, 19);
      break;
    }
    case 6: {  // FDV: bare function-selector dispatch
      cb.emit_all({PUSH1, CALLDATALOAD});
      const auto blocks = uniform_int(rng, 3, 10);
      for (std::int64_t b = 0; b < blocks; ++b)
        cb.emit_all({DUP1, PUSH4, EQ, PUSH2, JUMPI});
      cb.emit_all({PUSH1, RETURN});
      rec.gas = static_cast<std::uint64_t>(uniform_int(rng, 30000, 100000));
      rec.value = Wei();
      break;
    }
    default:
      throw ConsistencyError("synth: unknown class " + std::to_string(label));
  }
  rec.input = cb.take();
  return rec;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::uint64_t parse_u64(const std::string& s, const char* what) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec == std::errc::result_out_of_range)
    throw ParseError(std::string(what) + " overflows 64 bits: " + s);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw ParseError(std::string(what) + " is not a non-negative integer: '" +
                     s + "'");
  return v;
}

}  // namespace

std::array<std::size_t, kNumClasses> LabeledDataset::class_counts() const {
  std::array<std::size_t, kNumClasses> counts{};
  for (const TxRecord& r : records)
    if (r.label >= 0 && r.label < kNumClasses)
      ++counts[static_cast<std::size_t>(r.label)];
  return counts;
}

LabeledDataset synth_generate(std::size_t per_class, std::uint64_t seed) {
  if (per_class < 1)
    throw ConsistencyError("synth: per_class must be at least 1");
  std::mt19937_64 rng(seed);
  LabeledDataset ds;
  ds.records.reserve(per_class * kNumClasses);
  for (int label = 0; label < kNumClasses; ++label)
    for (std::size_t i = 0; i < per_class; ++i)
      ds.records.push_back(make_record(label, rng));
  return ds;
}

LoadResult load_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("dataset: cannot open: " + path.string());

  std::string line;
  if (!std::getline(is, line))
    throw ParseError("dataset: missing header row in " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split_fields(line);
  const auto column = [&header](const char* name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end())
      throw ParseError(std::string("dataset: missing column '") + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t col_input = column("input_hex");
  const std::size_t col_gas = column("gas");
  const std::size_t col_value = column("value");
  const std::size_t col_label = column("label");

  LoadResult result;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    const auto fields = split_fields(line);
    try {
      if (fields.size() != header.size())
        throw ParseError("expected " + std::to_string(header.size()) +
                         " fields, got " + std::to_string(fields.size()));
      TxRecord rec;
      rec.input = Bytecode::parse(fields[col_input]);
      rec.gas = parse_u64(fields[col_gas], "gas");
      const std::string& value = fields[col_value];
      rec.value = value.starts_with("0x") || value.starts_with("0X")
                      ? Wei::from_hex(value)
                      : Wei::from_dec(value);
      const std::string& label = fields[col_label];
      if (label.empty()) {
        rec.label = -1;
      } else {
        const auto id = parse_u64(label, "label");
        if (id >= kNumClasses)
          throw ParseError("label out of range: " + label);
        rec.label = static_cast<int>(id);
      }
      result.dataset.records.push_back(std::move(rec));
    } catch (const ParseError& e) {
      result.errors.push_back({line_no, e.what()});
    }
  }
  return result;
}

void save_csv(const LabeledDataset& dataset, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw IoError("dataset: cannot open for writing: " + path.string());
  os << "input_hex,gas,value,label\n";
  for (const TxRecord& r : dataset.records) {
    os << r.input.hex() << ',' << r.gas << ',' << r.value.dec() << ',';
    if (r.label >= 0) os << r.label;
    os << '\n';
  }
  if (!os) throw IoError("dataset: write failed: " + path.string());
}

LoadResult load_btat_csv(const std::filesystem::path& path) {
  LoadResult result = load_csv(path);
  const auto counts = result.dataset.class_counts();
  std::size_t total = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    total += counts[static_cast<std::size_t>(c)];
    if (counts[static_cast<std::size_t>(c)] != kBtatClassTotals[static_cast<std::size_t>(c)])
      throw ConsistencyError(
          std::string("BTAT census mismatch for ") + kClassNames[static_cast<std::size_t>(c)] +
          ": expected " + std::to_string(kBtatClassTotals[static_cast<std::size_t>(c)]) +
          ", loaded " + std::to_string(counts[static_cast<std::size_t>(c)]));
  }
  if (total != 302749)
    throw ConsistencyError("BTAT census mismatch: expected 302749 records, loaded " +
                           std::to_string(total));
  return result;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(
    const LabeledDataset& dataset, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw ConsistencyError("split: test_fraction must lie in (0, 1)");

  std::array<std::vector<std::size_t>, kNumClasses> by_class;
  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    const int label = dataset.records[i].label;
    if (label < 0)
      throw ConsistencyError("split: dataset contains unlabeled records");
    by_class[static_cast<std::size_t>(label)].push_back(i);
  }

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> train, test;
  for (auto& indices : by_class) {
    if (indices.empty()) continue;
    if (indices.size() < 2)
      throw ConsistencyError("split: a class has fewer than 2 records");
    shuffle_in_place(rng, indices);
    const auto n_test = static_cast<std::size_t>(std::llround(
        static_cast<double>(indices.size()) * test_fraction));
    test.insert(test.end(), indices.begin(), indices.begin() + static_cast<std::ptrdiff_t>(n_test));
    train.insert(train.end(), indices.begin() + static_cast<std::ptrdiff_t>(n_test), indices.end());
  }
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());
  return {std::move(train), std::move(test)};
}

std::pair<LabeledDataset, LabeledDataset> split(const LabeledDataset& dataset,
                                                double test_fraction,
                                                std::uint64_t seed) {
  const auto [train_idx, test_idx] = split_indices(dataset, test_fraction, seed);
  LabeledDataset train, test;
  train.split_tag = "train";
  test.split_tag = "test";
  train.records.reserve(train_idx.size());
  test.records.reserve(test_idx.size());
  for (const auto i : train_idx) train.records.push_back(dataset.records[i]);
  for (const auto i : test_idx) test.records.push_back(dataset.records[i]);
  return {std::move(train), std::move(test)};
}

}  // namespace txvision
