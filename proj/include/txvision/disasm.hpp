// txvision: vision-based attack detection for Ethereum transactions
// Copyright 2026 The txvision Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace txvision {

/// A transaction's input payload (or a contract's code), decoded from hex.
class Bytecode {
 public:
  Bytecode() = default;
  explicit Bytecode(std::vector<std::uint8_t> bytes) : bytes_(std::move(bytes)) {}

  /// Parses hex text with an optional 0x prefix. Upper-case digits are
  /// accepted and normalized. Throws ParseError naming the offending offset
  /// (in the original string) for odd length or non-hex characters.
  static Bytecode parse(std::string_view hex);

  const std::vector<std::uint8_t>& bytes() const { return bytes_; }
  std::size_t byte_len() const { return bytes_.size(); }

  /// Lower-case hex without prefix.
  std::string hex() const;

 private:
  std::vector<std::uint8_t> bytes_;
};

/// Result of disassembling one Bytecode: mnemonic tokens only, PUSH
/// immediates consumed. `truncated` is set when a trailing PUSH promised
/// more immediate bytes than the input had left.
struct OpcodeSequence {
  std::vector<std::string> tokens;
  bool truncated = false;
};

/// Single linear pass over the bytes. Unassigned bytes decode to
/// "INVALID_xx" with xx the byte in lower-case hex.
OpcodeSequence disassemble(const Bytecode& bytecode);

/// Number of bytes of the payload.
inline std::size_t input_length(const Bytecode& bytecode) {
  return bytecode.byte_len();
}

}  // namespace txvision
