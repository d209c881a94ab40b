// txvision: vision-based attack detection for Ethereum transactions
// Copyright 2026 The txvision Authors.
// SPDX-License-Identifier: Apache-2.0
#include "txvision/disasm.hpp"

#include "txvision/errors.hpp"
#include "txvision/opcodes.hpp"

namespace txvision {

namespace {

int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

constexpr char kHexDigits[] = "0123456789abcdef";

}  // namespace

Bytecode Bytecode::parse(std::string_view hex) {
  std::size_t start = 0;
  if (hex.size() >= 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X'))
    start = 2;

  const std::string_view payload = hex.substr(start);
  if (payload.size() % 2 != 0)
    throw ParseError("bytecode hex: odd number of digits (" +
                     std::to_string(payload.size()) + ")");

  std::vector<std::uint8_t> bytes;
  bytes.reserve(payload.size() / 2);
  for (std::size_t i = 0; i < payload.size(); i += 2) {
    const int hi = hex_nibble(payload[i]);
    const int lo = hex_nibble(payload[i + 1]);
    if (hi < 0)
      throw ParseError(std::string("bytecode hex: invalid character '") +
                       payload[i] + "' at offset " + std::to_string(start + i));
    if (lo < 0)
      throw ParseError(std::string("bytecode hex: invalid character '") +
                       payload[i + 1] + "' at offset " +
                       std::to_string(start + i + 1));
    bytes.push_back(static_cast<std::uint8_t>(hi * 16 + lo));
  }
  return Bytecode(std::move(bytes));
}

std::string Bytecode::hex() const {
  std::string out;
  out.reserve(bytes_.size() * 2);
  for (const std::uint8_t b : bytes_) {
    out.push_back(kHexDigits[b >> 4]);
    out.push_back(kHexDigits[b & 0x0f]);
  }
  return out;
}

OpcodeSequence disassemble(const Bytecode& bytecode) {
  const auto& code = bytecode.bytes();
  OpcodeSequence seq;
  seq.tokens.reserve(code.size());

  std::size_t i = 0;
  while (i < code.size()) {
    const std::uint8_t op = code[i];
    const OpcodeInfo& info = opcode_info(op);
    if (info.mnemonic == nullptr) {
      std::string tok = "INVALID_";
      tok.push_back(kHexDigits[op >> 4]);
      tok.push_back(kHexDigits[op & 0x0f]);
      seq.tokens.push_back(std::move(tok));
      ++i;
      continue;
    }
    seq.tokens.emplace_back(info.mnemonic);
    ++i;
    if (info.immediate > 0) {
      if (i + info.immediate > code.size()) {
        seq.truncated = true;
        break;
      }
      i += info.immediate;  // immediates never enter the token stream
    }
  }
  return seq;
}

}  // namespace txvision
