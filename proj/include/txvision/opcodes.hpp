// txvision: vision-based attack detection for Ethereum transactions
// Copyright 2026 The txvision Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace txvision {

/// One entry of the EVM instruction table. `mnemonic == nullptr` marks an
/// unassigned byte; `immediate` is the number of inline data bytes that
/// follow the instruction (nonzero only for PUSH1..PUSH32).
struct OpcodeInfo {
  const char* mnemonic = nullptr;
  std::uint8_t immediate = 0;
};

namespace detail {

constexpr std::array<OpcodeInfo, 256> make_opcode_table() {
  std::array<OpcodeInfo, 256> t{};

  auto set = [&t](std::uint8_t op, const char* name, std::uint8_t imm = 0) {
    t[op] = OpcodeInfo{name, imm};
  };

  // 0x00s: stop and arithmetic
  set(0x00, "STOP");
  set(0x01, "ADD");
  set(0x02, "MUL");
  set(0x03, "SUB");
  set(0x04, "DIV");
  set(0x05, "SDIV");
  set(0x06, "MOD");
  set(0x07, "SMOD");
  set(0x08, "ADDMOD");
  set(0x09, "MULMOD");
  set(0x0a, "EXP");
  set(0x0b, "SIGNEXTEND");

  // 0x10s: comparison and bitwise logic
  set(0x10, "LT");
  set(0x11, "GT");
  set(0x12, "SLT");
  set(0x13, "SGT");
  set(0x14, "EQ");
  set(0x15, "ISZERO");
  set(0x16, "AND");
  set(0x17, "OR");
  set(0x18, "XOR");
  set(0x19, "NOT");
  set(0x1a, "BYTE");
  set(0x1b, "SHL");
  set(0x1c, "SHR");
  set(0x1d, "SAR");

  set(0x20, "KECCAK256");

  // 0x30s: environment
  set(0x30, "ADDRESS");
  set(0x31, "BALANCE");
  set(0x32, "ORIGIN");
  set(0x33, "CALLER");
  set(0x34, "CALLVALUE");
  set(0x35, "CALLDATALOAD");
  set(0x36, "CALLDATASIZE");
  set(0x37, "CALLDATACOPY");
  set(0x38, "CODESIZE");
  set(0x39, "CODECOPY");
  set(0x3a, "GASPRICE");
  set(0x3b, "EXTCODESIZE");
  set(0x3c, "EXTCODECOPY");
  set(0x3d, "RETURNDATASIZE");
  set(0x3e, "RETURNDATACOPY");
  set(0x3f, "EXTCODEHASH");

  // 0x40s: block information
  set(0x40, "BLOCKHASH");
  set(0x41, "COINBASE");
  set(0x42, "TIMESTAMP");
  set(0x43, "NUMBER");
  set(0x44, "PREVRANDAO");
  set(0x45, "GASLIMIT");
  set(0x46, "CHAINID");
  set(0x47, "SELFBALANCE");
  set(0x48, "BASEFEE");

  // 0x50s: stack, memory, storage and flow
  set(0x50, "POP");
  set(0x51, "MLOAD");
  set(0x52, "MSTORE");
  set(0x53, "MSTORE8");
  set(0x54, "SLOAD");
  set(0x55, "SSTORE");
  set(0x56, "JUMP");
  set(0x57, "JUMPI");
  set(0x58, "PC");
  set(0x59, "MSIZE");
  set(0x5a, "GAS");
  set(0x5b, "JUMPDEST");
  set(0x5f, "PUSH0");

  // 0x60..0x7f: PUSH1..PUSH32 carry 1..32 immediate bytes
  constexpr const char* push_names[32] = {
      "PUSH1",  "PUSH2",  "PUSH3",  "PUSH4",  "PUSH5",  "PUSH6",  "PUSH7",
      "PUSH8",  "PUSH9",  "PUSH10", "PUSH11", "PUSH12", "PUSH13", "PUSH14",
      "PUSH15", "PUSH16", "PUSH17", "PUSH18", "PUSH19", "PUSH20", "PUSH21",
      "PUSH22", "PUSH23", "PUSH24", "PUSH25", "PUSH26", "PUSH27", "PUSH28",
      "PUSH29", "PUSH30", "PUSH31", "PUSH32"};
  for (int i = 0; i < 32; ++i)
    set(static_cast<std::uint8_t>(0x60 + i), push_names[i],
        static_cast<std::uint8_t>(i + 1));

  constexpr const char* dup_names[16] = {
      "DUP1",  "DUP2",  "DUP3",  "DUP4",  "DUP5",  "DUP6",  "DUP7",  "DUP8",
      "DUP9",  "DUP10", "DUP11", "DUP12", "DUP13", "DUP14", "DUP15", "DUP16"};
  for (int i = 0; i < 16; ++i)
    set(static_cast<std::uint8_t>(0x80 + i), dup_names[i]);

  constexpr const char* swap_names[16] = {
      "SWAP1",  "SWAP2",  "SWAP3",  "SWAP4",  "SWAP5",  "SWAP6",
      "SWAP7",  "SWAP8",  "SWAP9",  "SWAP10", "SWAP11", "SWAP12",
      "SWAP13", "SWAP14", "SWAP15", "SWAP16"};
  for (int i = 0; i < 16; ++i)
    set(static_cast<std::uint8_t>(0x90 + i), swap_names[i]);

  set(0xa0, "LOG0");
  set(0xa1, "LOG1");
  set(0xa2, "LOG2");
  set(0xa3, "LOG3");
  set(0xa4, "LOG4");

  // 0xf0s: system
  set(0xf0, "CREATE");
  set(0xf1, "CALL");
  set(0xf2, "CALLCODE");
  set(0xf3, "RETURN");
  set(0xf4, "DELEGATECALL");
  set(0xf5, "CREATE2");
  set(0xfa, "STATICCALL");
  set(0xfd, "REVERT");
  set(0xfe, "INVALID");
  set(0xff, "SELFDESTRUCT");

  return t;
}

}  // namespace detail

/// Shanghai-era instruction table. Bytes assigned in later forks decode as
/// unknown and are surfaced as INVALID_xx tokens by the disassembler.
inline constexpr std::array<OpcodeInfo, 256> kOpcodeTable =
    detail::make_opcode_table();

constexpr const OpcodeInfo& opcode_info(std::uint8_t op) {
  return kOpcodeTable[op];
}

constexpr bool is_assigned_opcode(std::uint8_t op) {
  return kOpcodeTable[op].mnemonic != nullptr;
}

}  // namespace txvision
