// txvision: vision-based attack detection for Ethereum transactions
// Copyright 2026 The txvision Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace txvision {

/// Non-negative arbitrary-precision integer for transaction values.
/// Wei amounts routinely exceed 64 bits (1 ETH = 10^18 wei), so the value
/// is carried as a canonical decimal string: no leading zeros, "0" for zero.
class Wei {
 public:
  Wei() : digits_("0") {}

  /// Decimal digits only. Leading zeros are normalized away.
  static Wei from_dec(std::string_view dec);

  /// Hex quantity with optional 0x prefix, as found in JSON-RPC responses.
  static Wei from_hex(std::string_view hex);

  static Wei from_u64(std::uint64_t v);

  const std::string& dec() const { return digits_; }

  /// Minimal hex quantity with 0x prefix ("0x0" for zero).
  std::string to_hex() const;

  bool is_zero() const { return digits_ == "0"; }

  /// Number of decimal digits of the value (1 for zero).
  std::size_t digit_count() const { return digits_.size(); }

  /// log10 of the value, accurate to well below 1e-12 relative error.
  /// Undefined for zero (callers must check is_zero first).
  double log10() const;

  std::strong_ordering operator<=>(const Wei& rhs) const;
  bool operator==(const Wei& rhs) const { return digits_ == rhs.digits_; }

 private:
  explicit Wei(std::string digits) : digits_(std::move(digits)) {}

  std::string digits_;  // canonical decimal, most significant first
};

}  // namespace txvision
