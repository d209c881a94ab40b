// txvision: vision-based attack detection for Ethereum transactions
// Copyright 2026 The txvision Authors.
// SPDX-License-Identifier: Apache-2.0
#include "txvision/wei.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "txvision/errors.hpp"

namespace txvision {

namespace {

std::string strip_leading_zeros(std::string s) {
  const auto first = s.find_first_not_of('0');
  if (first == std::string::npos) return "0";
  return s.substr(first);
}

int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

Wei Wei::from_dec(std::string_view dec) {
  if (dec.empty()) throw ParseError("wei: empty decimal string");
  for (std::size_t i = 0; i < dec.size(); ++i) {
    if (dec[i] < '0' || dec[i] > '9')
      throw ParseError(std::string("wei: invalid decimal character '") +
                       dec[i] + "' at offset " + std::to_string(i));
  }
  return Wei(strip_leading_zeros(std::string(dec)));
}

Wei Wei::from_hex(std::string_view hex) {
  std::size_t start = 0;
  if (hex.size() >= 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X'))
    start = 2;
  if (start == hex.size()) throw ParseError("wei: empty hex quantity");

  // Schoolbook base conversion: digits is little-endian decimal.
  std::vector<std::uint8_t> digits{0};
  for (std::size_t i = start; i < hex.size(); ++i) {
    const int nib = hex_nibble(hex[i]);
    if (nib < 0)
      throw ParseError(std::string("wei: invalid hex character '") + hex[i] +
                       "' at offset " + std::to_string(i));
    int carry = nib;
    for (auto& d : digits) {
      const int x = d * 16 + carry;
      d = static_cast<std::uint8_t>(x % 10);
      carry = x / 10;
    }
    while (carry > 0) {
      digits.push_back(static_cast<std::uint8_t>(carry % 10));
      carry /= 10;
    }
  }

  std::string out(digits.size(), '0');
  for (std::size_t i = 0; i < digits.size(); ++i)
    out[digits.size() - 1 - i] = static_cast<char>('0' + digits[i]);
  return Wei(strip_leading_zeros(std::move(out)));
}

Wei Wei::from_u64(std::uint64_t v) { return Wei(std::to_string(v)); }

std::string Wei::to_hex() const {
  if (is_zero()) return "0x0";

  // Repeated division of the decimal string by 16, collecting remainders.
  std::string dec = digits_;
  std::string hex_rev;
  while (!(dec.size() == 1 && dec[0] == '0')) {
    std::string quot;
    int rem = 0;
    for (const char c : dec) {
      const int x = rem * 10 + (c - '0');
      quot.push_back(static_cast<char>('0' + x / 16));
      rem = x % 16;
    }
    hex_rev.push_back("0123456789abcdef"[rem]);
    dec = strip_leading_zeros(std::move(quot));
  }
  std::string out = "0x";
  out.append(hex_rev.rbegin(), hex_rev.rend());
  return out;
}

double Wei::log10() const {
  // log10(v) = log10(leading digits) + count of trailing digits.
  // 17 leading digits fit a double exactly enough for full double accuracy.
  const std::size_t lead = std::min<std::size_t>(17, digits_.size());
  double mantissa = 0.0;
  for (std::size_t i = 0; i < lead; ++i)
    mantissa = mantissa * 10.0 + (digits_[i] - '0');
  return std::log10(mantissa) +
         static_cast<double>(digits_.size() - lead);
}

std::strong_ordering Wei::operator<=>(const Wei& rhs) const {
  if (digits_.size() != rhs.digits_.size())
    return digits_.size() <=> rhs.digits_.size();
  return digits_.compare(rhs.digits_) <=> 0;
}

}  // namespace txvision
