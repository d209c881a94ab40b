// txvision: vision-based attack detection for Ethereum transactions
// Copyright 2026 The txvision Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <bit>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "txvision/errors.hpp"

namespace txvision::io {

static_assert(std::endian::native == std::endian::little,
              "container payloads are little-endian; big-endian hosts need byte swaps");

/// Shared on-disk layout of model artifacts: a magic line, `key=value` text
/// lines, one blank line, then a raw little-endian binary payload.
struct Header {
  std::string magic;
  std::map<std::string, std::string> fields;

  const std::string& require(const std::string& key) const {
    const auto it = fields.find(key);
    if (it == fields.end())
      throw ParseError(magic + ": missing header field '" + key + "'");
    return it->second;
  }

  long long require_int(const std::string& key) const {
    try {
      return std::stoll(require(key));
    } catch (const std::logic_error&) {
      throw ParseError(magic + ": field '" + key + "' is not an integer");
    }
  }
};

void write_header(std::ostream& os, const std::string& magic,
                  const std::map<std::string, std::string>& fields);

/// Reads up to the blank line that ends the header. Throws ParseError if the
/// magic line does not match `expected_magic`.
Header read_header(std::istream& is, const std::string& expected_magic);

template <typename T>
void write_array(std::ostream& os, const T* data, std::size_t count) {
  os.write(reinterpret_cast<const char*>(data),
           static_cast<std::streamsize>(count * sizeof(T)));
}

template <typename T>
void read_array(std::istream& is, T* data, std::size_t count,
                const std::string& what) {
  is.read(reinterpret_cast<char*>(data),
          static_cast<std::streamsize>(count * sizeof(T)));
  if (static_cast<std::size_t>(is.gcount()) != count * sizeof(T))
    throw ParseError(what + ": payload truncated");
}

}  // namespace txvision::io
