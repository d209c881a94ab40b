// txvision: vision-based attack detection for Ethereum transactions
// Copyright 2026 The txvision Authors.
// SPDX-License-Identifier: Apache-2.0
#include "txvision/container_io.hpp"

namespace txvision::io {

void write_header(std::ostream& os, const std::string& magic,
                  const std::map<std::string, std::string>& fields) {
  os << magic << '\n';
  for (const auto& [key, value] : fields) os << key << '=' << value << '\n';
  os << '\n';
}

Header read_header(std::istream& is, const std::string& expected_magic) {
  Header h;
  if (!std::getline(is, h.magic))
    throw ParseError(expected_magic + ": empty file");
  if (h.magic != expected_magic)
    throw ParseError(expected_magic + ": unrecognized format/version '" +
                     h.magic + "'");

  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) return h;  // blank line ends the header
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(expected_magic + ": malformed header line '" + line + "'");
    h.fields.emplace(line.substr(0, eq), line.substr(eq + 1));
  }
  throw ParseError(expected_magic + ": header not terminated by blank line");
}

}  // namespace txvision::io
