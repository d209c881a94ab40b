// txvision: vision-based attack detection for Ethereum transactions
// Copyright 2026 The txvision Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace txvision {

/// Malformed user input: bad hex, bad CSV row, bad file header, bad flags.
/// The CLI maps this family to exit code 2.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// Filesystem trouble: missing file, short read, failed write.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// A contract between pipeline components does not hold
/// (dimension mismatch, unfitted model, inconsistent bundle).
class ConsistencyError : public std::logic_error {
 public:
  explicit ConsistencyError(const std::string& what) : std::logic_error(what) {}
};

/// Training produced a non-finite loss or gradient.
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// RPC failures are split by cause so callers can decide what is retryable.
class RpcError : public std::runtime_error {
 public:
  explicit RpcError(const std::string& what) : std::runtime_error(what) {}
};

class ConnectionError : public RpcError {
 public:
  explicit ConnectionError(const std::string& what) : RpcError(what) {}
};

class TimeoutError : public RpcError {
 public:
  explicit TimeoutError(const std::string& what) : RpcError(what) {}
};

/// The node answered, but not with valid JSON-RPC.
class ProtocolError : public RpcError {
 public:
  explicit ProtocolError(const std::string& what) : RpcError(what) {}
};

}  // namespace txvision
