// Copyright 2026 The Thermwatch Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace thermwatch {

/// Raised when an argument violates an operation's precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a file or wire payload cannot be parsed.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  /// 1-based line number of the offending input, 0 when not line-oriented.
  std::size_t line() const noexcept { return line_; }

  /// Same error, message prefixed with `context` (typically a file name).
  ParseError with_context(const std::string& context) const {
    return ParseError(Prefixed{}, context + ": " + what(), line_);
  }

 private:
  struct Prefixed {};
  ParseError(Prefixed, const std::string& message, std::size_t line)
      : std::runtime_error(message), line_(line) {}

  std::size_t line_;
};

/// A result table failed validation. `reason()` is a stable machine-readable code
/// such as "row-count", "duplicate-roi" or "alarm-without-model".
class TableRejected : public InvalidInput {
 public:
  TableRejected(std::string reason, const std::string& detail)
      : InvalidInput(reason + ": " + detail), reason_(std::move(reason)) {}
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string reason_;
};

/// A prediction was requested outside the model's horizon; retrain first.
class OutOfHorizon : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Durable storage failed. The operation may be retried.
class StorageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace thermwatch
