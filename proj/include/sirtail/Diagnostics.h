//===- Diagnostics.h - diagnostic records and error carrier ------*- C++ -*-===//
//
// Part of the sirtail project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sirtail {

enum class Severity { Error, Warning };

/// 1-based position in an input text. Only parser diagnostics carry one.
struct SourceSpan {
  int line = 1;
  int column = 1;

  bool operator==(const SourceSpan &) const = default;
};

/// Where in a module a diagnostic points: a function or global name, and
/// optionally a block label and instruction index inside it.
struct Location {
  std::string symbol;
  std::string block;
  std::optional<std::size_t> instruction;

  bool operator==(const Location &) const = default;
};

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  Location location;
  std::optional<SourceSpan> span;
};

bool has_errors(const std::vector<Diagnostic> &diagnostics);

/// Renders "error[code] symbol:block:idx: message" (pieces omitted when absent).
std::string format_diagnostic(const Diagnostic &diagnostic);

/// Thrown by operations whose contract names a single failure condition
/// (bad-edit, malformed-table, invalid-module, ...). Diagnostic-returning
/// operations never throw.
class SirError : public std::runtime_error {
public:
  explicit SirError(Diagnostic diagnostic);

  const Diagnostic &diagnostic() const { return diagnostic_; }

private:
  Diagnostic diagnostic_;
};

SirError make_error(std::string code, std::string message, Location location = {});

} // namespace sirtail
