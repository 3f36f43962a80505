//===- Diagnostics.cpp ----------------------------------------------------===//
//
// Part of the sirtail project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "sirtail/Diagnostics.h"

#include <sstream>

namespace sirtail {

bool has_errors(const std::vector<Diagnostic> &diagnostics) {
  for (const Diagnostic &d : diagnostics)
    if (d.severity == Severity::Error)
      return true;
  return false;
}

std::string format_diagnostic(const Diagnostic &diagnostic) {
  std::ostringstream out;
  out << (diagnostic.severity == Severity::Error ? "error" : "warning");
  out << "[" << diagnostic.code << "]";
  if (diagnostic.span)
    out << " " << diagnostic.span->line << ":" << diagnostic.span->column;
  if (!diagnostic.location.symbol.empty()) {
    out << " " << diagnostic.location.symbol;
    if (!diagnostic.location.block.empty()) {
      out << ":" << diagnostic.location.block;
      if (diagnostic.location.instruction)
        out << ":" << *diagnostic.location.instruction;
    }
  }
  out << ": " << diagnostic.message;
  return out.str();
}

SirError::SirError(Diagnostic diagnostic)
    : std::runtime_error(format_diagnostic(diagnostic)),
      diagnostic_(std::move(diagnostic)) {}

SirError make_error(std::string code, std::string message, Location location) {
  return SirError(Diagnostic{Severity::Error, std::move(code),
                             std::move(message), std::move(location),
                             std::nullopt});
}

} // namespace sirtail
