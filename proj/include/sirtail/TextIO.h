//===- TextIO.h - SIR textual format reader and writer ------------*- C++ -*-===//
//
// Part of the sirtail project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sirtail/Diagnostics.h"
#include "sirtail/Module.h"

namespace sirtail {

struct ParseResult {
  std::optional<ModuleUnit> module;
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return module.has_value(); }
};

/// Parses the `.sir` textual form. On success the returned module has no
/// validation diagnostics; on failure every error carries a source span.
/// Accepts CRLF input; comments run from `;` to end of line.
ParseResult parse_module(std::string_view text);

/// Canonical text: module header, externs, globals, functions, each in
/// declaration order, LF endings. Entries of a PHP script table whose
/// handler funcref is null are elided. Throws SirError(invalid-module) when
/// the module does not validate.
std::string print_module(const ModuleUnit &module);

} // namespace sirtail
