//===- Transform.h - module tailoring -----------------------------*- C++ -*-===//
//
// Part of the sirtail project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include <set>
#include <vector>

#include "sirtail/Diagnostics.h"
#include "sirtail/Explore.h"
#include "sirtail/Module.h"

namespace sirtail {

struct DebloatResult {
  ModuleUnit module;             // the tailored module
  std::set<Identifier> retained; // kept functions, trap stubs included
  std::set<Identifier> removed;  // original functions that were dropped
  EditPlan edits_applied;
  std::vector<Diagnostic> warnings;
};

/// End-to-end tailoring: runs the reachability analysis, applies script
/// edits, strips every function outside the retained set, and re-validates
/// the output. Exports of surviving declarations are untouched. Throws
/// SirError(closure-violation) if any retained reference would dangle.
DebloatResult debloat(const ModuleUnit &module,
                      const std::set<Identifier> &seeds,
                      const AnalysisOptions &options,
                      const ScriptWhitelist *script_whitelist);

/// Empty iff every direct-call callee and every funcref in the module
/// (bodies and initializers) resolves to a function or extern.
std::vector<Diagnostic> validate_closed(const ModuleUnit &module);

/// Keeps exactly the functions named in `keep`; globals and externs are
/// untouched. No closure check — debloat layers that on top.
ModuleUnit strip_functions(const ModuleUnit &module,
                           const std::set<Identifier> &keep);

} // namespace sirtail
