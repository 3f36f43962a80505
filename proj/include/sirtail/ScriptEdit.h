//===- ScriptEdit.h - script-interpreter module rewrites ----------*- C++ -*-===//
//
// Part of the sirtail project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include <set>
#include <string>

#include "sirtail/Explore.h"
#include "sirtail/Module.h"

namespace sirtail {

/// Builds a trap stub for `script_name`: a one-block function whose single
/// instruction is `trap "<script_name>"`. The name follows
/// `__trap_<sanitized>` with non-identifier characters mapped to `_` and a
/// numeric suffix appended on collision with `existing`.
FunctionDef synthesize_trap(const std::string &script_name,
                            const std::set<Identifier> &existing);

/// True when the function has the trap-stub shape: no parameters and a
/// single block holding exactly one trap instruction.
bool is_trap_stub(const FunctionDef &function);

/// Applies the plan's table edits: deletions remove the listed entries from
/// their arrays, redirects point the listed entries' funcref at the named
/// trap stub, and all planned stubs are appended as functions. Entry order
/// is otherwise preserved. Throws SirError(bad-edit) on a stale index.
ModuleUnit apply_php_edits(const ModuleUnit &module, const EditPlan &plan);

/// Removes the plan's registration calls from their blocks. Throws
/// SirError(bad-edit) on a stale index and SirError(result-used) when a
/// listed call defines an SSA result (deleting it would change semantics).
ModuleUnit apply_ruby_edits(const ModuleUnit &module, const EditPlan &plan);

} // namespace sirtail
