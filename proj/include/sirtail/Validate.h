//===- Validate.h - structural validation of SIR modules ---------*- C++ -*-===//
//
// Part of the sirtail project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include <vector>

#include "sirtail/Diagnostics.h"
#include "sirtail/Module.h"

namespace sirtail {

/// Checks every module-level and function-level invariant and returns the
/// violations in a deterministic order (declaration order, then rule order).
/// An empty result means the module is valid.
///
/// Error codes: duplicate-name, unresolved-symbol, malformed-table,
/// duplicate-label, redefined-value, undefined-value, unresolved-label,
/// missing-terminator, misplaced-terminator, empty-function.
std::vector<Diagnostic> validate_module(const ModuleUnit &module);

} // namespace sirtail
