//===- VM.h - reference interpreter for SIR ------------------------*- C++ -*-===//
//
// Part of the sirtail project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// A deterministic interpreter used as the semantics oracle for differential
// testing and as the runtime that makes booby traps observable. Just enough
// semantics to witness control-flow differences: wrapping 64-bit integers,
// opaque strings, funcrefs, `out` as the only I/O.
//
//===----------------------------------------------------------------------===//

#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "sirtail/Module.h"

namespace sirtail {

enum class FaultKind {
  MissingFunction,
  BoobyTrap,
  BadICall,
  ArityMismatch,
  StepLimit,
  InvalidOp,
};

const char *fault_kind_name(FaultKind kind);

struct RunResult {
  std::optional<FaultKind> fault_kind; // absent iff the run completed
  std::string fault_detail;            // booby-trap: the script name
  std::vector<std::int64_t> outputs;   // values emitted by `out`, in order
  std::uint64_t steps = 0;             // executed instruction count

  bool ok() const { return !fault_kind.has_value(); }
};

inline constexpr std::uint64_t kDefaultStepLimit = 1'000'000;

/// Executes `entry` with integer arguments. Calls to declared externs return
/// 0 without running anything; `trap "n"` faults booby-trap with detail n;
/// global stores persist for the run; phi reads the incoming value of the
/// immediately preceding block. Dangling references fault missing-function
/// when they are actually reached, so hand-edited modules are diagnosed
/// rather than undefined. Precondition violations (unknown entry, argument
/// count mismatch) fault invalid-op.
///
/// When `visited` is non-null it collects the names of every module function
/// entered during the run.
RunResult run(const ModuleUnit &module, const Identifier &entry,
              std::span<const std::int64_t> args,
              std::uint64_t step_limit = kDefaultStepLimit,
              std::set<Identifier> *visited = nullptr);

} // namespace sirtail
