//===- Explore.h - whitelist reachability analysis ----------------*- C++ -*-===//
//
// Part of the sirtail project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Computes the set of functions a tailored module must keep: a global
// exploration pass over initializers and script tables, then a worklist
// fixpoint over function bodies that follows direct calls and every
// funcref-valued operand (icall, store, ret, select, phi, const, call
// arguments). Script-table pruning and registration-call deletion are not
// performed here; they are recorded in an EditPlan for the transform stage.
//
//===----------------------------------------------------------------------===//

#pragma once

#include <set>
#include <string>
#include <vector>

#include "sirtail/Config.h"
#include "sirtail/Diagnostics.h"
#include "sirtail/Module.h"

namespace sirtail {

struct WhitelistState {
  std::set<Identifier> whitelist;       // functions to keep; grows monotonically
  std::set<std::string> php_whitelist;  // script names, php mode
  std::set<std::string> ruby_whitelist; // script names, ruby mode
  std::set<Identifier> retained;        // whitelist at fixpoint plus trap stubs
};

struct PhpEntryDeletion {
  Identifier global;
  std::size_t index = 0;

  auto operator<=>(const PhpEntryDeletion &) const = default;
};

struct PhpEntryRedirect {
  Identifier global;
  std::size_t index = 0;
  Identifier stub;

  auto operator<=>(const PhpEntryRedirect &) const = default;
};

struct RubyCallDeletion {
  Identifier function;
  std::string block;
  std::size_t index = 0;

  auto operator<=>(const RubyCallDeletion &) const = default;
};

struct TrapStubPlan {
  Identifier stub;
  std::string script_name;

  auto operator<=>(const TrapStubPlan &) const = default;
};

/// Deferred mutations produced by the analysis. All indices refer to the
/// module the analysis ran on, before any edit is applied.
struct EditPlan {
  std::vector<PhpEntryDeletion> php_entry_deletions;
  std::vector<PhpEntryRedirect> php_entry_redirects;
  std::vector<RubyCallDeletion> ruby_call_deletions;
  std::vector<TrapStubPlan> trap_stubs;

  bool empty() const {
    return php_entry_deletions.empty() && php_entry_redirects.empty() &&
           ruby_call_deletions.empty() && trap_stubs.empty();
  }
};

struct AnalysisOptions {
  ScriptMode script_mode = ScriptMode::None;
  bool booby_trap = false; // php mode only
  RegisterFunctionSet register_functions = default_register_functions();
  // Test hook: disabling the global phase reproduces the breakage a
  // missing global-held funcref causes.
  bool run_global_exploration = true;
};

struct AnalysisResult {
  WhitelistState state;
  EditPlan plan;
  std::vector<Diagnostic> warnings;
};

/// One analysis run over one module. explore_global and explore_function
/// mirror the two phases; compute_retained drives them in order.
class Explorer {
public:
  Explorer(const ModuleUnit &module, const AnalysisOptions &options,
           const ScriptWhitelist *script_whitelist);

  void seed(const std::set<Identifier> &seeds);

  /// Global exploration for one global: script-table pruning decisions in
  /// php mode, otherwise whitelists every funcref in the initializer tree.
  /// Throws SirError(malformed-table) on a bad table entry shape.
  void explore_global(const GlobalDef &global);

  /// Whitelists `function` and transitively explores everything reachable
  /// from the current whitelist.
  void explore_function(const FunctionDef &function);

  /// Drains the worklist and returns the final state and plan.
  AnalysisResult finish();

private:
  void add_candidate(const Identifier &target);
  void scan_function(const FunctionDef &function);
  bool handle_registration(const FunctionDef &function, const Block &block,
                           std::size_t index, const Instruction &call);
  void drain_worklist();

  const ModuleUnit &module_;
  AnalysisOptions options_;
  WhitelistState state_;
  EditPlan plan_;
  std::vector<Diagnostic> warnings_;
  std::vector<Identifier> worklist_;
  std::set<Identifier> explored_;
  std::set<Identifier> stub_names_;
};

/// Runs global exploration over all globals in declaration order, then the
/// function-exploration fixpoint from `seeds`. The result is the least
/// fixpoint and does not depend on declaration order. `seeds` must name
/// functions of `module`; the module must validate.
AnalysisResult compute_retained(const ModuleUnit &module,
                                const std::set<Identifier> &seeds,
                                const AnalysisOptions &options,
                                const ScriptWhitelist *script_whitelist);

} // namespace sirtail
