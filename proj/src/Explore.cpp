//===- Explore.cpp - whitelist reachability analysis ----------------------===//
//
// Part of the sirtail project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "sirtail/Explore.h"

#include <sstream>

#include "sirtail/ScriptEdit.h"

namespace sirtail {

namespace {

// The statically known (name, handler) pair of a registration call: the
// first string literal and the first funcref among the arguments.
struct RegistrationArgs {
  const std::string *name = nullptr;
  const std::string *handler = nullptr;
};

RegistrationArgs registration_args(const Instruction &call) {
  RegistrationArgs args;
  for (const Value &v : call.operands) {
    if (!args.name && v.kind == Value::Kind::Str)
      args.name = &v.str_value;
    if (!args.handler && v.kind == Value::Kind::FuncRef)
      args.handler = &v.name;
  }
  return args;
}

} // namespace

Explorer::Explorer(const ModuleUnit &module, const AnalysisOptions &options,
                   const ScriptWhitelist *script_whitelist)
    : module_(module), options_(options) {
  if (options_.booby_trap && options_.script_mode != ScriptMode::Php)
    throw make_error("invalid-options",
                     "booby traps are only defined for php script mode");
  if (script_whitelist) {
    if (script_whitelist->mode != options_.script_mode)
      throw make_error("invalid-options",
                       "script whitelist mode does not match analysis mode");
    if (options_.script_mode == ScriptMode::Php)
      state_.php_whitelist = script_whitelist->names;
    else if (options_.script_mode == ScriptMode::Ruby)
      state_.ruby_whitelist = script_whitelist->names;
  }
}

void Explorer::seed(const std::set<Identifier> &seeds) {
  for (const Identifier &s : seeds) {
    if (!module_.function(s))
      throw make_error("invalid-seed",
                       "seed '" + s + "' is not a function of the module");
    add_candidate(s);
  }
}

void Explorer::add_candidate(const Identifier &target) {
  // Externs terminate exploration; unknown names are left for validation.
  if (!module_.function(target))
    return;
  if (state_.whitelist.insert(target).second)
    worklist_.push_back(target);
}

void Explorer::explore_global(const GlobalDef &global) {
  if (options_.script_mode == ScriptMode::Php && global.is_php_table()) {
    if (global.init.kind != Initializer::Kind::Array)
      throw make_error("malformed-table",
                       "script_table=php global '" + global.name +
                           "' must be an array",
                       Location{global.name, "", std::nullopt});
    for (std::size_t i = 0; i < global.init.elements.size(); ++i) {
      auto entry = as_php_entry(global.init.elements[i]);
      if (!entry) {
        std::ostringstream msg;
        msg << "table entry " << i
            << " is not a (string, funcref-or-null, integer) aggregate";
        throw make_error("malformed-table", msg.str(),
                         Location{global.name, "", std::nullopt});
      }
      if (state_.php_whitelist.count(entry->script_name)) {
        if (entry->handler)
          add_candidate(*entry->handler);
        continue;
      }
      if (!options_.booby_trap) {
        plan_.php_entry_deletions.push_back({global.name, i});
        continue;
      }
      // Re-running the pipeline on an already trapped table would otherwise
      // mint a second stub for the same entry.
      if (entry->handler) {
        const FunctionDef *handler = module_.function(*entry->handler);
        if (handler && is_trap_stub(*handler) &&
            handler->blocks[0].instructions[0].text == entry->script_name) {
          add_candidate(*entry->handler);
          continue;
        }
      }
      std::set<Identifier> taken = stub_names_;
      for (const FunctionDef &f : module_.functions)
        taken.insert(f.name);
      for (const GlobalDef &g : module_.globals)
        taken.insert(g.name);
      for (const Identifier &e : module_.externs)
        taken.insert(e);
      FunctionDef stub = synthesize_trap(entry->script_name, taken);
      stub_names_.insert(stub.name);
      plan_.php_entry_redirects.push_back({global.name, i, stub.name});
      plan_.trap_stubs.push_back({stub.name, entry->script_name});
    }
    return;
  }

  // Any function pointer in an initializer keeps its target alive.
  std::vector<const Initializer *> pending{&global.init};
  while (!pending.empty()) {
    const Initializer *init = pending.back();
    pending.pop_back();
    switch (init->kind) {
    case Initializer::Kind::FuncRef:
      add_candidate(init->symbol);
      break;
    case Initializer::Kind::Aggregate:
    case Initializer::Kind::Array:
      for (const Initializer &e : init->elements)
        pending.push_back(&e);
      break;
    default:
      break;
    }
  }
}

void Explorer::explore_function(const FunctionDef &function) {
  add_candidate(function.name);
  drain_worklist();
}

// Decides the fate of a registration call. Returns true when the call is
// scheduled for deletion, in which case its operands must not keep anything
// alive.
bool Explorer::handle_registration(const FunctionDef &function,
                                   const Block &block, std::size_t index,
                                   const Instruction &call) {
  RegistrationArgs args = registration_args(call);
  if (!args.name) {
    // A dynamic registration cannot be resolved statically; keep the call
    // and its handler so the program is not broken.
    warnings_.push_back(Diagnostic{
        Severity::Warning, "non-static-registration",
        "registration call has no static name argument; keeping it",
        Location{function.name, block.label, index}, std::nullopt});
    return false;
  }
  if (state_.ruby_whitelist.count(*args.name))
    return false;
  plan_.ruby_call_deletions.push_back({function.name, block.label, index});
  return true;
}

void Explorer::scan_function(const FunctionDef &function) {
  for (const Block &block : function.blocks) {
    for (std::size_t i = 0; i < block.instructions.size(); ++i) {
      const Instruction &inst = block.instructions[i];
      if (inst.kind == Instruction::Kind::Call) {
        add_candidate(inst.symbol);
        if (options_.script_mode == ScriptMode::Ruby &&
            options_.register_functions.names.count(inst.symbol) &&
            handle_registration(function, block, i, inst))
          continue;
      }
      for (const Value &v : inst.operands)
        if (v.is_funcref())
          add_candidate(v.name);
      for (const PhiIncoming &in : inst.incomings)
        if (in.value.is_funcref())
          add_candidate(in.value.name);
    }
  }
}

void Explorer::drain_worklist() {
  while (!worklist_.empty()) {
    Identifier name = worklist_.back();
    worklist_.pop_back();
    if (!explored_.insert(name).second)
      continue;
    scan_function(*module_.function(name));
  }
}

AnalysisResult Explorer::finish() {
  drain_worklist();
  state_.retained = state_.whitelist;
  for (const TrapStubPlan &stub : plan_.trap_stubs)
    state_.retained.insert(stub.stub);
  return AnalysisResult{state_, plan_, warnings_};
}

AnalysisResult compute_retained(const ModuleUnit &module,
                                const std::set<Identifier> &seeds,
                                const AnalysisOptions &options,
                                const ScriptWhitelist *script_whitelist) {
  Explorer explorer(module, options, script_whitelist);
  explorer.seed(seeds);
  if (options.run_global_exploration)
    for (const GlobalDef &g : module.globals)
      explorer.explore_global(g);
  return explorer.finish();
}

} // namespace sirtail
