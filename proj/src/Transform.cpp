//===- Transform.cpp ------------------------------------------------------===//
//
// Part of the sirtail project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "sirtail/Transform.h"

#include <algorithm>

#include "sirtail/ScriptEdit.h"
#include "sirtail/Validate.h"

namespace sirtail {

namespace {

void check_reference(const ModuleUnit &module, const std::string &target,
                     const char *what, const Location &location,
                     std::vector<Diagnostic> &out) {
  if (module.function(target) || module.is_extern(target))
    return;
  out.push_back(Diagnostic{Severity::Error, "closure-violation",
                           std::string(what) + " @" + target +
                               " does not resolve to a function or extern",
                           location, std::nullopt});
}

void check_init_closed(const ModuleUnit &module, const Initializer &init,
                       const Location &location, std::vector<Diagnostic> &out) {
  switch (init.kind) {
  case Initializer::Kind::FuncRef:
    check_reference(module, init.symbol, "funcref", location, out);
    break;
  case Initializer::Kind::Aggregate:
  case Initializer::Kind::Array:
    for (const Initializer &e : init.elements)
      check_init_closed(module, e, location, out);
    break;
  default:
    break;
  }
}

} // namespace

std::vector<Diagnostic> validate_closed(const ModuleUnit &module) {
  std::vector<Diagnostic> out;
  for (const GlobalDef &g : module.globals)
    check_init_closed(module, g.init, Location{g.name, "", std::nullopt}, out);
  for (const FunctionDef &f : module.functions) {
    for (const Block &b : f.blocks) {
      for (std::size_t i = 0; i < b.instructions.size(); ++i) {
        const Instruction &inst = b.instructions[i];
        Location loc{f.name, b.label, i};
        if (inst.kind == Instruction::Kind::Call)
          check_reference(module, inst.symbol, "call", loc, out);
        for (const Value &v : inst.operands)
          if (v.is_funcref())
            check_reference(module, v.name, "funcref", loc, out);
        for (const PhiIncoming &in : inst.incomings)
          if (in.value.is_funcref())
            check_reference(module, in.value.name, "funcref", loc, out);
      }
    }
  }
  return out;
}

ModuleUnit strip_functions(const ModuleUnit &module,
                           const std::set<Identifier> &keep) {
  ModuleUnit out = module;
  out.functions.clear();
  for (const FunctionDef &f : module.functions)
    if (keep.count(f.name))
      out.functions.push_back(f);
  return out;
}

DebloatResult debloat(const ModuleUnit &module,
                      const std::set<Identifier> &seeds,
                      const AnalysisOptions &options,
                      const ScriptWhitelist *script_whitelist) {
  AnalysisResult analysis =
      compute_retained(module, seeds, options, script_whitelist);

  ModuleUnit tailored = module;
  if (options.script_mode == ScriptMode::Php)
    tailored = apply_php_edits(tailored, analysis.plan);
  else if (options.script_mode == ScriptMode::Ruby)
    tailored = apply_ruby_edits(tailored, analysis.plan);
  tailored = strip_functions(tailored, analysis.state.retained);

  std::vector<Diagnostic> closure = validate_closed(tailored);
  std::vector<Diagnostic> structural = validate_module(tailored);
  if (!closure.empty() || has_errors(structural)) {
    const Diagnostic &first = closure.empty() ? structural.front() : closure.front();
    throw SirError(Diagnostic{Severity::Error, "closure-violation",
                              "tailored module is not closed: " + first.message +
                                  " (a manual whitelist entry may be needed)",
                              first.location, std::nullopt});
  }

  DebloatResult result;
  result.module = std::move(tailored);
  result.retained = analysis.state.retained;
  for (const FunctionDef &f : module.functions)
    if (!result.retained.count(f.name))
      result.removed.insert(f.name);
  result.edits_applied = std::move(analysis.plan);
  result.warnings = std::move(analysis.warnings);
  return result;
}

} // namespace sirtail
