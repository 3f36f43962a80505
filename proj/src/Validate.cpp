//===- Validate.cpp -------------------------------------------------------===//
//
// Part of the sirtail project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "sirtail/Validate.h"

#include <set>
#include <sstream>

namespace sirtail {

namespace {

class Validator {
public:
  explicit Validator(const ModuleUnit &module) : module_(module) {}

  std::vector<Diagnostic> run() {
    check_names();
    for (const GlobalDef &g : module_.globals)
      check_global(g);
    for (const FunctionDef &f : module_.functions)
      check_function(f);
    return std::move(diagnostics_);
  }

private:
  void error(std::string code, std::string message, Location location) {
    diagnostics_.push_back(Diagnostic{Severity::Error, std::move(code),
                                      std::move(message), std::move(location),
                                      std::nullopt});
  }

  bool resolves_as_callee(const std::string &name) const {
    return module_.function(name) != nullptr || module_.is_extern(name);
  }

  void check_names() {
    std::set<std::string> seen;
    auto claim = [&](const std::string &name, const char *what) {
      if (!seen.insert(name).second)
        error("duplicate-name",
              std::string(what) + " '" + name + "' redeclares an existing symbol",
              Location{name, "", std::nullopt});
    };
    for (const Identifier &e : module_.externs)
      claim(e, "extern");
    for (const GlobalDef &g : module_.globals)
      claim(g.name, "global");
    for (const FunctionDef &f : module_.functions)
      claim(f.name, "function");
  }

  void check_funcref(const std::string &target, const Location &location) {
    if (!resolves_as_callee(target))
      error("unresolved-symbol",
            "funcref @" + target + " does not name a function or extern",
            location);
  }

  void check_init(const Initializer &init, const Location &location) {
    switch (init.kind) {
    case Initializer::Kind::FuncRef:
      check_funcref(init.symbol, location);
      break;
    case Initializer::Kind::Aggregate:
    case Initializer::Kind::Array:
      for (const Initializer &e : init.elements)
        check_init(e, location);
      break;
    default:
      break;
    }
  }

  void check_global(const GlobalDef &g) {
    Location loc{g.name, "", std::nullopt};
    if (g.attrs.script_table_php) {
      if (g.init.kind != Initializer::Kind::Array) {
        error("malformed-table",
              "script_table=php global '" + g.name + "' must be an array",
              loc);
      } else {
        for (std::size_t i = 0; i < g.init.elements.size(); ++i) {
          if (!as_php_entry(g.init.elements[i])) {
            std::ostringstream msg;
            msg << "table entry " << i
                << " is not a (string, funcref-or-null, integer) aggregate";
            error("malformed-table", msg.str(), loc);
          }
        }
      }
    }
    check_init(g.init, loc);
  }

  void check_value_use(const Value &v, const std::set<std::string> &defined,
                       const Location &location) {
    if (v.kind == Value::Kind::Ssa && !defined.count(v.name))
      error("undefined-value", "%" + v.name + " used before definition",
            location);
    else if (v.kind == Value::Kind::FuncRef)
      check_funcref(v.name, location);
  }

  void check_function(const FunctionDef &f) {
    Location floc{f.name, "", std::nullopt};
    if (f.blocks.empty()) {
      error("empty-function", "function @" + f.name + " has no blocks", floc);
      return;
    }

    std::set<std::string> labels;
    for (const Block &b : f.blocks)
      if (!labels.insert(b.label).second)
        error("duplicate-label", "label '" + b.label + "' defined twice",
              Location{f.name, b.label, std::nullopt});

    // Single assignment: params and instruction results share one namespace.
    const std::set<std::string> param_set(f.params.begin(), f.params.end());
    if (param_set.size() != f.params.size())
      error("redefined-value", "parameter list repeats a name", floc);
    std::set<std::string> all_defs = param_set;
    {
      std::set<std::string> assigned;
      for (const Block &b : f.blocks)
        for (std::size_t i = 0; i < b.instructions.size(); ++i) {
          const std::string &r = b.instructions[i].result;
          if (r.empty())
            continue;
          if (param_set.count(r) || !assigned.insert(r).second)
            error("redefined-value", "%" + r + " assigned more than once",
                  Location{f.name, b.label, i});
          all_defs.insert(r);
        }
    }

    std::set<std::string> defined(f.params.begin(), f.params.end());
    for (const Block &b : f.blocks) {
      if (b.instructions.empty()) {
        error("missing-terminator", "block '" + b.label + "' is empty",
              Location{f.name, b.label, std::nullopt});
        continue;
      }
      for (std::size_t i = 0; i < b.instructions.size(); ++i) {
        const Instruction &inst = b.instructions[i];
        Location loc{f.name, b.label, i};
        bool last = i + 1 == b.instructions.size();
        if (inst.is_terminator() && !last)
          error("misplaced-terminator",
                std::string(instruction_kind_name(inst.kind)) +
                    " before the end of the block",
              loc);
        if (last && !inst.is_terminator())
          error("missing-terminator",
                "block '" + b.label + "' does not end in a terminator", loc);
        check_instruction(f, inst, defined, all_defs, loc);
        if (!inst.result.empty())
          defined.insert(inst.result);
      }
    }
  }

  // Operand-layout requirements per kind; malformed shapes can only come
  // from hand-built modules, never from the parser.
  bool check_shape(const Instruction &inst, const Location &loc) {
    auto bad = [&](const char *what) {
      error("malformed-instruction",
            std::string(instruction_kind_name(inst.kind)) + " " + what, loc);
      return false;
    };
    std::size_t n = inst.operands.size();
    switch (inst.kind) {
    case Instruction::Kind::Call:
      return inst.symbol.empty() ? bad("has no callee") : true;
    case Instruction::Kind::ICall:
      return n < 1 ? bad("has no callee operand") : true;
    case Instruction::Kind::Store:
      if (inst.store_to_global)
        return n != 1 ? bad("to a global takes one operand") : true;
      return n != 2 ? bad("to a slot takes two operands") : true;
    case Instruction::Kind::Ret:
      return n > 1 ? bad("takes at most one operand") : true;
    case Instruction::Kind::Select:
      return n != 3 ? bad("takes three operands") : true;
    case Instruction::Kind::Phi:
      return inst.incomings.empty() ? bad("has no incomings") : true;
    case Instruction::Kind::Load:
      return inst.symbol.empty() ? bad("has no source global") : true;
    case Instruction::Kind::Const:
      if (n != 1 || inst.operands[0].kind == Value::Kind::Ssa)
        return bad("takes one literal operand");
      return true;
    case Instruction::Kind::Add:
    case Instruction::Kind::Sub:
    case Instruction::Kind::Mul:
      return n != 2 ? bad("takes two operands") : true;
    case Instruction::Kind::Br:
      return inst.labels.size() != 1 ? bad("takes one label") : true;
    case Instruction::Kind::CondBr:
      return n != 1 || inst.labels.size() != 2
                 ? bad("takes a condition and two labels")
                 : true;
    case Instruction::Kind::Out:
      return n != 1 ? bad("takes one operand") : true;
    case Instruction::Kind::Trap:
      return true;
    }
    return true;
  }

  void check_instruction(const FunctionDef &f, const Instruction &inst,
                         const std::set<std::string> &defined,
                         const std::set<std::string> &all_defs,
                         const Location &loc) {
    if (!check_shape(inst, loc))
      return;
    switch (inst.kind) {
    case Instruction::Kind::Call:
      if (!resolves_as_callee(inst.symbol))
        error("unresolved-symbol",
              "call @" + inst.symbol + " does not name a function or extern",
              loc);
      break;
    case Instruction::Kind::Load:
      if (!module_.global(inst.symbol))
        error("unresolved-symbol",
              "load @" + inst.symbol + " does not name a global", loc);
      break;
    case Instruction::Kind::Store:
      if (inst.store_to_global && !module_.global(inst.symbol))
        error("unresolved-symbol",
              "store to @" + inst.symbol + " does not name a global", loc);
      break;
    case Instruction::Kind::Br:
    case Instruction::Kind::CondBr:
      for (const std::string &l : inst.labels)
        if (!f.block(l))
          error("unresolved-label", "branch target '" + l + "' does not exist",
                loc);
      break;
    default:
      break;
    }

    // Phi incoming values may be defined anywhere in the function (loop
    // back-edges); everything else must be defined textually earlier.
    if (inst.kind == Instruction::Kind::Phi) {
      for (const PhiIncoming &in : inst.incomings) {
        if (!f.block(in.label))
          error("unresolved-label",
                "phi incoming label '" + in.label + "' does not exist", loc);
        check_value_use(in.value, all_defs, loc);
      }
    } else {
      for (const Value &v : inst.operands)
        check_value_use(v, defined, loc);
    }
  }

  const ModuleUnit &module_;
  std::vector<Diagnostic> diagnostics_;
};

} // namespace

std::vector<Diagnostic> validate_module(const ModuleUnit &module) {
  return Validator(module).run();
}

} // namespace sirtail
