//===- Printer.cpp - ModuleUnit to canonical SIR text ---------------------===//
//
// Part of the sirtail project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include <sstream>

#include "sirtail/TextIO.h"
#include "sirtail/Validate.h"

namespace sirtail {

namespace {

std::string escape_string(const std::string &text) {
  std::string out;
  out.reserve(text.size() + 2);
  for (char c : text) {
    if (c == '"' || c == '\\')
      out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

void print_value(std::ostream &out, const Value &v) {
  switch (v.kind) {
  case Value::Kind::Ssa:
    out << "%" << v.name;
    break;
  case Value::Kind::Int:
    out << v.int_value;
    break;
  case Value::Kind::FuncRef:
    out << "funcref @" << v.name;
    break;
  case Value::Kind::Str:
    out << "str \"" << escape_string(v.str_value) << "\"";
    break;
  }
}

bool is_deleted_table_entry(const Initializer &element) {
  auto entry = as_php_entry(element);
  return entry && !entry->handler;
}

void print_init(std::ostream &out, const Initializer &init, bool php_table) {
  switch (init.kind) {
  case Initializer::Kind::Int:
    out << init.int_value;
    break;
  case Initializer::Kind::Null:
    out << "null";
    break;
  case Initializer::Kind::FuncRef:
    out << "funcref @" << init.symbol;
    break;
  case Initializer::Kind::Str:
    out << "str \"" << escape_string(init.str_value) << "\"";
    break;
  case Initializer::Kind::Aggregate: {
    out << "{";
    bool first = true;
    for (const Initializer &e : init.elements) {
      if (!first)
        out << ", ";
      first = false;
      print_init(out, e, false);
    }
    out << "}";
    break;
  }
  case Initializer::Kind::Array: {
    out << "[";
    bool first = true;
    for (const Initializer &e : init.elements) {
      // A null handler funcref marks a deleted table entry; it is dropped
      // from the printed form.
      if (php_table && is_deleted_table_entry(e))
        continue;
      if (!first)
        out << ", ";
      first = false;
      print_init(out, e, false);
    }
    out << "]";
    break;
  }
  }
}

void print_attrs(std::ostream &out, const Attrs &attrs) {
  if (!attrs.any())
    return;
  out << " [";
  bool first = true;
  if (attrs.exported) {
    out << "export";
    first = false;
  }
  if (attrs.script_table_php) {
    if (!first)
      out << ", ";
    out << "script_table=php";
  }
  out << "]";
}

void print_instruction(std::ostream &out, const Instruction &inst) {
  out << "  ";
  if (!inst.result.empty())
    out << "%" << inst.result << " = ";
  switch (inst.kind) {
  case Instruction::Kind::Call: {
    out << "call @" << inst.symbol << "(";
    for (std::size_t i = 0; i < inst.operands.size(); ++i) {
      if (i)
        out << ", ";
      print_value(out, inst.operands[i]);
    }
    out << ")";
    break;
  }
  case Instruction::Kind::ICall: {
    out << "icall ";
    print_value(out, inst.operands[0]);
    out << "(";
    for (std::size_t i = 1; i < inst.operands.size(); ++i) {
      if (i > 1)
        out << ", ";
      print_value(out, inst.operands[i]);
    }
    out << ")";
    break;
  }
  case Instruction::Kind::Store:
    out << "store ";
    print_value(out, inst.operands[0]);
    out << ", ";
    if (inst.store_to_global)
      out << "@" << inst.symbol;
    else
      print_value(out, inst.operands[1]);
    break;
  case Instruction::Kind::Ret:
    out << "ret";
    if (!inst.operands.empty()) {
      out << " ";
      print_value(out, inst.operands[0]);
    }
    break;
  case Instruction::Kind::Select:
    out << "select ";
    print_value(out, inst.operands[0]);
    out << ", ";
    print_value(out, inst.operands[1]);
    out << ", ";
    print_value(out, inst.operands[2]);
    break;
  case Instruction::Kind::Phi: {
    out << "phi ";
    for (std::size_t i = 0; i < inst.incomings.size(); ++i) {
      if (i)
        out << ", ";
      out << "[";
      print_value(out, inst.incomings[i].value);
      out << ", " << inst.incomings[i].label << "]";
    }
    break;
  }
  case Instruction::Kind::Load:
    out << "load @" << inst.symbol;
    break;
  case Instruction::Kind::Const:
    out << "const ";
    print_value(out, inst.operands[0]);
    break;
  case Instruction::Kind::Add:
  case Instruction::Kind::Sub:
  case Instruction::Kind::Mul:
    out << instruction_kind_name(inst.kind) << " ";
    print_value(out, inst.operands[0]);
    out << ", ";
    print_value(out, inst.operands[1]);
    break;
  case Instruction::Kind::Br:
    out << "br " << inst.labels[0];
    break;
  case Instruction::Kind::CondBr:
    out << "condbr ";
    print_value(out, inst.operands[0]);
    out << ", " << inst.labels[0] << ", " << inst.labels[1];
    break;
  case Instruction::Kind::Out:
    out << "out ";
    print_value(out, inst.operands[0]);
    break;
  case Instruction::Kind::Trap:
    out << "trap \"" << escape_string(inst.text) << "\"";
    break;
  }
  out << "\n";
}

} // namespace

std::string print_module(const ModuleUnit &module) {
  std::vector<Diagnostic> diagnostics = validate_module(module);
  if (has_errors(diagnostics))
    throw SirError(Diagnostic{Severity::Error, "invalid-module",
                              "refusing to print a module that does not "
                              "validate: " +
                                  diagnostics.front().message,
                              diagnostics.front().location, std::nullopt});

  std::ostringstream out;
  out << "module " << module.name << "\n";
  for (const Identifier &e : module.externs)
    out << "extern @" << e << "\n";
  for (const GlobalDef &g : module.globals) {
    out << "global @" << g.name;
    print_attrs(out, g.attrs);
    out << " = ";
    print_init(out, g.init, g.is_php_table());
    out << "\n";
  }
  for (const FunctionDef &f : module.functions) {
    out << "func @" << f.name << "(";
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      if (i)
        out << ", ";
      out << f.params[i];
    }
    out << ")";
    print_attrs(out, f.attrs);
    out << " {\n";
    for (const Block &b : f.blocks) {
      out << b.label << ":\n";
      for (const Instruction &inst : b.instructions)
        print_instruction(out, inst);
    }
    out << "}\n";
  }
  return out.str();
}

} // namespace sirtail
