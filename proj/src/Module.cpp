//===- Module.cpp ---------------------------------------------------------===//
//
// Part of the sirtail project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "sirtail/Module.h"

#include <cctype>

namespace sirtail {

Value Value::ssa(std::string name) {
  Value v;
  v.kind = Kind::Ssa;
  v.name = std::move(name);
  return v;
}

Value Value::integer(std::int64_t value) {
  Value v;
  v.kind = Kind::Int;
  v.int_value = value;
  return v;
}

Value Value::funcref(std::string name) {
  Value v;
  v.kind = Kind::FuncRef;
  v.name = std::move(name);
  return v;
}

Value Value::str(std::string text) {
  Value v;
  v.kind = Kind::Str;
  v.str_value = std::move(text);
  return v;
}

Initializer Initializer::integer(std::int64_t value) {
  Initializer i;
  i.kind = Kind::Int;
  i.int_value = value;
  return i;
}

Initializer Initializer::null() {
  Initializer i;
  i.kind = Kind::Null;
  return i;
}

Initializer Initializer::funcref(std::string symbol) {
  Initializer i;
  i.kind = Kind::FuncRef;
  i.symbol = std::move(symbol);
  return i;
}

Initializer Initializer::str(std::string text) {
  Initializer i;
  i.kind = Kind::Str;
  i.str_value = std::move(text);
  return i;
}

Initializer Initializer::aggregate(std::vector<Initializer> elements) {
  Initializer i;
  i.kind = Kind::Aggregate;
  i.elements = std::move(elements);
  return i;
}

Initializer Initializer::array(std::vector<Initializer> elements) {
  Initializer i;
  i.kind = Kind::Array;
  i.elements = std::move(elements);
  return i;
}

bool Instruction::is_terminator() const {
  switch (kind) {
  case Kind::Ret:
  case Kind::Br:
  case Kind::CondBr:
  case Kind::Trap:
    return true;
  default:
    return false;
  }
}

const char *instruction_kind_name(Instruction::Kind kind) {
  switch (kind) {
  case Instruction::Kind::Call: return "call";
  case Instruction::Kind::ICall: return "icall";
  case Instruction::Kind::Store: return "store";
  case Instruction::Kind::Ret: return "ret";
  case Instruction::Kind::Select: return "select";
  case Instruction::Kind::Phi: return "phi";
  case Instruction::Kind::Load: return "load";
  case Instruction::Kind::Const: return "const";
  case Instruction::Kind::Add: return "add";
  case Instruction::Kind::Sub: return "sub";
  case Instruction::Kind::Mul: return "mul";
  case Instruction::Kind::Br: return "br";
  case Instruction::Kind::CondBr: return "condbr";
  case Instruction::Kind::Out: return "out";
  case Instruction::Kind::Trap: return "trap";
  }
  return "?";
}

const Block *FunctionDef::block(std::string_view label) const {
  for (const Block &b : blocks)
    if (b.label == label)
      return &b;
  return nullptr;
}

std::optional<PhpTableEntry> as_php_entry(const Initializer &element) {
  if (element.kind != Initializer::Kind::Aggregate || element.elements.size() != 3)
    return std::nullopt;
  const Initializer &name = element.elements[0];
  const Initializer &handler = element.elements[1];
  const Initializer &arity = element.elements[2];
  if (name.kind != Initializer::Kind::Str)
    return std::nullopt;
  if (arity.kind != Initializer::Kind::Int)
    return std::nullopt;
  PhpTableEntry entry;
  entry.script_name = name.str_value;
  entry.arity = arity.int_value;
  if (handler.kind == Initializer::Kind::FuncRef)
    entry.handler = handler.symbol;
  else if (handler.kind != Initializer::Kind::Null)
    return std::nullopt;
  return entry;
}

const FunctionDef *ModuleUnit::function(std::string_view name) const {
  for (const FunctionDef &f : functions)
    if (f.name == name)
      return &f;
  return nullptr;
}

FunctionDef *ModuleUnit::function(std::string_view name) {
  for (FunctionDef &f : functions)
    if (f.name == name)
      return &f;
  return nullptr;
}

const GlobalDef *ModuleUnit::global(std::string_view name) const {
  for (const GlobalDef &g : globals)
    if (g.name == name)
      return &g;
  return nullptr;
}

GlobalDef *ModuleUnit::global(std::string_view name) {
  for (GlobalDef &g : globals)
    if (g.name == name)
      return &g;
  return nullptr;
}

bool ModuleUnit::is_extern(std::string_view name) const {
  for (const Identifier &e : externs)
    if (e == name)
      return true;
  return false;
}

bool is_valid_identifier(std::string_view text) {
  if (text.empty())
    return false;
  if (!std::isalpha(static_cast<unsigned char>(text[0])) && text[0] != '_')
    return false;
  for (char c : text.substr(1))
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
      return false;
  return true;
}

} // namespace sirtail
