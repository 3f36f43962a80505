//===- Module.h - SIR module data model ---------------------------*- C++ -*-===//
//
// Part of the sirtail project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// In-memory form of a SIR module: globals, functions, externs and the
// instruction set. All types are plain values; analyses and transforms copy
// rather than mutate shared state.
//
//===----------------------------------------------------------------------===//

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sirtail {

using Identifier = std::string;

/// An operand as written: an SSA name, an integer literal, a function
/// reference, or a string literal.
struct Value {
  enum class Kind { Ssa, Int, FuncRef, Str };

  Kind kind = Kind::Int;
  std::string name;          // Ssa / FuncRef
  std::int64_t int_value = 0;
  std::string str_value;

  static Value ssa(std::string name);
  static Value integer(std::int64_t value);
  static Value funcref(std::string name);
  static Value str(std::string text);

  bool is_funcref() const { return kind == Kind::FuncRef; }
  bool operator==(const Value &) const = default;
};

/// Static initializer of a global: scalar, funcref, or a finite tree of
/// aggregates and arrays.
struct Initializer {
  enum class Kind { Int, Null, FuncRef, Str, Aggregate, Array };

  Kind kind = Kind::Null;
  std::int64_t int_value = 0;
  std::string symbol;        // FuncRef target
  std::string str_value;
  std::vector<Initializer> elements; // Aggregate / Array

  static Initializer integer(std::int64_t value);
  static Initializer null();
  static Initializer funcref(std::string symbol);
  static Initializer str(std::string text);
  static Initializer aggregate(std::vector<Initializer> elements);
  static Initializer array(std::vector<Initializer> elements);

  bool operator==(const Initializer &) const = default;
};

struct Attrs {
  bool exported = false;
  bool script_table_php = false;

  bool any() const { return exported || script_table_php; }
  bool operator==(const Attrs &) const = default;
};

struct PhiIncoming {
  Value value;
  std::string label;

  bool operator==(const PhiIncoming &) const = default;
};

/// One SSA instruction. Operand layout by kind:
///   Call    symbol = callee, operands = arguments
///   ICall   operands[0] = callee value, operands[1..] = arguments
///   Store   operands[0] = stored value; destination is `symbol` when
///           store_to_global, otherwise operands[1] (an SSA slot)
///   Ret     operands empty or operands[0] = returned value
///   Select  operands = condition, true value, false value
///   Phi     incomings = (value, predecessor label) pairs
///   Load    symbol = source global
///   Const   operands[0] = literal (Int, FuncRef, or Str)
///   Add/Sub/Mul operands = lhs, rhs
///   Br      labels[0] = target
///   CondBr  operands[0] = condition, labels = {true target, false target}
///   Out     operands[0] = emitted value
///   Trap    text = message
struct Instruction {
  enum class Kind {
    Call, ICall, Store, Ret, Select, Phi, Load, Const,
    Add, Sub, Mul, Br, CondBr, Out, Trap,
  };

  Kind kind = Kind::Ret;
  std::string result;        // empty when the instruction defines nothing
  std::string symbol;
  bool store_to_global = false;
  std::vector<Value> operands;
  std::vector<PhiIncoming> incomings;
  std::vector<std::string> labels;
  std::string text;

  bool is_terminator() const;
  bool operator==(const Instruction &) const = default;
};

const char *instruction_kind_name(Instruction::Kind kind);

struct Block {
  std::string label;
  std::vector<Instruction> instructions;

  bool operator==(const Block &) const = default;
};

struct FunctionDef {
  Identifier name;
  std::vector<Identifier> params;
  Attrs attrs;
  std::vector<Block> blocks;

  const Block *block(std::string_view label) const;
  bool operator==(const FunctionDef &) const = default;
};

struct GlobalDef {
  Identifier name;
  Attrs attrs;
  Initializer init;

  bool is_php_table() const { return attrs.script_table_php; }
  bool operator==(const GlobalDef &) const = default;
};

/// A (name, handler, arity) record of a PHP-style script function table.
/// `handler` is empty for a null funcref (a deleted entry left in place).
struct PhpTableEntry {
  std::string script_name;
  std::optional<Identifier> handler;
  std::int64_t arity = 0;
};

/// Decodes a table element of the required (string, funcref-or-null, integer)
/// shape; nullopt when the element does not match.
std::optional<PhpTableEntry> as_php_entry(const Initializer &element);

struct ModuleUnit {
  Identifier name;
  std::vector<GlobalDef> globals;
  std::vector<FunctionDef> functions;
  std::vector<Identifier> externs;

  const FunctionDef *function(std::string_view name) const;
  FunctionDef *function(std::string_view name);
  const GlobalDef *global(std::string_view name) const;
  GlobalDef *global(std::string_view name);
  bool is_extern(std::string_view name) const;

  bool operator==(const ModuleUnit &) const = default;
};

bool is_valid_identifier(std::string_view text);

} // namespace sirtail
