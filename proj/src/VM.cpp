//===- VM.cpp - reference interpreter --------------------------------------===//
//
// Part of the sirtail project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "sirtail/VM.h"

#include <unordered_map>

namespace sirtail {

namespace {

struct RuntimeValue {
  enum class Kind { Int, Func, Str };
  Kind kind = Kind::Int;
  std::int64_t i = 0;
  std::string s; // Func: target name; Str: contents

  static RuntimeValue integer(std::int64_t v) { return {Kind::Int, v, {}}; }
  static RuntimeValue func(std::string name) { return {Kind::Func, 0, std::move(name)}; }
  static RuntimeValue str(std::string text) { return {Kind::Str, 0, std::move(text)}; }
};

struct VmFault {
  FaultKind kind;
  std::string detail;
};

struct Frame {
  const FunctionDef *fn = nullptr;
  std::size_t block = 0;
  std::size_t inst = 0;
  std::string prev_label; // empty in the entry block
  std::string result_target; // SSA name in the caller receiving our return
  std::unordered_map<std::string, RuntimeValue> env;
};

std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) +
                                   static_cast<std::uint64_t>(b));
}
std::int64_t wrap_sub(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) -
                                   static_cast<std::uint64_t>(b));
}
std::int64_t wrap_mul(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) *
                                   static_cast<std::uint64_t>(b));
}

class Machine {
public:
  Machine(const ModuleUnit &module, std::uint64_t step_limit,
          std::set<Identifier> *visited)
      : module_(module), step_limit_(step_limit), visited_(visited) {
    for (const GlobalDef &g : module_.globals)
      globals_.emplace(g.name, initial_slot(g.init));
  }

  RunResult run(const Identifier &entry, std::span<const std::int64_t> args) {
    try {
      const FunctionDef *fn = module_.function(entry);
      if (!fn)
        throw VmFault{FaultKind::InvalidOp,
                      "entry '" + entry + "' is not a function of the module"};
      if (args.size() != fn->params.size())
        throw VmFault{FaultKind::InvalidOp,
                      "entry argument count does not match its arity"};
      Frame frame;
      frame.fn = fn;
      for (std::size_t i = 0; i < args.size(); ++i)
        frame.env.emplace(fn->params[i], RuntimeValue::integer(args[i]));
      note_visit(fn->name);
      stack_.push_back(std::move(frame));
      while (!stack_.empty())
        step();
    } catch (const VmFault &fault) {
      result_.fault_kind = fault.kind;
      result_.fault_detail = fault.detail;
    }
    return std::move(result_);
  }

private:
  // A global is a single mutable scalar slot. Scalar initializers set it;
  // null and composite initializers leave it at integer 0.
  static RuntimeValue initial_slot(const Initializer &init) {
    switch (init.kind) {
    case Initializer::Kind::Int:
      return RuntimeValue::integer(init.int_value);
    case Initializer::Kind::FuncRef:
      return RuntimeValue::func(init.symbol);
    case Initializer::Kind::Str:
      return RuntimeValue::str(init.str_value);
    default:
      return RuntimeValue::integer(0);
    }
  }

  void note_visit(const Identifier &name) {
    if (visited_)
      visited_->insert(name);
  }

  RuntimeValue eval(const Value &v, Frame &frame) {
    switch (v.kind) {
    case Value::Kind::Ssa: {
      auto it = frame.env.find(v.name);
      if (it == frame.env.end())
        throw VmFault{FaultKind::InvalidOp, "%" + v.name + " has no value"};
      return it->second;
    }
    case Value::Kind::Int:
      return RuntimeValue::integer(v.int_value);
    case Value::Kind::FuncRef:
      return RuntimeValue::func(v.name);
    case Value::Kind::Str:
      return RuntimeValue::str(v.str_value);
    }
    throw VmFault{FaultKind::InvalidOp, "unreachable"};
  }

  std::int64_t eval_int(const Value &v, Frame &frame, const char *what) {
    RuntimeValue value = eval(v, frame);
    if (value.kind != RuntimeValue::Kind::Int)
      throw VmFault{FaultKind::InvalidOp,
                    std::string(what) + " requires an integer"};
    return value.i;
  }

  void assign(Frame &frame, const std::string &name, RuntimeValue value) {
    if (!name.empty())
      frame.env[name] = std::move(value);
  }

  void jump(Frame &frame, const std::string &label) {
    for (std::size_t i = 0; i < frame.fn->blocks.size(); ++i) {
      if (frame.fn->blocks[i].label == label) {
        frame.prev_label = frame.fn->blocks[frame.block].label;
        frame.block = i;
        frame.inst = 0;
        return;
      }
    }
    throw VmFault{FaultKind::InvalidOp, "branch to unknown label '" + label + "'"};
  }

  void enter(const FunctionDef *fn, std::vector<RuntimeValue> args,
             std::string result_target) {
    if (args.size() != fn->params.size())
      throw VmFault{FaultKind::ArityMismatch,
                    "call to @" + fn->name + " passes " +
                        std::to_string(args.size()) + " arguments for " +
                        std::to_string(fn->params.size()) + " parameters"};
    Frame frame;
    frame.fn = fn;
    frame.result_target = std::move(result_target);
    for (std::size_t i = 0; i < args.size(); ++i)
      frame.env.emplace(fn->params[i], std::move(args[i]));
    note_visit(fn->name);
    stack_.push_back(std::move(frame));
  }

  void do_return(RuntimeValue value) {
    std::string target = stack_.back().result_target;
    stack_.pop_back();
    if (!stack_.empty())
      assign(stack_.back(), target, std::move(value));
  }

  // Transfers control to `name` (push frame / extern stub / fault). The
  // caller frame's instruction pointer must already point past the call.
  void dispatch_call(Frame &caller, const std::string &name,
                     std::vector<RuntimeValue> args,
                     const std::string &result, FaultKind missing_kind) {
    if (const FunctionDef *fn = module_.function(name)) {
      enter(fn, std::move(args), result);
      return;
    }
    if (module_.is_extern(name)) {
      assign(caller, result, RuntimeValue::integer(0));
      return;
    }
    throw VmFault{missing_kind, "@" + name + " is not present in the module"};
  }

  void step() {
    Frame &frame = stack_.back();
    const std::vector<Block> &blocks = frame.fn->blocks;
    if (frame.block >= blocks.size() ||
        frame.inst >= blocks[frame.block].instructions.size())
      throw VmFault{FaultKind::InvalidOp,
                    "execution ran past the end of a block in @" +
                        frame.fn->name};
    if (result_.steps == step_limit_)
      throw VmFault{FaultKind::StepLimit,
                    "step limit of " + std::to_string(step_limit_) +
                        " instructions exceeded"};
    ++result_.steps;

    const Instruction &inst = blocks[frame.block].instructions[frame.inst];
    switch (inst.kind) {
    case Instruction::Kind::Call: {
      std::vector<RuntimeValue> args;
      for (const Value &v : inst.operands)
        args.push_back(eval(v, frame));
      ++frame.inst;
      dispatch_call(frame, inst.symbol, std::move(args), inst.result,
                    FaultKind::MissingFunction);
      return;
    }
    case Instruction::Kind::ICall: {
      RuntimeValue callee = eval(inst.operands[0], frame);
      if (callee.kind != RuntimeValue::Kind::Func)
        throw VmFault{FaultKind::BadICall,
                      "icall through a value that is not a funcref"};
      std::vector<RuntimeValue> args;
      for (std::size_t i = 1; i < inst.operands.size(); ++i)
        args.push_back(eval(inst.operands[i], frame));
      ++frame.inst;
      dispatch_call(frame, callee.s, std::move(args), inst.result,
                    FaultKind::MissingFunction);
      return;
    }
    case Instruction::Kind::Store: {
      RuntimeValue value = eval(inst.operands[0], frame);
      if (inst.store_to_global) {
        auto it = globals_.find(inst.symbol);
        if (it == globals_.end())
          throw VmFault{FaultKind::InvalidOp,
                        "store to unknown global @" + inst.symbol};
        it->second = std::move(value);
      } else {
        eval(inst.operands[1], frame); // slot stores have no observable effect
      }
      assign(frame, inst.result, RuntimeValue::integer(0));
      break;
    }
    case Instruction::Kind::Ret: {
      RuntimeValue value = inst.operands.empty()
                               ? RuntimeValue::integer(0)
                               : eval(inst.operands[0], frame);
      do_return(std::move(value));
      return;
    }
    case Instruction::Kind::Select: {
      std::int64_t cond = eval_int(inst.operands[0], frame, "select condition");
      RuntimeValue on_true = eval(inst.operands[1], frame);
      RuntimeValue on_false = eval(inst.operands[2], frame);
      assign(frame, inst.result, cond != 0 ? std::move(on_true) : std::move(on_false));
      break;
    }
    case Instruction::Kind::Phi: {
      if (frame.prev_label.empty())
        throw VmFault{FaultKind::InvalidOp, "phi executed in the entry block"};
      const PhiIncoming *match = nullptr;
      for (const PhiIncoming &in : inst.incomings)
        if (in.label == frame.prev_label)
          match = &in;
      if (!match)
        throw VmFault{FaultKind::InvalidOp,
                      "phi has no incoming for predecessor '" +
                          frame.prev_label + "'"};
      assign(frame, inst.result, eval(match->value, frame));
      break;
    }
    case Instruction::Kind::Load: {
      auto it = globals_.find(inst.symbol);
      if (it == globals_.end())
        throw VmFault{FaultKind::InvalidOp,
                      "load from unknown global @" + inst.symbol};
      assign(frame, inst.result, it->second);
      break;
    }
    case Instruction::Kind::Const:
      assign(frame, inst.result, eval(inst.operands[0], frame));
      break;
    case Instruction::Kind::Add:
      assign(frame, inst.result,
             RuntimeValue::integer(wrap_add(eval_int(inst.operands[0], frame, "add"),
                                            eval_int(inst.operands[1], frame, "add"))));
      break;
    case Instruction::Kind::Sub:
      assign(frame, inst.result,
             RuntimeValue::integer(wrap_sub(eval_int(inst.operands[0], frame, "sub"),
                                            eval_int(inst.operands[1], frame, "sub"))));
      break;
    case Instruction::Kind::Mul:
      assign(frame, inst.result,
             RuntimeValue::integer(wrap_mul(eval_int(inst.operands[0], frame, "mul"),
                                            eval_int(inst.operands[1], frame, "mul"))));
      break;
    case Instruction::Kind::Br:
      jump(frame, inst.labels[0]);
      return;
    case Instruction::Kind::CondBr: {
      std::int64_t cond = eval_int(inst.operands[0], frame, "condbr condition");
      jump(frame, cond != 0 ? inst.labels[0] : inst.labels[1]);
      return;
    }
    case Instruction::Kind::Out: {
      RuntimeValue value = eval(inst.operands[0], frame);
      if (value.kind != RuntimeValue::Kind::Int)
        throw VmFault{FaultKind::InvalidOp, "out requires an integer"};
      result_.outputs.push_back(value.i);
      assign(frame, inst.result, RuntimeValue::integer(0));
      break;
    }
    case Instruction::Kind::Trap:
      throw VmFault{FaultKind::BoobyTrap, inst.text};
    }
    ++frame.inst;
  }

  const ModuleUnit &module_;
  std::uint64_t step_limit_;
  std::set<Identifier> *visited_;
  std::unordered_map<std::string, RuntimeValue> globals_;
  std::vector<Frame> stack_;
  RunResult result_;
};

} // namespace

const char *fault_kind_name(FaultKind kind) {
  switch (kind) {
  case FaultKind::MissingFunction: return "missing-function";
  case FaultKind::BoobyTrap: return "booby-trap";
  case FaultKind::BadICall: return "bad-icall";
  case FaultKind::ArityMismatch: return "arity-mismatch";
  case FaultKind::StepLimit: return "step-limit";
  case FaultKind::InvalidOp: return "invalid-op";
  }
  return "?";
}

RunResult run(const ModuleUnit &module, const Identifier &entry,
              std::span<const std::int64_t> args, std::uint64_t step_limit,
              std::set<Identifier> *visited) {
  return Machine(module, step_limit, visited).run(entry, args);
}

} // namespace sirtail
