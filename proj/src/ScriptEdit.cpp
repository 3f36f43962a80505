//===- ScriptEdit.cpp -----------------------------------------------------===//
//
// Part of the sirtail project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "sirtail/ScriptEdit.h"

#include <algorithm>
#include <map>
#include <sstream>

namespace sirtail {

namespace {

std::string sanitize(const std::string &script_name) {
  std::string out;
  out.reserve(script_name.size());
  for (char c : script_name) {
    bool word = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                (c >= '0' && c <= '9') || c == '_';
    out.push_back(word ? c : '_');
  }
  return out;
}

FunctionDef make_stub(Identifier name, const std::string &script_name) {
  FunctionDef stub;
  stub.name = std::move(name);
  Instruction trap;
  trap.kind = Instruction::Kind::Trap;
  trap.text = script_name;
  stub.blocks.push_back(Block{"entry", {std::move(trap)}});
  return stub;
}

Initializer *table_entry(ModuleUnit &module, const Identifier &global,
                         std::size_t index, const char *what) {
  GlobalDef *g = module.global(global);
  if (!g || !g->is_php_table() || g->init.kind != Initializer::Kind::Array) {
    throw make_error("bad-edit",
                     std::string(what) + " targets '" + global +
                         "', which is not a php script table",
                     Location{global, "", std::nullopt});
  }
  if (index >= g->init.elements.size()) {
    std::ostringstream msg;
    msg << what << " index " << index << " is out of range for '" << global
        << "'";
    throw make_error("bad-edit", msg.str(), Location{global, "", std::nullopt});
  }
  return &g->init.elements[index];
}

} // namespace

FunctionDef synthesize_trap(const std::string &script_name,
                            const std::set<Identifier> &existing) {
  std::string base = "__trap_" + sanitize(script_name);
  std::string name = base;
  for (int suffix = 1; existing.count(name); ++suffix)
    name = base + "_" + std::to_string(suffix);
  return make_stub(name, script_name);
}

bool is_trap_stub(const FunctionDef &function) {
  return function.params.empty() && function.blocks.size() == 1 &&
         function.blocks[0].instructions.size() == 1 &&
         function.blocks[0].instructions[0].kind == Instruction::Kind::Trap;
}

ModuleUnit apply_php_edits(const ModuleUnit &module, const EditPlan &plan) {
  ModuleUnit out = module;

  for (const PhpEntryRedirect &edit : plan.php_entry_redirects) {
    Initializer *entry = table_entry(out, edit.global, edit.index, "redirect");
    if (!as_php_entry(*entry))
      throw make_error("bad-edit", "redirect targets a malformed table entry",
                       Location{edit.global, "", std::nullopt});
    entry->elements[1] = Initializer::funcref(edit.stub);
  }

  std::map<Identifier, std::vector<std::size_t>> deletions;
  for (const PhpEntryDeletion &edit : plan.php_entry_deletions) {
    table_entry(out, edit.global, edit.index, "deletion");
    std::vector<std::size_t> &indices = deletions[edit.global];
    if (std::find(indices.begin(), indices.end(), edit.index) != indices.end())
      throw make_error("bad-edit", "duplicate deletion of the same entry",
                       Location{edit.global, "", std::nullopt});
    indices.push_back(edit.index);
  }
  for (auto &[global, indices] : deletions) {
    std::sort(indices.rbegin(), indices.rend());
    std::vector<Initializer> &elements = out.global(global)->init.elements;
    for (std::size_t index : indices)
      elements.erase(elements.begin() + static_cast<std::ptrdiff_t>(index));
  }

  for (const TrapStubPlan &stub : plan.trap_stubs) {
    if (out.function(stub.stub) || out.global(stub.stub) ||
        out.is_extern(stub.stub))
      throw make_error("bad-edit",
                       "trap stub name '" + stub.stub + "' already taken",
                       Location{stub.stub, "", std::nullopt});
    out.functions.push_back(make_stub(stub.stub, stub.script_name));
  }
  return out;
}

ModuleUnit apply_ruby_edits(const ModuleUnit &module, const EditPlan &plan) {
  ModuleUnit out = module;

  // Group per block and erase from the back so earlier indices stay valid.
  std::map<std::pair<Identifier, std::string>, std::vector<std::size_t>> grouped;
  for (const RubyCallDeletion &edit : plan.ruby_call_deletions) {
    std::vector<std::size_t> &indices = grouped[{edit.function, edit.block}];
    if (std::find(indices.begin(), indices.end(), edit.index) != indices.end())
      throw make_error("bad-edit", "duplicate deletion of the same call",
                       Location{edit.function, edit.block, edit.index});
    indices.push_back(edit.index);
  }

  for (auto &[key, indices] : grouped) {
    const auto &[function_name, block_label] = key;
    FunctionDef *f = out.function(function_name);
    if (!f)
      throw make_error("bad-edit",
                       "deletion targets unknown function '" + function_name + "'",
                       Location{function_name, "", std::nullopt});
    Block *block = nullptr;
    for (Block &b : f->blocks)
      if (b.label == block_label)
        block = &b;
    if (!block)
      throw make_error("bad-edit",
                       "deletion targets unknown block '" + block_label + "'",
                       Location{function_name, block_label, std::nullopt});
    std::sort(indices.rbegin(), indices.rend());
    for (std::size_t index : indices) {
      Location loc{function_name, block_label, index};
      if (index >= block->instructions.size())
        throw make_error("bad-edit", "deletion index is out of range", loc);
      const Instruction &inst = block->instructions[index];
      if (inst.kind != Instruction::Kind::Call)
        throw make_error("bad-edit",
                         "deletion targets a non-call instruction", loc);
      if (!inst.result.empty())
        throw make_error("result-used",
                         "registration call defines %" + inst.result +
                             "; deleting it would change semantics",
                         loc);
      block->instructions.erase(block->instructions.begin() +
                                static_cast<std::ptrdiff_t>(index));
    }
  }
  return out;
}

} // namespace sirtail
