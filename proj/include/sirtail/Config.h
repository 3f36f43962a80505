//===- Config.h - analyst-provided inputs -------------------------*- C++ -*-===//
//
// Part of the sirtail project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Loaders for the files an analyst feeds the pipeline: application symbol
// manifests, manual whitelists, script-function whitelists, register-function
// lists, and sensitive-category definitions.
//
//===----------------------------------------------------------------------===//

#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "sirtail/Diagnostics.h"
#include "sirtail/Module.h"

namespace sirtail {

/// External symbols one application imports from the module under analysis.
struct SymbolManifest {
  std::string app_name;
  std::set<Identifier> symbols;
};

struct ManualWhitelist {
  std::set<Identifier> symbols;
};

enum class ScriptMode { None, Php, Ruby };

/// Script-function names the target application uses, produced upstream by a
/// script-level analyzer. Names are case-sensitive and need not be
/// identifiers (PHP method names like "A::read" are legal).
struct ScriptWhitelist {
  ScriptMode mode = ScriptMode::None;
  std::set<std::string> names;
};

/// Native functions that bind a script-function name to a handler at runtime
/// (Ruby style).
struct RegisterFunctionSet {
  std::set<Identifier> names;
};

/// The ten stock Ruby registration entry points.
const RegisterFunctionSet &default_register_functions();

/// Named sets of script functions considered dangerous, for attack-surface
/// reporting. Sets may overlap across categories.
struct CategoryConfig {
  std::map<std::string, std::set<std::string>> categories;
};

/// Built-in categories: "Code Execution" (5 names) and "Command Execution"
/// (7 names).
const CategoryConfig &default_categories();

/// Manifest format: first line `app <name>`, then one symbol per line.
/// `#` starts a comment. Throws SirError(bad-manifest) on a missing header,
/// an invalid identifier, or an empty symbol body.
SymbolManifest load_manifest(std::string_view text);

/// Shared line format for whitelist and register-function files: one name
/// per line, `#` comments, UTF-8.
std::set<std::string> load_name_list(std::string_view text);

/// Categories file: a JSON object mapping category name to an array of
/// strings. Throws SirError(bad-categories) on malformed JSON or non-string
/// entries.
CategoryConfig load_categories(std::string_view json_text);

struct SeedResult {
  std::set<Identifier> seeds;
  std::vector<Diagnostic> warnings;
};

/// Seeds = (union of manifest symbols ∩ exported functions of the module)
/// ∪ (manual symbols ∩ all functions of the module). Manifest symbols the
/// module does not export and manual symbols it does not define produce
/// warnings, never errors.
SeedResult build_initial_whitelist(const ModuleUnit &module,
                                   const std::vector<SymbolManifest> &manifests,
                                   const ManualWhitelist &manual);

} // namespace sirtail
