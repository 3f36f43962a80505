//===- Config.cpp ---------------------------------------------------------===//
//
// Part of the sirtail project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "sirtail/Config.h"

#include <sstream>

#include <json.hpp>

namespace sirtail {

namespace {

std::string strip(const std::string &line) {
  std::string out = line;
  if (auto hash = out.find('#'); hash != std::string::npos)
    out.erase(hash);
  while (!out.empty() && (out.back() == ' ' || out.back() == '\t' || out.back() == '\r'))
    out.pop_back();
  std::size_t start = out.find_first_not_of(" \t");
  return start == std::string::npos ? "" : out.substr(start);
}

std::vector<std::string> content_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::string s = strip(line);
    if (!s.empty())
      lines.push_back(std::move(s));
  }
  return lines;
}

} // namespace

const RegisterFunctionSet &default_register_functions() {
  static const RegisterFunctionSet set{{
      "rb_define_protected_method",
      "rb_define_private_method",
      "rb_define_singleton_method",
      "rb_define_method",
      "rb_define_method_id",
      "rb_define_module_function",
      "rb_define_global_function",
      "rb_define_alloc_func",
      "rb_define_virtual_variable",
      "rb_define_hooked_variable",
  }};
  return set;
}

const CategoryConfig &default_categories() {
  static const CategoryConfig config{{
      {"Code Execution",
       {"assert", "create_function", "preg_filter", "preg_replace",
        "preg_replace_callback"}},
      {"Command Execution",
       {"exec", "passthru", "popen", "proc_open", "shell_exec", "system",
        "mail"}},
  }};
  return config;
}

SymbolManifest load_manifest(std::string_view text) {
  std::vector<std::string> lines = content_lines(text);
  if (lines.empty() || lines[0].rfind("app ", 0) != 0)
    throw make_error("bad-manifest", "first line must be 'app <name>'");
  SymbolManifest manifest;
  manifest.app_name = strip(lines[0].substr(4));
  if (manifest.app_name.empty())
    throw make_error("bad-manifest", "missing application name");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (!is_valid_identifier(lines[i]))
      throw make_error("bad-manifest",
                       "'" + lines[i] + "' is not a valid symbol name");
    manifest.symbols.insert(lines[i]);
  }
  if (manifest.symbols.empty())
    throw make_error("bad-manifest", "manifest lists no symbols");
  return manifest;
}

std::set<std::string> load_name_list(std::string_view text) {
  std::vector<std::string> lines = content_lines(text);
  return {lines.begin(), lines.end()};
}

CategoryConfig load_categories(std::string_view json_text) {
  nlohmann::json doc = nlohmann::json::parse(json_text, nullptr,
                                             /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object())
    throw make_error("bad-categories", "expected a JSON object");
  CategoryConfig config;
  for (const auto &[name, names] : doc.items()) {
    if (!names.is_array())
      throw make_error("bad-categories",
                       "category '" + name + "' must map to an array");
    std::set<std::string> set;
    for (const auto &entry : names) {
      if (!entry.is_string())
        throw make_error("bad-categories",
                         "category '" + name + "' holds a non-string entry");
      set.insert(entry.get<std::string>());
    }
    config.categories.emplace(name, std::move(set));
  }
  return config;
}

SeedResult build_initial_whitelist(const ModuleUnit &module,
                                   const std::vector<SymbolManifest> &manifests,
                                   const ManualWhitelist &manual) {
  SeedResult result;
  for (const SymbolManifest &manifest : manifests) {
    for (const Identifier &symbol : manifest.symbols) {
      const FunctionDef *f = module.function(symbol);
      if (f && f->attrs.exported) {
        result.seeds.insert(symbol);
      } else {
        result.warnings.push_back(Diagnostic{
            Severity::Warning, "unknown-import",
            "manifest '" + manifest.app_name + "' imports '" + symbol +
                "', which the module does not export",
            Location{symbol, "", std::nullopt}, std::nullopt});
      }
    }
  }
  for (const Identifier &symbol : manual.symbols) {
    if (module.function(symbol)) {
      result.seeds.insert(symbol);
    } else {
      result.warnings.push_back(Diagnostic{
          Severity::Warning, "unknown-whitelist-entry",
          "whitelist entry '" + symbol + "' is not a function of the module",
          Location{symbol, "", std::nullopt}, std::nullopt});
    }
  }
  return result;
}

} // namespace sirtail
