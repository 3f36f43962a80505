//===- Report.cpp ----------------------------------------------------------===//
//
// Part of the sirtail project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "sirtail/Report.h"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "sirtail/ScriptEdit.h"

namespace sirtail {

namespace {

std::string json_escape(const std::string &text) {
  std::ostringstream out;
  for (char c : text) {
    switch (c) {
    case '"': out << "\\\""; break;
    case '\\': out << "\\\\"; break;
    case '\n': out << "\\n"; break;
    case '\r': out << "\\r"; break;
    case '\t': out << "\\t"; break;
    default:
      if (static_cast<unsigned char>(c) < 0x20)
        out << "\\u" << std::hex << std::setw(4) << std::setfill('0')
            << static_cast<int>(c) << std::dec << std::setfill(' ');
      else
        out << c;
    }
  }
  return out.str();
}

std::string json_string(const std::string &text) {
  return "\"" + json_escape(text) + "\"";
}

std::string json_pct(const Percent &pct) {
  return pct.defined ? pct.to_string() : json_string("-");
}

void append_sorted_name_array(std::ostringstream &out,
                              std::vector<std::string> names) {
  std::sort(names.begin(), names.end());
  out << "[";
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i)
      out << ",";
    out << json_string(names[i]);
  }
  out << "]";
}

bool handler_is_trap(const ModuleUnit &module, const PhpTableEntry &entry) {
  if (!entry.handler)
    return false;
  const FunctionDef *f = module.function(*entry.handler);
  return f && is_trap_stub(*f);
}

std::set<std::string> present_names(const ModuleUnit &module,
                                    SensitiveMode mode,
                                    const RegisterFunctionSet &registers) {
  std::set<std::string> present;
  switch (mode) {
  case SensitiveMode::TablePresence: {
    for (const GlobalDef &g : module.globals) {
      if (!g.is_php_table() || g.init.kind != Initializer::Kind::Array)
        continue;
      for (const Initializer &element : g.init.elements) {
        auto entry = as_php_entry(element);
        // A trapped or tombstoned entry no longer provides the script
        // function; only live handlers count.
        if (entry && entry->handler && !handler_is_trap(module, *entry))
          present.insert(entry->script_name);
      }
    }
    break;
  }
  case SensitiveMode::RegistrationPresence: {
    for (const FunctionDef &f : module.functions)
      for (const Block &b : f.blocks)
        for (const Instruction &inst : b.instructions) {
          if (inst.kind != Instruction::Kind::Call ||
              !registers.names.count(inst.symbol))
            continue;
          for (const Value &v : inst.operands)
            if (v.kind == Value::Kind::Str) {
              present.insert(v.str_value);
              break;
            }
        }
    break;
  }
  case SensitiveMode::ExportPresence: {
    for (const FunctionDef &f : module.functions)
      if (f.attrs.exported)
        present.insert(f.name);
    break;
  }
  }
  return present;
}

} // namespace

std::string Percent::to_string() const {
  if (!defined)
    return "-";
  return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

Percent percent_of(std::size_t after, std::size_t before) {
  if (before == 0)
    return Percent::undefined();
  // Half-up to hundredths, then half-up to tenths.
  unsigned long long a = after;
  unsigned long long b = before;
  unsigned long long hundredths = (2 * (10000ULL * a) + b) / (2 * b);
  int tenths = static_cast<int>((2 * hundredths + 10) / 20);
  return Percent{true, tenths};
}

std::size_t instruction_count(const ModuleUnit &module) {
  std::size_t count = 0;
  for (const FunctionDef &f : module.functions)
    for (const Block &b : f.blocks)
      count += b.instructions.size();
  return count;
}

Metrics compute_metrics(const ModuleUnit &before, const ModuleUnit &after) {
  Metrics metrics;
  metrics.funcs_before = before.functions.size();
  for (const FunctionDef &f : before.functions)
    for (const Block &b : f.blocks)
      metrics.size_before += b.instructions.size();

  std::set<Identifier> surviving;
  for (const FunctionDef &f : after.functions) {
    if (!before.function(f.name)) {
      if (is_trap_stub(f))
        continue; // synthesized stubs do not take part in the counts
      throw make_error("mismatched-modules",
                       "'" + f.name +
                           "' appears in the tailored module but not in the "
                           "original",
                       Location{f.name, "", std::nullopt});
    }
    surviving.insert(f.name);
    ++metrics.funcs_after;
    for (const Block &b : f.blocks)
      metrics.size_after += b.instructions.size();
  }

  metrics.funcs_pct = percent_of(metrics.funcs_after, metrics.funcs_before);
  metrics.size_pct = percent_of(metrics.size_after, metrics.size_before);
  for (const FunctionDef &f : before.functions)
    if (!surviving.count(f.name))
      metrics.removed_names.push_back(f.name);
  std::sort(metrics.removed_names.begin(), metrics.removed_names.end());
  return metrics;
}

SensitiveReport sensitive_report(const ModuleUnit &module,
                                 const CategoryConfig &categories,
                                 SensitiveMode mode,
                                 const RegisterFunctionSet &register_functions) {
  if (mode == SensitiveMode::TablePresence) {
    bool has_table = false;
    for (const GlobalDef &g : module.globals)
      has_table = has_table || g.is_php_table();
    if (!has_table)
      throw make_error("mode-mismatch",
                       "php reporting requires a module with a script table");
  }

  std::set<std::string> present = present_names(module, mode, register_functions);
  SensitiveReport report;
  report.mode = mode;
  for (const auto &[category, names] : categories.categories) {
    std::vector<std::string> remaining;
    for (const std::string &name : names)
      if (present.count(name))
        remaining.push_back(name);
    std::sort(remaining.begin(), remaining.end());
    report.per_category.emplace(category, std::move(remaining));
  }
  return report;
}

std::string render_report(const std::string &app, const Metrics &metrics,
                          const SensitiveReport *sensitive,
                          ReportFormat format) {
  if (format == ReportFormat::Json) {
    std::ostringstream out;
    out << "{";
    out << json_string("app") << ":" << json_string(app) << ",";
    out << json_string("funcs") << ":{"
        << json_string("after") << ":" << metrics.funcs_after << ","
        << json_string("before") << ":" << metrics.funcs_before << ","
        << json_string("pct") << ":" << json_pct(metrics.funcs_pct) << "},";
    out << json_string("removed") << ":";
    append_sorted_name_array(out, metrics.removed_names);
    out << ",";
    out << json_string("sensitive") << ":{";
    if (sensitive) {
      bool first = true;
      for (const auto &[category, names] : sensitive->per_category) {
        if (!first)
          out << ",";
        first = false;
        out << json_string(category) << ":{" << json_string("names") << ":";
        append_sorted_name_array(out, names);
        out << "," << json_string("remaining") << ":" << names.size() << "}";
      }
    }
    out << "},";
    out << json_string("size") << ":{"
        << json_string("after") << ":" << metrics.size_after << ","
        << json_string("before") << ":" << metrics.size_before << ","
        << json_string("pct") << ":" << json_pct(metrics.size_pct) << "}";
    out << "}";
    return out.str();
  }

  std::vector<std::pair<std::string, std::string>> rows;
  rows.emplace_back("app", app.empty() ? "-" : app);
  rows.emplace_back("funcs before", std::to_string(metrics.funcs_before));
  rows.emplace_back("funcs after", std::to_string(metrics.funcs_after));
  rows.emplace_back("funcs pct", metrics.funcs_pct.to_string());
  rows.emplace_back("size before", std::to_string(metrics.size_before));
  rows.emplace_back("size after", std::to_string(metrics.size_after));
  rows.emplace_back("size pct", metrics.size_pct.to_string());
  if (metrics.removed_names.empty()) {
    rows.emplace_back("removed", "(none)");
  } else {
    std::ostringstream joined;
    for (std::size_t i = 0; i < metrics.removed_names.size(); ++i) {
      if (i)
        joined << ", ";
      joined << metrics.removed_names[i];
    }
    rows.emplace_back("removed", joined.str());
  }
  if (sensitive) {
    for (const auto &[category, names] : sensitive->per_category) {
      std::ostringstream value;
      value << names.size();
      if (!names.empty()) {
        value << " (";
        for (std::size_t i = 0; i < names.size(); ++i) {
          if (i)
            value << ", ";
          value << names[i];
        }
        value << ")";
      }
      rows.emplace_back("sensitive: " + category, value.str());
    }
  }

  std::size_t width = 18;
  for (const auto &[label, value] : rows)
    width = std::max(width, label.size() + 2);
  std::ostringstream out;
  for (const auto &[label, value] : rows)
    out << std::left << std::setw(static_cast<int>(width)) << label << value
        << "\n";
  return out.str();
}

} // namespace sirtail
