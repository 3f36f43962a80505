//===- Report.h - code-reduction and attack-surface reporting -----*- C++ -*-===//
//
// Part of the sirtail project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "sirtail/Config.h"
#include "sirtail/Module.h"

namespace sirtail {

/// A percentage with one decimal, or undefined when the denominator is 0
/// (rendered "-").
struct Percent {
  bool defined = true;
  int tenths = 0;

  static Percent undefined() { return {false, 0}; }
  std::string to_string() const;
  bool operator==(const Percent &) const = default;
};

/// round(100 * after / before) to one decimal: half-up to hundredths first,
/// then half-up to tenths.
Percent percent_of(std::size_t after, std::size_t before);

struct Metrics {
  std::size_t funcs_before = 0;
  std::size_t funcs_after = 0;
  Percent funcs_pct;
  std::size_t size_before = 0; // total instruction count
  std::size_t size_after = 0;
  Percent size_pct;
  std::vector<Identifier> removed_names; // sorted
};

std::size_t instruction_count(const ModuleUnit &module);

/// Counts functions and instructions before/after tailoring. Trap stubs in
/// `after` are excluded from every count. Throws
/// SirError(mismatched-modules) when `after` holds a non-stub function that
/// `before` does not.
Metrics compute_metrics(const ModuleUnit &before, const ModuleUnit &after);

enum class SensitiveMode {
  TablePresence,        // php: name appears in a script table, handler not a trap
  RegistrationPresence, // ruby: a surviving registration call registers it
  ExportPresence,       // library: an exported function of that name survives
};

struct SensitiveReport {
  SensitiveMode mode = SensitiveMode::ExportPresence;
  // category -> sorted names still present; remaining == names.size()
  std::map<std::string, std::vector<std::string>> per_category;
};

/// Throws SirError(mode-mismatch) when TablePresence is requested on a
/// module without any script table.
SensitiveReport
sensitive_report(const ModuleUnit &module, const CategoryConfig &categories,
                 SensitiveMode mode,
                 const RegisterFunctionSet &register_functions =
                     default_register_functions());

enum class ReportFormat { Json, Text };

/// Byte-deterministic rendering. JSON: one object, keys sorted, arrays
/// sorted, percentages as one-decimal numbers. Text: aligned two-column
/// human form.
std::string render_report(const std::string &app, const Metrics &metrics,
                          const SensitiveReport *sensitive,
                          ReportFormat format);

} // namespace sirtail
