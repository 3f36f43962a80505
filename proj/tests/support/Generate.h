// Random module and program generators for the property suites. Everything
// is deterministic in the case seed, and every generated module validates.

#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "sirtail/Config.h"
#include "sirtail/Explore.h"
#include "sirtail/Module.h"

namespace sirtail::test {

// A module for analysis-level properties: random funcref placement across
// store/ret/select/phi/const and call arguments, optional php tables,
// optional ruby registrations.
struct AnalysisCase {
  ModuleUnit module;
  std::set<Identifier> seeds;
  AnalysisOptions options;
  ScriptWhitelist script_whitelist; // meaningful iff options.script_mode != None
};

AnalysisCase generate_analysis_case(std::uint64_t seed);

// A terminating-biased, type-correct program with an executable entry.
struct ProgramCase {
  ModuleUnit module;
  Identifier entry;
  std::vector<std::int64_t> args;
  std::set<Identifier> seeds;
  AnalysisOptions options;
  ScriptWhitelist script_whitelist;
};

ProgramCase generate_program_case(std::uint64_t seed);

// Plants one dangling function reference (or removes one referenced
// function). Returns false when the module offers no corruption site.
bool corrupt_reference(std::mt19937_64 &rng, ModuleUnit &module);

} // namespace sirtail::test
