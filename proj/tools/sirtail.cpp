//===- sirtail.cpp - command-line driver -----------------------------------===//
//
// Part of the sirtail project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Subcommands:
//   debloat   tailor a module to one or more applications
//   report    code-reduction and sensitive-function report for a module pair
//   run       execute a module in the reference interpreter
//   validate  parse and check a module
//
// Exit codes: 0 success, 1 diagnostics, 2 usage error, 3 booby-trap fault.
//
//===----------------------------------------------------------------------===//

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sirtail/Config.h"
#include "sirtail/Report.h"
#include "sirtail/TextIO.h"
#include "sirtail/Transform.h"
#include "sirtail/VM.h"

namespace {

using namespace sirtail;

constexpr int kExitOk = 0;
constexpr int kExitDiagnostics = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBoobyTrap = 3;

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw make_error("io-error", "cannot read '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw make_error("io-error", "cannot write '" + path + "'");
  out << content;
  if (!out.flush())
    throw make_error("io-error", "cannot write '" + path + "'");
}

void print_diagnostics(const std::vector<Diagnostic> &diagnostics) {
  for (const Diagnostic &d : diagnostics)
    std::cerr << format_diagnostic(d) << "\n";
}

ModuleUnit load_module(const std::string &path) {
  ParseResult parsed = parse_module(read_file(path));
  if (!parsed.ok()) {
    print_diagnostics(parsed.diagnostics);
    throw make_error("invalid-input", "'" + path + "' did not parse");
  }
  return std::move(*parsed.module);
}

ScriptMode parse_script_mode(const std::string &text) {
  if (text == "php")
    return ScriptMode::Php;
  if (text == "ruby")
    return ScriptMode::Ruby;
  return ScriptMode::None;
}

int usage_error(const std::string &message) {
  std::cerr << "error: " << message << "\n";
  return kExitUsage;
}

struct DebloatFlags {
  std::string input;
  std::vector<std::string> manifests;
  std::string whitelist;
  std::string script_mode;
  std::string script_whitelist;
  bool booby_trap = false;
  std::string register_functions;
  std::string output;
  std::string report;
  std::string categories;
};

SensitiveMode sensitive_mode_for(ScriptMode mode) {
  switch (mode) {
  case ScriptMode::Php: return SensitiveMode::TablePresence;
  case ScriptMode::Ruby: return SensitiveMode::RegistrationPresence;
  case ScriptMode::None: return SensitiveMode::ExportPresence;
  }
  return SensitiveMode::ExportPresence;
}

int cmd_debloat(const DebloatFlags &flags) {
  ScriptMode mode = parse_script_mode(flags.script_mode);
  if (!flags.script_mode.empty() && mode == ScriptMode::None)
    return usage_error("--script-mode must be php or ruby");
  if (flags.booby_trap && mode != ScriptMode::Php)
    return usage_error("--booby-trap requires --script-mode php");
  if (mode != ScriptMode::None && flags.script_whitelist.empty())
    return usage_error("--script-whitelist is required with --script-mode");
  if (mode == ScriptMode::None && !flags.script_whitelist.empty())
    return usage_error("--script-whitelist needs --script-mode");
  if (!flags.register_functions.empty() && mode != ScriptMode::Ruby)
    return usage_error("--register-functions needs --script-mode ruby");

  try {
    ModuleUnit module = load_module(flags.input);

    std::vector<SymbolManifest> manifests;
    for (const std::string &path : flags.manifests)
      manifests.push_back(load_manifest(read_file(path)));
    ManualWhitelist manual;
    if (!flags.whitelist.empty())
      manual.symbols = load_name_list(read_file(flags.whitelist));

    SeedResult seeds = build_initial_whitelist(module, manifests, manual);
    print_diagnostics(seeds.warnings);

    AnalysisOptions options;
    options.script_mode = mode;
    options.booby_trap = flags.booby_trap;
    if (!flags.register_functions.empty())
      options.register_functions =
          RegisterFunctionSet{load_name_list(read_file(flags.register_functions))};
    if (mode == ScriptMode::Ruby && options.register_functions.names.empty())
      return usage_error("the register-function list must not be empty");

    ScriptWhitelist script_whitelist;
    const ScriptWhitelist *script_ptr = nullptr;
    if (mode != ScriptMode::None) {
      script_whitelist.mode = mode;
      script_whitelist.names = load_name_list(read_file(flags.script_whitelist));
      script_ptr = &script_whitelist;
    }

    DebloatResult result = debloat(module, seeds.seeds, options, script_ptr);
    print_diagnostics(result.warnings);
    write_file(flags.output, print_module(result.module));

    Metrics metrics = compute_metrics(module, result.module);
    std::cout << "retained " << metrics.funcs_after << "/"
              << metrics.funcs_before << " functions ("
              << metrics.funcs_pct.to_string() << "%)\n";

    if (!flags.report.empty()) {
      CategoryConfig categories = flags.categories.empty()
                                      ? default_categories()
                                      : load_categories(read_file(flags.categories));
      SensitiveReport sensitive = sensitive_report(
          result.module, categories, sensitive_mode_for(mode),
          options.register_functions);
      std::string app;
      for (const SymbolManifest &m : manifests) {
        if (!app.empty())
          app += "+";
        app += m.app_name;
      }
      write_file(flags.report,
                 render_report(app, metrics, &sensitive, ReportFormat::Json));
    }
    return kExitOk;
  } catch (const SirError &e) {
    std::cerr << format_diagnostic(e.diagnostic()) << "\n";
    return kExitDiagnostics;
  }
}

struct ReportFlags {
  std::string before;
  std::string after;
  std::string categories;
  std::string script_mode;
  std::string format = "text";
  std::string out;
};

int cmd_report(const ReportFlags &flags) {
  ScriptMode mode = parse_script_mode(flags.script_mode);
  if (!flags.script_mode.empty() && mode == ScriptMode::None)
    return usage_error("--script-mode must be php or ruby");
  if (flags.format != "text" && flags.format != "json")
    return usage_error("--format must be json or text");

  try {
    ModuleUnit before = load_module(flags.before);
    ModuleUnit after = load_module(flags.after);
    Metrics metrics = compute_metrics(before, after);
    CategoryConfig categories = flags.categories.empty()
                                    ? default_categories()
                                    : load_categories(read_file(flags.categories));
    SensitiveReport sensitive =
        sensitive_report(after, categories, sensitive_mode_for(mode));
    std::string rendered = render_report(
        "", metrics, &sensitive,
        flags.format == "json" ? ReportFormat::Json : ReportFormat::Text);
    if (flags.out.empty())
      std::cout << rendered << (flags.format == "json" ? "\n" : "");
    else
      write_file(flags.out, rendered);
    return kExitOk;
  } catch (const SirError &e) {
    std::cerr << format_diagnostic(e.diagnostic()) << "\n";
    return kExitDiagnostics;
  }
}

struct RunFlags {
  std::string input;
  std::string entry;
  std::string args;
  std::uint64_t step_limit = kDefaultStepLimit;
};

int cmd_run(const RunFlags &flags) {
  try {
    ModuleUnit module = load_module(flags.input);
    if (!module.function(flags.entry)) {
      std::cerr << format_diagnostic(Diagnostic{
                       Severity::Error, "unknown-entry",
                       "entry '" + flags.entry + "' is not a function",
                       Location{flags.entry, "", std::nullopt}, std::nullopt})
                << "\n";
      return kExitDiagnostics;
    }
    std::vector<std::int64_t> args;
    if (!flags.args.empty()) {
      std::istringstream in(flags.args);
      std::string piece;
      while (std::getline(in, piece, ',')) {
        try {
          std::size_t used = 0;
          args.push_back(std::stoll(piece, &used));
          if (used != piece.size())
            throw std::invalid_argument(piece);
        } catch (const std::exception &) {
          return usage_error("--args expects comma-separated integers");
        }
      }
    }
    RunResult result = run(module, flags.entry, args, flags.step_limit);
    for (std::int64_t value : result.outputs)
      std::cout << value << "\n";
    if (result.ok())
      return kExitOk;
    std::cout << "fault: " << fault_kind_name(*result.fault_kind);
    if (!result.fault_detail.empty())
      std::cout << " " << result.fault_detail;
    std::cout << "\n";
    return *result.fault_kind == FaultKind::BoobyTrap ? kExitBoobyTrap
                                                      : kExitDiagnostics;
  } catch (const SirError &e) {
    std::cerr << format_diagnostic(e.diagnostic()) << "\n";
    return kExitDiagnostics;
  }
}

int cmd_validate(const std::string &input) {
  try {
    ModuleUnit module = load_module(input);
    std::vector<Diagnostic> closure = validate_closed(module);
    if (!closure.empty()) {
      print_diagnostics(closure);
      return kExitDiagnostics;
    }
    return kExitOk;
  } catch (const SirError &e) {
    std::cerr << format_diagnostic(e.diagnostic()) << "\n";
    return kExitDiagnostics;
  }
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"sirtail - tailor a SIR module to the applications that use it"};
  app.require_subcommand(1);

  DebloatFlags debloat_flags;
  CLI::App *debloat_cmd =
      app.add_subcommand("debloat", "remove functions no application needs");
  debloat_cmd->add_option("--input", debloat_flags.input, "module to tailor")
      ->required();
  debloat_cmd->add_option("--manifest", debloat_flags.manifests,
                          "application manifest (repeatable)");
  debloat_cmd->add_option("--whitelist", debloat_flags.whitelist,
                          "manual whitelist file");
  debloat_cmd->add_option("--script-mode", debloat_flags.script_mode,
                          "php or ruby");
  debloat_cmd->add_option("--script-whitelist", debloat_flags.script_whitelist,
                          "script-function whitelist file");
  debloat_cmd->add_flag("--booby-trap", debloat_flags.booby_trap,
                        "replace pruned table handlers with trap stubs");
  debloat_cmd->add_option("--register-functions",
                          debloat_flags.register_functions,
                          "registration function list (ruby)");
  debloat_cmd->add_option("--output", debloat_flags.output, "tailored module")
      ->required();
  debloat_cmd->add_option("--report", debloat_flags.report,
                          "write a JSON report here");
  debloat_cmd->add_option("--categories", debloat_flags.categories,
                          "sensitive-category JSON file");

  ReportFlags report_flags;
  CLI::App *report_cmd =
      app.add_subcommand("report", "compare an original and tailored module");
  report_cmd->add_option("--before", report_flags.before, "original module")
      ->required();
  report_cmd->add_option("--after", report_flags.after, "tailored module")
      ->required();
  report_cmd->add_option("--categories", report_flags.categories,
                         "sensitive-category JSON file");
  report_cmd->add_option("--script-mode", report_flags.script_mode,
                         "php or ruby");
  report_cmd->add_option("--format", report_flags.format, "json or text");
  report_cmd->add_option("--out", report_flags.out, "write the report here");

  RunFlags run_flags;
  CLI::App *run_cmd = app.add_subcommand("run", "execute a module");
  run_cmd->add_option("--input", run_flags.input, "module to run")->required();
  run_cmd->add_option("--entry", run_flags.entry, "entry function")->required();
  run_cmd->add_option("--args", run_flags.args, "comma-separated integers");
  run_cmd->add_option("--step-limit", run_flags.step_limit,
                      "instruction budget");

  std::string validate_input;
  CLI::App *validate_cmd = app.add_subcommand("validate", "check a module");
  validate_cmd->add_option("--input", validate_input, "module to check")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  if (debloat_cmd->parsed())
    return cmd_debloat(debloat_flags);
  if (report_cmd->parsed())
    return cmd_report(report_flags);
  if (run_cmd->parsed())
    return cmd_run(run_flags);
  if (validate_cmd->parsed())
    return cmd_validate(validate_input);
  return kExitUsage;
}
