// Acceptance suite: each numbered criterion prints one PASS/FAIL line with
// its elapsed time. The process exits with the number of failed criteria.

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "Generate.h"
#include "NaiveClosure.h"
#include "TestUtil.h"
#include "sirtail/Config.h"
#include "sirtail/Explore.h"
#include "sirtail/Report.h"
#include "sirtail/ScriptEdit.h"
#include "sirtail/TextIO.h"
#include "sirtail/Transform.h"
#include "sirtail/VM.h"
#include "sirtail/Validate.h"

using namespace sirtail;
using namespace sirtail::test;

namespace {

class Criterion {
public:
  explicit Criterion(double budget_seconds) : budget_(budget_seconds) {}

  void check(bool condition, const std::string &what) {
    ++checks_;
    if (!condition)
      failures_.push_back(what);
  }

  template <typename T>
  void check_eq(const T &actual, const T &expected, const std::string &what) {
    check(actual == expected, what);
  }

  bool finish(double elapsed) {
    if (elapsed > budget_) {
      std::ostringstream msg;
      msg << "runtime " << elapsed << "s exceeds budget " << budget_ << "s";
      failures_.push_back(msg.str());
    }
    return failures_.empty();
  }

  int checks() const { return checks_; }
  const std::vector<std::string> &failures() const { return failures_; }

private:
  double budget_;
  int checks_ = 0;
  std::vector<std::string> failures_;
};

struct Suite {
  int failed = 0;

  void run(int number, const std::string &title, double budget_seconds,
           const std::function<void(Criterion &)> &body) {
    Criterion criterion(budget_seconds);
    auto start = std::chrono::steady_clock::now();
    try {
      body(criterion);
    } catch (const std::exception &e) {
      criterion.check(false, std::string("exception: ") + e.what());
    }
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    bool ok = criterion.finish(elapsed);
    std::ostringstream line;
    line << (ok ? "PASS" : "FAIL") << " criterion " << number << ": " << title
         << " (" << criterion.checks() << " checks, " << elapsed << "s)";
    std::cout << line.str() << "\n";
    if (!ok) {
      ++failed;
      for (const std::string &failure : criterion.failures())
        std::cout << "     - " << failure << "\n";
    }
  }
};

std::string q(const std::filesystem::path &p) { return "'" + p.string() + "'"; }

AnalysisOptions php_options(bool booby) {
  AnalysisOptions options;
  options.script_mode = ScriptMode::Php;
  options.booby_trap = booby;
  return options;
}

std::map<std::string, std::size_t> category_counts(const SensitiveReport &r) {
  std::map<std::string, std::size_t> out;
  for (const auto &[category, names] : r.per_category)
    out[category] = names.size();
  return out;
}

void criterion_areas(Criterion &c) {
  ModuleUnit m = load_fixture("areas.sir");
  DebloatResult result = debloat(m, {"area_square"}, {}, nullptr);
  c.check_eq(result.retained,
             std::set<Identifier>{"area_square", "area_rectangle"},
             "retained set");
  c.check_eq(result.removed,
             std::set<Identifier>{"area_circle", "area_ellipse"},
             "removed set");
}

void criterion_stdio(Criterion &c) {
  ModuleUnit m = load_fixture("stdio.sir");
  std::vector<std::int64_t> args{5, 3};

  DebloatResult full = debloat(m, {"fwrite"}, {}, nullptr);
  c.check(full.retained.count("__stdout_write") == 1,
          "global exploration retains the handler");
  RunResult baseline = run(m, "fwrite", args);
  RunResult tailored = run(full.module, "fwrite", args);
  c.check(baseline.ok() && tailored.ok(), "both runs complete");
  c.check_eq(tailored.outputs, baseline.outputs, "differential outputs");

  // Test hook: without the global phase the handler is dropped and the
  // indirect call has nothing to reach.
  AnalysisOptions hooked;
  hooked.run_global_exploration = false;
  AnalysisResult partial = compute_retained(m, {"fwrite"}, hooked, nullptr);
  c.check(partial.state.retained.count("__stdout_write") == 0,
          "hooked analysis misses the handler");
  ModuleUnit broken = strip_functions(m, partial.state.retained);
  RunResult faulty = run(broken, "fwrite", args);
  c.check(!faulty.ok(), "hooked module faults");
  c.check(faulty.fault_kind == FaultKind::MissingFunction,
          "fault is missing-function");
}

void criterion_ruby_io(Criterion &c) {
  ModuleUnit m = load_fixture("ruby_io.sir");
  AnalysisOptions options;
  options.script_mode = ScriptMode::Ruby;
  ScriptWhitelist wl{ScriptMode::Ruby, {"open"}};
  AnalysisResult analysis = compute_retained(m, {"Init_IO"}, options, &wl);
  std::set<std::size_t> deleted;
  for (const RubyCallDeletion &d : analysis.plan.ruby_call_deletions) {
    c.check_eq(d.function, std::string("Init_IO"), "deletion function");
    deleted.insert(d.index);
  }
  c.check_eq(deleted, std::set<std::size_t>{0, 2},
             "exactly the syscall and printf registrations");

  DebloatResult result = debloat(m, {"Init_IO"}, options, &wl);
  c.check_eq(result.removed, std::set<Identifier>{"rb_f_syscall", "rb_f_printf"},
             "removed handlers");
  c.check(result.retained.count("rb_f_open") == 1, "open handler retained");
  std::size_t calls = 0;
  for (const Instruction &inst :
       result.module.function("Init_IO")->blocks[0].instructions)
    if (inst.kind == Instruction::Kind::Call)
      ++calls;
  c.check_eq(calls, std::size_t{1}, "one registration call survives");
}

void criterion_oracle(Criterion &c) {
  int mismatches = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    AnalysisCase t = generate_analysis_case(seed);
    if (!validate_module(t.module).empty()) {
      c.check(false, "generator produced an invalid module at seed " +
                         std::to_string(seed));
      return;
    }
    const ScriptWhitelist *wl = t.options.script_mode == ScriptMode::None
                                    ? nullptr
                                    : &t.script_whitelist;
    std::set<Identifier> fast =
        compute_retained(t.module, t.seeds, t.options, wl).state.whitelist;
    std::set<Identifier> slow = naive_closure(t.module, t.seeds, t.options, wl);
    if (fast != slow)
      ++mismatches;
  }
  c.check_eq(mismatches, 0, "worklist equals rescan oracle on 200 modules");
}

void criterion_preservation(Criterion &c) {
  const std::uint64_t limit = 200000;
  int compared = 0;
  int mismatched = 0;
  int skipped = 0;
  for (std::uint64_t seed = 0; compared < 200 && seed < 400; ++seed) {
    ProgramCase t = generate_program_case(seed);
    if (!validate_module(t.module).empty()) {
      c.check(false, "program generator produced an invalid module at seed " +
                         std::to_string(seed));
      return;
    }
    const ScriptWhitelist *wl = t.options.script_mode == ScriptMode::None
                                    ? nullptr
                                    : &t.script_whitelist;
    std::set<Identifier> visited;
    RunResult baseline = run(t.module, t.entry, t.args, limit, &visited);

    DebloatResult tailored = debloat(t.module, t.seeds, t.options, wl);
    bool inside = std::includes(tailored.retained.begin(),
                                tailored.retained.end(), visited.begin(),
                                visited.end());
    if (!inside) {
      ++skipped; // the trace left the retained set; outside the contract
      continue;
    }
    RunResult after = run(tailored.module, t.entry, t.args, limit);
    bool same = after.ok() == baseline.ok() &&
                after.fault_kind == baseline.fault_kind &&
                after.outputs == baseline.outputs;
    if (!same)
      ++mismatched;
    ++compared;
  }
  c.check(compared >= 200, "compared at least 200 triples (got " +
                               std::to_string(compared) + ", skipped " +
                               std::to_string(skipped) + ")");
  c.check_eq(mismatched, 0, "tailored runs match baseline runs");
}

void criterion_closure(Criterion &c) {
  std::mt19937_64 rng(7);
  int corrupted_checked = 0;
  for (std::uint64_t seed = 500; seed < 560; ++seed) {
    AnalysisCase t = generate_analysis_case(seed);
    const ScriptWhitelist *wl = t.options.script_mode == ScriptMode::None
                                    ? nullptr
                                    : &t.script_whitelist;
    DebloatResult result = debloat(t.module, t.seeds, t.options, wl);
    if (!validate_closed(result.module).empty()) {
      c.check(false, "debloat output not closed at seed " +
                         std::to_string(seed));
      return;
    }
    ModuleUnit mutated = result.module;
    if (corrupt_reference(rng, mutated)) {
      ++corrupted_checked;
      if (validate_closed(mutated).empty()) {
        c.check(false, "corruption went undetected at seed " +
                           std::to_string(seed));
        return;
      }
    }
  }
  c.check(corrupted_checked >= 20, "enough corruptions exercised (" +
                                       std::to_string(corrupted_checked) + ")");
  c.check(true, "all outputs closed");
}

void criterion_percentages(Criterion &c) {
  c.check_eq(percent_of(358, 2603).to_string(), std::string("13.8"), "358/2603");
  c.check_eq(percent_of(366, 2603).to_string(), std::string("14.1"), "366/2603");
  c.check_eq(percent_of(893, 2603).to_string(), std::string("34.3"), "893/2603");
  c.check_eq(percent_of(762, 2603).to_string(), std::string("29.3"), "762/2603");
  c.check_eq(percent_of(164, 891).to_string(), std::string("18.4"), "164/891");
  c.check_eq(percent_of(388, 891).to_string(), std::string("43.6"), "388/891");
}

void criterion_sensitive_shape(Criterion &c) {
  ModuleUnit m = load_fixture("php_sensitive.sir");
  using Counts = std::map<std::string, std::size_t>;

  SensitiveReport complete =
      sensitive_report(m, default_categories(), SensitiveMode::TablePresence);
  c.check_eq(category_counts(complete),
             Counts{{"Code Execution", 5}, {"Command Execution", 7}},
             "complete interpreter counts");

  ScriptWhitelist mail{ScriptMode::Php, {"mail"}};
  DebloatResult mail_only =
      debloat(m, {"php_execute_script"}, php_options(false), &mail);
  c.check_eq(category_counts(sensitive_report(mail_only.module,
                                              default_categories(),
                                              SensitiveMode::TablePresence)),
             Counts{{"Code Execution", 0}, {"Command Execution", 1}},
             "mail-only counts");

  ScriptWhitelist benign{ScriptMode::Php, {"echo", "strlen"}};
  DebloatResult minimal =
      debloat(m, {"php_execute_script"}, php_options(false), &benign);
  c.check_eq(category_counts(sensitive_report(minimal.module,
                                              default_categories(),
                                              SensitiveMode::TablePresence)),
             Counts{{"Code Execution", 0}, {"Command Execution", 0}},
             "minimal counts");
}

void criterion_booby(Criterion &c) {
  ModuleUnit m = load_fixture("php_sensitive.sir");
  ScriptWhitelist mail{ScriptMode::Php, {"mail"}};
  DebloatResult trapped =
      debloat(m, {"php_execute_script"}, php_options(true), &mail);

  const GlobalDef *table = trapped.module.global("function_entries");
  c.check(table != nullptr, "table survives");
  c.check_eq(table->init.elements.size(),
             m.global("function_entries")->init.elements.size(),
             "entry count preserved");

  std::string exec_stub;
  for (const Initializer &e : table->init.elements) {
    auto entry = as_php_entry(e);
    if (entry && entry->script_name == "exec" && entry->handler)
      exec_stub = *entry->handler;
  }
  c.check(!exec_stub.empty(), "exec entry has a handler");
  c.check(is_trap_stub(*trapped.module.function(exec_stub)),
          "exec handler is a trap stub");

  RunResult dispatch = run(trapped.module, exec_stub, {});
  c.check(!dispatch.ok() && dispatch.fault_kind == FaultKind::BoobyTrap,
          "dispatch faults booby-trap");
  c.check_eq(dispatch.fault_detail, std::string("exec"), "fault carries name");

  // Same alarm through the CLI, exit code 3.
  TempDir dir;
  auto wl_file = dir.file("wl.txt", "mail\n");
  auto manual = dir.file("manual.txt", "php_execute_script\n");
  auto out_path = dir.path() / "trapped.sir";
  ProcResult build = run_process(
      cli_path() + " debloat --input " + q(fixture_dir() / "php_sensitive.sir") +
      " --script-mode php --script-whitelist " + q(wl_file) +
      " --booby-trap --whitelist " + q(manual) + " --output " + q(out_path));
  c.check_eq(build.exit_code, 0, "cli debloat succeeds");
  ProcResult alarm = run_process(cli_path() + " run --input " + q(out_path) +
                                 " --entry " + exec_stub);
  c.check_eq(alarm.exit_code, 3, "cli exit code 3");
  c.check_eq(alarm.out, std::string("fault: booby-trap exec\n"), "cli output");
}

void criterion_determinism(Criterion &c) {
  ModuleUnit m = load_fixture("php_sensitive.sir");
  ScriptWhitelist mail{ScriptMode::Php, {"mail"}};

  DebloatResult a = debloat(m, {"php_execute_script"}, php_options(true), &mail);
  DebloatResult b = debloat(m, {"php_execute_script"}, php_options(true), &mail);
  c.check_eq(print_module(a.module), print_module(b.module),
             "repeated runs are byte-identical");

  ModuleUnit permuted = m;
  std::reverse(permuted.functions.begin(), permuted.functions.end());
  DebloatResult p =
      debloat(permuted, {"php_execute_script"}, php_options(true), &mail);
  c.check_eq(p.retained, a.retained, "retained set under permutation");
  c.check_eq(p.removed, a.removed, "removed set under permutation");

  Metrics ma = compute_metrics(m, a.module);
  Metrics mp = compute_metrics(permuted, p.module);
  c.check_eq(ma.funcs_after, mp.funcs_after, "function counts agree");
  c.check_eq(ma.size_after, mp.size_after, "size counts agree");
  c.check_eq(ma.funcs_pct, mp.funcs_pct, "percentages agree");
  c.check_eq(ma.removed_names, mp.removed_names, "removed names agree");

  SensitiveReport sa = sensitive_report(a.module, default_categories(),
                                        SensitiveMode::TablePresence);
  SensitiveReport sp = sensitive_report(p.module, default_categories(),
                                        SensitiveMode::TablePresence);
  c.check_eq(sa.per_category, sp.per_category, "sensitive counts agree");

  std::string ra = render_report("x", ma, &sa, ReportFormat::Json);
  c.check_eq(ra, render_report("x", mp, &sp, ReportFormat::Json),
             "rendered reports agree");
}

void criterion_monotonicity(Criterion &c) {
  int seed_violations = 0;
  std::mt19937_64 rng(99);
  for (int i = 0; i < 100; ++i) {
    AnalysisCase t = generate_analysis_case(2000 + static_cast<std::uint64_t>(i));
    const ScriptWhitelist *wl = t.options.script_mode == ScriptMode::None
                                    ? nullptr
                                    : &t.script_whitelist;
    std::vector<Identifier> names;
    for (const FunctionDef &f : t.module.functions)
      names.push_back(f.name);
    std::set<Identifier> small = t.seeds;
    std::set<Identifier> big = small;
    std::uniform_int_distribution<std::size_t> pick(0, names.size() - 1);
    for (int extra = rng() % 3 + 1; extra > 0; --extra)
      big.insert(names[pick(rng)]);

    std::set<Identifier> r_small =
        compute_retained(t.module, small, t.options, wl).state.retained;
    std::set<Identifier> r_big =
        compute_retained(t.module, big, t.options, wl).state.retained;
    // Compare without synthesized stub names, which are not functions of m.
    std::set<Identifier> fns_small, fns_big;
    for (const Identifier &n : r_small)
      if (t.module.function(n))
        fns_small.insert(n);
    for (const Identifier &n : r_big)
      if (t.module.function(n))
        fns_big.insert(n);
    if (!std::includes(fns_big.begin(), fns_big.end(), fns_small.begin(),
                       fns_small.end()))
      ++seed_violations;
  }
  c.check_eq(seed_violations, 0, "seed monotonicity on 100 random pairs");

  // Shrinking the php whitelist never increases a sensitive count.
  ModuleUnit m = load_fixture("php_sensitive.sir");
  std::vector<std::set<std::string>> chain = {
      {},
      {"mail"},
      {"mail", "exec"},
      {"mail", "exec", "system"},
      {"mail", "exec", "system", "assert", "echo"},
  };
  std::map<std::string, std::size_t> previous;
  bool first = true;
  int count_violations = 0;
  for (const auto &names : chain) {
    ScriptWhitelist wl{ScriptMode::Php, names};
    DebloatResult result =
        debloat(m, {"php_execute_script"}, php_options(false), &wl);
    auto current = category_counts(sensitive_report(
        result.module, default_categories(), SensitiveMode::TablePresence));
    if (!first)
      for (const auto &[category, count] : current)
        if (previous.at(category) > count)
          ++count_violations;
    previous = current;
    first = false;
  }
  c.check_eq(count_violations, 0, "sensitive counts anti-monotone");
}

} // namespace

int main() {
  Suite suite;
  suite.run(1, "4-function fixture keeps exactly the square path", 1.0,
            criterion_areas);
  suite.run(2, "global-held funcref survives; skipping the phase breaks it",
            1.0, criterion_stdio);
  suite.run(3, "registration whitelist deletes syscall and printf", 1.0,
            criterion_ruby_io);
  suite.run(4, "worklist equals the rescan oracle on 200 modules", 60.0,
            criterion_oracle);
  suite.run(5, "tailored runs preserve 200 in-retained traces", 60.0,
            criterion_preservation);
  suite.run(6, "outputs are closed; corruptions are detected", 10.0,
            criterion_closure);
  suite.run(7, "reduction-table ratios reproduce to one decimal", 1.0,
            criterion_percentages);
  suite.run(8, "sensitive categories report 5/7, 0/1, 0/0", 1.0,
            criterion_sensitive_shape);
  suite.run(9, "booby traps preserve the table and raise exit 3", 1.0,
            criterion_booby);
  suite.run(10, "results are deterministic and order independent", 10.0,
            criterion_determinism);
  suite.run(11, "seed and whitelist monotonicity hold", 30.0,
            criterion_monotonicity);
  if (suite.failed == 0)
    std::cout << "all criteria passed\n";
  return suite.failed;
}
