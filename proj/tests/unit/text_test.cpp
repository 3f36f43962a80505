#include <doctest.h>

#include <filesystem>
#include <random>

#include "Generate.h"
#include "TestUtil.h"
#include "sirtail/Explore.h"
#include "sirtail/ScriptEdit.h"
#include "sirtail/TextIO.h"
#include "sirtail/Validate.h"

using namespace sirtail;
using namespace sirtail::test;

TEST_CASE("minimal program parses") {
  ParseResult r = parse_module("module m\nfunc @main() {\nentry:\n  ret 0\n}\n");
  REQUIRE(r.ok());
  CHECK(r.module->name == "m");
  CHECK(r.module->functions.size() == 1);
  CHECK(r.module->globals.empty());
}

TEST_CASE("the areas fixture parses with one direct-call edge") {
  ModuleUnit m = load_fixture("areas.sir");
  CHECK(m.functions.size() == 4);
  int calls = 0;
  for (const FunctionDef &f : m.functions)
    for (const Block &b : f.blocks)
      for (const Instruction &inst : b.instructions)
        if (inst.kind == Instruction::Kind::Call)
          ++calls;
  CHECK(calls == 1);
  const FunctionDef *square = m.function("area_square");
  REQUIRE(square);
  CHECK(square->blocks[0].instructions[0].symbol == "area_rectangle");
}

TEST_CASE("icall rejects direct-call syntax") {
  ParseResult r = parse_module(
      "module m\nfunc @f() {\nentry:\n  icall @f()\n  ret\n}\n");
  REQUIRE(!r.ok());
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].code == "syntax-error");
  REQUIRE(r.diagnostics[0].span.has_value());
  CHECK(r.diagnostics[0].span->line == 4);
}

TEST_CASE("syntax errors carry positions") {
  ParseResult r = parse_module("module m\nglobal @g = ?\n");
  REQUIRE(!r.ok());
  REQUIRE(r.diagnostics[0].span.has_value());
  CHECK(r.diagnostics[0].span->line == 2);
  CHECK(r.diagnostics[0].span->column == 13);
}

TEST_CASE("corpus round-trips losslessly") {
  for (const auto &entry : std::filesystem::directory_iterator(fixture_dir())) {
    if (entry.path().extension() != ".sir")
      continue;
    INFO("fixture ", entry.path().filename().string());
    ParseResult first = parse_module(read_file(entry.path()));
    REQUIRE(first.ok());
    std::string printed = print_module(*first.module);
    ParseResult second = parse_module(printed);
    REQUIRE(second.ok());
    CHECK(*second.module == *first.module);
    CHECK(print_module(*second.module) == printed); // idempotence
  }
}

namespace {

// Null-handler table entries are tombstones; the printer intentionally drops
// them, so only tombstone-free modules reparse to an equal value.
bool has_tombstones(const ModuleUnit &m) {
  for (const GlobalDef &g : m.globals) {
    if (!g.is_php_table() || g.init.kind != Initializer::Kind::Array)
      continue;
    for (const Initializer &e : g.init.elements) {
      auto entry = as_php_entry(e);
      if (entry && !entry->handler)
        return true;
    }
  }
  return false;
}

} // namespace

TEST_CASE("generated modules round-trip") {
  int exact = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    AnalysisCase c = generate_analysis_case(seed);
    REQUIRE(validate_module(c.module).empty());
    std::string printed = print_module(c.module);
    ParseResult reparsed = parse_module(printed);
    REQUIRE(reparsed.ok());
    if (!has_tombstones(c.module)) {
      CHECK(*reparsed.module == c.module);
      ++exact;
    }
    CHECK(print_module(*reparsed.module) == printed);
  }
  CHECK(exact >= 25); // the corpus is mostly tombstone-free
}

TEST_CASE("printing is deterministic") {
  ModuleUnit m = load_fixture("grammar_full.sir");
  CHECK(print_module(m) == print_module(m));
}

TEST_CASE("the corpus exercises every production") {
  std::string all;
  for (const auto &entry : std::filesystem::directory_iterator(fixture_dir()))
    if (entry.path().extension() == ".sir")
      all += read_file(entry.path());

  for (const char *required :
       {"extern @", "global @", "func @", "[export",
        "script_table=php", "null", "funcref @", "str \"", "{", "[]"})
    CHECK_MESSAGE(all.find(required) != std::string::npos, required);

  for (const char *op :
       {"call @", "icall ", "load @", "store ", "select ", "phi ",
        "const ", "add ", "sub ", "mul ", "ret", "br ", "condbr ", "out ",
        "trap \""})
    CHECK_MESSAGE(all.find(op) != std::string::npos, op);
}

TEST_CASE("CRLF input is accepted, output is LF") {
  ParseResult r =
      parse_module("module m\r\nfunc @main() {\r\nentry:\r\n  ret 0\r\n}\r\n");
  REQUIRE(r.ok());
  std::string printed = print_module(*r.module);
  CHECK(printed.find('\r') == std::string::npos);
}

TEST_CASE("comments and escapes survive a round-trip") {
  ParseResult r = parse_module(
      "module m ; trailing comment\n"
      "; full-line comment\n"
      "global @s = str \"a\\\"b\\\\c\"\n"
      "func @main() {\nentry:\n  trap \"x\\\\y\"\n}\n");
  REQUIRE(r.ok());
  CHECK(r.module->globals[0].init.str_value == "a\"b\\c");
  CHECK(r.module->functions[0].blocks[0].instructions[0].text == "x\\y");
  ParseResult again = parse_module(print_module(*r.module));
  REQUIRE(again.ok());
  CHECK(*again.module == *r.module);
}

TEST_CASE("negative integers parse") {
  ParseResult r = parse_module(
      "module m\nglobal @g = -42\nfunc @f() {\nentry:\n  ret -1\n}\n");
  REQUIRE(r.ok());
  CHECK(r.module->globals[0].init.int_value == -42);
}

TEST_CASE("unknown instruction is a syntax error") {
  ParseResult r =
      parse_module("module m\nfunc @f() {\nentry:\n  frob 1\n}\n");
  REQUIRE(!r.ok());
  CHECK(r.diagnostics[0].code == "syntax-error");
}

TEST_CASE("mutated inputs fail cleanly, never crash") {
  std::string base = read_file(fixture_dir() / "grammar_full.sir");
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::size_t> pos(0, base.size() - 1);
  std::uniform_int_distribution<int> byte(0, 255);
  for (int i = 0; i < 300; ++i) {
    std::string mutated = base;
    int edits = 1 + static_cast<int>(rng() % 4);
    for (int e = 0; e < edits; ++e) {
      switch (rng() % 3) {
      case 0:
        mutated[pos(rng) % mutated.size()] = static_cast<char>(byte(rng));
        break;
      case 1:
        mutated.insert(pos(rng) % mutated.size(), 1,
                       static_cast<char>(byte(rng)));
        break;
      default:
        mutated.erase(pos(rng) % mutated.size(), 1);
        break;
      }
    }
    ParseResult r = parse_module(mutated);
    if (r.ok()) {
      // Still-valid mutants must keep the full contract.
      std::string printed = print_module(*r.module);
      ParseResult again = parse_module(printed);
      REQUIRE(again.ok());
      CHECK(print_module(*again.module) == printed);
    } else {
      CHECK(!r.diagnostics.empty());
    }
  }
}

TEST_CASE("print refuses invalid modules") {
  ModuleUnit m;
  m.name = "m";
  m.globals.push_back(GlobalDef{"g", {}, Initializer::funcref("ghost")});
  CHECK_THROWS_AS((void)print_module(m), SirError);
}

TEST_CASE("deleted table entries are elided when printing") {
  // A three-entry table; the middle entry is pruned by a deletion plan.
  ParseResult r = parse_module(
      "module m\n"
      "global @t [script_table=php] = [\n"
      "  {str \"keep\", funcref @h1, 0},\n"
      "  {str \"drop\", funcref @h2, 0},\n"
      "  {str \"also\", funcref @h3, 0}\n"
      "]\n"
      "func @h1() {\nentry:\n  ret\n}\n"
      "func @h2() {\nentry:\n  ret\n}\n"
      "func @h3() {\nentry:\n  ret\n}\n");
  REQUIRE(r.ok());
  EditPlan plan;
  plan.php_entry_deletions.push_back({"t", 1});
  ModuleUnit edited = apply_php_edits(*r.module, plan);
  ParseResult again = parse_module(print_module(edited));
  REQUIRE(again.ok());
  const GlobalDef *table = again.module->global("t");
  REQUIRE(table);
  CHECK(table->init.elements.size() == 2);
  CHECK(as_php_entry(table->init.elements[0])->script_name == "keep");
  CHECK(as_php_entry(table->init.elements[1])->script_name == "also");

  // A null-handler tombstone written directly in the source is elided too.
  ParseResult tombstone = parse_module(
      "module m\n"
      "global @t [script_table=php] = [{str \"gone\", null, 0}, "
      "{str \"live\", funcref @h, 0}]\n"
      "func @h() {\nentry:\n  ret\n}\n");
  REQUIRE(tombstone.ok());
  std::string printed = print_module(*tombstone.module);
  CHECK(printed.find("gone") == std::string::npos);
  ParseResult reparsed = parse_module(printed);
  REQUIRE(reparsed.ok());
  CHECK(reparsed.module->global("t")->init.elements.size() == 1);
  CHECK(print_module(*reparsed.module) == printed);
}
