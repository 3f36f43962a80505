//===- Parser.cpp - SIR text to ModuleUnit --------------------------------===//
//
// Part of the sirtail project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include <cerrno>
#include <cstdlib>
#include <map>
#include <tuple>

#include "sirtail/TextIO.h"
#include "sirtail/Validate.h"

namespace sirtail {

namespace {

struct Token {
  enum class Kind {
    Ident, Int, Str,
    At, Percent, LParen, RParen, LBrace, RBrace, LBracket, RBracket,
    Comma, Colon, Equals, End,
  };

  Kind kind = Kind::End;
  std::string text;
  std::int64_t int_value = 0;
  SourceSpan span;
};

class Lexer {
public:
  explicit Lexer(std::string_view text) : text_(text) {}

  // Returns false and fills `error` on a lexical error.
  bool tokenize(std::vector<Token> &out, Diagnostic &error) {
    while (true) {
      skip_space_and_comments();
      SourceSpan span{line_, column_};
      if (at_end()) {
        out.push_back(Token{Token::Kind::End, "", 0, span});
        return true;
      }
      char c = peek();
      if (c == '"') {
        std::string value;
        if (!lex_string(value, error))
          return false;
        out.push_back(Token{Token::Kind::Str, std::move(value), 0, span});
        continue;
      }
      if (c == '-' || (c >= '0' && c <= '9')) {
        std::string digits;
        digits.push_back(advance());
        if (digits[0] == '-' && (at_end() || peek() < '0' || peek() > '9')) {
          error = syntax_error("expected digits after '-'", span);
          return false;
        }
        while (!at_end() && peek() >= '0' && peek() <= '9')
          digits.push_back(advance());
        errno = 0;
        char *end = nullptr;
        long long v = std::strtoll(digits.c_str(), &end, 10);
        if (errno == ERANGE || *end != '\0') {
          error = syntax_error("integer literal out of range", span);
          return false;
        }
        out.push_back(Token{Token::Kind::Int, digits, v, span});
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string ident;
        while (!at_end() &&
               (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
          ident.push_back(advance());
        out.push_back(Token{Token::Kind::Ident, std::move(ident), 0, span});
        continue;
      }
      Token::Kind kind;
      switch (c) {
      case '@': kind = Token::Kind::At; break;
      case '%': kind = Token::Kind::Percent; break;
      case '(': kind = Token::Kind::LParen; break;
      case ')': kind = Token::Kind::RParen; break;
      case '{': kind = Token::Kind::LBrace; break;
      case '}': kind = Token::Kind::RBrace; break;
      case '[': kind = Token::Kind::LBracket; break;
      case ']': kind = Token::Kind::RBracket; break;
      case ',': kind = Token::Kind::Comma; break;
      case ':': kind = Token::Kind::Colon; break;
      case '=': kind = Token::Kind::Equals; break;
      default:
        error = syntax_error(std::string("unexpected character '") + c + "'", span);
        return false;
      }
      advance();
      out.push_back(Token{kind, std::string(1, c), 0, span});
    }
  }

private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skip_space_and_comments() {
    while (!at_end()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == ';') {
        while (!at_end() && peek() != '\n')
          advance();
      } else {
        break;
      }
    }
  }

  bool lex_string(std::string &value, Diagnostic &error) {
    SourceSpan start{line_, column_};
    advance(); // opening quote
    while (true) {
      if (at_end() || peek() == '\n') {
        error = syntax_error("unterminated string literal", start);
        return false;
      }
      char c = advance();
      if (c == '"')
        return true;
      if (c == '\\') {
        if (at_end()) {
          error = syntax_error("unterminated string literal", start);
          return false;
        }
        char e = advance();
        if (e == '"' || e == '\\') {
          value.push_back(e);
        } else {
          error = syntax_error(std::string("unknown escape '\\") + e + "'",
                               SourceSpan{line_, column_ - 2});
          return false;
        }
      } else {
        value.push_back(c);
      }
    }
  }

  static Diagnostic syntax_error(std::string message, SourceSpan span) {
    return Diagnostic{Severity::Error, "syntax-error", std::move(message),
                      Location{}, span};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

class Parser {
public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  // Structural parse only; fails fast with a single diagnostic.
  bool parse(ModuleUnit &module, Diagnostic &error) {
    error_ = &error;
    if (!expect_keyword("module"))
      return false;
    if (!parse_ident(module.name))
      return false;
    while (!at(Token::Kind::End)) {
      const Token &t = cur();
      if (t.kind != Token::Kind::Ident)
        return fail("expected declaration");
      if (t.text == "extern") {
        next();
        std::string name;
        SourceSpan span = cur().span;
        if (!expect(Token::Kind::At) || !parse_ident(name))
          return false;
        module.externs.push_back(name);
        decl_spans[name] = span;
      } else if (t.text == "global") {
        GlobalDef g;
        if (!parse_global(g))
          return false;
        module.globals.push_back(std::move(g));
      } else if (t.text == "func") {
        FunctionDef f;
        if (!parse_function(f))
          return false;
        module.functions.push_back(std::move(f));
      } else {
        return fail("expected 'extern', 'global', or 'func'");
      }
    }
    return true;
  }

  std::map<std::string, SourceSpan> decl_spans;
  std::map<std::tuple<std::string, std::string, std::size_t>, SourceSpan>
      inst_spans;

private:
  const Token &cur() const { return tokens_[pos_]; }
  const Token &peek(std::size_t n) const {
    std::size_t i = pos_ + n;
    return tokens_[i < tokens_.size() ? i : tokens_.size() - 1];
  }
  void next() { if (pos_ + 1 < tokens_.size()) ++pos_; }
  bool at(Token::Kind kind) const { return cur().kind == kind; }

  bool fail(std::string message) {
    *error_ = Diagnostic{Severity::Error, "syntax-error", std::move(message),
                         Location{}, cur().span};
    return false;
  }

  bool expect(Token::Kind kind) {
    if (!at(kind)) {
      static const char *names[] = {"identifier", "integer", "string",
                                    "'@'", "'%'", "'('", "')'", "'{'", "'}'",
                                    "'['", "']'", "','", "':'", "'='",
                                    "end of input"};
      return fail(std::string("expected ") + names[static_cast<int>(kind)]);
    }
    next();
    return true;
  }

  bool expect_keyword(const char *word) {
    if (!at(Token::Kind::Ident) || cur().text != word)
      return fail(std::string("expected '") + word + "'");
    next();
    return true;
  }

  bool parse_ident(std::string &out) {
    if (!at(Token::Kind::Ident))
      return fail("expected identifier");
    out = cur().text;
    next();
    return true;
  }

  bool parse_attrs(Attrs &attrs) {
    if (!at(Token::Kind::LBracket))
      return true;
    next();
    while (true) {
      std::string name;
      if (!parse_ident(name))
        return false;
      if (name == "export") {
        attrs.exported = true;
      } else if (name == "script_table") {
        if (!expect(Token::Kind::Equals))
          return false;
        std::string lang;
        if (!parse_ident(lang))
          return false;
        if (lang != "php")
          return fail("unknown script table language '" + lang + "'");
        attrs.script_table_php = true;
      } else {
        return fail("unknown attribute '" + name + "'");
      }
      if (at(Token::Kind::Comma)) {
        next();
        continue;
      }
      return expect(Token::Kind::RBracket);
    }
  }

  bool parse_init(Initializer &out) {
    const Token &t = cur();
    switch (t.kind) {
    case Token::Kind::Int:
      out = Initializer::integer(t.int_value);
      next();
      return true;
    case Token::Kind::Ident:
      if (t.text == "null") {
        out = Initializer::null();
        next();
        return true;
      }
      if (t.text == "funcref") {
        next();
        std::string name;
        if (!expect(Token::Kind::At) || !parse_ident(name))
          return false;
        out = Initializer::funcref(std::move(name));
        return true;
      }
      if (t.text == "str") {
        next();
        if (!at(Token::Kind::Str))
          return fail("expected string literal");
        out = Initializer::str(cur().text);
        next();
        return true;
      }
      return fail("expected initializer");
    case Token::Kind::LBrace: {
      next();
      std::vector<Initializer> elements;
      // Aggregates hold at least one element.
      while (true) {
        Initializer e;
        if (!parse_init(e))
          return false;
        elements.push_back(std::move(e));
        if (at(Token::Kind::Comma)) {
          next();
          continue;
        }
        if (!expect(Token::Kind::RBrace))
          return false;
        out = Initializer::aggregate(std::move(elements));
        return true;
      }
    }
    case Token::Kind::LBracket: {
      next();
      std::vector<Initializer> elements;
      if (at(Token::Kind::RBracket)) {
        next();
        out = Initializer::array({});
        return true;
      }
      while (true) {
        Initializer e;
        if (!parse_init(e))
          return false;
        elements.push_back(std::move(e));
        if (at(Token::Kind::Comma)) {
          next();
          continue;
        }
        if (!expect(Token::Kind::RBracket))
          return false;
        out = Initializer::array(std::move(elements));
        return true;
      }
    }
    default:
      return fail("expected initializer");
    }
  }

  bool parse_global(GlobalDef &g) {
    next(); // 'global'
    SourceSpan span = cur().span;
    if (!expect(Token::Kind::At) || !parse_ident(g.name))
      return false;
    decl_spans[g.name] = span;
    if (!parse_attrs(g.attrs))
      return false;
    if (!expect(Token::Kind::Equals))
      return false;
    return parse_init(g.init);
  }

  bool parse_value(Value &out) {
    const Token &t = cur();
    switch (t.kind) {
    case Token::Kind::Percent: {
      next();
      std::string name;
      if (!parse_ident(name))
        return false;
      out = Value::ssa(std::move(name));
      return true;
    }
    case Token::Kind::Int:
      out = Value::integer(t.int_value);
      next();
      return true;
    case Token::Kind::Ident:
      if (t.text == "funcref") {
        next();
        std::string name;
        if (!expect(Token::Kind::At) || !parse_ident(name))
          return false;
        out = Value::funcref(std::move(name));
        return true;
      }
      if (t.text == "str") {
        next();
        if (!at(Token::Kind::Str))
          return fail("expected string literal");
        out = Value::str(cur().text);
        next();
        return true;
      }
      return fail("expected value");
    default:
      return fail("expected value");
    }
  }

  bool parse_arg_list(std::vector<Value> &args) {
    if (!expect(Token::Kind::LParen))
      return false;
    if (at(Token::Kind::RParen)) {
      next();
      return true;
    }
    while (true) {
      Value v;
      if (!parse_value(v))
        return false;
      args.push_back(std::move(v));
      if (at(Token::Kind::Comma)) {
        next();
        continue;
      }
      return expect(Token::Kind::RParen);
    }
  }

  bool parse_instruction(Instruction &inst) {
    if (at(Token::Kind::Percent)) {
      next();
      if (!parse_ident(inst.result) || !expect(Token::Kind::Equals))
        return false;
    }
    std::string op;
    if (!parse_ident(op))
      return false;

    if (op == "call") {
      inst.kind = Instruction::Kind::Call;
      if (!expect(Token::Kind::At) || !parse_ident(inst.symbol))
        return false;
      return parse_arg_list(inst.operands);
    }
    if (op == "icall") {
      inst.kind = Instruction::Kind::ICall;
      Value callee;
      if (!parse_value(callee))
        return false;
      inst.operands.push_back(std::move(callee));
      return parse_arg_list(inst.operands);
    }
    if (op == "load") {
      inst.kind = Instruction::Kind::Load;
      return expect(Token::Kind::At) && parse_ident(inst.symbol);
    }
    if (op == "store") {
      inst.kind = Instruction::Kind::Store;
      Value v;
      if (!parse_value(v))
        return false;
      inst.operands.push_back(std::move(v));
      if (!expect(Token::Kind::Comma))
        return false;
      if (at(Token::Kind::At)) {
        next();
        inst.store_to_global = true;
        return parse_ident(inst.symbol);
      }
      Value dest;
      if (!parse_value(dest))
        return false;
      inst.operands.push_back(std::move(dest));
      return true;
    }
    if (op == "select") {
      inst.kind = Instruction::Kind::Select;
      return parse_value_list(inst.operands, 3);
    }
    if (op == "phi") {
      inst.kind = Instruction::Kind::Phi;
      while (true) {
        if (!expect(Token::Kind::LBracket))
          return false;
        PhiIncoming in;
        if (!parse_value(in.value) || !expect(Token::Kind::Comma) ||
            !parse_ident(in.label) || !expect(Token::Kind::RBracket))
          return false;
        inst.incomings.push_back(std::move(in));
        if (at(Token::Kind::Comma)) {
          next();
          continue;
        }
        return true;
      }
    }
    if (op == "add" || op == "sub" || op == "mul") {
      inst.kind = op == "add"   ? Instruction::Kind::Add
                  : op == "sub" ? Instruction::Kind::Sub
                                : Instruction::Kind::Mul;
      return parse_value_list(inst.operands, 2);
    }
    if (op == "const") {
      inst.kind = Instruction::Kind::Const;
      const Token &t = cur();
      if (t.kind == Token::Kind::Int) {
        inst.operands.push_back(Value::integer(t.int_value));
        next();
        return true;
      }
      if (t.kind == Token::Kind::Ident && (t.text == "funcref" || t.text == "str")) {
        Value v;
        if (!parse_value(v))
          return false;
        inst.operands.push_back(std::move(v));
        return true;
      }
      return fail("expected integer, funcref, or str literal");
    }
    if (op == "ret") {
      inst.kind = Instruction::Kind::Ret;
      if (starts_value()) {
        Value v;
        if (!parse_value(v))
          return false;
        inst.operands.push_back(std::move(v));
      }
      return true;
    }
    if (op == "br") {
      inst.kind = Instruction::Kind::Br;
      std::string label;
      if (!parse_ident(label))
        return false;
      inst.labels.push_back(std::move(label));
      return true;
    }
    if (op == "condbr") {
      inst.kind = Instruction::Kind::CondBr;
      Value cond;
      if (!parse_value(cond) || !expect(Token::Kind::Comma))
        return false;
      inst.operands.push_back(std::move(cond));
      std::string t_label, f_label;
      if (!parse_ident(t_label) || !expect(Token::Kind::Comma) ||
          !parse_ident(f_label))
        return false;
      inst.labels = {std::move(t_label), std::move(f_label)};
      return true;
    }
    if (op == "out") {
      inst.kind = Instruction::Kind::Out;
      Value v;
      if (!parse_value(v))
        return false;
      inst.operands.push_back(std::move(v));
      return true;
    }
    if (op == "trap") {
      inst.kind = Instruction::Kind::Trap;
      if (!at(Token::Kind::Str))
        return fail("expected string literal");
      inst.text = cur().text;
      next();
      return true;
    }
    return fail("unknown instruction '" + op + "'");
  }

  bool starts_value() const {
    const Token &t = cur();
    if (t.kind == Token::Kind::Percent || t.kind == Token::Kind::Int)
      return true;
    if (t.kind == Token::Kind::Ident && (t.text == "funcref" || t.text == "str"))
      // `funcref`/`str` as a block label would shadow a value here; labels
      // with those names are rejected by the grammar.
      return peek(1).kind != Token::Kind::Colon;
    return false;
  }

  bool parse_value_list(std::vector<Value> &out, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      if (i > 0 && !expect(Token::Kind::Comma))
        return false;
      Value v;
      if (!parse_value(v))
        return false;
      out.push_back(std::move(v));
    }
    return true;
  }

  bool parse_function(FunctionDef &f) {
    next(); // 'func'
    SourceSpan span = cur().span;
    if (!expect(Token::Kind::At) || !parse_ident(f.name))
      return false;
    decl_spans[f.name] = span;
    if (!expect(Token::Kind::LParen))
      return false;
    if (!at(Token::Kind::RParen)) {
      while (true) {
        std::string p;
        if (!parse_ident(p))
          return false;
        f.params.push_back(std::move(p));
        if (at(Token::Kind::Comma)) {
          next();
          continue;
        }
        break;
      }
    }
    if (!expect(Token::Kind::RParen) || !parse_attrs(f.attrs) ||
        !expect(Token::Kind::LBrace))
      return false;

    while (!at(Token::Kind::RBrace)) {
      if (at(Token::Kind::Ident) && peek(1).kind == Token::Kind::Colon) {
        Block b;
        b.label = cur().text;
        next();
        next();
        f.blocks.push_back(std::move(b));
        continue;
      }
      if (f.blocks.empty())
        return fail("expected block label");
      SourceSpan span0 = cur().span;
      Instruction inst;
      if (!parse_instruction(inst))
        return false;
      Block &b = f.blocks.back();
      inst_spans[{f.name, b.label, b.instructions.size()}] = span0;
      b.instructions.push_back(std::move(inst));
    }
    next(); // '}'
    return true;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  Diagnostic *error_ = nullptr;
};

} // namespace

ParseResult parse_module(std::string_view text) {
  ParseResult result;
  std::vector<Token> tokens;
  Diagnostic error;
  Lexer lexer(text);
  if (!lexer.tokenize(tokens, error)) {
    result.diagnostics.push_back(std::move(error));
    return result;
  }
  Parser parser(std::move(tokens));
  ModuleUnit module;
  if (!parser.parse(module, error)) {
    result.diagnostics.push_back(std::move(error));
    return result;
  }

  std::vector<Diagnostic> validation = validate_module(module);
  if (!validation.empty()) {
    for (Diagnostic &d : validation) {
      if (d.location.instruction) {
        auto it = parser.inst_spans.find({d.location.symbol, d.location.block,
                                          *d.location.instruction});
        if (it != parser.inst_spans.end())
          d.span = it->second;
      }
      if (!d.span && !d.location.symbol.empty()) {
        auto it = parser.decl_spans.find(d.location.symbol);
        if (it != parser.decl_spans.end())
          d.span = it->second;
      }
      result.diagnostics.push_back(std::move(d));
    }
    return result;
  }

  result.module = std::move(module);
  return result;
}

} // namespace sirtail
