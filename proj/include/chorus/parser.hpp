// Copyright 2026 The Chorus Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Recursive-descent parser for `.chor` files.
//
//   chor  ::= '0'
//           | eta [';' [chor]]
//           | 'if' p '<->' q 'then' '{' chor '}' 'else' '{' chor '}'
//           | 'def' X ['(' names ')'] '=' '{' chor '}' 'in' chor
//           | X ['(' names ')']
//   eta   ::= p '.' expr '->' q | p '->' q '[' label ']'
//           | p 'start' q | p ':' q '<->' r
//   expr  ::= prim (('+' | '-') prim)*
//   prim  ::= INT | '-' INT | '"' atom '"' | '*' | IDENT | '(' expr ')'
//
// A bare identifier in expression position is a process name in DMC/DCC
// and an atom in MC/CC; quoted atoms mean the same thing in every mode.
// A trailing `; 0` may be omitted. `//` starts a line comment and a
// `#mode X` line selects the calculus unless the caller overrides it.

#pragma once

#include <cctype>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chorus/syntax.hpp"

namespace chorus {

struct ParsedProgram {
  Mode mode;
  Chor chor;
};

namespace detail {

enum class Tok {
  Ident,
  Int,
  String,
  Dot,
  Arrow,      // ->
  BiArrow,    // <->
  Semi,
  Colon,
  LBracket,
  RBracket,
  LBrace,
  RBrace,
  LParen,
  RParen,
  Comma,
  Equals,
  Star,
  Plus,
  Minus,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

inline bool is_keyword(std::string_view s) {
  return s == "if" || s == "then" || s == "else" || s == "def" ||
         s == "in" || s == "start";
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run(std::optional<Mode>& pragma) {
    std::vector<Token> out;
    while (true) {
      skip_blank(pragma, out.empty());
      if (pos_ >= src_.size()) break;
      out.push_back(next());
    }
    out.push_back({Tok::End, "", line_, col_});
    return out;
  }

 private:
  char peek(std::size_t k = 0) const {
    return pos_ + k < src_.size() ? src_[pos_ + k] : '\0';
  }
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_blank(std::optional<Mode>& pragma, bool at_header) {
    while (pos_ < src_.size()) {
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && peek() != '\n') advance();
      } else if (c == '#') {
        std::size_t line = line_, col = col_;
        std::string directive;
        while (pos_ < src_.size() && peek() != '\n') {
          directive += peek();
          advance();
        }
        if (!at_header) {
          throw ParseError(line, col, "pragma must precede the program");
        }
        parse_pragma(directive, line, col, pragma);
      } else {
        return;
      }
    }
  }

  static void parse_pragma(const std::string& d, std::size_t line,
                           std::size_t col, std::optional<Mode>& pragma) {
    std::string_view rest(d);
    rest.remove_prefix(1);
    auto trim = [](std::string_view s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
      return s;
    };
    rest = trim(rest);
    if (rest.substr(0, 4) != "mode") {
      throw ParseError(line, col, "unknown pragma '" + d + "'");
    }
    auto m = mode_from_name(trim(rest.substr(4)));
    if (!m) throw ParseError(line, col, "unknown mode in '" + d + "'");
    pragma = m;
  }

  Token next() {
    std::size_t line = line_, col = col_;
    char c = peek();
    auto single = [&](Tok k) {
      advance();
      return Token{k, std::string(1, c), line, col};
    };
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string text;
      while (std::isalnum(static_cast<unsigned char>(peek())) ||
             peek() == '_' || peek() == '$') {
        text += peek();
        advance();
      }
      return {Tok::Ident, text, line, col};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string text;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        text += peek();
        advance();
      }
      return {Tok::Int, text, line, col};
    }
    if (c == '"') {
      advance();
      std::string text;
      while (pos_ < src_.size() && peek() != '"' && peek() != '\n') {
        text += peek();
        advance();
      }
      if (peek() != '"') throw ParseError(line, col, "unterminated atom");
      advance();
      if (text.empty()) throw ParseError(line, col, "empty atom");
      return {Tok::String, text, line, col};
    }
    if (c == '-' && peek(1) == '>') {
      advance();
      advance();
      return {Tok::Arrow, "->", line, col};
    }
    if (c == '<' && peek(1) == '-' && peek(2) == '>') {
      advance();
      advance();
      advance();
      return {Tok::BiArrow, "<->", line, col};
    }
    switch (c) {
      case '.': return single(Tok::Dot);
      case ';': return single(Tok::Semi);
      case ':': return single(Tok::Colon);
      case '[': return single(Tok::LBracket);
      case ']': return single(Tok::RBracket);
      case '{': return single(Tok::LBrace);
      case '}': return single(Tok::RBrace);
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      case ',': return single(Tok::Comma);
      case '=': return single(Tok::Equals);
      case '*': return single(Tok::Star);
      case '+': return single(Tok::Plus);
      case '-': return single(Tok::Minus);
      default: break;
    }
    throw ParseError(line, col, std::string("unexpected character '") + c +
                                    "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, Mode mode)
      : toks_(std::move(toks)), mode_(mode) {}

  Chor program() {
    Chor c = chor();
    expect(Tok::End, "end of input");
    return c;
  }

 private:
  const Token& cur() const { return toks_[pos_]; }
  const Token& ahead(std::size_t k = 1) const {
    return toks_[std::min(pos_ + k, toks_.size() - 1)];
  }
  bool at(Tok k) const { return cur().kind == k; }
  bool at_word(std::string_view w) const {
    return at(Tok::Ident) && cur().text == w;
  }

  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError(t.line, t.column, msg);
  }
  [[noreturn]] void fail_mode(const Token& t, const std::string& what) const {
    throw ModeError(std::to_string(t.line) + ":" + std::to_string(t.column) +
                    ": " + what + " is not allowed in " +
                    std::string(mode_name(mode_)));
  }

  Token expect(Tok k, const char* what) {
    if (!at(k)) {
      fail(cur(), std::string("expected ") + what + ", found '" +
                      (at(Tok::End) ? "end of input" : cur().text) + "'");
    }
    return toks_[pos_++];
  }
  void expect_word(std::string_view w) {
    if (!at_word(w)) {
      fail(cur(), "expected '" + std::string(w) + "', found '" + cur().text +
                      "'");
    }
    ++pos_;
  }

  ProcessName name(const char* what) {
    Token t = expect(Tok::Ident, what);
    if (is_keyword(t.text)) fail(t, "keyword '" + t.text + "' used as a name");
    return t.text;
  }

  std::vector<ProcessName> name_list() {
    std::vector<ProcessName> out;
    expect(Tok::LParen, "'('");
    if (!at(Tok::RParen)) {
      out.push_back(name("process name"));
      while (at(Tok::Comma)) {
        ++pos_;
        out.push_back(name("process name"));
      }
    }
    expect(Tok::RParen, "')'");
    return out;
  }

  Chor block() {
    expect(Tok::LBrace, "'{'");
    Chor c = chor();
    expect(Tok::RBrace, "'}'");
    return c;
  }

  bool at_chor_end() const { return at(Tok::End) || at(Tok::RBrace); }

  Chor chor() {
    const Token& t = cur();
    if (at(Tok::Int) && t.text == "0") {
      ++pos_;
      return nil();
    }
    if (at_word("if")) return conditional();
    if (at_word("def")) return definition();
    if (at(Tok::Ident)) {
      Tok next = ahead().kind;
      bool is_eta = next == Tok::Dot || next == Tok::Arrow ||
                    next == Tok::Colon ||
                    (next == Tok::Ident && ahead().text == "start");
      if (!is_eta) return invocation();
      std::vector<Eta> etas = interaction();
      Chor rest = nil();
      if (at(Tok::Semi)) {
        ++pos_;
        if (!at_chor_end()) rest = chor();
      } else if (!at_chor_end()) {
        fail(cur(), "expected ';' after interaction, found '" + cur().text +
                        "'");
      }
      return sequence(etas, std::move(rest));
    }
    fail(t, at(Tok::End) ? "unexpected end of input"
                         : "unexpected '" + t.text + "'");
  }

  Chor conditional() {
    const Token& kw = cur();
    expect_word("if");
    ProcessName lhs = name("process name");
    expect(Tok::BiArrow, "'<->'");
    ProcessName rhs = name("process name");
    if (lhs == rhs) fail(kw, "conditional compares '" + lhs + "' with itself");
    expect_word("then");
    Chor t = block();
    expect_word("else");
    Chor e = block();
    return cond(std::move(lhs), std::move(rhs), std::move(t), std::move(e));
  }

  Chor definition() {
    expect_word("def");
    Token id = cur();
    std::string proc = name("procedure name");
    std::vector<ProcessName> params;
    if (at(Tok::LParen)) {
      params = name_list();
      if (!params.empty() && !is_dynamic(mode_)) {
        fail_mode(id, "parametrised procedure");
      }
    }
    expect(Tok::Equals, "'='");
    Chor body = block();
    expect_word("in");
    Chor cont = chor();
    return def(std::move(proc), std::move(params), std::move(body),
               std::move(cont));
  }

  Chor invocation() {
    Token id = cur();
    std::string proc = name("procedure name");
    std::vector<ProcessName> args;
    if (at(Tok::LParen)) {
      args = name_list();
      if (!args.empty() && !is_dynamic(mode_)) fail_mode(id, "call with arguments");
    }
    return call(std::move(proc), std::move(args));
  }

  std::vector<Eta> interaction() {
    Token first = cur();
    ProcessName p = name("process name");
    if (at(Tok::Dot)) {
      ++pos_;
      ExprPtr e = expr();
      expect(Tok::Arrow, "'->'");
      ProcessName q = name("process name");
      if (p == q) fail(first, "process '" + p + "' communicates with itself");
      if (contains_name_lit(*e)) {
        if (!std::holds_alternative<NameLit>(e->node)) {
          fail(first, "process names cannot appear inside arithmetic");
        }
      }
      return {com(std::move(p), std::move(e), std::move(q))};
    }
    if (at(Tok::Arrow)) {
      ++pos_;
      ProcessName q = name("process name");
      expect(Tok::LBracket, "'['");
      Token label = expect(Tok::Ident, "label");
      expect(Tok::RBracket, "']'");
      if (p == q) fail(first, "process '" + p + "' selects towards itself");
      if (!allows_selection(mode_)) fail_mode(first, "selection");
      return {sel(std::move(p), std::move(q), label.text)};
    }
    if (at_word("start")) {
      ++pos_;
      ProcessName q = name("process name");
      if (p == q) fail(first, "process '" + p + "' cannot start itself");
      if (!is_dynamic(mode_)) fail_mode(first, "start");
      return {start(std::move(p), std::move(q))};
    }
    expect(Tok::Colon, "'.', '->', 'start' or ':'");
    ProcessName q = name("process name");
    expect(Tok::BiArrow, "'<->'");
    ProcessName r = name("process name");
    if (!is_dynamic(mode_)) fail_mode(first, "introduction");
    if (p == q || p == r || q == r) {
      fail(first, "introduction needs three distinct processes");
    }
    return tell(p, q, r);
  }

  ExprPtr expr() {
    ExprPtr lhs = primary();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      BinOpKind op = at(Tok::Plus) ? BinOpKind::Add : BinOpKind::Sub;
      ++pos_;
      lhs = bin_op(op, std::move(lhs), primary());
    }
    return lhs;
  }

  ExprPtr primary() {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::Int:
        ++pos_;
        return int_lit(Integer(t.text));
      case Tok::Minus:
        if (ahead().kind == Tok::Int) {
          Integer v(ahead().text);
          pos_ += 2;
          return int_lit(-v);
        }
        break;
      case Tok::String:
        ++pos_;
        return atom_lit(t.text);
      case Tok::Star:
        ++pos_;
        return self_ref();
      case Tok::Ident:
        if (is_keyword(t.text)) break;
        ++pos_;
        return is_dynamic(mode_) ? name_lit(t.text) : atom_lit(t.text);
      case Tok::LParen: {
        ++pos_;
        ExprPtr e = expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      default:
        break;
    }
    fail(t, "expected an expression, found '" + t.text + "'");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Mode mode_;
};

}  // namespace detail

// Parses `text` as a program of the given calculus. Throws ParseError
// (with line and column), ModeError, or ArityError.
inline Chor parse(std::string_view text, Mode mode) {
  std::optional<Mode> pragma;
  auto toks = detail::Lexer(text).run(pragma);
  Chor c = detail::Parser(std::move(toks), mode).program();
  validate(c, mode);
  return c;
}

// Honours the `#mode` pragma unless `override_mode` is set; defaults to DCC.
inline ParsedProgram parse_program(std::string_view text,
                                   std::optional<Mode> override_mode = {}) {
  std::optional<Mode> pragma;
  auto toks = detail::Lexer(text).run(pragma);
  Mode mode = override_mode ? *override_mode : pragma.value_or(Mode::DCC);
  Chor c = detail::Parser(std::move(toks), mode).program();
  validate(c, mode);
  return {mode, std::move(c)};
}

}  // namespace chorus
