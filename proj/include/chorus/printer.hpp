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

#pragma once

#include <sstream>
#include <string>

#include "chorus/syntax.hpp"

namespace chorus {

enum class PrintStyle {
  // Everything on one line: `a.5 -> b; 0`.
  Compact,
  // One interaction per line, blocks indented by two spaces.
  Indented,
};

inline std::string to_string(const Expr& e);

inline std::string to_string(const ExprPtr& e) { return to_string(*e); }

inline std::string to_string(const Expr& e) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, IntLit>) {
          return x.value.str();
        } else if constexpr (std::is_same_v<T, AtomLit>) {
          return "\"" + x.text + "\"";
        } else if constexpr (std::is_same_v<T, NameLit>) {
          return x.name;
        } else if constexpr (std::is_same_v<T, SelfRef>) {
          return "*";
        } else {
          // Left-associative, so only a compound right operand needs parens.
          std::string rhs = to_string(*x.rhs);
          if (std::holds_alternative<BinOp>(x.rhs->node)) rhs = "(" + rhs + ")";
          return to_string(*x.lhs) + (x.op == BinOpKind::Add ? " + " : " - ") +
                 rhs;
        }
      },
      e.node);
}

inline std::string to_string(const Eta& eta) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Com>) {
          return x.sender + "." + to_string(*x.expr) + " -> " + x.receiver;
        } else if constexpr (std::is_same_v<T, Sel>) {
          return x.sender + " -> " + x.receiver + "[" + x.label + "]";
        } else {
          return x.parent + " start " + x.child;
        }
      },
      eta);
}

namespace detail {

inline std::string join_names(const std::vector<ProcessName>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ", ";
    out += names[i];
  }
  return out;
}

class Printer {
 public:
  explicit Printer(PrintStyle style) : style_(style) {}

  std::string run(const Chor& c) {
    emit(c, 0);
    return out_.str();
  }

 private:
  bool indented() const { return style_ == PrintStyle::Indented; }

  void pad(int depth) {
    if (indented()) out_ << std::string(2 * depth, ' ');
  }
  void newline_or_space(int depth) {
    if (indented()) {
      out_ << "\n";
      pad(depth);
    } else {
      out_ << " ";
    }
  }

  void block(const Chor& c, int depth) {
    out_ << "{";
    newline_or_space(depth + 1);
    emit(c, depth + 1);
    newline_or_space(depth);
    out_ << "}";
  }

  void emit(const Chor& c, int depth) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Nil>) {
            out_ << "0";
          } else if constexpr (std::is_same_v<T, Prefix>) {
            out_ << to_string(x.eta) << ";";
            newline_or_space(depth);
            emit(x.cont, depth);
          } else if constexpr (std::is_same_v<T, Cond>) {
            out_ << "if " << x.lhs << " <-> " << x.rhs << " then ";
            block(x.then_branch, depth);
            out_ << " else ";
            block(x.else_branch, depth);
          } else if constexpr (std::is_same_v<T, Def>) {
            out_ << "def " << x.name;
            if (!x.params.empty()) out_ << "(" << join_names(x.params) << ")";
            out_ << " = ";
            block(x.body, depth);
            out_ << " in";
            newline_or_space(depth);
            emit(x.cont, depth);
          } else {
            out_ << x.name;
            if (!x.args.empty()) out_ << "(" << join_names(x.args) << ")";
          }
        },
        c->node);
  }

  PrintStyle style_;
  std::ostringstream out_;
};

}  // namespace detail

inline std::string pretty_print(const Chor& c,
                                PrintStyle style = PrintStyle::Compact) {
  return detail::Printer(style).run(c);
}

// Tree view, one node per line, for `chorus parse --ast`.
inline std::string dump_ast(const Chor& c, int depth = 0) {
  std::string pad(2 * depth, ' ');
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Nil>) {
          return pad + "Nil\n";
        } else if constexpr (std::is_same_v<T, Prefix>) {
          const char* kind = std::holds_alternative<Com>(x.eta)   ? "Com"
                             : std::holds_alternative<Sel>(x.eta) ? "Sel"
                                                                  : "Start";
          return pad + kind + " " + to_string(x.eta) + "\n" +
                 dump_ast(x.cont, depth);
        } else if constexpr (std::is_same_v<T, Cond>) {
          return pad + "Cond " + x.lhs + " <-> " + x.rhs + "\n" + pad +
                 "then\n" + dump_ast(x.then_branch, depth + 1) + pad +
                 "else\n" + dump_ast(x.else_branch, depth + 1);
        } else if constexpr (std::is_same_v<T, Def>) {
          return pad + "Def " + x.name + "(" + detail::join_names(x.params) +
                 ")\n" + dump_ast(x.body, depth + 1) + dump_ast(x.cont, depth);
        } else {
          return pad + "Call " + x.name + "(" + detail::join_names(x.args) +
                 ")\n";
        }
      },
      c->node);
}

// A complete `.chor` file: mode pragma plus the indented program.
inline std::string to_chor_file(const Chor& c, Mode mode) {
  return "#mode " + std::string(mode_name(mode)) + "\n" +
         pretty_print(c, PrintStyle::Indented) + "\n";
}

}  // namespace chorus
