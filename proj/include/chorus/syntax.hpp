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

// Abstract syntax shared by the four choreography calculi (MC, CC, DMC, DCC).
//
// Terms are immutable and reference-counted, so configurations and state
// spaces can share subtrees freely. Every rewriting helper in this header
// returns the original pointer when nothing changed.

#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace chorus {

using Integer = boost::multiprecision::cpp_int;
using ProcessName = std::string;
using NameSet = std::set<ProcessName>;

enum class Mode { MC, CC, DMC, DCC };

inline bool is_dynamic(Mode m) { return m == Mode::DMC || m == Mode::DCC; }
inline bool allows_selection(Mode m) { return m == Mode::CC || m == Mode::DCC; }

inline std::string_view mode_name(Mode m) {
  switch (m) {
    case Mode::MC: return "MC";
    case Mode::CC: return "CC";
    case Mode::DMC: return "DMC";
    case Mode::DCC: return "DCC";
  }
  return "?";
}

inline std::optional<Mode> mode_from_name(std::string_view s) {
  if (s == "MC") return Mode::MC;
  if (s == "CC") return Mode::CC;
  if (s == "DMC") return Mode::DMC;
  if (s == "DCC") return Mode::DCC;
  return std::nullopt;
}

// Machine-generated names always carry a '$'; user names never do.
inline bool is_machine_name(std::string_view name) {
  return name.find('$') != std::string_view::npos;
}

//
// Errors
//

class ChorusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public ChorusError {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : ChorusError(std::to_string(line) + ":" + std::to_string(column) +
                    ": " + what),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class ModeError : public ChorusError {
 public:
  using ChorusError::ChorusError;
};

class ArityError : public ChorusError {
 public:
  using ChorusError::ChorusError;
};

//
// Expressions
//

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct IntLit {
  Integer value;
};
// Symbolic constants such as `title` in the buyer/seller example.
struct AtomLit {
  std::string text;
};
struct NameLit {
  ProcessName name;
};
// The `*` placeholder: the sender's own value.
struct SelfRef {};
enum class BinOpKind { Add, Sub };
struct BinOp {
  BinOpKind op;
  ExprPtr lhs;
  ExprPtr rhs;
};

struct Expr {
  std::variant<IntLit, AtomLit, NameLit, SelfRef, BinOp> node;
};

inline ExprPtr int_lit(Integer v) {
  return std::make_shared<const Expr>(Expr{IntLit{std::move(v)}});
}
inline ExprPtr atom_lit(std::string s) {
  return std::make_shared<const Expr>(Expr{AtomLit{std::move(s)}});
}
inline ExprPtr name_lit(ProcessName n) {
  return std::make_shared<const Expr>(Expr{NameLit{std::move(n)}});
}
inline ExprPtr self_ref() {
  static const ExprPtr self = std::make_shared<const Expr>(Expr{SelfRef{}});
  return self;
}
inline ExprPtr bin_op(BinOpKind op, ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<const Expr>(
      Expr{BinOp{op, std::move(lhs), std::move(rhs)}});
}

inline bool operator==(const Expr& a, const Expr& b);

inline bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

inline bool operator==(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, IntLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, AtomLit>) {
          return x.text == y.text;
        } else if constexpr (std::is_same_v<T, NameLit>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, SelfRef>) {
          return true;
        } else {
          return x.op == y.op && expr_equal(x.lhs, y.lhs) &&
                 expr_equal(x.rhs, y.rhs);
        }
      },
      a.node);
}

inline bool contains_name_lit(const Expr& e) {
  if (std::holds_alternative<NameLit>(e.node)) return true;
  if (const auto* b = std::get_if<BinOp>(&e.node)) {
    return contains_name_lit(*b->lhs) || contains_name_lit(*b->rhs);
  }
  return false;
}

//
// Interactions
//

// p.e -> q. When `expr` is a bare NameLit in a dynamic calculus this is a
// name introduction rather than a value communication.
struct Com {
  ProcessName sender;
  ExprPtr expr;
  ProcessName receiver;
};
// p -> q[l]
struct Sel {
  ProcessName sender;
  ProcessName receiver;
  std::string label;
};
// p start q. `child` binds in the continuation.
struct Start {
  ProcessName parent;
  ProcessName child;
};

using Eta = std::variant<Com, Sel, Start>;

inline bool operator==(const Com& a, const Com& b) {
  return a.sender == b.sender && a.receiver == b.receiver &&
         expr_equal(a.expr, b.expr);
}
inline bool operator==(const Sel& a, const Sel& b) {
  return a.sender == b.sender && a.receiver == b.receiver &&
         a.label == b.label;
}
inline bool operator==(const Start& a, const Start& b) {
  return a.parent == b.parent && a.child == b.child;
}

// The introduced name when `c` is a name introduction, otherwise null.
inline const ProcessName* intro_payload(const Com& c) {
  if (const auto* n = std::get_if<NameLit>(&c.expr->node)) return &n->name;
  return nullptr;
}

//
// Choreographies
//

struct ChorNode;
using Chor = std::shared_ptr<const ChorNode>;

struct Nil {};
struct Prefix {
  Eta eta;
  Chor cont;
};
// if lhs <-> rhs then ... else ...: rhs sends its value to lhs, which
// compares it against its own.
struct Cond {
  ProcessName lhs;
  ProcessName rhs;
  Chor then_branch;
  Chor else_branch;
};
struct Def {
  std::string name;
  std::vector<ProcessName> params;
  Chor body;
  Chor cont;
};
struct Call {
  std::string name;
  std::vector<ProcessName> args;
};

struct ChorNode {
  std::variant<Nil, Prefix, Cond, Def, Call> node;
};

inline Chor nil() {
  static const Chor n = std::make_shared<const ChorNode>(ChorNode{Nil{}});
  return n;
}
inline Chor prefix(Eta eta, Chor cont) {
  return std::make_shared<const ChorNode>(
      ChorNode{Prefix{std::move(eta), std::move(cont)}});
}
inline Chor cond(ProcessName lhs, ProcessName rhs, Chor then_branch,
                 Chor else_branch) {
  return std::make_shared<const ChorNode>(
      ChorNode{Cond{std::move(lhs), std::move(rhs), std::move(then_branch),
                    std::move(else_branch)}});
}
inline Chor def(std::string name, std::vector<ProcessName> params, Chor body,
                Chor cont) {
  return std::make_shared<const ChorNode>(
      ChorNode{Def{std::move(name), std::move(params), std::move(body),
                   std::move(cont)}});
}
inline Chor call(std::string name, std::vector<ProcessName> args = {}) {
  return std::make_shared<const ChorNode>(
      ChorNode{Call{std::move(name), std::move(args)}});
}
inline Eta com(ProcessName p, ExprPtr e, ProcessName q) {
  return Com{std::move(p), std::move(e), std::move(q)};
}
inline Eta sel(ProcessName p, ProcessName q, std::string label) {
  return Sel{std::move(p), std::move(q), std::move(label)};
}
inline Eta start(ProcessName parent, ProcessName child) {
  return Start{std::move(parent), std::move(child)};
}

// Builds `etas[0]; etas[1]; ...; tail`.
inline Chor sequence(const std::vector<Eta>& etas, Chor tail) {
  for (auto it = etas.rbegin(); it != etas.rend(); ++it) {
    tail = prefix(*it, std::move(tail));
  }
  return tail;
}

// `p: q <-> r` desugars to `p.q -> r; p.r -> q`.
inline std::vector<Eta> tell(const ProcessName& p, const ProcessName& q,
                             const ProcessName& r) {
  return {com(p, name_lit(q), r), com(p, name_lit(r), q)};
}

inline bool operator==(const ChorNode& a, const ChorNode& b);

inline bool chor_equal(const Chor& a, const Chor& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  return *a == *b;
}

inline bool operator==(const ChorNode& a, const ChorNode& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Nil>) {
          return true;
        } else if constexpr (std::is_same_v<T, Prefix>) {
          return x.eta == y.eta && chor_equal(x.cont, y.cont);
        } else if constexpr (std::is_same_v<T, Cond>) {
          return x.lhs == y.lhs && x.rhs == y.rhs &&
                 chor_equal(x.then_branch, y.then_branch) &&
                 chor_equal(x.else_branch, y.else_branch);
        } else if constexpr (std::is_same_v<T, Def>) {
          return x.name == y.name && x.params == y.params &&
                 chor_equal(x.body, y.body) && chor_equal(x.cont, y.cont);
        } else {
          return x.name == y.name && x.args == y.args;
        }
      },
      a.node);
}

//
// Name queries
//

inline void collect_names(const Expr& e, NameSet& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, NameLit>) {
          out.insert(x.name);
        } else if constexpr (std::is_same_v<T, BinOp>) {
          collect_names(*x.lhs, out);
          collect_names(*x.rhs, out);
        }
      },
      e.node);
}

inline NameSet pn(const Eta& eta) {
  NameSet out;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Com>) {
          out.insert(x.sender);
          out.insert(x.receiver);
          collect_names(*x.expr, out);
        } else if constexpr (std::is_same_v<T, Sel>) {
          out.insert(x.sender);
          out.insert(x.receiver);
        } else {
          out.insert(x.parent);
          out.insert(x.child);
        }
      },
      eta);
  return out;
}

inline void collect_pn(const Chor& c, NameSet& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Prefix>) {
          out.merge(pn(x.eta));
          collect_pn(x.cont, out);
        } else if constexpr (std::is_same_v<T, Cond>) {
          out.insert(x.lhs);
          out.insert(x.rhs);
          collect_pn(x.then_branch, out);
          collect_pn(x.else_branch, out);
        } else if constexpr (std::is_same_v<T, Def>) {
          out.insert(x.params.begin(), x.params.end());
          collect_pn(x.body, out);
          collect_pn(x.cont, out);
        } else if constexpr (std::is_same_v<T, Call>) {
          out.insert(x.args.begin(), x.args.end());
        }
      },
      c->node);
}

// Every process name occurring in `c`, binders included.
inline NameSet pn(const Chor& c) {
  NameSet out;
  collect_pn(c, out);
  return out;
}

namespace detail {

inline void collect_free(const Chor& c, NameSet& bound, NameSet& out) {
  auto use = [&](const ProcessName& n) {
    if (!bound.count(n)) out.insert(n);
  };
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Prefix>) {
          if (const auto* s = std::get_if<Start>(&x.eta)) {
            use(s->parent);
            const bool fresh = bound.insert(s->child).second;
            collect_free(x.cont, bound, out);
            if (fresh) bound.erase(s->child);
          } else {
            for (const auto& n : pn(x.eta)) use(n);
            collect_free(x.cont, bound, out);
          }
        } else if constexpr (std::is_same_v<T, Cond>) {
          use(x.lhs);
          use(x.rhs);
          collect_free(x.then_branch, bound, out);
          collect_free(x.else_branch, bound, out);
        } else if constexpr (std::is_same_v<T, Def>) {
          NameSet inner = bound;
          inner.insert(x.params.begin(), x.params.end());
          collect_free(x.body, inner, out);
          collect_free(x.cont, bound, out);
        } else if constexpr (std::is_same_v<T, Call>) {
          for (const auto& a : x.args) use(a);
        }
      },
      c->node);
}

}  // namespace detail

// Names occurring outside the scope of their binder (Start children bind
// in the continuation, Def parameters bind in the body).
inline NameSet free_names(const Chor& c) {
  NameSet bound;
  NameSet out;
  detail::collect_free(c, bound, out);
  return out;
}

inline std::size_t size(const Chor& c) {
  return std::visit(
      [](const auto& x) -> std::size_t {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Prefix>) {
          return 1 + size(x.cont);
        } else if constexpr (std::is_same_v<T, Cond>) {
          return 1 + size(x.then_branch) + size(x.else_branch);
        } else if constexpr (std::is_same_v<T, Def>) {
          return 1 + size(x.body) + size(x.cont);
        } else {
          return 1;
        }
      },
      c->node);
}

//
// Renaming
//

using NameMap = std::map<ProcessName, ProcessName>;

namespace detail {

inline const ProcessName& lookup(const NameMap& m, const ProcessName& n) {
  auto it = m.find(n);
  return it == m.end() ? n : it->second;
}

inline ExprPtr rename_expr(const ExprPtr& e, const NameMap& m) {
  if (const auto* n = std::get_if<NameLit>(&e->node)) {
    auto it = m.find(n->name);
    return it == m.end() ? e : name_lit(it->second);
  }
  if (const auto* b = std::get_if<BinOp>(&e->node)) {
    auto l = rename_expr(b->lhs, m);
    auto r = rename_expr(b->rhs, m);
    if (l == b->lhs && r == b->rhs) return e;
    return bin_op(b->op, std::move(l), std::move(r));
  }
  return e;
}

// Renames sender/receiver/payload/parent; binders are handled by callers.
inline Eta rename_eta_uses(const Eta& eta, const NameMap& m) {
  return std::visit(
      [&](const auto& x) -> Eta {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Com>) {
          return Com{lookup(m, x.sender), rename_expr(x.expr, m),
                     lookup(m, x.receiver)};
        } else if constexpr (std::is_same_v<T, Sel>) {
          return Sel{lookup(m, x.sender), lookup(m, x.receiver), x.label};
        } else {
          return Start{lookup(m, x.parent), x.child};
        }
      },
      eta);
}

inline std::vector<ProcessName> rename_list(const std::vector<ProcessName>& v,
                                            const NameMap& m, bool& changed) {
  std::vector<ProcessName> out;
  out.reserve(v.size());
  for (const auto& n : v) {
    out.push_back(lookup(m, n));
    if (out.back() != n) changed = true;
  }
  return out;
}

inline ProcessName fresh_variant(const ProcessName& base,
                                 const NameSet& avoid) {
  for (std::size_t k = 0;; ++k) {
    ProcessName candidate = base + "$r" + std::to_string(k);
    if (!avoid.count(candidate)) return candidate;
  }
}

struct Substituter {
  // Lazily computed set of names a capture-avoiding rename must dodge.
  const Chor& root;
  std::optional<NameSet> avoid;

  const NameSet& avoid_set(const NameMap& m) {
    if (!avoid) {
      avoid = pn(root);
      for (const auto& [k, v] : m) {
        avoid->insert(k);
        avoid->insert(v);
      }
    }
    return *avoid;
  }

  static bool in_range(const NameMap& m, const ProcessName& n) {
    for (const auto& [k, v] : m) {
      if (v == n) return true;
    }
    return false;
  }

  // Returns the map to use under `binder`, and the binder's possibly
  // renamed spelling.
  std::pair<NameMap, ProcessName> enter_binder(const NameMap& m,
                                               const ProcessName& binder) {
    NameMap inner = m;
    inner.erase(binder);
    ProcessName spelled = binder;
    if (in_range(inner, binder)) {
      spelled = fresh_variant(binder, avoid_set(m));
      avoid->insert(spelled);
      inner[binder] = spelled;
    }
    return {std::move(inner), std::move(spelled)};
  }

  Chor run(const Chor& c, const NameMap& m) {
    if (m.empty()) return c;
    return std::visit(
        [&](const auto& x) -> Chor {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Nil>) {
            return c;
          } else if constexpr (std::is_same_v<T, Prefix>) {
            if (const auto* s = std::get_if<Start>(&x.eta)) {
              auto [inner, child] = enter_binder(m, s->child);
              const ProcessName& parent = lookup(m, s->parent);
              Chor cont = run(x.cont, inner);
              if (parent == s->parent && child == s->child && cont == x.cont) {
                return c;
              }
              return prefix(Start{parent, child}, std::move(cont));
            }
            Eta eta = rename_eta_uses(x.eta, m);
            Chor cont = run(x.cont, m);
            if (cont == x.cont && eta == x.eta) return c;
            return prefix(std::move(eta), std::move(cont));
          } else if constexpr (std::is_same_v<T, Cond>) {
            const ProcessName& l = lookup(m, x.lhs);
            const ProcessName& r = lookup(m, x.rhs);
            Chor t = run(x.then_branch, m);
            Chor e = run(x.else_branch, m);
            if (l == x.lhs && r == x.rhs && t == x.then_branch &&
                e == x.else_branch) {
              return c;
            }
            return cond(l, r, std::move(t), std::move(e));
          } else if constexpr (std::is_same_v<T, Def>) {
            NameMap inner = m;
            std::vector<ProcessName> params = x.params;
            for (auto& p : params) {
              auto [next, spelled] = enter_binder(inner, p);
              inner = std::move(next);
              p = spelled;
            }
            Chor body = run(x.body, inner);
            Chor cont = run(x.cont, m);
            if (params == x.params && body == x.body && cont == x.cont) {
              return c;
            }
            return def(x.name, std::move(params), std::move(body),
                       std::move(cont));
          } else {
            bool changed = false;
            auto args = rename_list(x.args, m, changed);
            return changed ? call(x.name, std::move(args)) : c;
          }
        },
        c->node);
  }
};

}  // namespace detail

// Capture-avoiding substitution of free occurrences.
inline Chor substitute(const Chor& c, const NameMap& m) {
  detail::Substituter s{c, std::nullopt};
  return s.run(c, m);
}

// Renames every occurrence, binders included. Only sound when `m` is
// injective and its range is disjoint from the unrenamed names.
inline Chor rename_all(const Chor& c, const NameMap& m) {
  if (m.empty()) return c;
  using detail::lookup;
  return std::visit(
      [&](const auto& x) -> Chor {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Nil>) {
          return c;
        } else if constexpr (std::is_same_v<T, Prefix>) {
          Eta eta = detail::rename_eta_uses(x.eta, m);
          if (auto* s = std::get_if<Start>(&eta)) s->child = lookup(m, s->child);
          Chor cont = rename_all(x.cont, m);
          if (cont == x.cont && eta == x.eta) return c;
          return prefix(std::move(eta), std::move(cont));
        } else if constexpr (std::is_same_v<T, Cond>) {
          const ProcessName& l = lookup(m, x.lhs);
          const ProcessName& r = lookup(m, x.rhs);
          Chor t = rename_all(x.then_branch, m);
          Chor e = rename_all(x.else_branch, m);
          if (l == x.lhs && r == x.rhs && t == x.then_branch &&
              e == x.else_branch) {
            return c;
          }
          return cond(l, r, std::move(t), std::move(e));
        } else if constexpr (std::is_same_v<T, Def>) {
          bool changed = false;
          auto params = detail::rename_list(x.params, m, changed);
          Chor body = rename_all(x.body, m);
          Chor cont = rename_all(x.cont, m);
          if (!changed && body == x.body && cont == x.cont) return c;
          return def(x.name, std::move(params), std::move(body),
                     std::move(cont));
        } else {
          bool changed = false;
          auto args = detail::rename_list(x.args, m, changed);
          return changed ? call(x.name, std::move(args)) : c;
        }
      },
      c->node);
}

// Every name in pre-order, repeats included: etas before continuations,
// then-branches before else-branches, Def parameters and bodies before
// continuations.
inline void names_in_order(const Chor& c,
                           const std::function<void(const ProcessName&)>& f) {
  std::function<void(const Expr&)> on_expr = [&](const Expr& e) {
    if (const auto* n = std::get_if<NameLit>(&e.node)) f(n->name);
    if (const auto* b = std::get_if<BinOp>(&e.node)) {
      on_expr(*b->lhs);
      on_expr(*b->rhs);
    }
  };
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Prefix>) {
          std::visit(
              [&](const auto& e) {
                using E = std::decay_t<decltype(e)>;
                if constexpr (std::is_same_v<E, Com>) {
                  f(e.sender);
                  on_expr(*e.expr);
                  f(e.receiver);
                } else if constexpr (std::is_same_v<E, Sel>) {
                  f(e.sender);
                  f(e.receiver);
                } else {
                  f(e.parent);
                  f(e.child);
                }
              },
              x.eta);
          names_in_order(x.cont, f);
        } else if constexpr (std::is_same_v<T, Cond>) {
          f(x.lhs);
          f(x.rhs);
          names_in_order(x.then_branch, f);
          names_in_order(x.else_branch, f);
        } else if constexpr (std::is_same_v<T, Def>) {
          for (const auto& p : x.params) f(p);
          names_in_order(x.body, f);
          names_in_order(x.cont, f);
        } else if constexpr (std::is_same_v<T, Call>) {
          for (const auto& a : x.args) f(a);
        }
      },
      c->node);
}

//
// Static validation
//

// Mode legality, call resolution and arity, distinct interacting processes.
// Returns human-readable problems; empty means valid.
struct Diagnostic {
  enum class Kind { Mode, Arity, Shape };
  Kind kind;
  std::string message;
};

namespace detail {

inline std::string describe(const Eta& eta) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Com>) {
          return x.sender + ".<expr> -> " + x.receiver;
        } else if constexpr (std::is_same_v<T, Sel>) {
          return x.sender + " -> " + x.receiver + "[" + x.label + "]";
        } else {
          return x.parent + " start " + x.child;
        }
      },
      eta);
}

struct Validator {
  Mode mode;
  std::vector<Diagnostic> out;
  std::set<std::string> seen_defs;

  void report(Diagnostic::Kind k, std::string msg) {
    out.push_back({k, std::move(msg)});
  }

  void eta(const Eta& e) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Com>) {
            if (x.sender == x.receiver) {
              report(Diagnostic::Kind::Shape,
                     "communication from a process to itself: " + describe(e));
            }
            if (contains_name_lit(*x.expr)) {
              if (!is_dynamic(mode)) {
                report(Diagnostic::Kind::Mode,
                       "name communication is not allowed in " +
                           std::string(mode_name(mode)) + ": " + describe(e));
              }
              if (!intro_payload(x)) {
                report(Diagnostic::Kind::Shape,
                       "process names cannot appear inside arithmetic: " +
                           describe(e));
              }
            }
          } else if constexpr (std::is_same_v<T, Sel>) {
            if (x.sender == x.receiver) {
              report(Diagnostic::Kind::Shape,
                     "selection from a process to itself: " + describe(e));
            }
            if (!allows_selection(mode)) {
              report(Diagnostic::Kind::Mode,
                     "selection is not allowed in " +
                         std::string(mode_name(mode)) + ": " + describe(e));
            }
          } else {
            if (x.parent == x.child) {
              report(Diagnostic::Kind::Shape,
                     "process cannot start itself: " + describe(e));
            }
            if (!is_dynamic(mode)) {
              report(Diagnostic::Kind::Mode,
                     "start is not allowed in " +
                         std::string(mode_name(mode)) + ": " + describe(e));
            }
          }
        },
        e);
  }

  void chor(const Chor& c, const std::map<std::string, std::size_t>& scope) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Prefix>) {
            eta(x.eta);
            chor(x.cont, scope);
          } else if constexpr (std::is_same_v<T, Cond>) {
            if (x.lhs == x.rhs) {
              report(Diagnostic::Kind::Shape,
                     "conditional compares a process with itself: " + x.lhs);
            }
            chor(x.then_branch, scope);
            chor(x.else_branch, scope);
          } else if constexpr (std::is_same_v<T, Def>) {
            if (!seen_defs.insert(x.name).second) {
              report(Diagnostic::Kind::Arity,
                     "procedure defined more than once: " + x.name);
            }
            if (!x.params.empty() && !is_dynamic(mode)) {
              report(Diagnostic::Kind::Mode,
                     "parametrised procedure " + x.name +
                         " is not allowed in " + std::string(mode_name(mode)));
            }
            NameSet distinct(x.params.begin(), x.params.end());
            if (distinct.size() != x.params.size()) {
              report(Diagnostic::Kind::Shape,
                     "repeated parameter in procedure " + x.name);
            }
            auto inner = scope;
            inner[x.name] = x.params.size();
            chor(x.body, inner);
            chor(x.cont, inner);
          } else if constexpr (std::is_same_v<T, Call>) {
            auto it = scope.find(x.name);
            if (it == scope.end()) {
              report(Diagnostic::Kind::Arity,
                     "call to undefined procedure " + x.name);
            } else if (it->second != x.args.size()) {
              report(Diagnostic::Kind::Arity,
                     "procedure " + x.name + " expects " +
                         std::to_string(it->second) + " arguments, got " +
                         std::to_string(x.args.size()));
            }
            if (!x.args.empty() && !is_dynamic(mode)) {
              report(Diagnostic::Kind::Mode,
                     "call with arguments is not allowed in " +
                         std::string(mode_name(mode)));
            }
          }
        },
        c->node);
  }
};

}  // namespace detail

inline std::vector<Diagnostic> diagnose(const Chor& c, Mode mode) {
  detail::Validator v{mode, {}, {}};
  v.chor(c, {});
  return v.out;
}

inline bool is_valid_in(const Chor& c, Mode mode) {
  return diagnose(c, mode).empty();
}

// Throws the first problem as ModeError, ArityError or ChorusError.
inline void validate(const Chor& c, Mode mode) {
  auto ds = diagnose(c, mode);
  if (ds.empty()) return;
  const auto& d = ds.front();
  switch (d.kind) {
    case Diagnostic::Kind::Mode: throw ModeError(d.message);
    case Diagnostic::Kind::Arity: throw ArityError(d.message);
    case Diagnostic::Kind::Shape: throw ChorusError(d.message);
  }
}

}  // namespace chorus
