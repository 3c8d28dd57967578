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

#include <algorithm>
#include <cctype>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "chorus/printer.hpp"
#include "chorus/syntax.hpp"

namespace chorus {

class EvalError : public ChorusError {
 public:
  using ChorusError::ChorusError;
};

class UnknownProcess : public ChorusError {
 public:
  using ChorusError::ChorusError;
};

//
// Values
//

// Default value of a freshly started process.
struct Bottom {
  bool operator==(const Bottom&) const = default;
};
struct Atom {
  std::string text;
  bool operator==(const Atom&) const = default;
};
struct ProcessRef {
  ProcessName name;
  bool operator==(const ProcessRef&) const = default;
};

using Value = std::variant<Bottom, Integer, Atom, ProcessRef>;

inline std::string to_string(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Bottom>) {
          return "_|_";
        } else if constexpr (std::is_same_v<T, Integer>) {
          return x.str();
        } else if constexpr (std::is_same_v<T, Atom>) {
          return "\"" + x.text + "\"";
        } else {
          return "@" + x.name;
        }
      },
      v);
}

// Inverse of to_string, plus the CLI shorthand: a token with a leading
// digit or sign is an integer, anything else is an atom.
inline Value parse_value(std::string_view s) {
  if (s.empty()) throw ChorusError("empty value");
  if (s == "_|_") return Bottom{};
  if (s.front() == '@') return ProcessRef{std::string(s.substr(1))};
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
    return Atom{std::string(s.substr(1, s.size() - 2))};
  }
  bool sign = s.front() == '-' || s.front() == '+';
  if (std::isdigit(static_cast<unsigned char>(s.front())) ||
      (sign && s.size() > 1)) {
    std::string_view digits = sign ? s.substr(1) : s;
    for (char c : digits) {
      if (!std::isdigit(static_cast<unsigned char>(c))) {
        throw ChorusError("malformed integer '" + std::string(s) + "'");
      }
    }
    Integer v{std::string(digits)};
    return s.front() == '-' ? Value(Integer(-v)) : Value(v);
  }
  return Atom{std::string(s)};
}

// Replaces `*` with `self_value` and evaluates.
inline Value eval_expr(const Expr& e, const Value& self_value) {
  return std::visit(
      [&](const auto& x) -> Value {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, IntLit>) {
          return x.value;
        } else if constexpr (std::is_same_v<T, AtomLit>) {
          return Atom{x.text};
        } else if constexpr (std::is_same_v<T, NameLit>) {
          return ProcessRef{x.name};
        } else if constexpr (std::is_same_v<T, SelfRef>) {
          return self_value;
        } else {
          Value l = eval_expr(*x.lhs, self_value);
          Value r = eval_expr(*x.rhs, self_value);
          const auto* li = std::get_if<Integer>(&l);
          const auto* ri = std::get_if<Integer>(&r);
          if (!li || !ri) {
            throw EvalError("arithmetic on non-integer values " +
                            to_string(l) + " and " + to_string(r));
          }
          return x.op == BinOpKind::Add ? Integer(*li + *ri)
                                        : Integer(*li - *ri);
        }
      },
      e.node);
}

//
// State and connections
//

using StateMap = std::map<ProcessName, Value>;

// Directed "knows" relation: edge (p, q) means p knows q's name.
class ConnectionGraph {
 public:
  using Edge = std::pair<ProcessName, ProcessName>;

  ConnectionGraph() = default;

  static ConnectionGraph complete(const NameSet& procs) {
    ConnectionGraph g;
    for (const auto& p : procs) {
      for (const auto& q : procs) {
        if (p != q) g.edges_.emplace(p, q);
      }
    }
    return g;
  }

  // Self-edges are ignored.
  void add(const ProcessName& from, const ProcessName& to) {
    if (from != to) edges_.emplace(from, to);
  }
  void add_mutual(const ProcessName& p, const ProcessName& q) {
    add(p, q);
    add(q, p);
  }

  // Drops every edge touching `n`.
  void forget(const ProcessName& n) {
    for (auto it = edges_.begin(); it != edges_.end();) {
      it = it->first == n || it->second == n ? edges_.erase(it) : std::next(it);
    }
  }

  bool includes(const ConnectionGraph& other) const {
    return std::includes(edges_.begin(), edges_.end(), other.edges_.begin(),
                         other.edges_.end());
  }
  static ConnectionGraph intersect(const ConnectionGraph& a,
                                   const ConnectionGraph& b) {
    ConnectionGraph g;
    std::set_intersection(a.edges_.begin(), a.edges_.end(), b.edges_.begin(),
                          b.edges_.end(),
                          std::inserter(g.edges_, g.edges_.end()));
    return g;
  }

  bool knows(const ProcessName& p, const ProcessName& q) const {
    return edges_.count({p, q}) > 0;
  }
  bool mutually_knows(const ProcessName& p, const ProcessName& q) const {
    return knows(p, q) && knows(q, p);
  }

  // Lexicographic order.
  const std::set<Edge>& edges() const { return edges_; }
  std::size_t size() const { return edges_.size(); }

  bool operator==(const ConnectionGraph&) const = default;

 private:
  std::set<Edge> edges_;
};

//
// Configurations
//

struct Configuration {
  ConnectionGraph graph;
  Chor chor;
  StateMap state;
  Mode mode = Mode::DCC;
  std::size_t fresh_counter = 0;
};

inline bool same_observables(const Configuration& a, const Configuration& b) {
  return a.graph == b.graph && a.state == b.state && chor_equal(a.chor, b.chor);
}

// σ defaults to ⊥ on every free process; in the dynamic calculi the
// initial graph is complete over those processes unless `graph` is given.
inline Configuration initial_config(const Chor& c, Mode mode,
                                    const StateMap& overrides = {},
                                    std::optional<ConnectionGraph> graph = {}) {
  NameSet free = free_names(c);
  Configuration cfg;
  cfg.chor = c;
  cfg.mode = mode;
  for (const auto& [name, value] : overrides) {
    if (!free.count(name)) {
      throw UnknownProcess("state override for '" + name +
                           "', which is not a free process of the program");
    }
  }
  for (const auto& p : free) {
    auto it = overrides.find(p);
    cfg.state.emplace(p, it == overrides.end() ? Value(Bottom{}) : it->second);
  }
  if (graph) {
    cfg.graph = std::move(*graph);
  } else if (is_dynamic(mode)) {
    cfg.graph = ConnectionGraph::complete(free);
  }
  return cfg;
}

// `a=5,b=title` as used by `--state`.
inline StateMap parse_state_overrides(std::string_view spec) {
  StateMap out;
  while (!spec.empty()) {
    auto comma = spec.find(',');
    std::string_view item = spec.substr(0, comma);
    auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw ChorusError("malformed state override '" + std::string(item) +
                        "', expected NAME=VALUE");
    }
    out[std::string(item.substr(0, eq))] = parse_value(item.substr(eq + 1));
    if (comma == std::string_view::npos) break;
    spec.remove_prefix(comma + 1);
  }
  return out;
}

inline std::string format_state(const StateMap& s) {
  std::string out;
  for (const auto& [k, v] : s) {
    if (!out.empty()) out += ", ";
    out += k + "=" + to_string(v);
  }
  return "{" + out + "}";
}

}  // namespace chorus
