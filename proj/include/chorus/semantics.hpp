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

// Small-step reduction for the synchronous calculi.
//
// Out-of-order execution is realised by enumerating redexes along the
// sequential spine of the term (the chain of prefixes and definitions from
// the root) instead of rewriting the term up to precongruence:
//
//   * an interaction at spine position k is enabled iff its process names
//     are disjoint from those of every interaction before it on the spine;
//   * a conditional or call ends the spine and is enabled under the same
//     disjointness condition; nothing is hoisted out of a branch;
//   * definitions are transparent, and a call unfolds in place.
//
// In DMC/DCC the connection-graph premises apply on top: communication and
// selection need mutual knowledge, an introduction `p.r -> q` needs p and q
// to know each other and p to know r, and a conditional needs its two
// processes to know each other.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "chorus/runtime.hpp"
#include "chorus/syntax.hpp"

namespace chorus {

enum class RedexKind { Com, Sel, Start, Intro, CondThen, CondElse, Unfold };

inline std::string_view kind_name(RedexKind k) {
  switch (k) {
    case RedexKind::Com: return "com";
    case RedexKind::Sel: return "sel";
    case RedexKind::Start: return "start";
    case RedexKind::Intro: return "intro";
    case RedexKind::CondThen: return "cond-then";
    case RedexKind::CondElse: return "cond-else";
    case RedexKind::Unfold: return "unfold";
  }
  return "?";
}

inline std::optional<RedexKind> kind_from_name(std::string_view s) {
  for (auto k : {RedexKind::Com, RedexKind::Sel, RedexKind::Start,
                 RedexKind::Intro, RedexKind::CondThen, RedexKind::CondElse,
                 RedexKind::Unfold}) {
    if (kind_name(k) == s) return k;
  }
  return std::nullopt;
}

// Position along the spine: skip a prefix, or descend into a definition's
// continuation.
enum class PathStep : char { Skip = 'P', Enter = 'D' };
using Path = std::vector<PathStep>;

inline std::string path_to_string(const Path& p) {
  std::string s;
  for (auto step : p) s += static_cast<char>(step);
  return s;
}

inline Path path_from_string(std::string_view s) {
  Path p;
  for (char c : s) {
    if (c != 'P' && c != 'D') throw ChorusError("malformed redex path");
    p.push_back(static_cast<PathStep>(c));
  }
  return p;
}

struct Redex {
  Path path;
  RedexKind kind;
  // Identity of the configuration the redex was enumerated from; applying
  // it anywhere else is rejected.
  std::size_t counter = 0;
  Chor origin;
};

struct ValueDelivered {
  ProcessName sender;
  ProcessName receiver;
  Value value;
};
struct LabelDelivered {
  ProcessName sender;
  ProcessName receiver;
  std::string label;
};
struct Spawned {
  ProcessName parent;
  ProcessName child;
};
struct Introduced {
  ProcessName introducer;
  ProcessName learner;
  ProcessName learned;
};
// `compared` is the value the right-hand process shipped to the left.
struct Branched {
  ProcessName lhs;
  ProcessName rhs;
  bool took_then;
  Value compared;
};
struct Unfolded {
  std::string procedure;
  std::vector<ProcessName> args;
};

using EventDetail = std::variant<ValueDelivered, LabelDelivered, Spawned,
                                 Introduced, Branched, Unfolded>;

struct TraceEvent {
  Redex redex;
  EventDetail what;
};

class RuntimeError : public ChorusError {
 public:
  enum class Kind { Eval, NotEnabled, UnknownProcess };
  RuntimeError(Kind kind, const std::string& what)
      : ChorusError(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

namespace detail {

inline bool disjoint(const NameSet& a, const NameSet& b) {
  const NameSet& small = a.size() < b.size() ? a : b;
  const NameSet& large = a.size() < b.size() ? b : a;
  for (const auto& n : small) {
    if (large.count(n)) return false;
  }
  return true;
}

inline const Def* find_def(const std::vector<const Def*>& chain,
                           const std::string& name) {
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    if ((*it)->name == name) return *it;
  }
  return nullptr;
}

inline void collect_defs_and_calls(const Chor& c,
                                   std::map<std::string, const Def*>& defs,
                                   std::set<std::string>& calls) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Prefix>) {
          collect_defs_and_calls(x.cont, defs, calls);
        } else if constexpr (std::is_same_v<T, Cond>) {
          collect_defs_and_calls(x.then_branch, defs, calls);
          collect_defs_and_calls(x.else_branch, defs, calls);
        } else if constexpr (std::is_same_v<T, Def>) {
          defs.emplace(x.name, &x);
          collect_defs_and_calls(x.body, defs, calls);
          collect_defs_and_calls(x.cont, defs, calls);
        } else if constexpr (std::is_same_v<T, Call>) {
          calls.insert(x.name);
        }
      },
      c->node);
}

// Processes a call may touch once unfolded, following nested calls.
inline NameSet call_footprint(const Call& call,
                              const std::vector<const Def*>& chain) {
  NameSet out(call.args.begin(), call.args.end());
  std::map<std::string, const Def*> known;
  for (const Def* d : chain) known[d->name] = d;
  std::set<std::string> done;
  std::vector<std::string> work{call.name};
  while (!work.empty()) {
    std::string name = work.back();
    work.pop_back();
    if (!done.insert(name).second) continue;
    auto it = known.find(name);
    if (it == known.end()) continue;
    const Def* d = it->second;
    NameSet body = pn(d->body);
    for (const auto& p : d->params) body.erase(p);
    out.merge(body);
    std::map<std::string, const Def*> nested;
    std::set<std::string> calls;
    collect_defs_and_calls(d->body, nested, calls);
    for (auto& [n, nd] : nested) known.emplace(n, nd);
    for (const auto& c : calls) work.push_back(c);
  }
  return out;
}

inline const Value* lookup_value(const StateMap& s, const ProcessName& p) {
  auto it = s.find(p);
  return it == s.end() ? nullptr : &it->second;
}

// Redex kind for an interaction whose graph premises hold, if any.
inline std::optional<RedexKind> eta_redex(const Eta& eta,
                                          const Configuration& cfg) {
  const bool dyn = is_dynamic(cfg.mode);
  const auto& g = cfg.graph;
  return std::visit(
      [&](const auto& x) -> std::optional<RedexKind> {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Com>) {
          const ProcessName* payload = dyn ? intro_payload(x) : nullptr;
          if (payload) {
            if (!g.mutually_knows(x.sender, x.receiver) ||
                !g.knows(x.sender, *payload)) {
              return std::nullopt;
            }
            return RedexKind::Intro;
          }
          if (dyn && !g.mutually_knows(x.sender, x.receiver)) {
            return std::nullopt;
          }
          return RedexKind::Com;
        } else if constexpr (std::is_same_v<T, Sel>) {
          if (dyn && !g.mutually_knows(x.sender, x.receiver)) {
            return std::nullopt;
          }
          return RedexKind::Sel;
        } else {
          return RedexKind::Start;
        }
      },
      eta);
}

}  // namespace detail

// Every redex of `cfg`, ordered by path.
inline std::vector<Redex> enabled_redexes(const Configuration& cfg) {
  std::vector<Redex> out;
  Path path;
  NameSet blocked;
  std::vector<const Def*> chain;
  auto emit = [&](RedexKind k) {
    out.push_back({path, k, cfg.fresh_counter, cfg.chor});
  };
  const ChorNode* node = cfg.chor.get();
  while (node) {
    const ChorNode* next = nullptr;
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Prefix>) {
            NameSet names = pn(x.eta);
            if (detail::disjoint(names, blocked)) {
              if (auto k = detail::eta_redex(x.eta, cfg)) emit(*k);
            }
            blocked.merge(names);
            path.push_back(PathStep::Skip);
            next = x.cont.get();
          } else if constexpr (std::is_same_v<T, Def>) {
            chain.push_back(&x);
            path.push_back(PathStep::Enter);
            next = x.cont.get();
          } else if constexpr (std::is_same_v<T, Cond>) {
            if (blocked.count(x.lhs) || blocked.count(x.rhs)) return;
            if (is_dynamic(cfg.mode) &&
                !cfg.graph.mutually_knows(x.lhs, x.rhs)) {
              return;
            }
            const Value* l = detail::lookup_value(cfg.state, x.lhs);
            const Value* r = detail::lookup_value(cfg.state, x.rhs);
            if (!l || !r) return;
            emit(*l == *r ? RedexKind::CondThen : RedexKind::CondElse);
          } else if constexpr (std::is_same_v<T, Call>) {
            if (!detail::find_def(chain, x.name)) return;
            if (detail::disjoint(detail::call_footprint(x, chain), blocked)) {
              emit(RedexKind::Unfold);
            }
          }
        },
        node->node);
    node = next;
  }
  return out;
}

// Terminated iff the spine is only definitions (garbage) ending in 0.
inline bool is_terminated(const Chor& c) {
  const ChorNode* node = c.get();
  while (const auto* d = std::get_if<Def>(&node->node)) node = d->cont.get();
  return std::holds_alternative<Nil>(node->node);
}

namespace detail {

inline Chor rebuild_spine(const Chor& c, const Path& path, std::size_t i,
                          const Chor& replacement) {
  if (i == path.size()) return replacement;
  if (path[i] == PathStep::Skip) {
    const auto& p = std::get<Prefix>(c->node);
    return prefix(p.eta, rebuild_spine(p.cont, path, i + 1, replacement));
  }
  const auto& d = std::get<Def>(c->node);
  return def(d.name, d.params, d.body,
             rebuild_spine(d.cont, path, i + 1, replacement));
}

[[noreturn]] inline void not_enabled(const std::string& why) {
  throw RuntimeError(RuntimeError::Kind::NotEnabled, "redex not enabled: " + why);
}

inline const Value& require_process(const StateMap& s, const ProcessName& p) {
  auto it = s.find(p);
  if (it == s.end()) {
    throw RuntimeError(RuntimeError::Kind::UnknownProcess,
                       "process '" + p + "' does not exist");
  }
  return it->second;
}

inline ProcessName mint(const ProcessName& base, Configuration& cfg) {
  ProcessName name;
  do {
    name = base + "$" + std::to_string(cfg.fresh_counter++);
  } while (cfg.state.count(name));
  return name;
}

}  // namespace detail

// Applies one reduction step. Throws RuntimeError when the redex is stale
// or expression evaluation fails.
inline std::pair<Configuration, TraceEvent> apply_redex(
    const Configuration& cfg, const Redex& r) {
  if (r.origin != cfg.chor || r.counter != cfg.fresh_counter) {
    detail::not_enabled("it was enumerated from a different configuration");
  }
  std::vector<const Def*> chain;
  const Chor* target = &cfg.chor;
  for (auto step : r.path) {
    const ChorNode& n = **target;
    if (step == PathStep::Skip) {
      const auto* p = std::get_if<Prefix>(&n.node);
      if (!p) detail::not_enabled("path does not match the term");
      target = &p->cont;
    } else {
      const auto* d = std::get_if<Def>(&n.node);
      if (!d) detail::not_enabled("path does not match the term");
      chain.push_back(d);
      target = &d->cont;
    }
  }

  Configuration next = cfg;
  Chor replacement;
  std::optional<EventDetail> what;
  const ChorNode& node = **target;
  const bool dyn = is_dynamic(cfg.mode);

  if (const auto* p = std::get_if<Prefix>(&node.node)) {
    auto kind = detail::eta_redex(p->eta, cfg);
    if (!kind || *kind != r.kind) detail::not_enabled("premises do not hold");
    replacement = p->cont;
    if (const auto* c = std::get_if<Com>(&p->eta)) {
      const Value& self = detail::require_process(cfg.state, c->sender);
      detail::require_process(cfg.state, c->receiver);
      if (r.kind == RedexKind::Intro) {
        const ProcessName& learned = *intro_payload(*c);
        next.graph.add(c->receiver, learned);
        what = Introduced{c->sender, c->receiver, learned};
      } else {
        Value v;
        try {
          v = eval_expr(*c->expr, self);
        } catch (const EvalError& e) {
          throw RuntimeError(RuntimeError::Kind::Eval, e.what());
        }
        next.state[c->receiver] = v;
        what = ValueDelivered{c->sender, c->receiver, std::move(v)};
      }
    } else if (const auto* s = std::get_if<Sel>(&p->eta)) {
      detail::require_process(cfg.state, s->sender);
      detail::require_process(cfg.state, s->receiver);
      what = LabelDelivered{s->sender, s->receiver, s->label};
    } else {
      const auto& st = std::get<Start>(p->eta);
      detail::require_process(cfg.state, st.parent);
      ProcessName child = detail::mint(st.child, next);
      next.state.emplace(child, Bottom{});
      next.graph.add_mutual(st.parent, child);
      replacement = substitute(p->cont, {{st.child, child}});
      what = Spawned{st.parent, child};
    }
  } else if (const auto* c = std::get_if<Cond>(&node.node)) {
    if (dyn && !cfg.graph.mutually_knows(c->lhs, c->rhs)) {
      detail::not_enabled("premises do not hold");
    }
    const Value& l = detail::require_process(cfg.state, c->lhs);
    const Value& rv = detail::require_process(cfg.state, c->rhs);
    bool then = l == rv;
    if (r.kind != (then ? RedexKind::CondThen : RedexKind::CondElse)) {
      detail::not_enabled("branch does not match the state");
    }
    replacement = then ? c->then_branch : c->else_branch;
    what = Branched{c->lhs, c->rhs, then, rv};
  } else if (const auto* call = std::get_if<Call>(&node.node)) {
    if (r.kind != RedexKind::Unfold) detail::not_enabled("kind mismatch");
    const Def* d = detail::find_def(chain, call->name);
    if (!d) detail::not_enabled("call to undefined procedure " + call->name);
    NameMap m;
    for (std::size_t i = 0; i < d->params.size(); ++i) {
      if (d->params[i] != call->args[i]) m[d->params[i]] = call->args[i];
    }
    replacement = substitute(d->body, m);
    what = Unfolded{call->name, call->args};
  } else {
    detail::not_enabled("no redex at this position");
  }

  next.chor = detail::rebuild_spine(cfg.chor, r.path, 0, replacement);
  return {std::move(next), TraceEvent{r, std::move(*what)}};
}

//
// Runs
//

struct SchedulerPolicy {
  enum class Kind { First, Random, Interactive };
  Kind kind = Kind::First;
  std::uint64_t seed = 0;
  // Interactive only: returns the chosen index, or a value out of range to
  // stop the run.
  std::function<std::size_t(const Configuration&, const std::vector<Redex>&)>
      choose;

  static SchedulerPolicy first() { return {}; }
  static SchedulerPolicy random(std::uint64_t seed) {
    return {Kind::Random, seed, {}};
  }
};

enum class Outcome { Terminated, StepLimit, Stuck, Stopped };

inline std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Terminated: return "terminated";
    case Outcome::StepLimit: return "step-limit";
    case Outcome::Stuck: return "stuck";
    case Outcome::Stopped: return "stopped";
  }
  return "?";
}

struct RunResult {
  Configuration final;
  std::vector<TraceEvent> trace;
  Outcome outcome;
};

inline RunResult run(Configuration cfg, const SchedulerPolicy& policy,
                     std::size_t max_steps) {
  std::mt19937_64 rng(policy.seed);
  std::vector<TraceEvent> trace;
  while (true) {
    if (is_terminated(cfg.chor)) {
      return {std::move(cfg), std::move(trace), Outcome::Terminated};
    }
    auto redexes = enabled_redexes(cfg);
    if (redexes.empty()) {
      return {std::move(cfg), std::move(trace), Outcome::Stuck};
    }
    if (trace.size() >= max_steps) {
      return {std::move(cfg), std::move(trace), Outcome::StepLimit};
    }
    std::size_t pick = 0;
    switch (policy.kind) {
      case SchedulerPolicy::Kind::First:
        break;
      case SchedulerPolicy::Kind::Random:
        pick = std::uniform_int_distribution<std::size_t>(
            0, redexes.size() - 1)(rng);
        break;
      case SchedulerPolicy::Kind::Interactive:
        pick = policy.choose ? policy.choose(cfg, redexes) : redexes.size();
        if (pick >= redexes.size()) {
          return {std::move(cfg), std::move(trace), Outcome::Stopped};
        }
        break;
    }
    auto [next, event] = apply_redex(cfg, redexes[pick]);
    cfg = std::move(next);
    trace.push_back(std::move(event));
  }
}

}  // namespace chorus
