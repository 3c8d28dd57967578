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

// Bounded exhaustive exploration and the property checks built on it.
//
// Nodes are configurations in canonical form: every process minted at
// runtime is renamed to `base$c<j>`, numbering per base in order of first
// appearance, so configurations differing only in fresh-name choices
// coincide. Each edge records the renaming it applied, which lets checks
// follow one process along a path.
//
// All checks are three-valued. Hitting a depth or node bound can only turn
// a verdict into Inconclusive, never into Ok.

#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "chorus/printer.hpp"
#include "chorus/runtime.hpp"
#include "chorus/semantics.hpp"
#include "chorus/syntax.hpp"
#include "chorus/transform.hpp"

namespace chorus {

struct ExploreOptions {
  std::size_t depth = 100;
  std::size_t node_limit = 200000;
  unsigned workers = 1;
};

struct SpaceEdge {
  std::size_t from;
  std::size_t to;
  // Names as they were right after the step, before canonical renaming.
  TraceEvent event;
  // Non-identity part of the canonical renaming applied at `to`.
  NameMap rename;
};

struct SpaceNode {
  Configuration config;
  std::string key;
  std::size_t depth = 0;
  bool terminated = false;
  bool expanded = false;
  std::optional<std::string> error;
  std::optional<std::size_t> parent_edge;
  std::vector<std::size_t> out;
};

struct StateSpace {
  std::vector<SpaceNode> nodes;
  std::vector<SpaceEdge> edges;
  // Processes present at the root; never renamed.
  NameSet root_domain;
  std::size_t depth_bound = 0;
  bool bounds_hit = false;

  bool complete() const { return !bounds_hit; }

  // Edge indices from the root to `node`.
  std::vector<std::size_t> path_to(std::size_t node) const {
    std::vector<std::size_t> path;
    while (nodes[node].parent_edge) {
      std::size_t e = *nodes[node].parent_edge;
      path.push_back(e);
      node = edges[e].from;
    }
    std::reverse(path.begin(), path.end());
    return path;
  }
};

//
// Canonical form
//

namespace detail {

// `base$17` and `base$c3` both have base `base`.
inline ProcessName mint_base(const ProcessName& n) {
  auto pos = n.rfind('$');
  return pos == std::string::npos ? n : n.substr(0, pos);
}

inline std::string state_key(const StateMap& s) {
  std::string out;
  for (const auto& [k, v] : s) {
    out += k;
    out += '=';
    out += to_string(v);
    out += ';';
  }
  return out;
}

inline std::string graph_key(const ConnectionGraph& g) {
  std::string out;
  for (const auto& [a, b] : g.edges()) {
    out += a;
    out += '>';
    out += b;
    out += ';';
  }
  return out;
}

inline Value rename_value(const Value& v, const NameMap& m) {
  if (const auto* r = std::get_if<ProcessRef>(&v)) {
    auto it = m.find(r->name);
    if (it != m.end()) return ProcessRef{it->second};
  }
  return v;
}

}  // namespace detail

struct Canonical {
  Configuration config;
  NameMap rename;
  std::string key;
};

inline Canonical canonicalize(const Configuration& cfg,
                              const NameSet& root_domain) {
  std::vector<ProcessName> order;
  NameSet seen;
  auto visit = [&](const ProcessName& n) {
    if (root_domain.count(n) || !cfg.state.count(n)) return;
    if (seen.insert(n).second) order.push_back(n);
  };
  names_in_order(cfg.chor, visit);
  std::vector<ProcessName> rest;
  for (const auto& [n, v] : cfg.state) {
    if (!root_domain.count(n) && !seen.count(n)) rest.push_back(n);
  }
  std::sort(rest.begin(), rest.end(), [](const auto& a, const auto& b) {
    auto ba = detail::mint_base(a), bb = detail::mint_base(b);
    if (ba != bb) return ba < bb;
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  order.insert(order.end(), rest.begin(), rest.end());

  NameMap full;
  std::map<ProcessName, std::size_t> per_base;
  for (const auto& n : order) {
    ProcessName base = detail::mint_base(n);
    full[n] = base + "$c" + std::to_string(per_base[base]++);
  }
  NameMap rename;
  for (const auto& [from, to] : full) {
    if (from != to) rename.emplace(from, to);
  }

  Canonical out;
  out.config.mode = cfg.mode;
  out.config.fresh_counter = 0;
  if (rename.empty()) {
    out.config.chor = cfg.chor;
    out.config.state = cfg.state;
    out.config.graph = cfg.graph;
  } else {
    // Canonical names cannot clash with binders: those never end in `$c<j>`.
    out.config.chor = substitute(cfg.chor, rename);
    for (const auto& [n, v] : cfg.state) {
      out.config.state.emplace(detail::lookup(rename, n),
                               detail::rename_value(v, rename));
    }
    for (const auto& [a, b] : cfg.graph.edges()) {
      out.config.graph.add(detail::lookup(rename, a), detail::lookup(rename, b));
    }
  }
  out.rename = std::move(rename);
  out.key = pretty_print(out.config.chor) + "|" +
            detail::state_key(out.config.state) + "|" +
            detail::graph_key(out.config.graph);
  return out;
}

//
// Exploration
//

namespace detail {

struct Successor {
  Canonical canon;
  TraceEvent event;
};

struct Expansion {
  std::vector<Successor> successors;
  std::optional<std::string> error;
};

inline Expansion expand(const Configuration& cfg, const NameSet& root) {
  Expansion ex;
  for (const auto& r : enabled_redexes(cfg)) {
    try {
      auto [next, ev] = apply_redex(cfg, r);
      ev.redex.origin = nullptr;
      ex.successors.push_back({canonicalize(next, root), std::move(ev)});
    } catch (const RuntimeError& e) {
      if (!ex.error) ex.error = e.what();
    }
  }
  return ex;
}

}  // namespace detail

inline StateSpace explore(const Configuration& root,
                          const ExploreOptions& opt = {}) {
  StateSpace space;
  space.depth_bound = opt.depth;
  for (const auto& [n, v] : root.state) space.root_domain.insert(n);

  std::unordered_map<std::string, std::size_t> index;
  {
    Canonical c = canonicalize(root, space.root_domain);
    SpaceNode n;
    n.config = std::move(c.config);
    n.key = c.key;
    n.terminated = is_terminated(n.config.chor);
    index.emplace(c.key, 0);
    space.nodes.push_back(std::move(n));
  }

  std::vector<std::size_t> frontier{0};
  const unsigned workers = std::max(1u, opt.workers);
  while (!frontier.empty()) {
    std::vector<std::size_t> todo;
    for (std::size_t id : frontier) {
      SpaceNode& n = space.nodes[id];
      if (n.terminated) continue;
      if (n.depth >= opt.depth) {
        if (!enabled_redexes(n.config).empty()) space.bounds_hit = true;
        continue;
      }
      todo.push_back(id);
    }
    std::vector<detail::Expansion> results(todo.size());
    auto work = [&](std::size_t begin, std::size_t step) {
      for (std::size_t i = begin; i < todo.size(); i += step) {
        results[i] = detail::expand(space.nodes[todo[i]].config,
                                    space.root_domain);
      }
    };
    if (workers == 1 || todo.size() < 2) {
      work(0, 1);
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
      for (auto& t : pool) t.join();
    }

    // Merge in frontier order so ids do not depend on scheduling.
    std::vector<std::size_t> next;
    bool full = false;
    for (std::size_t i = 0; i < todo.size(); ++i) {
      std::size_t id = todo[i];
      if (full) {
        space.bounds_hit = true;
        break;
      }
      space.nodes[id].expanded = true;
      space.nodes[id].error = results[i].error;
      for (auto& s : results[i].successors) {
        auto it = index.find(s.canon.key);
        std::size_t target;
        if (it != index.end()) {
          target = it->second;
        } else {
          if (space.nodes.size() >= opt.node_limit) {
            // The node stays unexpanded so verdicts stay honest.
            space.nodes[id].expanded = false;
            space.bounds_hit = true;
            full = true;
            break;
          }
          target = space.nodes.size();
          SpaceNode n;
          n.config = std::move(s.canon.config);
          n.key = s.canon.key;
          n.depth = space.nodes[id].depth + 1;
          n.terminated = is_terminated(n.config.chor);
          n.parent_edge = space.edges.size();
          index.emplace(n.key, target);
          space.nodes.push_back(std::move(n));
          next.push_back(target);
        }
        space.nodes[id].out.push_back(space.edges.size());
        space.edges.push_back(
            {id, target, std::move(s.event), std::move(s.canon.rename)});
      }
    }
    frontier = std::move(next);
  }
  // Keys are only needed for deduplication.
  for (auto& n : space.nodes) std::string().swap(n.key);
  return space;
}

//
// Verdicts
//

enum class Verdict { Ok, Violation, Inconclusive };

inline std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Ok: return "ok";
    case Verdict::Violation: return "violation";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct Counterexample {
  // Edge indices from the root.
  std::vector<std::size_t> path;
  std::string description;
};

struct CheckResult {
  Verdict verdict = Verdict::Ok;
  std::vector<Counterexample> counterexamples;
  std::string summary;

  bool ok() const { return verdict == Verdict::Ok; }
};

inline CheckResult finish(std::vector<Counterexample> cex, bool complete,
                          std::string summary) {
  CheckResult r;
  r.counterexamples = std::move(cex);
  r.summary = std::move(summary);
  if (!r.counterexamples.empty()) {
    r.verdict = Verdict::Violation;
  } else if (!complete) {
    r.verdict = Verdict::Inconclusive;
  }
  return r;
}

// Every explored node is terminated or can step.
inline CheckResult check_progress(const StateSpace& space) {
  std::vector<Counterexample> cex;
  for (std::size_t i = 0; i < space.nodes.size(); ++i) {
    const auto& n = space.nodes[i];
    if (!n.expanded || n.terminated || !n.out.empty()) continue;
    cex.push_back({space.path_to(i),
                   n.error ? "step failed: " + *n.error
                           : "stuck: " + pretty_print(n.config.chor)});
  }
  return finish(std::move(cex), space.complete(),
                std::to_string(space.nodes.size()) + " nodes, " +
                    std::to_string(space.edges.size()) + " edges");
}

//
// Channel events
//

// `name` is `pattern` or a runtime instance of it (`a$s$0` vs `a$s$0$c1`).
inline bool name_instance_of(const ProcessName& name,
                             const ProcessName& pattern) {
  auto n = name_segments(name);
  auto p = name_segments(pattern);
  return n.size() >= p.size() && std::equal(p.begin(), p.end(), n.begin());
}

// Endpoints of a channel process `p$q$i...` between two source processes.
inline std::optional<std::pair<ProcessName, ProcessName>> channel_endpoints(
    const ProcessName& name, const NameSet& source) {
  auto seg = name_segments(name);
  if (seg.size() < 3 || !source.count(seg[0]) || !source.count(seg[1])) {
    return std::nullopt;
  }
  const auto& idx = seg[2];
  if (idx.empty() || !std::all_of(idx.begin(), idx.end(), ::isdigit)) {
    return std::nullopt;
  }
  return std::make_pair(seg[0], seg[1]);
}

// What a send into a channel carries, comparable with what leaves it.
inline std::string payload_text(const EventDetail& d) {
  if (const auto* v = std::get_if<ValueDelivered>(&d)) return to_string(v->value);
  if (const auto* l = std::get_if<LabelDelivered>(&d)) return "[" + l->label + "]";
  if (const auto* b = std::get_if<Branched>(&d)) return to_string(b->compared);
  return {};
}

struct ChannelSend {
  ProcessName from;
  ProcessName channel;
  std::string payload;
};
struct ChannelDelivery {
  ProcessName channel;
  ProcessName to;
  std::string payload;
};

inline std::optional<ChannelSend> as_send(const TraceEvent& e,
                                          const NameSet& source) {
  auto check = [&](const ProcessName& s,
                   const ProcessName& r) -> std::optional<ChannelSend> {
    if (!source.count(s)) return std::nullopt;
    auto ends = channel_endpoints(r, source);
    if (!ends || ends->first != s) return std::nullopt;
    return ChannelSend{s, r, payload_text(e.what)};
  };
  if (const auto* v = std::get_if<ValueDelivered>(&e.what)) {
    return check(v->sender, v->receiver);
  }
  if (const auto* l = std::get_if<LabelDelivered>(&e.what)) {
    return check(l->sender, l->receiver);
  }
  return std::nullopt;
}

inline std::optional<ChannelDelivery> as_delivery(const TraceEvent& e,
                                                  const NameSet& source) {
  auto check = [&](const ProcessName& s,
                   const ProcessName& r) -> std::optional<ChannelDelivery> {
    if (!source.count(r)) return std::nullopt;
    auto ends = channel_endpoints(s, source);
    if (!ends || ends->second != r) return std::nullopt;
    return ChannelDelivery{s, r, payload_text(e.what)};
  };
  if (const auto* v = std::get_if<ValueDelivered>(&e.what)) {
    return check(v->sender, v->receiver);
  }
  if (const auto* l = std::get_if<LabelDelivered>(&e.what)) {
    return check(l->sender, l->receiver);
  }
  if (const auto* b = std::get_if<Branched>(&e.what)) {
    return check(b->rhs, b->lhs);
  }
  return std::nullopt;
}

namespace detail {

// Tracks a name through the renaming of one edge.
inline ProcessName follow(const SpaceEdge& e, const ProcessName& n) {
  return lookup(e.rename, n);
}

}  // namespace detail

// Every payload sent by a source process into one of its channels can
// afterwards be delivered by that channel to the channel's target.
inline CheckResult check_eventual_delivery(const StateSpace& space,
                                           const NameSet& source,
                                           std::size_t max_counterexamples = 5) {
  std::vector<Counterexample> cex;
  bool complete = space.complete();
  std::size_t sends = 0;
  for (std::size_t ei = 0; ei < space.edges.size(); ++ei) {
    const auto& e = space.edges[ei];
    auto send = as_send(e.event, source);
    if (!send) continue;
    ++sends;
    // BFS over (node, current spelling of the channel).
    std::set<std::pair<std::size_t, ProcessName>> seen;
    std::deque<std::pair<std::size_t, ProcessName>> queue;
    queue.emplace_back(e.to, detail::follow(e, send->channel));
    seen.insert(queue.front());
    bool found = false;
    bool cone_complete = true;
    while (!queue.empty() && !found) {
      auto [node, chan] = queue.front();
      queue.pop_front();
      const auto& n = space.nodes[node];
      if (!n.expanded && !n.terminated) cone_complete = false;
      for (std::size_t oi : n.out) {
        const auto& out = space.edges[oi];
        auto d = as_delivery(out.event, source);
        if (d && d->channel == chan && d->payload == send->payload) {
          found = true;
          break;
        }
        auto item = std::make_pair(out.to, detail::follow(out, chan));
        if (seen.insert(item).second) queue.push_back(std::move(item));
      }
    }
    if (found) continue;
    if (!cone_complete) {
      complete = false;
      continue;
    }
    auto path = space.path_to(e.from);
    path.push_back(ei);
    cex.push_back({std::move(path), "payload " + send->payload + " sent by " +
                                        send->from + " into " + send->channel +
                                        " is never delivered"});
    if (cex.size() >= max_counterexamples) break;
  }
  return finish(std::move(cex), complete,
                std::to_string(sends) + " channel sends checked");
}

// On every path, each channel pair delivers payloads in the order they were
// sent: the delivered sequence is always a prefix of the sent one.
inline CheckResult fifo_per_pair(const StateSpace& space,
                                 const NameSet& source) {
  using Pending = std::map<std::pair<ProcessName, ProcessName>,
                           std::deque<std::string>>;
  struct Item {
    std::size_t node;
    Pending pending;
    std::vector<std::size_t> path;
  };
  auto key_of = [](std::size_t node, const Pending& p) {
    std::string k = std::to_string(node) + "|";
    for (const auto& [pair, q] : p) {
      if (q.empty()) continue;
      k += pair.first + ">" + pair.second + ":";
      for (const auto& v : q) k += v + ",";
      k += ";";
    }
    return k;
  };
  std::vector<Counterexample> cex;
  std::unordered_set<std::string> seen;
  std::deque<Item> queue;
  queue.push_back({0, {}, {}});
  seen.insert(key_of(0, {}));
  std::size_t states = 0;
  while (!queue.empty() && cex.empty()) {
    Item it = std::move(queue.front());
    queue.pop_front();
    ++states;
    for (std::size_t oi : space.nodes[it.node].out) {
      const auto& e = space.edges[oi];
      Pending next = it.pending;
      if (auto s = as_send(e.event, source)) {
        next[*channel_endpoints(s->channel, source)].push_back(s->payload);
      } else if (auto d = as_delivery(e.event, source)) {
        auto& q = next[*channel_endpoints(d->channel, source)];
        if (q.empty() || q.front() != d->payload) {
          auto path = it.path;
          path.push_back(oi);
          cex.push_back({std::move(path),
                         d->channel + " delivered " + d->payload + " to " +
                             d->to + " out of order"});
          break;
        }
        q.pop_front();
      }
      std::string k = key_of(e.to, next);
      if (seen.insert(k).second) {
        auto path = it.path;
        path.push_back(oi);
        queue.push_back({e.to, std::move(next), std::move(path)});
      }
    }
  }
  return finish(std::move(cex), space.complete(),
                std::to_string(states) + " path states checked");
}

using EventPredicate = std::function<bool(const TraceEvent&)>;

// Some path performs an `a` event while no `b` event has happened yet.
// Returns Ok with a witness path, Violation if impossible in a complete
// space, Inconclusive otherwise.
inline CheckResult can_occur_before(const StateSpace& space,
                                    const EventPredicate& a,
                                    const EventPredicate& b) {
  std::vector<bool> seen(space.nodes.size(), false);
  std::vector<std::optional<std::size_t>> via(space.nodes.size());
  std::deque<std::size_t> queue{0};
  seen[0] = true;
  bool complete = true;
  while (!queue.empty()) {
    std::size_t n = queue.front();
    queue.pop_front();
    const auto& node = space.nodes[n];
    if (!node.expanded && !node.terminated) complete = false;
    for (std::size_t oi : node.out) {
      const auto& e = space.edges[oi];
      if (a(e.event)) {
        std::vector<std::size_t> path{oi};
        for (std::size_t cur = n; via[cur]; cur = space.edges[*via[cur]].from) {
          path.push_back(*via[cur]);
        }
        std::reverse(path.begin(), path.end());
        CheckResult r;
        r.counterexamples.push_back({std::move(path), "witness"});
        r.summary = "witness found";
        return r;
      }
      if (b(e.event) || seen[e.to]) continue;
      seen[e.to] = true;
      via[e.to] = oi;
      queue.push_back(e.to);
    }
  }
  CheckResult r;
  r.verdict = complete ? Verdict::Violation : Verdict::Inconclusive;
  r.summary = "no path performs the first event before the second";
  return r;
}

// Matches a value/label delivery whose endpoints are instances of the given
// names.
inline EventPredicate delivery_between(const ProcessName& sender,
                                       const ProcessName& receiver) {
  return [=](const TraceEvent& e) {
    auto match = [&](const ProcessName& s, const ProcessName& r) {
      return name_instance_of(s, sender) && name_instance_of(r, receiver);
    };
    if (const auto* v = std::get_if<ValueDelivered>(&e.what)) {
      return match(v->sender, v->receiver);
    }
    if (const auto* l = std::get_if<LabelDelivered>(&e.what)) {
      return match(l->sender, l->receiver);
    }
    return false;
  };
}

//
// Correspondence between a program and its encoding
//

namespace detail {

// Renames every generated name by order of first appearance, so encodings
// differing only in channel spelling compare equal.
inline std::string image_key(const Chor& c, const StateMap& state,
                             const NameSet& observed) {
  NameMap m;
  names_in_order(c, [&](const ProcessName& n) {
    if (is_machine_name(n) && !m.count(n)) {
      m.emplace(n, "#" + std::to_string(m.size()));
    }
  });
  std::string key = pretty_print(rename_all(c, m)) + "|";
  for (const auto& p : observed) {
    auto it = state.find(p);
    key += p + "=" + (it == state.end() ? "?" : to_string(it->second)) + ";";
  }
  return key;
}

using Index = std::map<std::pair<ProcessName, ProcessName>, std::size_t>;

inline void advance_index(Index& m, const TraceEvent& e) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ValueDelivered> ||
                      std::is_same_v<T, LabelDelivered>) {
          ++m[{x.sender, x.receiver}];
        } else if constexpr (std::is_same_v<T, Branched>) {
          ++m[{x.rhs, x.lhs}];
        } else if constexpr (std::is_same_v<T, Spawned>) {
          m[{x.parent, x.child}] = 0;
          m[{x.child, x.parent}] = 0;
        } else if constexpr (std::is_same_v<T, Introduced>) {
          ++m[{x.introducer, x.learned}];
          ++m[{x.introducer, x.learner}];
          m[{x.learned, x.learner}] = 0;
        }
      },
      e.what);
}

inline Index rename_index(const Index& m, const NameMap& r) {
  if (r.empty()) return m;
  Index out;
  for (const auto& [k, v] : m) {
    out[{lookup(r, k.first), lookup(r, k.second)}] = v;
  }
  return out;
}

}  // namespace detail

struct CorrespondenceOptions {
  ExploreOptions source;
  ExploreOptions encoded;
  // Cap on distinct message indices tracked per source node.
  std::size_t max_indices = 10000;
};

// Every configuration reachable by the encoded program can go on to a
// configuration that is the encoding of some configuration reachable by the
// source, agreeing with it on the source processes.
inline CheckResult check_no_added_behavior(const Configuration& source,
                                           const Configuration& encoded,
                                           const CorrespondenceOptions& opt = {}) {
  StateSpace src = explore(source, opt.source);
  if (!src.complete()) {
    return finish({}, false, "source space exceeded its bounds");
  }
  NameSet top = src.root_domain;
  std::string sep = generated_separator(source.chor);

  // Message indices reachable at each source node.
  detail::Index m0;
  for (const auto& p : top) {
    for (const auto& q : top) {
      if (p != q) m0[{p, q}] = 0;
    }
  }
  std::unordered_set<std::string> images;
  std::set<std::pair<std::size_t, detail::Index>> seen;
  std::deque<std::pair<std::size_t, detail::Index>> queue;
  queue.emplace_back(0, m0);
  seen.insert(queue.front());
  while (!queue.empty()) {
    auto [node, m] = queue.front();
    queue.pop_front();
    if (seen.size() > opt.max_indices * src.nodes.size()) {
      return finish({}, false, "too many message indices");
    }
    const auto& cfg = src.nodes[node].config;
    Chor image;
    try {
      image = encode_body(cfg.chor, source.mode, top, m, sep);
    } catch (const TransformError&) {
      image = nullptr;
    }
    if (image) images.insert(detail::image_key(image, cfg.state, top));
    for (std::size_t oi : src.nodes[node].out) {
      const auto& e = src.edges[oi];
      detail::Index next = m;
      detail::advance_index(next, e.event);
      next = detail::rename_index(next, e.rename);
      auto item = std::make_pair(e.to, std::move(next));
      if (seen.insert(item).second) queue.push_back(std::move(item));
    }
  }

  StateSpace enc = explore(encoded, opt.encoded);
  std::vector<bool> good(enc.nodes.size(), false);
  std::deque<std::size_t> work;
  for (std::size_t i = 0; i < enc.nodes.size(); ++i) {
    const auto& cfg = enc.nodes[i].config;
    if (images.count(detail::image_key(cfg.chor, cfg.state, top))) {
      good[i] = true;
      work.push_back(i);
    }
  }
  std::vector<std::vector<std::size_t>> preds(enc.nodes.size());
  for (const auto& e : enc.edges) preds[e.to].push_back(e.from);
  while (!work.empty()) {
    std::size_t n = work.front();
    work.pop_front();
    for (std::size_t p : preds[n]) {
      if (!good[p]) {
        good[p] = true;
        work.push_back(p);
      }
    }
  }
  // A node that cannot reach a match is a violation only if everything it
  // can reach was explored.
  std::vector<bool> open(enc.nodes.size(), false);
  for (std::size_t i = 0; i < enc.nodes.size(); ++i) {
    if (!enc.nodes[i].expanded && !enc.nodes[i].terminated) {
      open[i] = true;
      work.push_back(i);
    }
  }
  while (!work.empty()) {
    std::size_t n = work.front();
    work.pop_front();
    for (std::size_t p : preds[n]) {
      if (!open[p]) {
        open[p] = true;
        work.push_back(p);
      }
    }
  }
  std::vector<Counterexample> cex;
  bool complete = true;
  std::size_t matched = 0;
  for (std::size_t i = 0; i < enc.nodes.size(); ++i) {
    if (good[i]) {
      ++matched;
      continue;
    }
    if (open[i]) {
      complete = false;
      continue;
    }
    if (cex.size() < 5) {
      cex.push_back({enc.path_to(i),
                     "cannot reach the encoding of any source state: " +
                         pretty_print(enc.nodes[i].config.chor)});
    }
  }
  return finish(std::move(cex), complete,
                std::to_string(src.nodes.size()) + " source nodes, " +
                    std::to_string(enc.nodes.size()) + " encoded nodes, " +
                    std::to_string(matched) + " can reach a source image");
}

}  // namespace chorus
