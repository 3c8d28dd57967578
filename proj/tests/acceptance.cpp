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

// Acceptance suite. Prints one PASS or FAIL line per criterion and exits
// non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"

namespace {

using namespace chorus;
using chorus::testing::count_final_deliveries;
using chorus::testing::drop_final_delivery;
using chorus::testing::terminal_states;

struct Report {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (!pass) detail << "; ";
      detail << what;
      pass = false;
    }
  }
};

const CorpusEntry& bundled(const std::string& name) {
  for (const auto& e : bundled_corpus()) {
    if (e.name == name) return e;
  }
  throw ChorusError("no bundled program " + name);
}

// Static programs without procedures and with at most four interactions:
// the ones whose encodings fit the default depth of 60.
bool in_theorem_subset(const ParsedProgram& p) {
  return !is_dynamic(p.mode) && !has_procedures(p.chor) &&
         interaction_count(p.chor) <= 4;
}

Configuration encoded_config(const CorpusEntry& e) {
  auto prog = parse_entry(e);
  auto src = entry_config(e);
  return initial_config(encode_async(prog.chor, prog.mode),
                        async_target(prog.mode), src.state);
}

//
// 1. Running example
//

void example_fidelity(Report& o) {
  struct Case {
    const char* name;
    const char* expected;
    bool then_branch;
  };
  for (const Case& c : {Case{"buyer", "\"book\"", true},
                        Case{"buyer_mismatch", "\"price\"", false}}) {
    auto cfg = entry_config(bundled(c.name));
    // Every schedule: exhaustive exploration.
    auto space = explore(cfg);
    o.require(space.complete(), std::string(c.name) + " space incomplete");
    auto finals = terminal_states(space, {"a"});
    o.require(finals == std::set<std::string>{std::string("{a=") + c.expected + "}"},
              std::string(c.name) + " terminal states differ");
    for (const auto& e : space.edges) {
      if (const auto* b = std::get_if<Branched>(&e.event.what)) {
        o.require(b->took_then == c.then_branch,
                  std::string(c.name) + " took the wrong branch");
      }
    }
    // And concrete runs under several schedulers.
    std::vector<SchedulerPolicy> policies{SchedulerPolicy::first()};
    for (std::uint64_t s = 1; s <= 20; ++s) {
      policies.push_back(SchedulerPolicy::random(s));
    }
    for (const auto& p : policies) {
      auto r = run(cfg, p, 1000);
      o.require(r.outcome == Outcome::Terminated &&
                    to_string(r.final.state.at("a")) == c.expected,
                std::string(c.name) + " run ended wrongly");
    }
  }
  o.detail << (o.pass ? "equal prices give a=\"book\", different prices give "
                        "a=\"price\" on every schedule"
                      : "");
}

//
// 2. Progress
//

void progress(Report& o) {
  auto corpus = full_corpus(30);
  o.require(corpus.size() >= 25, "corpus has fewer than 25 programs");
  std::size_t nodes = 0;
  for (const auto& e : corpus) {
    auto space = explore(entry_config(e));
    auto r = check_progress(space);
    nodes += space.nodes.size();
    o.require(r.ok(), e.name + ": " + std::string(verdict_name(r.verdict)) +
                          " (" + r.summary + ")");
  }
  if (o.pass) {
    o.detail << corpus.size() << " programs, " << nodes
             << " configurations, no stuck node";
  }
}

//
// 3. Eventual delivery
//

// The program's own start state plus one where all values agree and one
// where they all differ, so that both sides of every conditional run.
std::vector<StateMap> start_states(const CorpusEntry& e) {
  StateMap given = entry_config(e).state;
  StateMap same, distinct;
  long i = 1;
  for (const auto& [p, v] : given) {
    same[p] = Integer(1);
    distinct[p] = Integer(i++);
  }
  return {given, same, distinct};
}

// Every assignment of 0..3 to the program processes.
std::vector<StateMap> value_grid(const CorpusEntry& e) {
  std::vector<StateMap> out{StateMap{}};
  for (const auto& [p, v] : entry_config(e).state) {
    std::vector<StateMap> next;
    for (const auto& partial : out) {
      for (long x = 0; x <= 3; ++x) {
        StateMap s = partial;
        s[p] = Integer(x);
        next.push_back(std::move(s));
      }
    }
    out = std::move(next);
  }
  return out;
}

void eventual_delivery(Report& o) {
  std::size_t programs = 0, mutants = 0, unreachable = 0;
  ExploreOptions depth60{60, 200000, 1};
  for (const auto& e : full_corpus(30)) {
    auto prog = parse_entry(e);
    if (!in_theorem_subset(prog)) continue;
    ++programs;
    Chor enc = encode_async(prog.chor, prog.mode);
    Mode m = async_target(prog.mode);
    auto states = start_states(e);
    for (const auto& st : states) {
      auto space = explore(initial_config(enc, m, st), depth60);
      auto r = check_eventual_delivery(space, space.root_domain);
      o.require(r.verdict == Verdict::Ok,
                e.name + " from " + format_state(st) + ": " +
                    std::string(verdict_name(r.verdict)));
    }
    // Drop each block's final hand-over in turn; some start state must
    // expose it.
    std::size_t blocks = count_final_deliveries(enc);
    for (std::size_t k = 0; k < blocks; ++k) {
      long n = static_cast<long>(k);
      Chor mutant = drop_final_delivery(enc, n);
      auto exposes = [&](const StateMap& st) {
        auto ms = explore(initial_config(mutant, m, st), depth60);
        return check_eventual_delivery(ms, ms.root_domain).verdict ==
               Verdict::Violation;
      };
      bool caught = std::any_of(states.begin(), states.end(), exposes);
      if (!caught) {
        // Branches guarded by arithmetic may need specific values.
        for (const auto& st : value_grid(e)) {
          if ((caught = exposes(st))) break;
        }
      }
      if (!caught) {
        // A hand-over that no run reaches leaves the space untouched; such a
        // mutant is behaviourally identical to the original.
        auto tried = states;
        for (auto& st : value_grid(e)) tried.push_back(std::move(st));
        bool identical = std::all_of(tried.begin(), tried.end(), [&](const StateMap& st) {
          auto a = explore(initial_config(enc, m, st), depth60);
          auto b = explore(initial_config(mutant, m, st), depth60);
          return a.complete() && b.complete() && a.nodes.size() == b.nodes.size() &&
                 a.edges.size() == b.edges.size();
        });
        if (identical) {
          ++unreachable;
          continue;
        }
      }
      ++mutants;
      o.require(caught, e.name + " mutant " + std::to_string(k) + " not caught");
    }
  }
  // The full running example needs 67 steps, so it runs at depth 80.
  {
    auto cfg = encoded_config(bundled("buyer"));
    auto space = explore(cfg, {80, 200000, 1});
    auto r = check_eventual_delivery(space, space.root_domain);
    o.require(r.ok(), "buyer at depth 80: " + std::string(verdict_name(r.verdict)));
  }
  if (o.pass) {
    o.detail << programs << " encoded programs from 3 start states each at "
             << "depth 60 plus the running example at depth 80, " << mutants
             << " mutants all caught, " << unreachable
             << " in branches no run reaches left unchanged behaviour";
  }
}

//
// 4. No added behaviour
//

void no_added_behavior(Report& o) {
  std::size_t programs = 0;
  CorrespondenceOptions opt;
  opt.source = {60, 200000, 1};
  opt.encoded = {60, 200000, 1};
  for (const auto& e : full_corpus(30)) {
    auto prog = parse_entry(e);
    if (!in_theorem_subset(prog)) continue;
    ++programs;
    Chor enc = encode_async(prog.chor, prog.mode);
    for (const auto& st : start_states(e)) {
      auto r = check_no_added_behavior(
          initial_config(prog.chor, prog.mode, st),
          initial_config(enc, async_target(prog.mode), st), opt);
      o.require(r.verdict == Verdict::Ok,
                e.name + " from " + format_state(st) + ": " +
                    std::string(verdict_name(r.verdict)) + " (" + r.summary +
                    ")");
    }
  }
  {
    CorrespondenceOptions deep = opt;
    deep.encoded.depth = 80;
    auto r = check_no_added_behavior(entry_config(bundled("buyer")),
                                     encoded_config(bundled("buyer")), deep);
    o.require(r.ok(), "buyer at depth 80: " + std::string(verdict_name(r.verdict)));
  }
  if (o.pass) {
    o.detail << programs << " programs from 3 start states each plus the "
                            "running example, exact state agreement on "
                            "program processes";
  }
}

//
// 5. Asynchrony witness
//

EventPredicate send_into(const ProcessName& from, const ProcessName& channel) {
  return [=](const TraceEvent& e) {
    const auto* d = std::get_if<ValueDelivered>(&e.what);
    return d && d->sender == from && name_instance_of(d->receiver, channel);
  };
}

void asynchrony(Report& o) {
  auto space = explore(encoded_config(bundled("buyer_lines_1_3")));
  o.require(space.complete(), "space incomplete");
  auto early = can_occur_before(space, send_into("s", "s$b$0"),
                                delivery_between("s$a$0", "a"));
  o.require(early.ok(), "no path sends to b before a has received");
  auto causal = can_occur_before(space, send_into("s", "s$a$0"),
                                 delivery_between("a$s$0", "s"));
  o.require(causal.verdict == Verdict::Violation,
            "s answered a before receiving the title");
  if (o.pass) {
    o.detail << "witness of " << early.counterexamples.at(0).path.size()
             << " steps; reply never precedes the request over "
             << space.nodes.size() << " configurations";
  }
}

//
// 6. FIFO per pair
//

void fifo(Report& o) {
  auto three = explore(encoded_config(bundled("fifo3")));
  auto r = fifo_per_pair(three, three.root_domain);
  o.require(three.complete() && r.ok(), "fifo3: " + std::string(verdict_name(r.verdict)));
  std::set<std::string> orders;
  for (const auto& n : three.nodes) {
    if (n.terminated) orders.insert(to_string(n.config.state.at("q")));
  }
  o.require(orders == std::set<std::string>{"3"}, "fifo3 final value of q");

  auto cross = explore(encoded_config(bundled("cross_pair")));
  o.require(cross.complete(), "cross_pair space incomplete");
  auto cr = fifo_per_pair(cross, cross.root_domain);
  o.require(cr.ok(), "cross_pair fifo");
  // Both messages can be in flight in either order.
  bool sends_pr = can_occur_before(cross, send_into("p", "p$q$0"),
                                   send_into("r", "r$q$0")).ok();
  bool sends_rp = can_occur_before(cross, send_into("r", "r$q$0"),
                                   send_into("p", "p$q$0")).ok();
  o.require(sends_pr && sends_rp, "cross_pair sends do not interleave");
  // Receipt by q in both orders.
  bool recv_pq = can_occur_before(cross, delivery_between("p$q$0", "q"),
                                  delivery_between("r$q$0", "q")).ok();
  bool recv_rq = can_occur_before(cross, delivery_between("r$q$0", "q"),
                                  delivery_between("p$q$0", "q")).ok();
  o.require(recv_pq, "cross_pair: q never receives p's message first");
  o.require(recv_rq,
            "cross_pair: q never receives r's message first (both receipts "
            "involve q, so they cannot be reordered; sends do interleave: " +
                std::string(sends_pr && sends_rp ? "yes" : "no") + ")");
  if (o.pass) {
    o.detail << "1,2,3 delivered in order on all " << three.nodes.size()
             << " configurations; cross-pair receipts occur in both orders";
  }
}

//
// 7. Selection elimination
//

void selection_elimination(Report& o) {
  std::size_t programs = 0;
  for (const auto& e : full_corpus(30)) {
    auto prog = parse_entry(e);
    if (!allows_selection(prog.mode)) continue;
    ++programs;
    auto el = eliminate_selections(prog.chor, prog.mode);
    for (const auto& st : start_states(e)) {
      auto a = explore(initial_config(prog.chor, prog.mode, st));
      auto b = explore(initial_config(el.chor, el.mode, st));
      o.require(a.complete() && b.complete(), e.name + ": space incomplete");
      NameSet names = a.root_domain;
      auto ta = terminal_states(a, names);
      o.require(ta == terminal_states(b, names),
                e.name + " from " + format_state(st) +
                    ": terminal states differ");
    }
  }
  if (o.pass) {
    o.detail << programs << " programs with selections from 3 start states "
                            "each, identical terminal states on program "
                            "processes";
  }
}

//
// 8. Encoding arrows
//

void encoding_arrows(Report& o) {
  std::size_t checked = 0;
  for (const auto& e : full_corpus(30)) {
    auto prog = parse_entry(e);
    auto enc = encode_async(prog.chor, prog.mode);
    Mode target = prog.mode == Mode::MC || prog.mode == Mode::DMC ? Mode::DMC
                                                                  : Mode::DCC;
    o.require(is_valid_in(enc, target), e.name + ": encoding leaves its calculus");
    auto cfg = initial_config(enc, target);
    auto v = check_wellformed(enc, cfg.graph);
    o.require(v.empty(), e.name + ": " + std::to_string(v.size()) +
                             " connectivity violations");
    if (allows_selection(prog.mode)) {
      auto el = eliminate_selections(prog.chor, prog.mode);
      Mode want = prog.mode == Mode::CC ? Mode::MC : Mode::DMC;
      o.require(el.mode == want && is_valid_in(el.chor, want),
                e.name + ": selection elimination leaves its calculus");
    }
    ++checked;
  }
  if (o.pass) {
    o.detail << checked << " programs: MC->DMC, CC->DCC, DMC->DMC, DCC->DCC, "
                           "CC->MC, DCC->DMC, all encodings well connected";
  }
}

//
// 9. Reduction rules
//

struct RuleCase {
  const char* rule;
  const char* program;
  Mode mode;
  const char* state;
  // Empty edge list means the complete graph.
  std::vector<std::pair<const char*, const char*>> edges;
  bool empty_graph;
  // Expected redex kinds, in order; empty means blocked.
  std::vector<RedexKind> enabled;
  std::function<bool(const Configuration&, const Configuration&)> after;
};

void rules(Report& o) {
  using K = RedexKind;
  auto same_sg = [](const Configuration& a, const Configuration& b) {
    return a.state == b.state && a.graph == b.graph;
  };
  std::vector<RuleCase> cases = {
      {"Com", "a.* + 1 -> b", Mode::MC, "a=1", {}, false, {K::Com},
       [](const auto&, const auto& b) { return b.state.at("b") == Value(Integer(2)); }},
      {"Com blocked without mutual knowledge", "a.1 -> b", Mode::DCC, "",
       {{"a", "b"}}, false, {}, nullptr},
      {"Sel", "a -> b[l]", Mode::DCC, "a=1", {}, false, {K::Sel}, same_sg},
      {"Sel blocked without mutual knowledge", "a -> b[l]", Mode::DCC, "",
       {{"b", "a"}}, false, {}, nullptr},
      {"Cond then", "if a <-> b then { 0 } else { a.1 -> b }", Mode::CC,
       "a=1,b=1", {}, false, {K::CondThen},
       [](const auto&, const auto& b) { return is_terminated(b.chor); }},
      {"Cond else", "if a <-> b then { 0 } else { a.1 -> b }", Mode::CC,
       "a=1,b=2", {}, false, {K::CondElse},
       [](const auto&, const auto& b) { return !is_terminated(b.chor); }},
      {"Start", "p start q; 0", Mode::DMC, "", {}, false, {K::Start},
       [](const auto& a, const auto& b) {
         if (b.state.size() != a.state.size() + 1) return false;
         for (const auto& [n, v] : b.state) {
           if (a.state.count(n)) continue;
           return v == Value(Bottom{}) && b.graph.mutually_knows("p", n);
         }
         return false;
       }},
      {"Intro", "p.r -> q", Mode::DMC, "",
       {{"p", "q"}, {"q", "p"}, {"p", "r"}}, false, {K::Intro},
       [](const auto& a, const auto& b) {
         return b.graph.size() == a.graph.size() + 1 && b.graph.knows("q", "r") &&
                a.state == b.state;
       }},
      {"Intro blocked when sender does not know payload", "p.r -> q", Mode::DMC,
       "", {{"p", "q"}, {"q", "p"}}, false, {}, nullptr},
      {"Eta-Eta swap", "a.1 -> b; c.1 -> d", Mode::MC, "", {}, false,
       {K::Com, K::Com}, nullptr},
      {"Eta-Eta blocked on shared process", "a.1 -> b; b.1 -> c", Mode::MC, "",
       {}, false, {K::Com}, nullptr},
      {"Unfold", "def X = { a.1 -> b } in X", Mode::MC, "", {}, false,
       {K::Unfold}, nullptr},
      {"Unfold blocked by earlier action on same process",
       "def X = { b.1 -> c } in a.1 -> b; X", Mode::MC, "", {}, false, {K::Com},
       nullptr},
      {"Ctx under definition", "def X = { 0 } in a.1 -> b", Mode::MC, "", {},
       false, {K::Com},
       [](const auto&, const auto& b) {
         return std::holds_alternative<Def>(b.chor->node);
       }},
  };
  for (const auto& c : cases) {
    Chor chor = parse(c.program, c.mode);
    std::optional<ConnectionGraph> g;
    if (!c.edges.empty()) {
      g.emplace();
      for (auto [x, y] : c.edges) g->add(x, y);
    }
    auto cfg = initial_config(chor, c.mode, parse_state_overrides(c.state), g);
    auto rs = enabled_redexes(cfg);
    std::vector<RedexKind> got;
    for (const auto& r : rs) got.push_back(r.kind);
    o.require(got == c.enabled, std::string(c.rule) + ": wrong enabled set");
    if (c.after && !rs.empty()) {
      auto [next, ev] = apply_redex(cfg, rs.front());
      o.require(c.after(cfg, next), std::string(c.rule) + ": wrong effect");
    }
  }
  // Runtime failures of the rules.
  try {
    auto cfg = initial_config(parse("a.* + 1 -> b", Mode::MC), Mode::MC);
    apply_redex(cfg, enabled_redexes(cfg).at(0));
    o.require(false, "Com on undefined value did not fail");
  } catch (const RuntimeError&) {
  }
  if (o.pass) o.detail << cases.size() << " rule cases plus evaluation failure";
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    void (*body)(Report&);
  };
  const Criterion criteria[] = {
      {"1 running example fidelity", 1, example_fidelity},
      {"2 progress over corpus", 60, progress},
      {"3 eventual delivery", 300, eventual_delivery},
      {"4 no added behaviour", 600, no_added_behavior},
      {"5 asynchrony witness", 60, asynchrony},
      {"6 fifo per pair", 120, fifo},
      {"7 selection elimination", 120, selection_elimination},
      {"8 encoding arrows", 60, encoding_arrows},
      {"9 reduction rules", 60, rules},
  };
  bool all = true;
  for (const auto& c : criteria) {
    Report o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      c.body(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      o.require(false, "took longer than " + std::to_string(c.budget_s) + " s");
    }
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.3fs", secs);
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << c.name << "  [" << timing
              << "]  " << o.detail.str() << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
