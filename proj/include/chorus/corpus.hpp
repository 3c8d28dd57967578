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

// The bundled example programs plus a seeded generator of small random
// MC/CC programs. The hand-written entries are mirrored as files under
// corpus/ in the source tree.

#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "chorus/parser.hpp"
#include "chorus/runtime.hpp"
#include "chorus/syntax.hpp"

namespace chorus {

struct CorpusEntry {
  std::string name;
  std::string source;
  // False for programs that only exist to exercise error paths.
  bool runnable = true;
  // Initial values, in `--state` syntax.
  std::string state;
};

inline ParsedProgram parse_entry(const CorpusEntry& e) {
  return parse_program(e.source);
}

inline Configuration entry_config(const CorpusEntry& e) {
  auto prog = parse_entry(e);
  return initial_config(prog.chor, prog.mode, parse_state_overrides(e.state));
}

inline const std::vector<CorpusEntry>& bundled_corpus() {
  static const std::vector<CorpusEntry> entries = {
      {"buyer",
       "// Alice buys a book from a seller through her bank.\n"
       "#mode CC\n"
       "a.title -> s;\n"
       "s.price -> a;\n"
       "s.price -> b;\n"
       "if b <-> a then {\n"
       "  b -> s[ok]; b -> a[ok];\n"
       "  s.book -> a\n"
       "} else {\n"
       "  b -> s[ko]; b -> a[ko]\n"
       "}\n"},
      {"buyer_mismatch",
       "// As buyer, but the bank is quoted a different amount.\n"
       "#mode CC\n"
       "a.title -> s;\n"
       "s.price -> a;\n"
       "s.quote -> b;\n"
       "if b <-> a then {\n"
       "  b -> s[ok]; b -> a[ok];\n"
       "  s.book -> a\n"
       "} else {\n"
       "  b -> s[ko]; b -> a[ko]\n"
       "}\n"},
      {"buyer_lines_1_3",
       "#mode CC\n"
       "a.title -> s;\n"
       "s.price -> a;\n"
       "s.price -> b\n"},
      {"fifo3", "#mode MC\np.1 -> q; p.2 -> q; p.3 -> q; 0\n"},
      {"cross_pair", "#mode MC\np.1 -> q; r.2 -> q; 0\n"},
      {"single", "#mode MC\na.1 -> b; 0\n"},
      {"diamond", "#mode MC\na.1 -> b; c.2 -> d; 0\n"},
      {"loop", "#mode MC\ndef X = { p.1 -> q; X } in X\n"},
      {"relay",
       "// Arithmetic on the way through.\n"
       "#mode MC\n"
       "a.4 -> b;\n"
       "b.* + 1 -> c;\n"
       "c.* - 2 -> a;\n"
       "if a <-> b then { a.0 -> c } else { a.* -> c }\n"},
      {"spawn",
       "#mode DMC\n"
       "p start q;\n"
       "p.5 -> q;\n"
       "q.* + 1 -> p\n"},
      {"introduce",
       "// p starts two workers and connects them.\n"
       "#mode DMC\n"
       "p start q;\n"
       "p start r;\n"
       "p: q <-> r;\n"
       "q.5 -> r;\n"
       "r.* -> p\n"},
      {"worker_choice",
       "#mode DCC\n"
       "p start w;\n"
       "p.1 -> w;\n"
       "if w <-> p then { w -> p[same] } else { w -> p[diff] }\n"},
      {"ping_pong",
       "// Roles swap on every round.\n"
       "#mode DMC\n"
       "def X(p, q) = { p.1 -> q; X(q, p) } in X(a, b)\n"},
      {"bad_mode",
       "// start is not part of the minimal calculus.\n"
       "#mode MC\n"
       "p start q;\n"
       "p: q <-> r;\n"
       "0\n",
       false},
  };
  return entries;
}

namespace detail {

// Communications, selections and conditionals on the longest path.
inline std::size_t max_interactions(const Chor& c) {
  return std::visit(
      [](const auto& x) -> std::size_t {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Prefix>) {
          bool counted = !std::holds_alternative<Start>(x.eta);
          return (counted ? 1 : 0) + max_interactions(x.cont);
        } else if constexpr (std::is_same_v<T, Cond>) {
          return 1 + std::max(max_interactions(x.then_branch),
                              max_interactions(x.else_branch));
        } else if constexpr (std::is_same_v<T, Def>) {
          return max_interactions(x.body) + max_interactions(x.cont);
        } else {
          return 0;
        }
      },
      c->node);
}

}  // namespace detail

inline std::size_t interaction_count(const Chor& c) {
  return detail::max_interactions(c);
}

inline bool has_procedures(const Chor& c) {
  bool found = false;
  std::function<void(const Chor&)> walk = [&](const Chor& n) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Prefix>) {
            walk(x.cont);
          } else if constexpr (std::is_same_v<T, Cond>) {
            walk(x.then_branch);
            walk(x.else_branch);
          } else if constexpr (std::is_same_v<T, Def>) {
            found = true;
          }
        },
        n->node);
  };
  walk(c);
  return found;
}

// Small random MC/CC programs: at most 4 processes and 6 interactions, at
// most one recursive procedure, no arithmetic inside loops. Programs with 4
// processes are kept to at most 3 interactions so their encodings finish
// within 60 steps.
inline std::vector<CorpusEntry> generated_corpus(std::size_t count,
                                                 std::uint64_t seed = 7) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };
  const std::vector<std::string> all = {"p", "q", "r", "s"};
  const std::vector<std::string> labels = {"left", "right"};
  std::vector<CorpusEntry> out;
  for (std::size_t i = 0; i < count; ++i) {
    bool cc = i % 2 == 1;
    bool recursive = i % 5 == 4;
    std::size_t nprocs = 2 + pick(3);
    std::size_t max_actions = nprocs == 4 ? 3 : 6;
    std::size_t budget = 1 + pick(recursive ? max_actions - 1 : max_actions);
    std::vector<std::string> procs(all.begin(), all.begin() + nprocs);
    auto two = [&] {
      std::size_t a = pick(nprocs), b = pick(nprocs - 1);
      if (b >= a) ++b;
      return std::make_pair(procs[a], procs[b]);
    };
    // A block ending in a prefix still needs its `0`.
    auto close = [](const std::string& b) {
      return b.empty() || b.back() == ' ' ? b + "0" : b;
    };
    // Conditionals end a block, so a prefix that must be followed by a
    // call is built with `tail_free` set.
    std::function<std::string(std::size_t&, bool, bool)> block =
        [&](std::size_t& left, bool in_loop, bool tail_free) -> std::string {
      std::string s;
      while (left > 0) {
        std::size_t roll = pick(10);
        auto [x, y] = two();
        if (roll < 6 || left < 2 || (tail_free && !cc)) {
          --left;
          std::string e;
          switch (in_loop ? pick(2) : pick(4)) {
            case 0: e = std::to_string(pick(3)); break;
            case 1: e = "*"; break;
            case 2: e = "* + " + std::to_string(1 + pick(2)); break;
            default: e = "* - 1"; break;
          }
          s += x + "." + e + " -> " + y + "; ";
        } else if ((roll < 8 && cc) || (tail_free && cc)) {
          --left;
          s += x + " -> " + y + "[" + labels[pick(2)] + "]; ";
        } else {
          // Under CC each branch opens with a selection.
          left -= cc ? 2 : 1;
          std::size_t t = left / 2, f = left - t;
          left = 0;
          std::string then_b = block(t, in_loop, false);
          std::string else_b = block(f, in_loop, false);
          if (cc) {
            // Tell the other party which way the choice went.
            then_b = x + " -> " + y + "[left]; " + then_b;
            else_b = x + " -> " + y + "[right]; " + else_b;
          }
          s += "if " + x + " <-> " + y + " then { " + close(then_b) +
               " } else { " + close(else_b) + " }";
          return s;
        }
      }
      return s;
    };
    std::string body;
    if (recursive) {
      std::size_t inner = std::max<std::size_t>(1, budget / 2);
      std::size_t outer = budget > inner ? budget - inner : 0;
      auto [x, y] = two();
      std::string loop_body = block(inner, true, true);
      std::string pre = block(outer, false, true);
      // Exit when the two values agree; otherwise go round again.
      body = "def X = { " + loop_body + "if " + x + " <-> " + y +
             " then { 0 } else { X } } in " + pre + "X";
    } else {
      body = close(block(budget, false, false));
    }
    // Small integer start values keep arithmetic defined.
    std::string state;
    auto chor = parse(body, cc ? Mode::CC : Mode::MC);
    for (const auto& p : free_names(chor)) {
      if (!state.empty()) state += ",";
      state += p + "=" + std::to_string(1 + pick(3));
    }
    out.push_back({"gen" + std::to_string(i),
                   std::string("#mode ") + (cc ? "CC" : "MC") + "\n" + body +
                       "\n",
                   true, state});
  }
  return out;
}

// Bundled runnable programs followed by enough generated ones to reach
// `total` entries.
inline std::vector<CorpusEntry> full_corpus(std::size_t total = 30) {
  std::vector<CorpusEntry> out;
  for (const auto& e : bundled_corpus()) {
    if (e.runnable) out.push_back(e);
  }
  if (out.size() < total) {
    auto gen = generated_corpus(total - out.size());
    out.insert(out.end(), gen.begin(), gen.end());
  }
  return out;
}

}  // namespace chorus
