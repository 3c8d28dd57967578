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

#include <gtest/gtest.h>

#include "test_support.hpp"

namespace chorus {
namespace {

using testing::drop_final_delivery;
using testing::terminal_states;

Configuration config(const std::string& src, Mode mode) {
  return initial_config(parse(src, mode), mode);
}

Configuration encoded(const std::string& src, Mode mode) {
  Chor c = parse(src, mode);
  return initial_config(encode_async(c, mode), async_target(mode));
}

TEST(Explore, NilIsASingleNode) {
  auto s = explore(initial_config(nil(), Mode::MC), {10, 100});
  EXPECT_EQ(s.nodes.size(), 1u);
  EXPECT_EQ(s.edges.size(), 0u);
  EXPECT_TRUE(s.complete());
}

TEST(Explore, IndependentCommunicationsFormADiamond) {
  auto s = explore(config("a.1 -> b; c.2 -> d; 0", Mode::MC));
  EXPECT_EQ(s.nodes.size(), 4u);
  EXPECT_EQ(s.edges.size(), 4u);
  EXPECT_TRUE(s.complete());
}

TEST(Explore, EncodedSingleMessageAlwaysArrives) {
  auto s = explore(encoded("a.1 -> b; 0", Mode::MC), {100, 1000});
  ASSERT_TRUE(s.complete());
  EXPECT_EQ(terminal_states(s, {"b"}), std::set<std::string>{"{b=1}"});
}

TEST(Explore, BoundsAreReported) {
  auto counter = initial_config(
      parse("def X = { a.* + 1 -> b; b.* -> a; X } in X", Mode::MC), Mode::MC,
      parse_state_overrides("a=0"));
  auto s = explore(counter, {5, 1000});
  EXPECT_FALSE(s.complete());
  auto t = explore(encoded("a.1 -> b; b.2 -> a", Mode::MC), {100, 10});
  EXPECT_FALSE(t.complete());
  EXPECT_LE(t.nodes.size(), 10u);
}

TEST(Explore, RecursionClosesIntoACycle) {
  auto s = explore(config("def X(p, q) = { p.1 -> q; X(q, p) } in X(a, b)",
                          Mode::DMC),
                   {200, 5000});
  EXPECT_TRUE(s.complete());
  EXPECT_LT(s.nodes.size(), 10u);
}

TEST(Explore, SpawnedWorkersNeedFreshConfigurations) {
  // Every round leaves one more process behind, so the space keeps growing
  // until the bound.
  auto s = explore(config("def X(p) = { p start q; p.1 -> q; X(q) } in X(a)",
                          Mode::DMC),
                   {30, 5000});
  EXPECT_FALSE(s.complete());
  EXPECT_TRUE(check_progress(s).verdict == Verdict::Inconclusive);
}

TEST(Explore, IndependentOfWorkerCount) {
  auto cfg = encoded("a.1 -> b; c.2 -> d; b.* -> c", Mode::MC);
  auto one = explore(cfg, {100, 100000, 1});
  auto four = explore(cfg, {100, 100000, 4});
  ASSERT_EQ(one.nodes.size(), four.nodes.size());
  ASSERT_EQ(one.edges.size(), four.edges.size());
  for (std::size_t i = 0; i < one.nodes.size(); ++i) {
    EXPECT_TRUE(same_observables(one.nodes[i].config, four.nodes[i].config));
  }
  for (std::size_t i = 0; i < one.edges.size(); ++i) {
    EXPECT_EQ(one.edges[i].from, four.edges[i].from);
    EXPECT_EQ(one.edges[i].to, four.edges[i].to);
    EXPECT_EQ(one.edges[i].event.redex.path, four.edges[i].event.redex.path);
  }
}

TEST(Canonicalize, MintedNamesDoNotMatter) {
  Chor c = parse("a.1 -> q$7; 0", Mode::DMC);
  Configuration x = initial_config(parse("a.1 -> b", Mode::DMC), Mode::DMC);
  Configuration y = x;
  x.chor = c;
  x.state["q$7"] = Bottom{};
  x.graph.add_mutual("a", "q$7");
  y.chor = parse("a.1 -> q$12; 0", Mode::DMC);
  y.state["q$12"] = Bottom{};
  y.graph.add_mutual("a", "q$12");
  NameSet root{"a", "b"};
  EXPECT_EQ(canonicalize(x, root).key, canonicalize(y, root).key);
  y.state["b"] = Integer(3);
  EXPECT_NE(canonicalize(x, root).key, canonicalize(y, root).key);
}

TEST(Progress, RunningExampleNeverGetsStuck) {
  auto e = parse_entry(bundled_corpus().at(0));
  auto r = check_progress(explore(initial_config(e.chor, e.mode)));
  EXPECT_TRUE(r.ok()) << r.summary;
}

TEST(Progress, UnconnectedDynamicProgramIsStuck) {
  auto cfg = initial_config(parse("p.1 -> q; 0", Mode::DCC), Mode::DCC, {},
                            ConnectionGraph{});
  auto r = check_progress(explore(cfg));
  EXPECT_EQ(r.verdict, Verdict::Violation);
  EXPECT_EQ(r.counterexamples.size(), 1u);
}

TEST(Progress, EncodedRunningExample) {
  auto e = parse_entry(bundled_corpus().at(0));
  auto cfg = initial_config(encode_async(e.chor, e.mode), async_target(e.mode));
  auto r = check_progress(explore(cfg, {100, 200000}));
  EXPECT_TRUE(r.ok()) << r.summary;
}

TEST(Progress, EvaluationErrorCountsAsStuck) {
  auto r = check_progress(explore(config("a.* + 1 -> b", Mode::MC)));
  EXPECT_EQ(r.verdict, Verdict::Violation);
}

TEST(Delivery, NoCommunicationIsVacuous) {
  auto cfg = encoded("0", Mode::MC);
  auto s = explore(cfg);
  EXPECT_TRUE(check_eventual_delivery(s, s.root_domain).ok());
}

TEST(Delivery, EncodedProgramDelivers) {
  auto s = explore(encoded("a.1 -> b; b.* -> c; c.* + 1 -> a", Mode::MC));
  auto r = check_eventual_delivery(s, s.root_domain);
  EXPECT_TRUE(r.ok()) << r.summary;
}

TEST(Delivery, MutationIsDetected) {
  Chor enc = encode_async(parse("a.1 -> b; b.* -> a", Mode::MC), Mode::MC);
  ASSERT_EQ(testing::count_final_deliveries(enc), 2u);
  for (long k = 0; k < 2; ++k) {
    long n = k;
    Chor mutant = drop_final_delivery(enc, n);
    auto s = explore(initial_config(mutant, Mode::DMC));
    auto r = check_eventual_delivery(s, s.root_domain);
    EXPECT_EQ(r.verdict, Verdict::Violation) << k;
    EXPECT_FALSE(r.counterexamples.empty());
  }
}

TEST(Delivery, InconclusiveWhenBoundsHit) {
  auto s = explore(encoded("a.1 -> b; b.2 -> a", Mode::MC), {10, 100000});
  EXPECT_EQ(check_eventual_delivery(s, s.root_domain).verdict,
            Verdict::Inconclusive);
}

TEST(Fifo, SamePairKeepsOrder) {
  auto s = explore(encoded("p.1 -> q; p.2 -> q; 0", Mode::MC));
  auto r = fifo_per_pair(s, s.root_domain);
  EXPECT_TRUE(r.ok()) << r.summary;
}

TEST(Fifo, SingleMessageIsTrivial) {
  auto s = explore(encoded("p.1 -> q", Mode::MC));
  EXPECT_TRUE(fifo_per_pair(s, s.root_domain).ok());
}

TEST(Fifo, CrossPairSendsInterleave) {
  auto s = explore(encoded("p.1 -> q; r.2 -> q; 0", Mode::MC));
  ASSERT_TRUE(s.complete());
  auto p_send = [](const TraceEvent& e) {
    auto d = std::get_if<ValueDelivered>(&e.what);
    return d && d->sender == "p" && name_instance_of(d->receiver, "p$q$0");
  };
  auto r_send = [](const TraceEvent& e) {
    auto d = std::get_if<ValueDelivered>(&e.what);
    return d && d->sender == "r" && name_instance_of(d->receiver, "r$q$0");
  };
  EXPECT_TRUE(can_occur_before(s, p_send, r_send).ok());
  EXPECT_TRUE(can_occur_before(s, r_send, p_send).ok());
  EXPECT_TRUE(fifo_per_pair(s, s.root_domain).ok());
}

TEST(NoAddedBehavior, SingleMessage) {
  auto r = check_no_added_behavior(config("a.1 -> b; 0", Mode::MC),
                                   encoded("a.1 -> b; 0", Mode::MC));
  EXPECT_TRUE(r.ok()) << r.summary;
}

TEST(NoAddedBehavior, Nil) {
  auto r = check_no_added_behavior(config("0", Mode::MC), encoded("0", Mode::MC));
  EXPECT_TRUE(r.ok()) << r.summary;
}

TEST(NoAddedBehavior, WrongEncodingIsCaught) {
  // Pair a program with the encoding of a different one.
  auto r = check_no_added_behavior(config("a.1 -> b; 0", Mode::MC),
                                   encoded("a.2 -> b; 0", Mode::MC));
  EXPECT_EQ(r.verdict, Verdict::Violation);
}

TEST(NoAddedBehavior, ConditionalProgram) {
  const char* src =
      "a.1 -> b; if b <-> a then { b.2 -> a } else { a.3 -> b }";
  auto r = check_no_added_behavior(config(src, Mode::MC), encoded(src, Mode::MC));
  EXPECT_TRUE(r.ok()) << r.summary;
}

TEST(Asynchrony, LaterSendBeforeEarlierDelivery) {
  auto s = explore(encoded("a.title -> s; s.price -> a; s.price -> b", Mode::CC));
  ASSERT_TRUE(s.complete());
  auto send_to_b = [](const TraceEvent& e) {
    auto d = std::get_if<ValueDelivered>(&e.what);
    return d && d->sender == "s" && name_instance_of(d->receiver, "s$b$0");
  };
  auto witness = can_occur_before(s, send_to_b, delivery_between("s$a$0", "a"));
  EXPECT_TRUE(witness.ok());
  // s cannot answer a before hearing from a.
  auto send_to_a = [](const TraceEvent& e) {
    auto d = std::get_if<ValueDelivered>(&e.what);
    return d && d->sender == "s" && name_instance_of(d->receiver, "s$a$0");
  };
  EXPECT_EQ(can_occur_before(s, send_to_a, delivery_between("a$s$0", "s")).verdict,
            Verdict::Violation);
}

}  // namespace
}  // namespace chorus
