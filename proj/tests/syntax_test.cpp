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

#include "chorus/parser.hpp"
#include "chorus/printer.hpp"
#include "chorus/syntax.hpp"

namespace chorus {
namespace {

TEST(Parser, CommunicationChain) {
  Chor c = parse("a.5 -> b; b.* + 1 -> c; 0", Mode::MC);
  Chor want = sequence({com("a", int_lit(5), "b"),
                        com("b", bin_op(BinOpKind::Add, self_ref(), int_lit(1)),
                            "c")},
                       nil());
  EXPECT_TRUE(chor_equal(c, want)) << pretty_print(c);
}

TEST(Parser, TrailingNilIsOptional) {
  EXPECT_TRUE(chor_equal(parse("a.1 -> b", Mode::MC),
                         parse("a.1 -> b; 0", Mode::MC)));
}

TEST(Parser, BareIdentifierIsAtomInStaticModes) {
  Chor c = parse("a.title -> s", Mode::CC);
  EXPECT_TRUE(chor_equal(c, prefix(com("a", atom_lit("title"), "s"), nil())));
}

TEST(Parser, BareIdentifierIsNameInDynamicModes) {
  Chor c = parse("p.q -> r", Mode::DMC);
  const auto& pre = std::get<Prefix>(c->node);
  const auto& m = std::get<Com>(pre.eta);
  ASSERT_NE(intro_payload(m), nullptr);
  EXPECT_EQ(*intro_payload(m), "q");
}

TEST(Parser, QuotedAtomStaysAtomInDynamicModes) {
  Chor c = parse("p.\"q\" -> r", Mode::DMC);
  const auto& m = std::get<Com>(std::get<Prefix>(c->node).eta);
  EXPECT_EQ(intro_payload(m), nullptr);
}

TEST(Parser, TellExpandsToTwoIntroductions) {
  Chor c = parse("p start q; p start r; p: q <-> r", Mode::DMC);
  Chor want = sequence({start("p", "q"), start("p", "r"),
                        com("p", name_lit("q"), "r"),
                        com("p", name_lit("r"), "q")},
                       nil());
  EXPECT_TRUE(chor_equal(c, want)) << pretty_print(c);
}

TEST(Parser, ConditionalAndSelection) {
  Chor c = parse("if b <-> a then { b -> s[ok] } else { b -> s[ko] }", Mode::CC);
  Chor want = cond("b", "a", prefix(sel("b", "s", "ok"), nil()),
                   prefix(sel("b", "s", "ko"), nil()));
  EXPECT_TRUE(chor_equal(c, want));
}

TEST(Parser, DefinitionsWithParameters) {
  Chor c = parse("def X(p, q) = { p.1 -> q; X(q, p) } in X(a, b)", Mode::DMC);
  const auto& d = std::get<Def>(c->node);
  EXPECT_EQ(d.name, "X");
  EXPECT_EQ(d.params, (std::vector<ProcessName>{"p", "q"}));
  EXPECT_TRUE(chor_equal(d.cont, call("X", {"a", "b"})));
}

TEST(Parser, ModePragma) {
  auto prog = parse_program("// comment\n#mode CC\na -> b[l]\n");
  EXPECT_EQ(prog.mode, Mode::CC);
  EXPECT_EQ(parse_program("a.1 -> b").mode, Mode::DCC);
  EXPECT_EQ(parse_program("#mode CC\na.1 -> b", Mode::MC).mode, Mode::MC);
}

TEST(Parser, ErrorsCarryPosition) {
  try {
    parse("a.1 -> b;\n  c -> ", Mode::CC);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_GT(e.column(), 1u);
  }
}

TEST(Parser, RejectsSelfCommunication) {
  EXPECT_THROW(parse("a.1 -> a", Mode::MC), ChorusError);
}

TEST(Validation, ModeRestrictions) {
  EXPECT_THROW(parse("a -> b[l]", Mode::MC), ModeError);
  EXPECT_THROW(parse("a start b", Mode::CC), ModeError);
  EXPECT_THROW(parse("a start b; a -> b[l]", Mode::DMC), ModeError);
  EXPECT_NO_THROW(parse("a start b; a -> b[l]", Mode::DCC));
  EXPECT_THROW(parse_program("#mode MC\np start q"), ModeError);
}

TEST(Validation, CallArity) {
  EXPECT_THROW(parse("def X(p) = { 0 } in X(a, b)", Mode::DMC), ChorusError);
  EXPECT_THROW(parse("Y", Mode::MC), ChorusError);
}

TEST(Names, FreeNamesExcludeStartedProcesses) {
  Chor c = parse("p start q; p.1 -> q; q.* -> r", Mode::DMC);
  EXPECT_EQ(free_names(c), (NameSet{"p", "r"}));
  EXPECT_EQ(pn(c), (NameSet{"p", "q", "r"}));
}

TEST(Names, FreeNamesOfProcedures) {
  Chor c = parse("def X(p, q) = { p.1 -> q; X(q, p) } in X(a, b)", Mode::DMC);
  EXPECT_EQ(free_names(c), (NameSet{"a", "b"}));
}

TEST(Substitution, ReplacesFreeOccurrences) {
  Chor c = parse("p.* -> q; q.p -> r", Mode::DMC);
  Chor s = substitute(c, {{"p", "x"}});
  EXPECT_TRUE(chor_equal(s, parse("x.* -> q; q.x -> r", Mode::DMC)))
      << pretty_print(s);
}

TEST(Substitution, AvoidsCapture) {
  // Substituting q := r under a binder for r must rename the binder.
  Chor c = parse("p start r; p.q -> r", Mode::DMC);
  Chor s = substitute(c, {{"q", "r"}});
  const auto& pre = std::get<Prefix>(s->node);
  const auto& st = std::get<Start>(pre.eta);
  EXPECT_NE(st.child, "r");
  const auto& next = std::get<Prefix>(pre.cont->node);
  const auto& m = std::get<Com>(next.eta);
  EXPECT_EQ(m.receiver, st.child);
  EXPECT_EQ(*intro_payload(m), "r");
}

TEST(Substitution, StopsAtBinder) {
  Chor c = parse("p start q; p.1 -> q", Mode::DMC);
  Chor s = substitute(c, {{"q", "z"}});
  EXPECT_TRUE(chor_equal(s, c));
}

TEST(Printer, RoundTripsEveryConstruct) {
  const char* programs[] = {
      "a.5 -> b; b.* - 2 -> c; 0",
      "a.title -> s; if b <-> a then { b -> s[ok]; 0 } else { 0 }",
      "p start q; p: q <-> r; q.\"x y\" -> r",
      "def X(p, q) = { p.1 -> q; X(q, p) } in X(a, b)",
      "a.-3 -> b",
      "a$b$0.* -> b",
  };
  for (const char* src : programs) {
    Chor c = parse(src, Mode::DCC);
    for (auto style : {PrintStyle::Compact, PrintStyle::Indented}) {
      std::string text = pretty_print(c, style);
      Chor back = parse(text, Mode::DCC);
      EXPECT_TRUE(chor_equal(c, back)) << src << "\nprinted as\n" << text;
    }
  }
}

TEST(Printer, ChorFileKeepsMode) {
  Chor c = parse("a.1 -> b", Mode::MC);
  auto prog = parse_program(to_chor_file(c, Mode::MC));
  EXPECT_EQ(prog.mode, Mode::MC);
  EXPECT_TRUE(chor_equal(prog.chor, c));
}

TEST(Printer, AstDump) {
  std::string dump =
      dump_ast(parse("if b <-> a then { b -> s[ok] } else { 0 }", Mode::CC));
  EXPECT_NE(dump.find("Cond b <-> a"), std::string::npos) << dump;
  EXPECT_NE(dump.find("Sel b -> s[ok]"), std::string::npos) << dump;
}

TEST(Size, CountsNodes) {
  EXPECT_EQ(size(nil()), 1u);
  EXPECT_EQ(size(parse("a.1 -> b; 0", Mode::MC)), 2u);
}

}  // namespace
}  // namespace chorus
