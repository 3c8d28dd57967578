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

#include <fstream>
#include <iterator>

#include "chorus/chorus.hpp"

namespace chorus {
namespace {

TEST(Corpus, FilesMatchBundledPrograms) {
  for (const auto& e : bundled_corpus()) {
    std::ifstream in(std::string(CHORUS_SOURCE_DIR) + "/corpus/" + e.name + ".chor");
    ASSERT_TRUE(in) << e.name;
    std::string text{std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>()};
    EXPECT_EQ(text, e.source) << e.name;
  }
}

TEST(Corpus, RunnableEntriesParseAndBadModeDoesNot) {
  for (const auto& e : bundled_corpus()) {
    if (e.runnable) {
      EXPECT_NO_THROW(parse_entry(e)) << e.name;
    } else {
      EXPECT_THROW(parse_entry(e), ModeError) << e.name;
    }
  }
}

TEST(Corpus, AtLeastTwentyFivePrograms) {
  EXPECT_GE(full_corpus().size(), 25u);
}

TEST(Generator, Deterministic) {
  auto a = generated_corpus(12);
  auto b = generated_corpus(12);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].source, b[i].source);
    EXPECT_EQ(a[i].state, b[i].state);
  }
  EXPECT_NE(generated_corpus(12, 99)[0].source + generated_corpus(12, 99)[1].source,
            a[0].source + a[1].source);
}

TEST(Generator, RespectsShapeLimits) {
  std::size_t recursive = 0, cc = 0;
  for (const auto& e : generated_corpus(40)) {
    auto prog = parse_entry(e);
    EXPECT_TRUE(prog.mode == Mode::MC || prog.mode == Mode::CC) << e.name;
    EXPECT_LE(free_names(prog.chor).size(), 4u) << e.name;
    EXPECT_LE(interaction_count(prog.chor), 6u) << e.source;
    if (has_procedures(prog.chor)) ++recursive;
    if (prog.mode == Mode::CC) ++cc;
    EXPECT_NO_THROW(entry_config(e)) << e.name;
  }
  EXPECT_GT(recursive, 0u);
  EXPECT_GT(cc, 0u);
}

TEST(Generator, ProgramsRunWithoutErrors) {
  for (const auto& e : generated_corpus(40)) {
    auto r = run(entry_config(e), SchedulerPolicy::random(1), 200);
    EXPECT_NE(r.outcome, Outcome::Stuck) << e.source;
  }
}

}  // namespace
}  // namespace chorus
