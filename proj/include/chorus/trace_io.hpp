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

// Trace serialisation and replay.
//
// Text traces have one line per step:
//
//   STEP <n> <kind> <sender> <receiver> <payload> @<path>
//
// where the three middle fields are `-` when not applicable. JSON traces
// have one object per step with the same fields, followed by a line
// holding the final configuration, which `replay` checks against.

#pragma once

#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "chorus/parser.hpp"
#include "chorus/printer.hpp"
#include "chorus/runtime.hpp"
#include "chorus/semantics.hpp"

namespace chorus {

struct EventFields {
  std::string sender;
  std::string receiver;
  std::string payload;
};

// Conditionals report the shipped value as going from the right-hand
// process to the left-hand one. Unfolds put the call in `payload`.
inline EventFields event_fields(const EventDetail& d) {
  return std::visit(
      [](const auto& x) -> EventFields {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ValueDelivered>) {
          return {x.sender, x.receiver, to_string(x.value)};
        } else if constexpr (std::is_same_v<T, LabelDelivered>) {
          return {x.sender, x.receiver, x.label};
        } else if constexpr (std::is_same_v<T, Spawned>) {
          return {x.parent, x.child, ""};
        } else if constexpr (std::is_same_v<T, Introduced>) {
          return {x.introducer, x.learner, x.learned};
        } else if constexpr (std::is_same_v<T, Branched>) {
          return {x.rhs, x.lhs, to_string(x.compared)};
        } else {
          std::string call = x.procedure;
          if (!x.args.empty()) {
            call += "(";
            for (std::size_t i = 0; i < x.args.size(); ++i) {
              call += (i ? "," : "") + x.args[i];
            }
            call += ")";
          }
          return {"", "", call};
        }
      },
      d);
}

inline std::string format_event_text(std::size_t step, const TraceEvent& e) {
  auto f = event_fields(e.what);
  auto field = [](const std::string& s) { return s.empty() ? "-" : s; };
  return "STEP " + std::to_string(step) + " " +
         std::string(kind_name(e.redex.kind)) + " " + field(f.sender) + " " +
         field(f.receiver) + " " + field(f.payload) + " @" +
         path_to_string(e.redex.path);
}

inline nlohmann::json event_json(std::size_t step, const TraceEvent& e) {
  auto f = event_fields(e.what);
  nlohmann::json j;
  j["step"] = step;
  j["kind"] = std::string(kind_name(e.redex.kind));
  j["sender"] = f.sender.empty() ? nlohmann::json() : nlohmann::json(f.sender);
  j["receiver"] =
      f.receiver.empty() ? nlohmann::json() : nlohmann::json(f.receiver);
  j["payload"] =
      f.payload.empty() ? nlohmann::json() : nlohmann::json(f.payload);
  j["path"] = path_to_string(e.redex.path);
  return j;
}

inline nlohmann::json config_json(const Configuration& cfg) {
  nlohmann::json j;
  j["mode"] = std::string(mode_name(cfg.mode));
  j["chor"] = pretty_print(cfg.chor);
  nlohmann::json state = nlohmann::json::object();
  for (const auto& [k, v] : cfg.state) state[k] = to_string(v);
  j["state"] = state;
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& [a, b] : cfg.graph.edges()) edges.push_back({a, b});
  j["graph"] = edges;
  return j;
}

enum class TraceFormat { Text, Json };

inline void write_trace(std::ostream& out, const std::vector<TraceEvent>& trace,
                        const Configuration& final, std::string_view outcome,
                        TraceFormat fmt) {
  for (std::size_t i = 0; i < trace.size(); ++i) {
    if (fmt == TraceFormat::Text) {
      out << format_event_text(i + 1, trace[i]) << "\n";
    } else {
      out << event_json(i + 1, trace[i]).dump() << "\n";
    }
  }
  if (fmt == TraceFormat::Json) {
    nlohmann::json j;
    j["final"] = config_json(final);
    j["outcome"] = std::string(outcome);
    out << j.dump() << "\n";
  } else {
    out << "END " << outcome << " " << format_state(final.state) << "\n";
  }
}

struct RecordedStep {
  RedexKind kind;
  Path path;
};

struct RecordedTrace {
  std::vector<RecordedStep> steps;
  // Present for JSON traces only.
  std::optional<nlohmann::json> final;
};

// Reads either format.
inline RecordedTrace read_trace(std::istream& in) {
  RecordedTrace t;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& why) {
    throw ChorusError("trace line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line.front() == '{') {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(line);
      } catch (const nlohmann::json::exception& e) {
        fail(e.what());
      }
      if (j.contains("final")) {
        t.final = j["final"];
        continue;
      }
      auto kind = kind_from_name(j.value("kind", ""));
      if (!kind) fail("unknown step kind");
      t.steps.push_back({*kind, path_from_string(j.value("path", ""))});
      continue;
    }
    std::istringstream ls(line);
    std::string tag, n, kind, sender, receiver, payload, path;
    ls >> tag;
    if (tag == "END") continue;
    if (tag != "STEP") fail("expected STEP");
    // The payload may contain spaces (quoted atoms); the path is last.
    auto at = line.rfind(" @");
    if (at == std::string::npos) fail("missing path");
    ls >> n >> kind;
    auto k = kind_from_name(kind);
    if (!k) fail("unknown step kind '" + kind + "'");
    t.steps.push_back({*k, path_from_string(line.substr(at + 2))});
  }
  return t;
}

struct ReplayResult {
  Configuration final;
  std::vector<TraceEvent> trace;
  // Empty when the recorded final configuration matches (or none was
  // recorded).
  std::string mismatch;
};

// Re-executes the recorded steps from `start`. Throws RuntimeError when a
// recorded step is not enabled.
inline ReplayResult replay(Configuration cfg, const RecordedTrace& t) {
  ReplayResult r;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const auto& s = t.steps[i];
    std::optional<Redex> pick;
    for (auto& red : enabled_redexes(cfg)) {
      if (red.kind == s.kind && red.path == s.path) {
        pick = std::move(red);
        break;
      }
    }
    if (!pick) {
      throw RuntimeError(RuntimeError::Kind::NotEnabled,
                         "replay step " + std::to_string(i + 1) + " (" +
                             std::string(kind_name(s.kind)) + " @" +
                             path_to_string(s.path) + ") is not enabled");
    }
    auto [next, ev] = apply_redex(cfg, *pick);
    cfg = std::move(next);
    r.trace.push_back(std::move(ev));
  }
  if (t.final) {
    auto got = config_json(cfg);
    if (got != *t.final) {
      r.mismatch = "replayed final configuration differs: expected " +
                   t.final->dump() + ", got " + got.dump();
    }
  }
  r.final = std::move(cfg);
  return r;
}

}  // namespace chorus
