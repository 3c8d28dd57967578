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

// Command-line front end. Exit codes: 0 success, 1 violation or runtime
// failure, 2 inconclusive check or usage error. Diagnostics go to stderr.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "chorus/chorus.hpp"

namespace {

using namespace chorus;

constexpr int kOk = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

std::string read_input(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin),
            std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path);
  if (!in) throw ChorusError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ChorusError("cannot write '" + path + "'");
  out << text;
}

std::optional<Mode> mode_option(const std::string& s) {
  if (s.empty()) return std::nullopt;
  auto m = mode_from_name(s);
  if (!m) throw CLI::ValidationError("--mode", "expected MC, CC, DMC or DCC");
  return m;
}

ParsedProgram load(const std::string& path, const std::string& mode) {
  return parse_program(read_input(path), mode_option(mode));
}

std::uint64_t default_seed() {
  if (const char* s = std::getenv("CHORUS_SEED")) {
    return std::strtoull(s, nullptr, 10);
  }
  return 0;
}

SchedulerPolicy scheduler_from(const std::string& s) {
  if (s == "first") return SchedulerPolicy::first();
  if (s == "random") return SchedulerPolicy::random(default_seed());
  if (s.rfind("random:", 0) == 0) {
    return SchedulerPolicy::random(std::stoull(s.substr(7)));
  }
  throw CLI::ValidationError("--scheduler", "expected first, random or random:SEED");
}

//
// parse
//

struct ParseArgs {
  std::string file;
  std::string mode;
  bool ast = false;
};

int cmd_parse(const ParseArgs& a) {
  auto prog = load(a.file, a.mode);
  std::cout << (a.ast ? dump_ast(prog.chor) : to_chor_file(prog.chor, prog.mode));
  std::cerr << "ok: valid " << mode_name(prog.mode) << " program, "
            << free_names(prog.chor).size() << " processes, size "
            << size(prog.chor) << "\n";
  return kOk;
}

//
// run
//

struct RunArgs {
  std::string file;
  std::string mode;
  std::string scheduler = "first";
  std::string state;
  std::size_t max_steps = 1000;
  std::string trace_format = "text";
  std::string replay_file;
};

int cmd_run(const RunArgs& a) {
  auto prog = load(a.file, a.mode);
  auto cfg = initial_config(prog.chor, prog.mode, parse_state_overrides(a.state));
  TraceFormat fmt = a.trace_format == "json" ? TraceFormat::Json : TraceFormat::Text;
  if (!a.replay_file.empty()) {
    std::istringstream in(read_input(a.replay_file));
    auto rec = read_trace(in);
    auto r = replay(cfg, rec);
    std::string outcome = is_terminated(r.final.chor) ? "terminated"
                          : enabled_redexes(r.final).empty() ? "stuck"
                                                             : "replayed";
    write_trace(std::cout, r.trace, r.final, outcome, fmt);
    if (!r.mismatch.empty()) {
      std::cerr << "error: " << r.mismatch << "\n";
      return kFail;
    }
    std::cerr << "replay ok: " << r.trace.size() << " steps\n";
    return kOk;
  }
  auto result = run(cfg, scheduler_from(a.scheduler), a.max_steps);
  write_trace(std::cout, result.trace, result.final,
              outcome_name(result.outcome), fmt);
  std::cerr << outcome_name(result.outcome) << " after " << result.trace.size()
            << " steps\n";
  return result.outcome == Outcome::Stuck ? kFail : kOk;
}

//
// encode
//

struct EncodeArgs {
  std::string file;
  std::string mode;
  std::string out;
  bool report = false;
  bool literal_intro = false;
  // Filled from the command line, in order.
  std::vector<std::string> steps;
};

nlohmann::json report_json(const EncodingReport& r) {
  nlohmann::json j;
  j["source_processes"] = std::vector<std::string>(r.source_processes.begin(),
                                                   r.source_processes.end());
  j["channels_created"] = r.channels_created;
  j["introduced_channels"] = r.introduced_channels;
  nlohmann::json procs = nlohmann::json::array();
  for (const auto& [name, arity] : r.procedures_rewritten) {
    procs.push_back({{"name", name}, {"arity", arity}});
  }
  j["procedures_rewritten"] = procs;
  return j;
}

int cmd_encode(const EncodeArgs& a) {
  if (a.steps.empty()) {
    std::cerr << "error: encode needs --async and/or --elim-sel\n";
    return kUsage;
  }
  auto prog = load(a.file, a.mode);
  Chor c = prog.chor;
  Mode m = prog.mode;
  nlohmann::json reports = nlohmann::json::array();
  for (const auto& step : a.steps) {
    if (step == "async") {
      auto r = encode_async_with_report(c, m, {a.literal_intro});
      c = r.chor;
      m = r.mode;
      reports.push_back(report_json(r.report));
    } else {
      auto r = eliminate_selections(c, m);
      c = r.chor;
      m = r.mode;
    }
  }
  write_output(a.out, to_chor_file(c, m));
  if (a.report) {
    std::cerr << (reports.size() == 1 ? reports[0] : reports).dump(2) << "\n";
  }
  return kOk;
}

//
// check
//

struct CheckArgs {
  std::string file;
  std::string mode;
  std::string state;
  bool progress = false;
  bool delivery = false;
  bool fifo = false;
  bool no_added = false;
  bool encode_first = false;
  std::size_t depth = 100;
  std::size_t nodes = 200000;
  unsigned workers = 1;
  std::string cex_out;
};

// Replays an explorer path from the uncanonicalised root.
void dump_counterexample(const std::string& path, const Configuration& root,
                         const StateSpace& space, const Counterexample& cex) {
  RecordedTrace rec;
  for (std::size_t e : cex.path) {
    const auto& ev = space.edges[e].event;
    rec.steps.push_back({ev.redex.kind, ev.redex.path});
  }
  auto r = replay(root, rec);
  std::ostringstream out;
  write_trace(out, r.trace, r.final, "counterexample", TraceFormat::Json);
  write_output(path, out.str());
}

int cmd_check(const CheckArgs& a) {
  if (!a.progress && !a.delivery && !a.fifo && !a.no_added) {
    std::cerr << "error: check needs at least one of --progress, --delivery, "
                 "--fifo, --no-added-behavior\n";
    return kUsage;
  }
  auto prog = load(a.file, a.mode);
  auto overrides = parse_state_overrides(a.state);
  Configuration source = initial_config(prog.chor, prog.mode, overrides);
  Configuration subject = source;
  if (a.encode_first || a.no_added) {
    auto enc = encode_async(prog.chor, prog.mode);
    subject = initial_config(enc, async_target(prog.mode), overrides);
  }
  ExploreOptions opt{a.depth, a.nodes, a.workers};

  int worst = kOk;
  auto record = [&](std::string_view name, const CheckResult& r,
                    const StateSpace* space, const Configuration& root) {
    std::cout << name << ": " << verdict_name(r.verdict) << " (" << r.summary
              << ")\n";
    if (r.verdict == Verdict::Violation) {
      worst = kFail;
      for (const auto& c : r.counterexamples) {
        std::cout << "  " << c.description << " [" << c.path.size()
                  << " steps]\n";
      }
      if (!a.cex_out.empty() && space && !r.counterexamples.empty()) {
        dump_counterexample(a.cex_out, root, *space, r.counterexamples.front());
      }
    } else if (r.verdict == Verdict::Inconclusive && worst == kOk) {
      worst = kUsage;
    }
  };

  if (a.progress || a.delivery || a.fifo) {
    StateSpace space = explore(subject, opt);
    std::cerr << "explored " << space.nodes.size() << " nodes, "
              << space.edges.size() << " edges"
              << (space.bounds_hit ? " (bounds hit)" : "") << "\n";
    // Channels run between the processes present at the start.
    NameSet source_pn = space.root_domain;
    if (a.progress) record("progress", check_progress(space), &space, subject);
    if (a.delivery) {
      record("delivery", check_eventual_delivery(space, source_pn), &space,
             subject);
    }
    if (a.fifo) record("fifo", fifo_per_pair(space, source_pn), &space, subject);
  }
  if (a.no_added) {
    CorrespondenceOptions co;
    co.source = opt;
    co.encoded = opt;
    record("no-added-behavior", check_no_added_behavior(source, subject, co),
           nullptr, subject);
  }
  return worst;
}

//
// repl
//

struct ReplArgs {
  std::string file;
  std::string mode;
  std::string state;
};

std::string describe_redex(const Configuration& cfg, const Redex& r) {
  auto [next, ev] = apply_redex(cfg, r);
  auto f = event_fields(ev.what);
  std::string s(kind_name(r.kind));
  if (!f.sender.empty()) s += " " + f.sender;
  if (!f.receiver.empty()) s += " -> " + f.receiver;
  if (!f.payload.empty()) s += " : " + f.payload;
  return s;
}

int cmd_repl(const ReplArgs& a) {
  auto prog = load(a.file, a.mode);
  auto cfg = initial_config(prog.chor, prog.mode, parse_state_overrides(a.state));
  std::size_t step = 0;
  while (true) {
    std::cout << "\n" << pretty_print(cfg.chor, PrintStyle::Indented) << "\n"
              << "state " << format_state(cfg.state) << "\n";
    if (is_terminated(cfg.chor)) {
      std::cout << "terminated after " << step << " steps\n";
      return kOk;
    }
    auto redexes = enabled_redexes(cfg);
    if (redexes.empty()) {
      std::cout << "stuck after " << step << " steps\n";
      return kFail;
    }
    for (std::size_t i = 0; i < redexes.size(); ++i) {
      std::string what;
      try {
        what = describe_redex(cfg, redexes[i]);
      } catch (const RuntimeError& e) {
        what = std::string(kind_name(redexes[i].kind)) + " (fails: " + e.what() + ")";
      }
      std::cout << "  [" << i << "] " << what << "  @"
                << path_to_string(redexes[i].path) << "\n";
    }
    std::cout << "choose (index, q to quit)> " << std::flush;
    std::string line;
    if (!std::getline(std::cin, line) || line == "q") return kOk;
    std::size_t pick;
    try {
      pick = std::stoul(line);
    } catch (const std::exception&) {
      std::cout << "not an index\n";
      continue;
    }
    if (pick >= redexes.size()) {
      std::cout << "no such redex\n";
      continue;
    }
    try {
      auto [next, ev] = apply_redex(cfg, redexes[pick]);
      std::cout << format_event_text(++step, ev) << "\n";
      cfg = std::move(next);
    } catch (const RuntimeError& e) {
      std::cout << "error: " << e.what() << "\n";
    }
  }
}

//
// corpus
//

struct CorpusArgs {
  std::size_t total = 30;
  std::string write_dir;
  bool list = false;
};

std::string cell(bool ok) { return ok ? "pass" : "FAIL"; }

int cmd_corpus(const CorpusArgs& a) {
  if (!a.write_dir.empty()) {
    for (const auto& e : bundled_corpus()) {
      write_output(a.write_dir + "/" + e.name + ".chor", e.source);
    }
    return kOk;
  }
  if (a.list) {
    for (const auto& e : full_corpus(a.total)) {
      std::cout << e.name << (e.state.empty() ? "" : "  --state " + e.state) << "\n";
    }
    return kOk;
  }
  bool all = true;
  std::cout << std::left << std::setw(18) << "program" << std::setw(5) << "mode"
            << std::setw(11) << "run" << std::setw(10) << "progress"
            << std::setw(8) << "encode" << std::setw(10) << "delivery"
            << std::setw(10) << "no-added" << "elim-sel\n";
  for (const auto& e : bundled_corpus()) {
    if (e.runnable) continue;
    bool rejected = false;
    try {
      parse_program(e.source);
    } catch (const ModeError&) {
      rejected = true;
    }
    std::cout << std::setw(18) << e.name << "rejected as expected: "
              << cell(rejected) << "\n";
    all = all && rejected;
  }
  for (const auto& e : full_corpus(a.total)) {
    auto prog = parse_entry(e);
    auto cfg = entry_config(e);
    auto r = run(cfg, SchedulerPolicy::first(), 200);
    bool run_ok = r.outcome != Outcome::Stuck;
    auto space = explore(cfg);
    bool progress = check_progress(space).ok();
    auto enc = encode_async_with_report(prog.chor, prog.mode);
    auto ecfg = initial_config(enc.chor, enc.mode, cfg.state);
    bool encode_ok = is_valid_in(enc.chor, enc.mode) &&
                     check_wellformed(enc.chor, ecfg.graph).empty();
    std::string delivery = "-", no_added = "-", elim = "-";
    bool row = run_ok && progress && encode_ok;
    if (!is_dynamic(prog.mode) && !has_procedures(prog.chor) &&
        interaction_count(prog.chor) <= 4) {
      auto espace = explore(ecfg);
      bool d = check_eventual_delivery(espace, space.root_domain).ok();
      bool n = check_no_added_behavior(cfg, ecfg).ok();
      delivery = cell(d);
      no_added = cell(n);
      row = row && d && n;
    }
    if (allows_selection(prog.mode)) {
      auto el = eliminate_selections(prog.chor, prog.mode);
      bool ok = is_valid_in(el.chor, el.mode);
      elim = cell(ok);
      row = row && ok;
    }
    std::cout << std::setw(18) << e.name << std::setw(5) << mode_name(prog.mode)
              << std::setw(11)
              << (run_ok ? std::string(outcome_name(r.outcome)) : "FAIL")
              << std::setw(10) << cell(progress) << std::setw(8)
              << cell(encode_ok) << std::setw(10) << delivery << std::setw(10)
              << no_added << elim << "\n";
    all = all && row;
  }
  std::cout << (all ? "all programs pass\n" : "some programs FAIL\n");
  return all ? kOk : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"chorus: run, transform and check choreographies"};
  app.require_subcommand(1);

  ParseArgs pa;
  auto* parse_cmd = app.add_subcommand("parse", "Parse and validate a program");
  parse_cmd->add_option("file", pa.file, "Program file, - for stdin")->required();
  parse_cmd->add_option("--mode", pa.mode, "Calculus: MC, CC, DMC or DCC");
  parse_cmd->add_flag("--ast", pa.ast, "Print the syntax tree instead of the program");

  RunArgs ra;
  auto* run_cmd = app.add_subcommand("run", "Execute a program");
  run_cmd->add_option("file", ra.file, "Program file, - for stdin")->required();
  run_cmd->add_option("--mode", ra.mode, "Calculus: MC, CC, DMC or DCC");
  run_cmd->add_option("--scheduler", ra.scheduler, "first, random or random:SEED");
  run_cmd->add_option("--state", ra.state, "Initial values, e.g. a=5,b=title");
  run_cmd->add_option("--max-steps", ra.max_steps, "Step limit");
  run_cmd->add_option("--trace-format", ra.trace_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  run_cmd->add_option("--replay", ra.replay_file, "Re-execute a recorded trace");

  EncodeArgs ea;
  auto* enc_cmd = app.add_subcommand("encode", "Transform a program");
  enc_cmd->add_option("file", ea.file, "Program file, - for stdin")->required();
  enc_cmd->add_option("--mode", ea.mode, "Calculus: MC, CC, DMC or DCC");
  auto* async_flag = enc_cmd->add_flag("--async", "Asynchronous encoding");
  auto* elim_flag = enc_cmd->add_flag("--elim-sel", "Selection elimination");
  enc_cmd->add_option("-o,--output", ea.out, "Output file, - for stdout");
  enc_cmd->add_flag("--report", ea.report, "Print the encoding report as JSON on stderr");
  enc_cmd->add_flag("--literal-intro", ea.literal_intro,
                    "Emit name introductions without channel wiring");

  CheckArgs ca;
  auto* check_cmd = app.add_subcommand("check", "Explore and check properties");
  check_cmd->add_option("file", ca.file, "Program file, - for stdin")->required();
  check_cmd->add_option("--mode", ca.mode, "Calculus: MC, CC, DMC or DCC");
  check_cmd->add_option("--state", ca.state, "Initial values, e.g. a=5,b=title");
  check_cmd->add_flag("--progress", ca.progress, "No reachable stuck state");
  check_cmd->add_flag("--delivery", ca.delivery, "Every channel send is eventually delivered");
  check_cmd->add_flag("--fifo", ca.fifo, "Per-pair delivery order matches send order");
  check_cmd->add_flag("--no-added-behavior", ca.no_added,
                      "Encoding of the program adds no behaviour (program is the source)");
  check_cmd->add_flag("--encode", ca.encode_first, "Encode the program before checking");
  check_cmd->add_option("--depth", ca.depth, "Depth bound");
  check_cmd->add_option("--nodes", ca.nodes, "Node bound");
  check_cmd->add_option("--workers", ca.workers, "Exploration threads");
  check_cmd->add_option("--cex-out", ca.cex_out, "Write the first counterexample as a JSON trace");

  ReplArgs pl;
  auto* repl_cmd = app.add_subcommand("repl", "Step through a program interactively");
  repl_cmd->add_option("file", pl.file, "Program file")->required();
  repl_cmd->add_option("--mode", pl.mode, "Calculus: MC, CC, DMC or DCC");
  repl_cmd->add_option("--state", pl.state, "Initial values, e.g. a=5,b=title");

  CorpusArgs co;
  auto* corpus_cmd = app.add_subcommand("corpus", "Run the bundled example suite");
  corpus_cmd->add_option("--total", co.total, "Corpus size including generated programs");
  corpus_cmd->add_flag("--list", co.list, "List the programs");
  corpus_cmd->add_option("--write", co.write_dir, "Write the hand-written programs to a directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*parse_cmd) return cmd_parse(pa);
    if (*run_cmd) return cmd_run(ra);
    if (*enc_cmd) {
      for (const auto* opt : enc_cmd->parse_order()) {
        if (opt == async_flag) ea.steps.push_back("async");
        if (opt == elim_flag) ea.steps.push_back("elim-sel");
      }
      return cmd_encode(ea);
    }
    if (*check_cmd) return cmd_check(ca);
    if (*repl_cmd) return cmd_repl(pl);
    if (*corpus_cmd) return cmd_corpus(co);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kFail;
  } catch (const ModeError& e) {
    std::cerr << "mode error: " << e.what() << "\n";
    return kFail;
  } catch (const ChorusError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
