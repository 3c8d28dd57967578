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

// Source-to-source encodings.
//
// encode_async replaces every direct interaction from p to q by a relay
// through a chain of auxiliary processes p$q$0, p$q$1, ...; the i-th
// message from p to q travels through p$q$i. The message index M tracks,
// per ordered pair, which link of the chain is current.
//
// eliminate_selections turns each label selection into a value sent to a
// per-receiver buffer process, so selection-free calculi can run the
// program.
//
// check_wellformed is a conservative static check that every interaction's
// connection premise is guaranteed along every syntactic path.

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "chorus/printer.hpp"
#include "chorus/runtime.hpp"
#include "chorus/syntax.hpp"

namespace chorus {

class TransformError : public ChorusError {
 public:
  enum class Kind { UnboundCall, NotAlphaRenamed, UnknownChannel };
  TransformError(Kind kind, const std::string& what)
      : ChorusError(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Output calculus of each transform.
inline Mode async_target(Mode in) {
  return allows_selection(in) ? Mode::DCC : Mode::DMC;
}
inline Mode elim_sel_target(Mode in) {
  return is_dynamic(in) ? Mode::DMC : Mode::MC;
}

// Separator for generated names: one '$' more than the longest run of '$'
// in any existing name, so re-encoding an encoded program cannot collide.
inline std::string generated_separator(const Chor& c) {
  std::size_t longest = 0;
  for (const auto& n : pn(c)) {
    std::size_t run = 0;
    for (char ch : n) {
      run = ch == '$' ? run + 1 : 0;
      longest = std::max(longest, run);
    }
  }
  return std::string(longest + 1, '$');
}

// Splits a generated name at every run of '$': `a$s$0$4` -> {a, s, 0, 4}.
inline std::vector<std::string> name_segments(std::string_view name) {
  std::vector<std::string> out;
  std::string cur;
  bool in_sep = false;
  for (char ch : name) {
    if (ch == '$') {
      if (!in_sep) out.push_back(std::move(cur));
      cur.clear();
      in_sep = true;
    } else {
      cur += ch;
      in_sep = false;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

struct EncodingReport {
  NameSet source_processes;
  std::size_t channels_created = 0;
  std::size_t introduced_channels = 0;
  std::vector<std::pair<std::string, std::size_t>> procedures_rewritten;
};

struct EncodeOptions {
  // Emit the name-introduction block exactly as published. The new
  // q-to-r channel then never learns its endpoints and cannot be used.
  bool literal_intro = false;
};

namespace detail {

using Pair = std::pair<ProcessName, ProcessName>;
using MessageIndex = std::map<Pair, std::size_t>;

inline void check_alpha_renamed(const Chor& c, NameSet scope) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Prefix>) {
          if (const auto* s = std::get_if<Start>(&x.eta)) {
            if (!scope.insert(s->child).second) {
              throw TransformError(
                  TransformError::Kind::NotAlphaRenamed,
                  "started process '" + s->child +
                      "' shadows a name already in scope; rename it apart");
            }
          }
          check_alpha_renamed(x.cont, std::move(scope));
        } else if constexpr (std::is_same_v<T, Cond>) {
          check_alpha_renamed(x.then_branch, scope);
          check_alpha_renamed(x.else_branch, scope);
        } else if constexpr (std::is_same_v<T, Def>) {
          NameSet inner = x.params.empty() ? scope : NameSet{};
          inner.insert(x.params.begin(), x.params.end());
          check_alpha_renamed(x.body, std::move(inner));
          check_alpha_renamed(x.cont, std::move(scope));
        }
      },
      c->node);
}

class AsyncEncoder {
 public:
  AsyncEncoder(Mode mode, std::string sep, NameSet top, EncodeOptions opt,
               EncodingReport& report)
      : mode_(mode),
        sep_(std::move(sep)),
        top_(std::move(top)),
        opt_(opt),
        report_(report) {}

  ProcessName aux(const ProcessName& p, const ProcessName& q,
                  std::size_t i) const {
    return p + sep_ + q + sep_ + std::to_string(i);
  }

  // Ordered pairs of distinct names, lexicographic by position.
  static std::vector<Pair> pairs_of(const std::vector<ProcessName>& names) {
    std::vector<Pair> out;
    for (const auto& p : names) {
      for (const auto& q : names) {
        if (p != q) out.emplace_back(p, q);
      }
    }
    return out;
  }

  Chor encode_residual(const Chor& c, MessageIndex m) {
    return enc(c, std::move(m));
  }

  Chor encode(const Chor& c) {
    std::vector<ProcessName> procs(top_.begin(), top_.end());
    MessageIndex m;
    std::vector<Eta> init;
    for (const auto& [p, q] : pairs_of(procs)) {
      m[{p, q}] = 0;
      ProcessName a = aux(p, q, 0);
      init.push_back(start(p, a));
      for (auto& e : tell(p, q, a)) init.push_back(std::move(e));
      ++report_.channels_created;
    }
    return sequence(init, enc(c, m));
  }

 private:
  struct Proc {
    std::string name;
    std::vector<ProcessName> params;
  };

  std::size_t current(const MessageIndex& m, const ProcessName& p,
                      const ProcessName& q) const {
    auto it = m.find({p, q});
    if (it == m.end()) {
      throw TransformError(TransformError::Kind::UnknownChannel,
                           "no channel from " + p + " to " + q +
                               " is known at this point of the program");
    }
    return it->second;
  }

  // Names whose pairwise channels travel with a procedure.
  std::vector<ProcessName> channel_owners(
      const std::vector<ProcessName>& params) const {
    if (!params.empty()) return params;
    return {top_.begin(), top_.end()};
  }

  Chor enc(const Chor& c, MessageIndex m) {
    return std::visit(
        [&](const auto& x) -> Chor {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Nil>) {
            return c;
          } else if constexpr (std::is_same_v<T, Prefix>) {
            return enc_prefix(x, std::move(m));
          } else if constexpr (std::is_same_v<T, Cond>) {
            // q ships its value to p through q's channel to p.
            const auto& p = x.lhs;
            const auto& q = x.rhs;
            std::size_t i = current(m, q, p);
            ProcessName a = aux(q, p, i);
            ProcessName a1 = aux(q, p, i + 1);
            std::vector<Eta> pre{com(q, self_ref(), a), start(q, a1)};
            for (auto& e : tell(q, a, a1)) pre.push_back(std::move(e));
            pre.push_back(com(a, name_lit(p), a1));
            pre.push_back(com(a, name_lit(a1), p));
            m[{q, p}] = i + 1;
            return sequence(pre, cond(p, a, enc(x.then_branch, m),
                                      enc(x.else_branch, m)));
          } else if constexpr (std::is_same_v<T, Def>) {
            auto owners = channel_owners(x.params);
            MessageIndex m0;
            std::vector<ProcessName> params = x.params;
            for (const auto& pq : pairs_of(owners)) {
              m0[pq] = 0;
              params.push_back(aux(pq.first, pq.second, 0));
            }
            procs_.push_back({x.name, x.params});
            Chor body = enc(x.body, m0);
            Chor cont = enc(x.cont, m);
            procs_.pop_back();
            report_.procedures_rewritten.emplace_back(x.name, params.size());
            // The continuation may call the procedure too.
            return def(x.name, std::move(params), std::move(body),
                       std::move(cont));
          } else {
            const Proc* target = nullptr;
            for (auto it = procs_.rbegin(); it != procs_.rend(); ++it) {
              if (it->name == x.name) {
                target = &*it;
                break;
              }
            }
            if (!target) {
              throw TransformError(TransformError::Kind::UnboundCall,
                                   "call to undefined procedure " + x.name);
            }
            auto owners = target->params.empty()
                              ? channel_owners({})
                              : x.args;
            std::vector<ProcessName> args = x.args;
            for (const auto& [p, q] : pairs_of(owners)) {
              args.push_back(aux(p, q, current(m, p, q)));
            }
            return call(x.name, std::move(args));
          }
        },
        c->node);
  }

  Chor enc_prefix(const Prefix& x, MessageIndex m) {
    std::vector<Eta> out;
    if (const auto* c = std::get_if<Com>(&x.eta)) {
      const ProcessName* payload = is_dynamic(mode_) ? intro_payload(*c) : nullptr;
      if (payload) {
        enc_intro(c->sender, *payload, c->receiver, m, out);
      } else {
        const auto& p = c->sender;
        const auto& q = c->receiver;
        std::size_t i = current(m, p, q);
        ProcessName a = aux(p, q, i);
        ProcessName a1 = aux(p, q, i + 1);
        out.push_back(com(p, c->expr, a));
        out.push_back(start(p, a1));
        for (auto& e : tell(p, a, a1)) out.push_back(std::move(e));
        out.push_back(com(a, name_lit(q), a1));
        out.push_back(com(a, name_lit(a1), q));
        out.push_back(com(a, self_ref(), q));
        m[{p, q}] = i + 1;
      }
    } else if (const auto* s = std::get_if<Sel>(&x.eta)) {
      const auto& p = s->sender;
      const auto& q = s->receiver;
      std::size_t i = current(m, p, q);
      ProcessName a = aux(p, q, i);
      ProcessName a1 = aux(p, q, i + 1);
      out.push_back(sel(p, a, s->label));
      out.push_back(start(p, a1));
      for (auto& e : tell(p, a, a1)) out.push_back(std::move(e));
      out.push_back(com(a, name_lit(q), a1));
      out.push_back(com(a, name_lit(a1), q));
      out.push_back(sel(a, q, s->label));
      m[{p, q}] = i + 1;
    } else {
      const auto& st = std::get<Start>(x.eta);
      const auto& p = st.parent;
      const auto& q = st.child;
      ProcessName pq = aux(p, q, 0);
      ProcessName qp = aux(q, p, 0);
      out.push_back(st);
      out.push_back(start(p, pq));
      out.push_back(start(q, qp));
      for (auto& e : tell(p, q, pq)) out.push_back(std::move(e));
      for (auto& e : tell(q, p, qp)) out.push_back(std::move(e));
      m[{p, q}] = 0;
      m[{q, p}] = 0;
      report_.channels_created += 2;
    }
    return sequence(out, enc(x.cont, std::move(m)));
  }

  // p tells r about q.
  void enc_intro(const ProcessName& p, const ProcessName& q,
                 const ProcessName& r, MessageIndex& m, std::vector<Eta>& out) {
    ProcessName qr = aux(q, r, 0);
    std::size_t iq = current(m, p, q);
    std::size_t ir = current(m, p, r);
    ProcessName pq = aux(p, q, iq), pq1 = aux(p, q, iq + 1);
    ProcessName pr = aux(p, r, ir), pr1 = aux(p, r, ir + 1);
    out.push_back(start(p, qr));
    if (opt_.literal_intro) {
      out.push_back(com(p, name_lit(qr), pq));
      out.push_back(com(p, name_lit(qr), pr));
    } else {
      // p may know q and r only through its channels, so the channels do the
      // wiring: each one connects the new channel with its own endpoint.
      for (auto& e : tell(p, pq, qr)) out.push_back(std::move(e));
      for (auto& e : tell(p, pr, qr)) out.push_back(std::move(e));
    }
    out.push_back(start(p, pq1));
    for (auto& e : tell(p, pq, pq1)) out.push_back(std::move(e));
    out.push_back(start(p, pr1));
    for (auto& e : tell(p, pr, pr1)) out.push_back(std::move(e));
    out.push_back(com(pq, name_lit(q), pq1));
    out.push_back(com(pr, name_lit(r), pr1));
    out.push_back(com(pq, name_lit(pq1), q));
    if (opt_.literal_intro) {
      out.push_back(com(pq, name_lit(qr), q));
    } else {
      for (auto& e : tell(pq, q, qr)) out.push_back(std::move(e));
    }
    out.push_back(com(pr, name_lit(pr1), r));
    if (opt_.literal_intro) {
      out.push_back(com(pr, name_lit(qr), r));
    } else {
      for (auto& e : tell(pr, r, qr)) out.push_back(std::move(e));
    }
    m[{p, q}] = iq + 1;
    m[{p, r}] = ir + 1;
    m[{q, r}] = 0;
    ++report_.introduced_channels;
  }

  Mode mode_;
  std::string sep_;
  NameSet top_;
  EncodeOptions opt_;
  EncodingReport& report_;
  std::vector<Proc> procs_;
};

}  // namespace detail

struct EncodeResult {
  Chor chor;
  Mode mode;
  EncodingReport report;
};

// Asynchronous encoding. The input must be valid in `mode` with every
// started process named apart from the names already in scope.
inline EncodeResult encode_async_with_report(const Chor& c, Mode mode,
                                             EncodeOptions opt = {}) {
  validate(c, mode);
  NameSet top = free_names(c);
  detail::check_alpha_renamed(c, top);
  EncodeResult r{nullptr, async_target(mode), {}};
  r.report.source_processes = top;
  detail::AsyncEncoder enc(mode, generated_separator(c), top, opt, r.report);
  r.chor = enc.encode(c);
  return r;
}

inline Chor encode_async(const Chor& c, Mode mode, EncodeOptions opt = {}) {
  return encode_async_with_report(c, mode, opt).chor;
}

// Residual-term encoding under an explicit message index, without the
// channel initialisation. Used to match source states against encoded ones;
// `sep` must be the separator chosen for the original source program.
inline Chor encode_body(
    const Chor& c, Mode mode, const NameSet& top,
    const std::map<std::pair<ProcessName, ProcessName>, std::size_t>& index,
    const std::string& sep = "$") {
  EncodingReport scratch;
  detail::AsyncEncoder enc(mode, sep, top, {}, scratch);
  return enc.encode_residual(c, index);
}

//
// Selection elimination
//

struct SelectionElimination {
  Chor chor;
  Mode mode;
  // Label -> integer code, in first-occurrence order.
  std::map<std::string, long> codes;
};

namespace detail {

inline void collect_labels(const Chor& c, std::vector<std::string>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Prefix>) {
          if (const auto* s = std::get_if<Sel>(&x.eta)) {
            if (std::find(out.begin(), out.end(), s->label) == out.end()) {
              out.push_back(s->label);
            }
          }
          collect_labels(x.cont, out);
        } else if constexpr (std::is_same_v<T, Cond>) {
          collect_labels(x.then_branch, out);
          collect_labels(x.else_branch, out);
        } else if constexpr (std::is_same_v<T, Def>) {
          collect_labels(x.body, out);
          collect_labels(x.cont, out);
        }
      },
      c->node);
}

// Senders of selections addressed to each receiver.
inline void collect_selectors(const Chor& c,
                              std::map<ProcessName, NameSet>& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Prefix>) {
          if (const auto* s = std::get_if<Sel>(&x.eta)) {
            out[s->receiver].insert(s->sender);
          }
          collect_selectors(x.cont, out);
        } else if constexpr (std::is_same_v<T, Cond>) {
          collect_selectors(x.then_branch, out);
          collect_selectors(x.else_branch, out);
        } else if constexpr (std::is_same_v<T, Def>) {
          collect_selectors(x.body, out);
          collect_selectors(x.cont, out);
        }
      },
      c->node);
}

struct SelectionEliminator {
  std::string sep;
  bool dynamic;
  const std::map<std::string, long>& codes;

  ProcessName buffer(const ProcessName& q) const { return q + sep + "sel"; }

  // `q start buf; q: s <-> buf` for every sender s.
  void preamble(const ProcessName& q, const NameSet& senders,
                std::vector<Eta>& out) const {
    out.push_back(start(q, buffer(q)));
    for (const auto& s : senders) {
      for (auto& e : tell(q, s, buffer(q))) out.push_back(std::move(e));
    }
  }

  // `scope` holds the processes that exist at this point of the program.
  Chor run(const Chor& c, NameSet scope) const {
    return std::visit(
        [&](const auto& x) -> Chor {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Nil> || std::is_same_v<T, Call>) {
            return c;
          } else if constexpr (std::is_same_v<T, Prefix>) {
            const auto* st = std::get_if<Start>(&x.eta);
            if (st) scope.insert(st->child);
            Chor cont = run(x.cont, scope);
            if (const auto* s = std::get_if<Sel>(&x.eta)) {
              return prefix(com(s->sender, int_lit(codes.at(s->label)),
                                buffer(s->receiver)),
                            std::move(cont));
            }
            if (st && dynamic) {
              // A started process gets its buffer right after birth.
              std::map<ProcessName, NameSet> sel;
              collect_selectors(x.cont, sel);
              std::vector<Eta> pre;
              auto it = sel.find(st->child);
              if (it != sel.end()) preamble(st->child, it->second, pre);
              // Existing receivers hearing from the newborn must hand it
              // their buffer; the parent is the only one that knows it.
              for (const auto& [q, senders] : sel) {
                if (q == st->child || !senders.count(st->child) ||
                    !scope.count(q)) {
                  continue;
                }
                if (q != st->parent) {
                  for (auto& e : tell(st->parent, q, st->child)) {
                    pre.push_back(std::move(e));
                  }
                }
                for (auto& e : tell(q, st->child, buffer(q))) {
                  pre.push_back(std::move(e));
                }
              }
              if (!pre.empty()) {
                return prefix(x.eta, sequence(pre, std::move(cont)));
              }
            }
            if (cont == x.cont) return c;
            return prefix(x.eta, std::move(cont));
          } else if constexpr (std::is_same_v<T, Cond>) {
            return cond(x.lhs, x.rhs, run(x.then_branch, scope),
                        run(x.else_branch, scope));
          } else {
            NameSet inner = scope;
            inner.insert(x.params.begin(), x.params.end());
            return def(x.name, x.params, run(x.body, inner), run(x.cont, scope));
          }
        },
        c->node);
  }
};

}  // namespace detail

// Rewrites every `p -> q[l]` to `p.code(l) -> q$sel`. In the dynamic
// calculi each buffer is started by its receiver and introduced to the
// senders; in the static ones buffers are ordinary free processes.
inline SelectionElimination eliminate_selections(const Chor& c, Mode mode) {
  validate(c, mode);
  std::vector<std::string> labels;
  detail::collect_labels(c, labels);
  SelectionElimination r{c, elim_sel_target(mode), {}};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    r.codes[labels[i]] = static_cast<long>(i);
  }
  if (labels.empty()) return r;
  detail::SelectionEliminator el{generated_separator(c), is_dynamic(mode),
                                 r.codes};
  NameSet top = free_names(c);
  Chor body = el.run(c, top);
  if (is_dynamic(mode)) {
    std::map<ProcessName, NameSet> sel;
    detail::collect_selectors(c, sel);
    std::vector<Eta> pre;
    for (const auto& [q, senders] : sel) {
      if (!top.count(q)) continue;
      NameSet visible;
      for (const auto& s : senders) {
        if (top.count(s)) visible.insert(s);
      }
      el.preamble(q, visible, pre);
    }
    body = sequence(pre, body);
  }
  r.chor = body;
  return r;
}

//
// Connectivity check
//

struct ConnectivityViolation {
  std::string action;
  std::string reason;
  bool operator==(const ConnectivityViolation&) const = default;
};

namespace detail {

class WellformedChecker {
 public:
  std::vector<ConnectivityViolation> violations;

  void run(const Chor& c, ConnectionGraph g,
           std::vector<const Def*> defs) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Prefix>) {
            step(x.eta, g);
            run(x.cont, std::move(g), std::move(defs));
          } else if constexpr (std::is_same_v<T, Cond>) {
            if (!g.mutually_knows(x.lhs, x.rhs)) {
              report("if " + x.lhs + " <-> " + x.rhs,
                     x.lhs + " and " + x.rhs + " may not know each other");
            }
            run(x.then_branch, g, defs);
            run(x.else_branch, std::move(g), std::move(defs));
          } else if constexpr (std::is_same_v<T, Def>) {
            defs.push_back(&x);
            run(x.cont, std::move(g), std::move(defs));
          } else if constexpr (std::is_same_v<T, Call>) {
            const Def* d = nullptr;
            for (auto it = defs.rbegin(); it != defs.rend(); ++it) {
              if ((*it)->name == x.name) {
                d = *it;
                break;
              }
            }
            if (!d || d->params.size() != x.args.size()) return;
            // Check the body over its own parameter names, so the memo
            // stays finite even when every round passes fresh names.
            NameSet visible = free_names(d->body);
            visible.insert(d->params.begin(), d->params.end());
            std::multimap<ProcessName, ProcessName> as_param;
            for (std::size_t i = 0; i < x.args.size(); ++i) {
              as_param.emplace(x.args[i], d->params[i]);
            }
            auto images = [&](const ProcessName& n) {
              std::vector<ProcessName> out;
              auto [lo, hi] = as_param.equal_range(n);
              for (auto it = lo; it != hi; ++it) out.push_back(it->second);
              if (out.empty() && visible.count(n) &&
                  std::find(d->params.begin(), d->params.end(), n) ==
                      d->params.end()) {
                out.push_back(n);
              }
              return out;
            };
            ConnectionGraph local;
            for (const auto& [u, v] : g.edges()) {
              for (const auto& a : images(u)) {
                for (const auto& b : images(v)) local.add(a, b);
              }
            }
            auto it = memo_.find(x.name);
            if (it != memo_.end()) {
              if (local.includes(it->second)) return;
              local = ConnectionGraph::intersect(local, it->second);
            }
            memo_[x.name] = local;
            run(d->body, std::move(local), std::move(defs));
          }
        },
        c->node);
  }

 private:
  void report(std::string action, std::string reason) {
    ConnectivityViolation v{std::move(action), std::move(reason)};
    if (std::find(violations.begin(), violations.end(), v) ==
        violations.end()) {
      violations.push_back(std::move(v));
    }
  }

  void step(const Eta& eta, ConnectionGraph& g) {
    std::string what = to_string(eta);
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, Com>) {
            if (!g.mutually_knows(x.sender, x.receiver)) {
              report(what, x.sender + " and " + x.receiver +
                               " may not know each other");
            }
            if (const ProcessName* r = intro_payload(x)) {
              if (!g.knows(x.sender, *r)) {
                report(what, x.sender + " may not know " + *r);
              }
              g.add(x.receiver, *r);
            }
          } else if constexpr (std::is_same_v<T, Sel>) {
            if (!g.mutually_knows(x.sender, x.receiver)) {
              report(what, x.sender + " and " + x.receiver +
                               " may not know each other");
            }
          } else {
            g.forget(x.child);
            g.add_mutual(x.parent, x.child);
          }
        },
        eta);
  }

  std::map<std::string, ConnectionGraph> memo_;
};

}  // namespace detail

// Every interaction whose connection premise is not guaranteed when the
// program starts from `g0`. Empty means well-formed.
inline std::vector<ConnectivityViolation> check_wellformed(
    const Chor& c, const ConnectionGraph& g0) {
  detail::WellformedChecker w;
  w.run(c, g0, {});
  return w.violations;
}
}  // namespace chorus
