#include "mrpn/causality.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "mrpn/format.hpp"
#include "mrpn/state_space.hpp"

namespace mrpn {

std::string Verdict::str() const {
  const char* s = status == Status::Pass ? "PASS" : status == Status::Fail ? "FAIL" : "BUDGET";
  std::string out = std::string(s) + " " + check;
  if (!detail.empty()) out += ": " + detail;
  for (const auto& w : witness) out += "\n    " + w;
  return out;
}

std::string describe(const Action& a) {
  std::string out = label_of(a).str();
  if (a.reverse()) out += "[k=" + std::to_string(a.key) + "]";
  return out;
}

std::string describe(const Trace& t) {
  std::string out = "<";
  for (std::size_t i = 0; i < t.size(); ++i) out += (i ? "; " : "") + describe(t[i]);
  return out + ">";
}

namespace {
std::string describe(const std::vector<Label>& ls) {
  std::string out = "<";
  for (std::size_t i = 0; i < ls.size(); ++i) out += (i ? "; " : "") + ls[i].str();
  return out + ">";
}
}  // namespace

bool states_equivalent(const State& s1, const State& s2) {
  return canonical_key(s1, KeyMode::Causal) == canonical_key(s2, KeyMode::Causal);
}

bool cpath_equivalent(const State& s1, const State& s2) {
  using Entry = std::pair<std::string, std::vector<std::pair<std::string, std::string>>>;
  auto summary = [](const State& s) {
    std::map<std::string, std::multiset<Entry>> out;
    for (const auto& [place, bag] : s.marking.places())
      for (const auto& t : bag.instances()) out[place].insert({t.type, t.cpath()});
    return out;
  };
  return summary(s1) == summary(s2);
}

bool actions_concurrent(const State& s, const Action& a1, const Action& a2) {
  for (const auto& [u, x] : a1.assignment)
    for (const auto& [v, y] : a2.assignment) {
      auto px = s.marking.locate(x.id());
      auto py = s.marking.locate(y.id());
      if (!px || !py || *px != *py) continue;
      const Bag& bag = s.marking.at(*px);
      if (connected(bag.instance(x.id()), bag) == connected(bag.instance(y.id()), bag)) return false;
    }
  return true;
}

bool actions_opposite(const Action& a1, const Action& a2) {
  if (a1.dir == a2.dir || a1.transition != a2.transition) return false;
  const Action& fwd = a1.reverse() ? a2 : a1;
  const Action& rev = a1.reverse() ? a1 : a2;
  if (fwd.assignment.size() != rev.assignment.size()) return false;
  for (const auto& [var, tok] : fwd.assignment) {
    auto it = rev.assignment.find(var);
    if (it == rev.assignment.end() || it->second.path.empty()) return false;
    if (it->second.init() != tok) return false;
  }
  return true;
}

std::vector<State> replay(const Net& net, const State& s0, const Trace& trace) {
  std::vector<State> out{s0};
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const auto enabled = enabled_actions(net, out.back());
    if (std::find(enabled.begin(), enabled.end(), trace[i]) == enabled.end())
      throw TraceError(i, describe(trace[i]) + " is not enabled");
    out.push_back(apply(net, out.back(), trace[i]));
  }
  return out;
}

std::vector<Label> labels_of(const Trace& trace) {
  std::vector<Label> out;
  out.reserve(trace.size());
  for (const auto& a : trace) out.push_back(label_of(a));
  return out;
}

std::optional<Trace> resolve_trace(const Net& net, const State& s0, const std::vector<Label>& labels) {
  Trace out;
  State s = s0;
  for (const auto& l : labels) {
    auto a = resolve(net, s, l);
    if (!a) return std::nullopt;
    s = apply(net, s, *a);
    out.push_back(std::move(*a));
  }
  return out;
}

namespace {

// States visited by a resolved trace.
std::vector<State> visit(const Net& net, const State& s0, const Trace& trace) {
  std::vector<State> out{s0};
  for (const auto& a : trace) out.push_back(apply(net, out.back(), a));
  return out;
}

}  // namespace

std::vector<std::vector<Label>> rewrite_neighbours(const Net& net, const State& s0, const std::vector<Label>& labels) {
  std::vector<std::vector<Label>> out;
  auto trace = resolve_trace(net, s0, labels);
  if (!trace) return out;
  const auto states = visit(net, s0, *trace);
  for (std::size_t i = 0; i + 1 < trace->size(); ++i) {
    const Action& a = (*trace)[i];
    const Action& b = (*trace)[i + 1];
    if (actions_opposite(a, b)) {
      auto cand = labels;
      cand.erase(cand.begin() + static_cast<std::ptrdiff_t>(i), cand.begin() + static_cast<std::ptrdiff_t>(i) + 2);
      if (resolve_trace(net, s0, cand)) out.push_back(std::move(cand));
    }
    if (actions_concurrent(states[i], a, b)) {
      auto cand = labels;
      std::swap(cand[i], cand[i + 1]);
      if (resolve_trace(net, s0, cand)) out.push_back(std::move(cand));
    }
  }
  return out;
}

namespace {

std::set<std::vector<Label>> closure(const Net& net, const State& s0, const std::vector<Label>& start) {
  std::set<std::vector<Label>> seen{start};
  std::deque<std::vector<Label>> queue{start};
  while (!queue.empty()) {
    auto cur = std::move(queue.front());
    queue.pop_front();
    for (auto& next : rewrite_neighbours(net, s0, cur))
      if (seen.insert(next).second) queue.push_back(std::move(next));
  }
  return seen;
}

}  // namespace

bool traces_equivalent(const Net& net, const State& s0, const Trace& t1, const Trace& t2) {
  replay(net, s0, t1);
  replay(net, s0, t2);
  const auto c1 = closure(net, s0, labels_of(t1));
  const auto c2 = closure(net, s0, labels_of(t2));
  for (const auto& x : c1)
    if (c2.count(x)) return true;
  return false;
}

ParabolicForm parabolic_normalize(const Net& net, const State& s0, const Trace& trace) {
  replay(net, s0, trace);
  std::vector<Label> labels = labels_of(trace);
  for (;;) {
    std::size_t i = 0;
    while (i + 1 < labels.size() && !(labels[i].dir == Direction::Forward && labels[i + 1].dir == Direction::Reverse))
      ++i;
    if (i + 1 >= labels.size()) break;

    auto resolved = resolve_trace(net, s0, labels);
    if (!resolved) throw NetError("parabolic rewriting produced a non-executable trace " + describe(labels));
    const auto states = visit(net, s0, *resolved);
    const Action& fwd = (*resolved)[i];
    const Action& rev = (*resolved)[i + 1];
    auto at = labels.begin() + static_cast<std::ptrdiff_t>(i);
    if (actions_opposite(fwd, rev)) {
      labels.erase(at, at + 2);
    } else if (actions_concurrent(states[i], fwd, rev)) {
      std::iter_swap(at, at + 1);
    } else {
      throw NetError("steps " + std::to_string(i) + " and " + std::to_string(i + 1) +
                     " are neither opposite nor concurrent: " + describe(fwd) + ", " + describe(rev));
    }
  }
  auto resolved = resolve_trace(net, s0, labels);
  if (!resolved) throw NetError("parabolic form " + describe(labels) + " is not executable");
  ParabolicForm out;
  for (auto& a : *resolved) (a.reverse() ? out.reverses : out.forwards).push_back(std::move(a));
  return out;
}

Verdict check_square(const Net& net, const State& s, const Action& a1, const Action& a2) {
  const auto enabled = enabled_actions(net, s);
  for (const Action* a : {&a1, &a2})
    if (std::find(enabled.begin(), enabled.end(), *a) == enabled.end())
      throw PreconditionError("square: " + describe(*a) + " is not enabled");
  if (a1 == a2) throw PreconditionError("square: the two actions are identical");
  if (!actions_concurrent(s, a1, a2))
    throw PreconditionError("square: " + describe(a1) + " and " + describe(a2) + " are not concurrent");

  auto run = [&](const Action& first, const Action& second) -> std::optional<State> {
    State mid = apply(net, s, first);
    auto next = resolve(net, mid, label_of(second));
    if (!next) return std::nullopt;
    return apply(net, mid, *next);
  };
  const std::string pair = describe(a1) + " | " + describe(a2);
  auto s12 = run(a1, a2);
  if (!s12) return Verdict::fail("square", "second action disabled after the first", {pair, describe(a1) + " first"});
  auto s21 = run(a2, a1);
  if (!s21) return Verdict::fail("square", "second action disabled after the first", {pair, describe(a2) + " first"});
  if (!states_equivalent(*s12, *s21))
    return Verdict::fail("square", "interleavings end in inequivalent states",
                         {pair, compact_state(*s12), compact_state(*s21)});
  return Verdict::ok("square", pair);
}

Verdict check_loop(const Net& net, const State& s, const std::string& t, const Assignment& a) {
  const int k = next_key(s, t);
  const Action fwd{Direction::Forward, t, a, 0};
  const State s1 = fire_forward(net, s, t, a);
  const std::string what = describe(fwd);

  std::optional<ReverseCandidate> undo;
  for (auto& c : enumerate_reverse(net, s1, t))
    if (c.key == k) undo = std::move(c);
  if (!undo) return Verdict::fail("loop", "no reverse candidate for the new occurrence", {what});
  const Action rev{Direction::Reverse, t, undo->assignment, undo->key};
  if (!actions_opposite(fwd, rev)) return Verdict::fail("loop", "undo is not the opposite action", {what, describe(rev)});
  const State s2 = fire_reverse(net, s1, t, *undo);
  if (s2 != s) return Verdict::fail("loop", "forward then reverse does not restore the state", {what, compact_state(s2)});

  auto again = resolve(net, s2, label_of(fwd));
  if (!again) return Verdict::fail("loop", "action disabled after its own reversal", {what});
  const State s3 = apply(net, s2, *again);
  if (!states_equivalent(s3, s1))
    return Verdict::fail("loop", "reverse then forward is not equivalent", {what, compact_state(s3)});
  return Verdict::ok("loop", what);
}

Verdict check_reverse_loop(const Net& net, const State& s, const Action& reverse) {
  if (!reverse.reverse()) throw PreconditionError("reverse loop needs a reverse action");
  const std::string what = describe(reverse);
  const State s1 = apply(net, s, reverse);
  Label l = label_of(reverse);
  l.dir = Direction::Forward;
  auto fwd = resolve(net, s1, l);
  if (!fwd) return Verdict::fail("loop", "forward redo disabled after reversal", {what});
  if (!actions_opposite(reverse, *fwd)) return Verdict::fail("loop", "redo is not opposite", {what, describe(*fwd)});
  const State s2 = apply(net, s1, *fwd);
  if (!states_equivalent(s2, s)) return Verdict::fail("loop", "reverse then forward is not equivalent", {what});
  return Verdict::ok("loop", what);
}

Verdict check_theorem_main(const Net& net, const State& s0, int max_len, std::size_t trace_budget) {
  if (max_len < 0) throw PreconditionError("trace length bound must be non-negative");

  // Every executable trace up to max_len, with its end-state class.
  std::vector<std::vector<Label>> traces;
  std::vector<std::string> ends;
  bool over = false;
  std::function<void(const State&, std::vector<Label>&)> dfs = [&](const State& s, std::vector<Label>& cur) {
    if (over) return;
    if (traces.size() >= trace_budget) {
      over = true;
      return;
    }
    traces.push_back(cur);
    ends.push_back(canonical_key(s, KeyMode::Causal));
    if (static_cast<int>(cur.size()) == max_len) return;
    for (const auto& a : enabled_actions(net, s)) {
      cur.push_back(label_of(a));
      dfs(apply(net, s, a), cur);
      cur.pop_back();
    }
  };
  std::vector<Label> start;
  dfs(s0, start);
  if (over)
    return {Verdict::Status::Budget, "main", "more than " + std::to_string(trace_budget) + " traces", {}};

  std::map<std::vector<Label>, std::size_t> index;
  for (std::size_t i = 0; i < traces.size(); ++i) index.emplace(traces[i], i);
  std::vector<std::size_t> parent(traces.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> root = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < traces.size(); ++i)
    for (const auto& n : rewrite_neighbours(net, s0, traces[i])) {
      auto it = index.find(n);
      if (it == index.end())
        return Verdict::fail("main", "rewrite left the enumerated trace set", {describe(traces[i]), describe(n)});
      parent[root(i)] = root(it->second);
    }

  // Trace-equivalent => state-equivalent, and the converse.
  std::map<std::size_t, std::size_t> class_end;
  std::map<std::string, std::size_t> end_class;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    std::size_t r = root(i);
    auto [ce, fresh_c] = class_end.emplace(r, i);
    if (!fresh_c && ends[ce->second] != ends[i])
      return Verdict::fail("main", "equivalent traces reach inequivalent states",
                           {describe(traces[ce->second]), describe(traces[i])});
    auto [ec, fresh_e] = end_class.emplace(ends[i], i);
    if (!fresh_e && root(ec->second) != r)
      return Verdict::fail("main", "inequivalent traces reach equivalent states",
                           {describe(traces[ec->second]), describe(traces[i])});
  }
  return Verdict::ok("main", std::to_string(traces.size()) + " traces, " + std::to_string(class_end.size()) +
                                 " classes");
}

}  // namespace mrpn
