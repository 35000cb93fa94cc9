#include "mrpn/properties.hpp"

#include <algorithm>
#include <functional>

#include "mrpn/format.hpp"

namespace mrpn {

std::string SuiteReport::summary() const {
  std::string out = (budget ? "BUDGET " : failures.empty() ? "PASS " : "FAIL ") + suite + ": " +
                    std::to_string(checks) + " checks, " + std::to_string(failures.size()) + " failures";
  if (!note.empty()) out += " (" + note + ")";
  return out;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"loop", "square", "rti", "conservation", "parabolic", "main"};
  return names;
}

std::vector<std::string> check_bond_step(const Net& net, const State& s, const Action& a, const State& next) {
  const auto fx = transition_effects(net, a.transition);
  auto made = instantiate_bonds(fx.created, a.assignment);
  auto broken = instantiate_bonds(fx.destroyed, a.assignment);
  if (a.reverse()) std::swap(made, broken);

  std::set<Bond> all;
  for (const auto* m : {&s.marking, &next.marking})
    for (const auto& [place, bag] : m->places()) all.insert(bag.bonds.begin(), bag.bonds.end());
  all.insert(made.begin(), made.end());
  all.insert(broken.begin(), broken.end());

  std::vector<std::string> out;
  for (const auto& b : all) {
    int before = count_bond(s.marking, b), after = count_bond(next.marking, b);
    int want_before = before, want_after = before;
    if (made.count(b)) want_before = 0, want_after = 1;
    if (broken.count(b)) want_before = 1, want_after = 0;
    if (before != want_before || after != want_after || after > 1)
      out.push_back("bond " + b.str() + " count " + std::to_string(before) + " -> " + std::to_string(after) +
                    " across " + describe(a));
  }
  return out;
}

namespace {

void record(SuiteReport& r, Verdict v) {
  ++r.checks;
  if (!v.pass()) r.failures.push_back(std::move(v));
}

template <typename F>
void each_expanded(const Lts& lts, F&& f) {
  for (const auto& st : lts.states)
    if (st.expanded) f(st.state);
}

}  // namespace

SuiteReport run_suite(const Net& net, const State& s0, const std::string& suite, int depth, std::size_t budget) {
  SuiteReport r;
  r.suite = suite;
  auto ball = [&] {
    Lts l = explore(net, s0, {depth, budget, KeyMode::Exact});
    r.budget = l.truncated;
    r.note = std::to_string(l.states.size()) + " states";
    return l;
  };

  if (suite == "loop") {
    const Lts lts = ball();
    each_expanded(lts, [&](const State& s) {
      for (const auto& a : enabled_actions(net, s)) {
        if (a.reverse())
          record(r, check_reverse_loop(net, s, a));
        else
          record(r, check_loop(net, s, a.transition, a.assignment));
      }
    });
  } else if (suite == "square") {
    const Lts lts = ball();
    each_expanded(lts, [&](const State& s) {
      const auto acts = enabled_actions(net, s);
      for (std::size_t i = 0; i < acts.size(); ++i)
        for (std::size_t j = i + 1; j < acts.size(); ++j) {
          bool c = actions_concurrent(s, acts[i], acts[j]);
          if (c != actions_concurrent(s, acts[j], acts[i]))
            record(r, Verdict::fail("square", "concurrency is not symmetric", {describe(acts[i]), describe(acts[j])}));
          if (c) record(r, check_square(net, s, acts[i], acts[j]));
        }
    });
  } else if (suite == "rti") {
    const Lts lts = ball();
    for (const auto& st : lts.states) {
      std::vector<Action> revs;
      for (auto& a : enabled_actions(net, st.state))
        if (a.reverse()) revs.push_back(std::move(a));
      for (std::size_t i = 0; i < revs.size(); ++i)
        for (std::size_t j = i + 1; j < revs.size(); ++j)
          record(r, actions_concurrent(st.state, revs[i], revs[j])
                        ? Verdict::ok("rti")
                        : Verdict::fail("rti", "enabled reverse actions are not concurrent",
                                        {describe(revs[i]), describe(revs[j]), st.key}));
      if (revs.size() < 2) ++r.checks;
    }
  } else if (suite == "conservation") {
    const Lts lts = ball();
    const auto declared = identities(s0.marking);
    for (const auto& st : lts.states) {
      auto bad = check_conservation(st.state.marking, declared);
      record(r, bad.empty() ? Verdict::ok("conservation") : Verdict::fail("conservation", bad.front(), {st.key}));
    }
    for (const auto& e : lts.edges) {
      const State& s = lts.states[e.from].state;
      auto a = resolve(net, s, e.label);
      if (!a) {
        record(r, Verdict::fail("conservation", "edge label not enabled", {e.label.str(), lts.states[e.from].key}));
        continue;
      }
      auto bad = check_bond_step(net, s, *a, apply(net, s, *a));
      record(r, bad.empty() ? Verdict::ok("conservation") : Verdict::fail("conservation", bad.front(), {lts.states[e.from].key}));
    }
  } else if (suite == "parabolic") {
    std::size_t traces = 0;
    std::vector<Action> cur;
    std::function<void(const State&)> dfs = [&](const State& s) {
      if (r.budget) return;
      if (++traces > budget) {
        r.budget = true;
        return;
      }
      try {
        auto p = parabolic_normalize(net, s0, cur);
        Trace joined = p.reverses;
        joined.insert(joined.end(), p.forwards.begin(), p.forwards.end());
        const State end = replay(net, s0, joined).back();
        bool shaped = std::none_of(p.reverses.begin(), p.reverses.end(), [](const Action& a) { return !a.reverse(); }) &&
                      std::none_of(p.forwards.begin(), p.forwards.end(), [](const Action& a) { return a.reverse(); });
        if (!shaped)
          record(r, Verdict::fail("parabolic", "result is not reverses then forwards", {describe(cur)}));
        else if (!states_equivalent(end, s))
          record(r, Verdict::fail("parabolic", "end states differ", {describe(cur), describe(joined)}));
        else if (!traces_equivalent(net, s0, cur, joined))
          record(r, Verdict::fail("parabolic", "normal form is not trace equivalent", {describe(cur), describe(joined)}));
        else
          record(r, Verdict::ok("parabolic"));
      } catch (const NetError& e) {
        record(r, Verdict::fail("parabolic", e.what(), {describe(cur)}));
      }
      if (static_cast<int>(cur.size()) == depth) return;
      for (const auto& a : enabled_actions(net, s)) {
        cur.push_back(a);
        dfs(apply(net, s, a));
        cur.pop_back();
      }
    };
    dfs(s0);
    r.note = std::to_string(traces) + " traces";
  } else if (suite == "main") {
    Verdict v = check_theorem_main(net, s0, depth, budget);
    r.budget = v.status == Verdict::Status::Budget;
    r.note = v.detail;
    if (!r.budget) record(r, std::move(v));
  } else {
    throw NetError("unknown property suite '" + suite + "'");
  }
  return r;
}

}  // namespace mrpn
