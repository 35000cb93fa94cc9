#include <doctest.h>

#include "corpus.hpp"
#include "mrpn/causality.hpp"
#include "mrpn/state_space.hpp"

using namespace mrpn;
using testkit::load;
using testkit::must;

namespace {

struct Run {
  NetDocument doc;
  State s0;

  explicit Run(const std::string& name) : doc(load(name)), s0(initial_state(doc.initial)) {}

  // Actions named by labels, each resolved in the state reached so far.
  Trace trace(const std::vector<std::string>& labels) const {
    Trace out;
    State s = s0;
    for (const auto& l : labels) {
      out.push_back(must(doc.net, s, l));
      s = apply(doc.net, s, out.back());
    }
    return out;
  }

  State end(const std::vector<std::string>& labels) const { return replay(doc.net, s0, trace(labels)).back(); }
  Action at0(const std::string& label) const { return must(doc.net, s0, label); }
};

}  // namespace

TEST_CASE("state equivalence examples") {
  Run fig6("fig6");
  State a = fig6.end({"t(c=C#1,i=I#1)", "t(c=C#2,i=I#2)"});
  State b = fig6.end({"t(c=C#2,i=I#2)", "t(c=C#1,i=I#1)"});
  CHECK(a != b);
  CHECK(states_equivalent(a, b));
  CHECK(states_equivalent(a, a));

  Run pen("pen");
  CHECK_FALSE(states_equivalent(pen.s0, pen.end({"t1(c=C#1,i=I#1)"})));
}

TEST_CASE("key-free path comparison alone conflates different pairings") {
  // Both end states have the same per-place multiset of (type, key-free path),
  // yet no rewriting relates the traces: I#1 is bonded to different tokens.
  Run fig6("fig6");
  Trace x = fig6.trace({"t(c=C#1,i=I#1)"});
  Trace y = fig6.trace({"t(c=C#2,i=I#1)"});
  State ex = replay(fig6.doc.net, fig6.s0, x).back();
  State ey = replay(fig6.doc.net, fig6.s0, y).back();
  CHECK(cpath_equivalent(ex, ey));
  CHECK_FALSE(states_equivalent(ex, ey));
  CHECK_FALSE(traces_equivalent(fig6.doc.net, fig6.s0, x, y));
}

TEST_CASE("state equivalence is an equivalence relation on explored states") {
  for (const auto& [name, doc] : testkit::corpus()) {
    CAPTURE(name);
    Lts lts = explore(doc.net, initial_state(doc.initial), {3, 100000, KeyMode::Exact});
    const std::size_t n = std::min<std::size_t>(lts.states.size(), 25);
    for (std::size_t i = 0; i < n; ++i) {
      const State& a = lts.states[i].state;
      CHECK(states_equivalent(a, a));
      CHECK(states_equivalent(a, normalize_keys(a)));
      for (std::size_t j = 0; j < n; ++j) {
        const State& b = lts.states[j].state;
        CHECK(states_equivalent(a, b) == states_equivalent(b, a));
        if (!states_equivalent(a, b)) continue;
        for (std::size_t k = 0; k < n; ++k)
          if (states_equivalent(b, lts.states[k].state)) CHECK(states_equivalent(a, lts.states[k].state));
      }
    }
  }
}

TEST_CASE("concurrency examples") {
  Run pen("pen");
  Action a = pen.at0("t1(c=C#1,i=I#1)"), b = pen.at0("t1(c=C#2,i=I#2)"), c = pen.at0("t1(c=C#2,i=I#1)");
  CHECK(actions_concurrent(pen.s0, a, b));
  CHECK(actions_concurrent(pen.s0, b, a));
  CHECK_FALSE(actions_concurrent(pen.s0, a, c));
  CHECK_FALSE(actions_concurrent(pen.s0, c, a));
}

TEST_CASE("opposite actions") {
  Run pen("pen");
  Action fwd = pen.at0("t1(c=C#1,i=I#1)");
  State s1 = apply(pen.doc.net, pen.s0, fwd);
  Action rev = must(pen.doc.net, s1, "~t1(c=C#1,i=I#1)");
  CHECK(rev.assignment.at("i") == fwd.assignment.at("i").plus({1, "t1", "i"}));
  CHECK(actions_opposite(fwd, rev));
  CHECK(actions_opposite(rev, fwd));
  CHECK_FALSE(actions_opposite(fwd, pen.at0("t1(c=C#2,i=I#2)")));

  State s2 = apply(pen.doc.net, s1, must(pen.doc.net, s1, "t1(c=C#2,i=I#2)"));
  Action other = must(pen.doc.net, s2, "~t1(c=C#2,i=I#2)");
  CHECK_FALSE(actions_opposite(fwd, other));
}

TEST_CASE("distinct enabled reverse actions are concurrent") {
  for (const auto& [name, doc] : testkit::corpus()) {
    CAPTURE(name);
    Lts lts = explore(doc.net, initial_state(doc.initial), {3, 100000, KeyMode::Exact});
    for (const auto& st : lts.states) {
      std::vector<Action> revs;
      for (const auto& a : enabled_actions(doc.net, st.state))
        if (a.reverse()) revs.push_back(a);
      for (const auto& x : revs)
        for (const auto& y : revs)
          if (x != y) CHECK(actions_concurrent(st.state, x, y));
    }
  }
}

TEST_CASE("trace equivalence examples") {
  Run pen("pen");
  Trace ab = pen.trace({"t1(c=C#1,i=I#1)", "t1(c=C#2,i=I#2)"});
  Trace ba = pen.trace({"t1(c=C#2,i=I#2)", "t1(c=C#1,i=I#1)"});
  CHECK(traces_equivalent(pen.doc.net, pen.s0, ab, ab));
  CHECK(traces_equivalent(pen.doc.net, pen.s0, ab, ba));
  CHECK(traces_equivalent(pen.doc.net, pen.s0, pen.trace({"t1(c=C#1,i=I#1)", "~t1(c=C#1,i=I#1)"}), {}));
  CHECK_FALSE(traces_equivalent(pen.doc.net, pen.s0, ab, {}));

  Trace bogus{pen.at0("t1(c=C#1,i=I#1)"), pen.at0("t1(c=C#1,i=I#1)")};
  CHECK_THROWS_AS(traces_equivalent(pen.doc.net, pen.s0, bogus, ab), TraceError);
  try {
    replay(pen.doc.net, pen.s0, bogus);
  } catch (const TraceError& e) {
    CHECK(e.step == 1);
  }
}

TEST_CASE("causally dependent steps do not commute") {
  Run pen("pen");
  Trace x = pen.trace({"t1(c=C#2,i=I#1)", "t2(b=B#2,c=C#2)"});
  State s = replay(pen.doc.net, pen.s0, x)[1];
  CHECK_FALSE(actions_concurrent(s, x[0], x[1]));
  CHECK(rewrite_neighbours(pen.doc.net, pen.s0, labels_of(x)).empty());
}

TEST_CASE("parabolic normal forms") {
  Run pen("pen");
  Trace fwd = pen.trace({"t1(c=C#1,i=I#1)", "t1(c=C#2,i=I#2)"});
  auto p = parabolic_normalize(pen.doc.net, pen.s0, fwd);
  CHECK(p.reverses.empty());
  CHECK(p.forwards == fwd);

  auto q = parabolic_normalize(pen.doc.net, pen.s0, pen.trace({"t1(c=C#1,i=I#1)", "~t1(c=C#1,i=I#1)"}));
  CHECK(q.reverses.empty());
  CHECK(q.forwards.empty());

  Trace t = pen.trace({"t1(c=C#1,i=I#1)", "t1(c=C#2,i=I#2)", "~t1(c=C#1,i=I#1)"});
  auto r = parabolic_normalize(pen.doc.net, pen.s0, t);
  CHECK(r.reverses.empty());
  REQUIRE(r.forwards.size() == 1);
  CHECK(labels_of(r.forwards)[0].str() == "t1(c=C#2,i=I#2)");
  CHECK(states_equivalent(replay(pen.doc.net, pen.s0, r.forwards).back(), replay(pen.doc.net, pen.s0, t).back()));

  // A reverse of an occurrence from before the trace stays in front.
  State mid = pen.end({"t1(c=C#1,i=I#1)"});
  Trace u{must(pen.doc.net, mid, "t1(c=C#2,i=I#2)")};
  u.push_back(must(pen.doc.net, apply(pen.doc.net, mid, u[0]), "~t1(c=C#1,i=I#1)"));
  auto v = parabolic_normalize(pen.doc.net, mid, u);
  REQUIRE(v.reverses.size() == 1);
  CHECK(v.forwards.size() == 1);
  CHECK(states_equivalent(replay(pen.doc.net, mid, u).back(),
                          replay(pen.doc.net, mid, [&] {
                            Trace j = v.reverses;
                            j.insert(j.end(), v.forwards.begin(), v.forwards.end());
                            return j;
                          }())
                              .back()));
}

TEST_CASE("square property examples") {
  Run pen("pen");
  CHECK(check_square(pen.doc.net, pen.s0, pen.at0("t1(c=C#1,i=I#1)"), pen.at0("t1(c=C#2,i=I#2)")).pass());
  CHECK_THROWS_AS(check_square(pen.doc.net, pen.s0, pen.at0("t1(c=C#1,i=I#1)"), pen.at0("t1(c=C#2,i=I#1)")),
                  PreconditionError);

  State pre = pen.end({"t1(c=C#2,i=I#1)", "t1(c=C#1,i=I#2)"});
  Action r1 = must(pen.doc.net, pre, "~t1(c=C#2,i=I#1)"), r2 = must(pen.doc.net, pre, "~t1(c=C#1,i=I#2)");
  CHECK(check_square(pen.doc.net, pre, r1, r2).pass());

  Action stale = pen.at0("t1(c=C#1,i=I#1)");
  CHECK_THROWS_AS(check_square(pen.doc.net, pre, stale, r1), PreconditionError);
}

TEST_CASE("loop lemma examples") {
  Run pen("pen");
  Action a = pen.at0("t1(c=C#2,i=I#1)");
  CHECK(check_loop(pen.doc.net, pen.s0, "t1", a.assignment).pass());
  State s1 = apply(pen.doc.net, pen.s0, a);
  CHECK(check_reverse_loop(pen.doc.net, s1, must(pen.doc.net, s1, "~t1(c=C#2,i=I#1)")).pass());
  CHECK_THROWS_AS(check_reverse_loop(pen.doc.net, pen.s0, a), PreconditionError);
}

TEST_CASE("main theorem on small nets") {
  Run fig6("fig6");
  Verdict v = check_theorem_main(fig6.doc.net, fig6.s0, 3);
  CHECK_MESSAGE(v.pass(), v.str());
  CHECK(check_theorem_main(fig6.doc.net, fig6.s0, 0).pass());
  Verdict small = check_theorem_main(fig6.doc.net, fig6.s0, 3, 5);
  CHECK(small.status == Verdict::Status::Budget);
  CHECK_FALSE(small.pass());
}

TEST_CASE("verdict rendering carries the witness") {
  Verdict v = Verdict::fail("square", "boom", {"a", "b"});
  CHECK(v.str() == "FAIL square: boom\n    a\n    b");
  CHECK(Verdict::ok("loop").str() == "PASS loop");
}
