#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mrpn/engine.hpp"
#include "mrpn/net.hpp"

namespace mrpn {

using Trace = std::vector<Action>;

struct TraceError : NetError {
  TraceError(std::size_t step, const std::string& what)
      : NetError("step " + std::to_string(step) + ": " + what), step(step) {}
  std::size_t step;
};

struct PreconditionError : NetError {
  using NetError::NetError;
};

struct Verdict {
  enum class Status { Pass, Fail, Budget };

  Status status = Status::Pass;
  std::string check;
  std::string detail;
  /// Offending interleaving, trace pair or state, rendered for humans.
  std::vector<std::string> witness;

  bool pass() const { return status == Status::Pass; }
  static Verdict ok(std::string check, std::string detail = {}) { return {Status::Pass, std::move(check), std::move(detail), {}}; }
  static Verdict fail(std::string check, std::string detail, std::vector<std::string> witness = {}) {
    return {Status::Fail, std::move(check), std::move(detail), std::move(witness)};
  }
  std::string str() const;
};

/// Causal equivalence of states: the same tokens and bonds in every place, with
/// causal paths equal up to a per-transition renaming of occurrence keys.
bool states_equivalent(const State& s1, const State& s2);

/// The coarser relation that only compares, per place, the multiset of token
/// types with their key-free causal paths. Ignores instance indices, bonds and
/// which tokens shared an occurrence.
bool cpath_equivalent(const State& s1, const State& s2);

/// No token used by one action shares a connected component (within its
/// place in `s`) with a token used by the other.
bool actions_concurrent(const State& s, const Action& a1, const Action& a2);

/// A forward and a reverse action of the same transition where the reverse
/// assignment, with the last path entry dropped, equals the forward one.
bool actions_opposite(const Action& a1, const Action& a2);

/// States s0..sn visited by a trace. Each action must be exactly one of the
/// enabled actions of the state it is applied to.
std::vector<State> replay(const Net& net, const State& s0, const Trace& trace);

std::vector<Label> labels_of(const Trace& trace);

/// Re-instantiates a label sequence from s0. Empty when some step is not enabled.
std::optional<Trace> resolve_trace(const Net& net, const State& s0, const std::vector<Label>& labels);

/// Single rewrite steps of a trace: swaps of adjacent concurrent actions and
/// cancellations of adjacent opposite pairs. Only executable results are kept.
std::vector<std::vector<Label>> rewrite_neighbours(const Net& net, const State& s0, const std::vector<Label>& labels);

bool traces_equivalent(const Net& net, const State& s0, const Trace& t1, const Trace& t2);

struct ParabolicForm {
  Trace reverses;
  Trace forwards;
};

/// Moves every reverse step in front of all forward steps, cancelling opposite
/// pairs on the way.
ParabolicForm parabolic_normalize(const Net& net, const State& s0, const Trace& trace);

Verdict check_square(const Net& net, const State& s, const Action& a1, const Action& a2);
Verdict check_loop(const Net& net, const State& s, const std::string& t, const Assignment& a);

/// Reverse-then-forward half of the loop property starting from `s`.
Verdict check_reverse_loop(const Net& net, const State& s, const Action& reverse);

/// All executable traces up to `max_len` from s0 are partitioned by trace
/// equivalence and by state equivalence of their end states; the partitions
/// must coincide. `trace_budget` bounds the number of traces enumerated.
Verdict check_theorem_main(const Net& net, const State& s0, int max_len, std::size_t trace_budget = 200000);

std::string describe(const Action& a);
std::string describe(const Trace& t);

}  // namespace mrpn
