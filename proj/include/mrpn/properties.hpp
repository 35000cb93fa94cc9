#pragma once

// Property suites run over the bounded reachable part of a net.

#include <cstddef>
#include <string>
#include <vector>

#include "mrpn/causality.hpp"
#include "mrpn/state_space.hpp"

namespace mrpn {

struct SuiteReport {
  std::string suite;
  std::size_t checks = 0;
  std::vector<Verdict> failures;
  bool budget = false;
  std::string note;

  bool ok() const { return failures.empty() && !budget; }
  std::string summary() const;
};

/// Names accepted by run_suite.
const std::vector<std::string>& suite_names();

/// loop: both loop directions on every forward and reverse action of every
///       expanded state.
/// square: every concurrent pair of enabled actions of every expanded state.
/// rti: distinct enabled reverse actions are pairwise concurrent.
/// conservation: token and bond conservation on every state, and bond counts
///       across every edge change only as the transition prescribes.
/// parabolic: every trace up to `depth` normalizes to reverses-then-forwards
///       with a causally equivalent end state.
/// main: trace equivalence coincides with end-state equivalence up to `depth`.
SuiteReport run_suite(const Net& net, const State& s0, const std::string& suite, int depth,
                      std::size_t budget = 200000);

/// Bond-count discipline of a single step from `s` (empty when it holds).
std::vector<std::string> check_bond_step(const Net& net, const State& s, const Action& a, const State& next);

}  // namespace mrpn
