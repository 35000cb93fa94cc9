#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mrpn/net.hpp"

namespace mrpn {

/// Injective, type-respecting map from variables to token instances.
using Assignment = std::map<std::string, TokenInstance>;

/// Assignment with token paths dropped (variable -> (A, i)).
using Binding = std::map<std::string, TokenId>;

Binding project(const Assignment& a);
std::string binding_str(const Binding& b);

/// Transition -> occurrence key -> projected enabling assignment.
///
/// The full enabling assignment is recoverable from the marking: the token
/// bound to `a` in occurrence k carries (k, t, a) and its path prefix before
/// that entry is the path it had when the occurrence fired.
using History = std::map<std::string, std::map<int, Binding>>;

std::set<int> history_keys(const History& h, const std::string& t);

struct State {
  Marking marking;
  History history;

  auto operator<=>(const State&) const = default;
};

/// Initial state for a marking: all paths must be empty.
State initial_state(const Marking& m0);

struct ReverseCandidate {
  int key = 0;
  Assignment assignment;

  auto operator<=>(const ReverseCandidate&) const = default;
};

/// Bag instantiated through an assignment: tokens for every variable and bonds
/// for every variable pair in `bonds`.
std::set<Bond> instantiate_bonds(const std::set<VarBond>& bonds, const Assignment& a);

std::vector<Assignment> enumerate_forward(const Net& net, const State& s, const std::string& t);
Bag compute_after(const Net& net, const Marking& m, const std::string& t, const Assignment& a);
State fire_forward(const Net& net, const State& s, const std::string& t, const Assignment& a);

std::vector<ReverseCandidate> enumerate_reverse(const Net& net, const State& s, const std::string& t);
Bag compute_before(const Net& net, const Marking& m, const std::string& t, const Assignment& r);
State fire_reverse(const Net& net, const State& s, const std::string& t, const ReverseCandidate& c);

/// Forward key that the next firing of t would receive.
int next_key(const State& s, const std::string& t);

enum class Direction { Forward, Reverse };

/// A transition firing, forward or reverse, with its enabling assignment.
/// Reverse actions carry the key of the occurrence they undo.
struct Action {
  Direction dir = Direction::Forward;
  std::string transition;
  Assignment assignment;
  int key = 0;

  bool reverse() const { return dir == Direction::Reverse; }
  auto operator<=>(const Action&) const = default;
};

/// An action with token paths and occurrence keys dropped. For transitions with
/// at least one variable, at most one enabled action of a state has a given
/// label, so labels name actions stably across states differing only in keys.
struct Label {
  Direction dir = Direction::Forward;
  std::string transition;
  Binding binding;

  auto operator<=>(const Label&) const = default;
  /// "t1(c=C#2,i=I#1)" for forward, "~t1(c=C#2,i=I#1)" for reverse.
  std::string str() const;
};

Label label_of(const Action& a);

/// Every enabled action: per transition in name order, forward assignments
/// first, then reverse candidates.
std::vector<Action> enabled_actions(const Net& net, const State& s);
State apply(const Net& net, const State& s, const Action& a);
/// Enabled action of `s` whose label is `l`, if any.
std::optional<Action> resolve(const Net& net, const State& s, const Label& l);

}  // namespace mrpn
