#pragma once

// Direct transcription of the firing and reversal rules over full token
// instances. Shares only the static Net structure with the library; bonds
// hold complete instances and the history is a set of integers per
// transition.

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mrpn/engine.hpp"
#include "mrpn/net.hpp"

namespace oracle {

using Entry = std::tuple<int, std::string, std::string>;

struct Tok {
  std::string type;
  int idx = 0;
  std::vector<Entry> path;
  auto operator<=>(const Tok&) const = default;
};

using BondI = std::pair<Tok, Tok>;
BondI bond(const Tok& a, const Tok& b);

struct Stuff {
  std::set<Tok> toks;
  std::set<BondI> bonds;
  auto operator<=>(const Stuff&) const = default;
};

struct St {
  std::map<std::string, Stuff> m;  // empty places omitted
  std::map<std::string, std::set<int>> h;
  auto operator<=>(const St&) const = default;
};

/// (direction, transition, variable -> (type, index)).
struct Move {
  bool forward = true;
  std::string t;
  std::map<std::string, std::pair<std::string, int>> bind;
  int key = 0;
  auto operator<=>(const Move&) const = default;
};

St from_state(const mrpn::State& s);
St initial(const mrpn::Marking& m0);

/// Every enabled move and its target.
std::vector<std::pair<Move, St>> successors(const mrpn::Net& net, const St& s);

/// Keys of each transition renumbered 1..n in order.
St normalize(const St& s);

struct Counts {
  std::size_t states = 0, forward = 0, reverse = 0;
};

/// Breadth-first ball of radius `depth`, states identified after normalize().
Counts explore(const mrpn::Net& net, const St& s0, int depth);

}  // namespace oracle
