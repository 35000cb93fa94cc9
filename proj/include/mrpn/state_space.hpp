#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "mrpn/engine.hpp"
#include "mrpn/net.hpp"

namespace mrpn {

/// How states are identified during exploration.
///
///  - Exact: the full marking and history, occurrence keys included.
///  - Normalized: keys of each transition renumbered 1..n in increasing order,
///    consistently across the history and every token path.
///  - Causal: keys replaced by the set of path positions carrying the
///    occurrence, so states equal up to any per-transition renaming of keys
///    share a key.
enum class KeyMode { Exact, Normalized, Causal };

KeyMode parse_key_mode(const std::string& s);
const char* key_mode_name(KeyMode m);

std::string canonical_key(const State& s, KeyMode mode);

/// Order-preserving renumbering of occurrence keys per transition.
State normalize_keys(const State& s);

struct ExploreConfig {
  int depth = 3;
  std::size_t state_cap = 100000;
  KeyMode keys = KeyMode::Exact;
};

struct LtsState {
  std::string key;
  State state;  // representative; key-normalized in the Normalized/Causal modes
  int depth = 0;
  bool expanded = false;
};

struct LtsEdge {
  std::size_t from = 0;
  Label label;
  std::size_t to = 0;

  auto operator<=>(const LtsEdge&) const = default;
};

struct Lts {
  std::vector<LtsState> states;
  std::size_t initial = 0;
  std::vector<LtsEdge> edges;
  KeyMode keys = KeyMode::Exact;
  /// Set when the state cap stopped exploration before the depth bound.
  bool truncated = false;

  std::size_t count_edges(Direction d) const;
  std::vector<const LtsEdge*> out_edges(std::size_t state) const;
  std::optional<std::size_t> find(const std::string& key) const;

 private:
  friend Lts explore(const Net&, const State&, const ExploreConfig&);
  std::map<std::string, std::size_t> index_;
};

/// Breadth-first exploration. States at distance < depth are expanded; every
/// new state is checked for token and bond conservation.
Lts explore(const Net& net, const State& s0, const ExploreConfig& cfg);

std::string export_dot(const Lts& lts);
std::string export_jsonl(const Lts& lts);

}  // namespace mrpn
