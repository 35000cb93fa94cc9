#pragma once

// Translation of a multi-token net into a single-token net (one instance per
// type) and the state/action correspondence between the two.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mrpn/causality.hpp"
#include "mrpn/engine.hpp"
#include "mrpn/format.hpp"

namespace mrpn {

struct TranslationMaps {
  /// (A, i) -> A_i
  std::map<TokenId, std::string> types;
  /// (t, projected assignment f) -> t_f
  std::map<std::pair<std::string, Binding>, std::string> transitions;
  /// (a, (A, i)) -> a_i
  std::map<std::pair<std::string, TokenId>, std::string> variables;

  /// Inverse of `transitions`.
  std::map<std::string, std::pair<std::string, Binding>> origin;

  std::string type(const TokenId& id) const;
  std::string transition(const std::string& t, const Binding& f) const;
  std::string variable(const std::string& a, const TokenId& id) const;
};

/// Diagnostics for the single-instance restriction: every type has exactly one
/// instance in the initial marking, with index 1 and an empty path.
std::vector<Diagnostic> check_single_instance(const NetDocument& doc);

/// Injective, type-respecting maps from the guard variables of t to the
/// identities of the initial marking, in lexicographic order.
std::vector<Binding> instance_assignments(const Net& net, const std::set<TokenId>& ids, const std::string& t);

struct Translation {
  NetDocument srpn;
  TranslationMaps maps;
};

Translation to_srpn(const NetDocument& doc);

/// Maps for a net that already has one instance per type onto itself.
TranslationMaps identity_maps(const NetDocument& doc);

/// The token correspondence st, relative to the occurrences recorded in `s`.
TokenInstance map_token(const TranslationMaps& maps, const State& s, const TokenInstance& tok);
State map_state(const TranslationMaps& maps, const State& s);
/// Image of an action enabled in `s`.
Action map_action(const TranslationMaps& maps, const State& s, const Action& a);
Label map_label(const TranslationMaps& maps, const Label& l);

/// Compares the depth-bounded reachable parts of both nets through the maps.
/// The source is explored up to key renaming, the target with exact keys.
Verdict verify_iso(const NetDocument& source, const NetDocument& target, const TranslationMaps& maps, int depth,
                   std::size_t state_cap = 100000);

std::string maps_to_json(const TranslationMaps& maps);

}  // namespace mrpn
