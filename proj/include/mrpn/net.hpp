#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mrpn {

/// Marker used in place of a variable name for bystander path entries.
inline constexpr const char* kBystander = "*";

struct NetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Identity of a token instance with its causal path dropped, i.e. (A, i).
struct TokenId {
  std::string type;
  int index = 0;

  auto operator<=>(const TokenId&) const = default;
  std::string str() const { return type + "#" + std::to_string(index); }
};

/// One step of a causal path: occurrence key, transition and the variable the
/// token was bound to (or "*" when it moved as part of a component).
struct PathEntry {
  int key = 0;
  std::string transition;
  std::string var;

  auto operator<=>(const PathEntry&) const = default;
  bool bystander() const { return var == kBystander; }
};

using Path = std::vector<PathEntry>;

struct TokenInstance {
  std::string type;
  int index = 0;
  Path path;

  auto operator<=>(const TokenInstance&) const = default;

  TokenId id() const { return {type, index}; }
  /// Path with occurrence keys dropped.
  std::vector<std::pair<std::string, std::string>> cpath() const;
  const PathEntry& last() const;
  TokenInstance plus(PathEntry e) const;
  TokenInstance init() const;
};

/// Unordered bond between two token identities; endpoints kept sorted.
class Bond {
 public:
  Bond(TokenId a, TokenId b);

  const TokenId& first() const { return a_; }
  const TokenId& second() const { return b_; }
  bool touches(const TokenId& t) const { return a_ == t || b_ == t; }
  const TokenId& other(const TokenId& t) const { return a_ == t ? b_ : a_; }
  std::string str() const { return a_.str() + "-" + b_.str(); }

  auto operator<=>(const Bond&) const = default;

 private:
  TokenId a_;
  TokenId b_;
};

/// A set of token and bond instances, e.g. the contents of one place.
///
/// Tokens are keyed by identity; the marking invariant guarantees an identity
/// occurs at most once. Bonds refer to their endpoints by identity and resolve
/// to the tokens held in the same bag.
struct Bag {
  std::map<TokenId, Path> tokens;
  std::set<Bond> bonds;

  bool empty() const { return tokens.empty() && bonds.empty(); }
  bool contains(const TokenInstance& t) const;
  bool contains(const TokenId& id) const { return tokens.count(id) > 0; }
  bool contains(const Bond& b) const { return bonds.count(b) > 0; }
  void insert(const TokenInstance& t) { tokens[t.id()] = t.path; }
  void insert(const Bond& b) { bonds.insert(b); }
  void merge(const Bag& other);
  void subtract(const Bag& other);
  TokenInstance instance(const TokenId& id) const;
  std::vector<TokenInstance> instances() const;

  auto operator<=>(const Bag&) const = default;
};

/// Place name to contents. Empty places are not stored.
class Marking {
 public:
  const Bag& at(const std::string& place) const;
  Bag& mut(const std::string& place) { return places_[place]; }
  void set(const std::string& place, Bag bag);
  void prune();

  const std::map<std::string, Bag>& places() const { return places_; }
  /// Place holding a token identity, if any.
  std::optional<std::string> locate(const TokenId& id) const;

  auto operator<=>(const Marking&) const = default;

 private:
  std::map<std::string, Bag> places_;
};

using VarBond = std::pair<std::string, std::string>;
VarBond make_var_bond(std::string a, std::string b);
using TypeBond = std::pair<std::string, std::string>;
TypeBond make_type_bond(std::string a, std::string b);

struct ArcLabel {
  std::set<std::string> vars;
  std::set<VarBond> bonds;

  bool empty() const { return vars.empty() && bonds.empty(); }
  auto operator<=>(const ArcLabel&) const = default;
};

struct Net {
  std::set<std::string> places;
  std::set<std::string> transitions;
  std::set<std::string> types;
  /// Variable name to its token type.
  std::map<std::string, std::string> variables;
  std::set<TypeBond> bond_types;
  /// transition -> in-place -> label, i.e. F(x,t).
  std::map<std::string, std::map<std::string, ArcLabel>> inputs;
  /// transition -> out-place -> label, i.e. F(t,x).
  std::map<std::string, std::map<std::string, ArcLabel>> outputs;

  const std::map<std::string, ArcLabel>& in_arcs(const std::string& t) const;
  const std::map<std::string, ArcLabel>& out_arcs(const std::string& t) const;
  /// Union of in-arc labels.
  ArcLabel guard(const std::string& t) const;
  /// Union of out-arc labels.
  ArcLabel effects(const std::string& t) const;
  std::optional<std::string> in_place_of(const std::string& t, const std::string& var) const;
  std::optional<std::string> out_place_of(const std::string& t, const std::string& var) const;
  const std::string& type_of(const std::string& var) const;
  void require_transition(const std::string& t) const;
  bool bondable(const std::string& a, const std::string& b) const {
    return bond_types.count(make_type_bond(a, b)) > 0;
  }

  auto operator<=>(const Net&) const = default;
};

struct Diagnostic {
  std::string code;
  std::string message;
  int line = 0;
  int column = 0;
  /// Declaration the diagnostic concerns, e.g. "transition t1"; may be empty.
  std::string subject;

  std::string str() const;
  auto operator<=>(const Diagnostic&) const = default;
};

std::vector<Diagnostic> validate_well_formed(const Net& net);

/// Tokens and bonds reachable from `seed` through bonds inside `pool`.
/// Empty when the seed (with its exact path) is not in the pool.
Bag connected(const TokenInstance& seed, const Bag& pool);

struct BondEffects {
  std::set<VarBond> created;    // effects(t) - guard(t)
  std::set<VarBond> destroyed;  // guard(t) - effects(t)
};
BondEffects transition_effects(const Net& net, const std::string& t);

int count_instances(const Marking& m, const TokenId& id);
int count_bond(const Marking& m, const Bond& b);

/// Token conservation and bond placement checks against a set of declared
/// identities. Returns one message per violation.
std::vector<std::string> check_conservation(const Marking& m, const std::set<TokenId>& declared);

std::set<TokenId> identities(const Marking& m);

}  // namespace mrpn
