#include "mrpn/net.hpp"

#include <algorithm>
#include <deque>

namespace mrpn {

std::vector<std::pair<std::string, std::string>> TokenInstance::cpath() const {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(path.size());
  for (const auto& e : path) out.emplace_back(e.transition, e.var);
  return out;
}

const PathEntry& TokenInstance::last() const {
  if (path.empty()) throw NetError("last() of token " + id().str() + " with empty path");
  return path.back();
}

TokenInstance TokenInstance::plus(PathEntry e) const {
  TokenInstance out = *this;
  out.path.push_back(std::move(e));
  return out;
}

TokenInstance TokenInstance::init() const {
  if (path.empty()) throw NetError("init() of token " + id().str() + " with empty path");
  TokenInstance out = *this;
  out.path.pop_back();
  return out;
}

Bond::Bond(TokenId a, TokenId b) : a_(std::move(a)), b_(std::move(b)) {
  if (a_ == b_) throw NetError("bond endpoints must be distinct: " + a_.str());
  if (b_ < a_) std::swap(a_, b_);
}

bool Bag::contains(const TokenInstance& t) const {
  auto it = tokens.find(t.id());
  return it != tokens.end() && it->second == t.path;
}

void Bag::merge(const Bag& other) {
  for (const auto& [id, path] : other.tokens) tokens[id] = path;
  bonds.insert(other.bonds.begin(), other.bonds.end());
}

void Bag::subtract(const Bag& other) {
  for (const auto& [id, path] : other.tokens) tokens.erase(id);
  for (const auto& b : other.bonds) bonds.erase(b);
}

TokenInstance Bag::instance(const TokenId& id) const {
  auto it = tokens.find(id);
  if (it == tokens.end()) throw NetError("token " + id.str() + " not present");
  return {id.type, id.index, it->second};
}

std::vector<TokenInstance> Bag::instances() const {
  std::vector<TokenInstance> out;
  out.reserve(tokens.size());
  for (const auto& [id, path] : tokens) out.push_back({id.type, id.index, path});
  return out;
}

const Bag& Marking::at(const std::string& place) const {
  static const Bag empty;
  auto it = places_.find(place);
  return it == places_.end() ? empty : it->second;
}

void Marking::set(const std::string& place, Bag bag) {
  if (bag.empty())
    places_.erase(place);
  else
    places_[place] = std::move(bag);
}

void Marking::prune() {
  std::erase_if(places_, [](const auto& kv) { return kv.second.empty(); });
}

std::optional<std::string> Marking::locate(const TokenId& id) const {
  for (const auto& [place, bag] : places_)
    if (bag.contains(id)) return place;
  return std::nullopt;
}

VarBond make_var_bond(std::string a, std::string b) {
  if (b < a) std::swap(a, b);
  return {std::move(a), std::move(b)};
}

TypeBond make_type_bond(std::string a, std::string b) { return make_var_bond(std::move(a), std::move(b)); }

namespace {
const std::map<std::string, ArcLabel>& empty_arcs() {
  static const std::map<std::string, ArcLabel> empty;
  return empty;
}

ArcLabel label_union(const std::map<std::string, ArcLabel>& arcs) {
  ArcLabel out;
  for (const auto& [place, label] : arcs) {
    out.vars.insert(label.vars.begin(), label.vars.end());
    out.bonds.insert(label.bonds.begin(), label.bonds.end());
  }
  return out;
}
}  // namespace

const std::map<std::string, ArcLabel>& Net::in_arcs(const std::string& t) const {
  auto it = inputs.find(t);
  return it == inputs.end() ? empty_arcs() : it->second;
}

const std::map<std::string, ArcLabel>& Net::out_arcs(const std::string& t) const {
  auto it = outputs.find(t);
  return it == outputs.end() ? empty_arcs() : it->second;
}

ArcLabel Net::guard(const std::string& t) const { return label_union(in_arcs(t)); }
ArcLabel Net::effects(const std::string& t) const { return label_union(out_arcs(t)); }

std::optional<std::string> Net::in_place_of(const std::string& t, const std::string& var) const {
  for (const auto& [place, label] : in_arcs(t))
    if (label.vars.count(var)) return place;
  return std::nullopt;
}

std::optional<std::string> Net::out_place_of(const std::string& t, const std::string& var) const {
  for (const auto& [place, label] : out_arcs(t))
    if (label.vars.count(var)) return place;
  return std::nullopt;
}

const std::string& Net::type_of(const std::string& var) const {
  auto it = variables.find(var);
  if (it == variables.end()) throw NetError("unknown variable '" + var + "'");
  return it->second;
}

void Net::require_transition(const std::string& t) const {
  if (!transitions.count(t)) throw NetError("unknown transition '" + t + "'");
}

std::string Diagnostic::str() const {
  std::string out;
  if (line > 0) out += std::to_string(line) + ":" + std::to_string(column) + ": ";
  return out + code + ": " + message;
}

namespace {

void check_arc(const Net& net, const std::string& t, const std::string& place, const ArcLabel& label,
               const char* dir, std::vector<Diagnostic>& out) {
  if (!net.places.count(place))
    out.push_back({"NET-UNKNOWN-PLACE", "transition " + t + " has " + dir + "-arc on unknown place " + place});
  for (const auto& v : label.vars) {
    auto it = net.variables.find(v);
    if (it == net.variables.end())
      out.push_back({"NET-UNKNOWN-VAR", "transition " + t + ": variable " + v + " is not declared"});
    else if (!net.types.count(it->second))
      out.push_back({"NET-UNKNOWN-TYPE", "variable " + v + " has undeclared type " + it->second});
  }
  for (const auto& [a, b] : label.bonds) {
    if (!label.vars.count(a) || !label.vars.count(b)) {
      out.push_back({"NET-BOND-VAR-MISSING", "transition " + t + ": bond " + a + "-" + b + " on " + dir +
                                                 "-arc " + place + " uses a variable absent from the arc"});
      continue;
    }
    auto ta = net.variables.find(a), tb = net.variables.find(b);
    if (ta != net.variables.end() && tb != net.variables.end() && !net.bondable(ta->second, tb->second))
      out.push_back({"NET-BOND-TYPE", "transition " + t + ": bond " + a + "-" + b + " has no bond type " +
                                          ta->second + "-" + tb->second});
  }
}

}  // namespace

std::vector<Diagnostic> validate_well_formed(const Net& net) {
  std::vector<Diagnostic> out;
  for (const auto& [a, b] : net.bond_types)
    if (!net.types.count(a) || !net.types.count(b))
      out.push_back({"NET-BOND-TYPE", "bond type " + a + "-" + b + " refers to an undeclared type"});
  for (const auto& [v, type] : net.variables)
    if (!net.types.count(type)) out.push_back({"NET-UNKNOWN-TYPE", "variable " + v + " has undeclared type " + type});

  auto check_keys = [&](const auto& arcs, const char* dir) {
    for (const auto& [t, by_place] : arcs)
      if (!net.transitions.count(t))
        out.push_back({"NET-UNKNOWN-TRANSITION", std::string(dir) + "-arcs declared for unknown transition " + t});
  };
  check_keys(net.inputs, "in");
  check_keys(net.outputs, "out");

  for (const auto& t : net.transitions) {
    const std::size_t first = out.size();
    for (const auto& [place, label] : net.in_arcs(t)) check_arc(net, t, place, label, "in", out);
    for (const auto& [place, label] : net.out_arcs(t)) check_arc(net, t, place, label, "out", out);

    // In-arcs from distinct places share no variable.
    std::map<std::string, std::string> seen_in;
    for (const auto& [place, label] : net.in_arcs(t))
      for (const auto& v : label.vars) {
        auto [it, fresh] = seen_in.emplace(v, place);
        if (!fresh)
          out.push_back({"NET-IN-VAR-SHARED", "transition " + t + ": variable " + v + " labels in-arcs from " +
                                                  it->second + " and " + place});
      }

    // Out-arcs to distinct places share no variable or bond.
    std::map<std::string, std::string> seen_out;
    std::map<VarBond, std::string> seen_out_bond;
    for (const auto& [place, label] : net.out_arcs(t)) {
      for (const auto& v : label.vars) {
        auto [it, fresh] = seen_out.emplace(v, place);
        if (!fresh)
          out.push_back({"WF2-OUT-SHARED", "transition " + t + ": variable " + v + " labels out-arcs to " +
                                               it->second + " and " + place});
      }
      for (const auto& b : label.bonds) {
        auto [it, fresh] = seen_out_bond.emplace(b, place);
        if (!fresh)
          out.push_back({"WF2-OUT-SHARED", "transition " + t + ": bond " + b.first + "-" + b.second +
                                               " labels out-arcs to " + it->second + " and " + place});
      }
    }

    const auto guard = net.guard(t);
    const auto effects = net.effects(t);
    for (const auto& v : guard.vars)
      if (!effects.vars.count(v))
        out.push_back({"WF1-VAR-NOT-PRESERVED", "transition " + t + ": variable " + v +
                                                    " occurs on an in-arc but on no out-arc"});
    for (const auto& v : effects.vars)
      if (!guard.vars.count(v))
        out.push_back({"WF1-VAR-NOT-PRESERVED", "transition " + t + ": variable " + v +
                                                    " occurs on an out-arc but on no in-arc"});
    for (std::size_t i = first; i < out.size(); ++i) out[i].subject = "transition " + t;
  }
  return out;
}

Bag connected(const TokenInstance& seed, const Bag& pool) {
  Bag out;
  if (!pool.contains(seed)) return out;
  // Adjacency restricted to bonds whose endpoints are both in the pool.
  std::map<TokenId, std::vector<const Bond*>> adj;
  for (const auto& b : pool.bonds)
    if (pool.contains(b.first()) && pool.contains(b.second())) {
      adj[b.first()].push_back(&b);
      adj[b.second()].push_back(&b);
    }
  std::deque<TokenId> queue{seed.id()};
  out.tokens[seed.id()] = seed.path;
  while (!queue.empty()) {
    TokenId cur = queue.front();
    queue.pop_front();
    auto it = adj.find(cur);
    if (it == adj.end()) continue;
    for (const Bond* b : it->second) {
      out.bonds.insert(*b);
      const TokenId& next = b->other(cur);
      if (!out.tokens.count(next)) {
        out.tokens[next] = pool.tokens.at(next);
        queue.push_back(next);
      }
    }
  }
  return out;
}

BondEffects transition_effects(const Net& net, const std::string& t) {
  net.require_transition(t);
  const auto guard = net.guard(t);
  const auto effects = net.effects(t);
  BondEffects out;
  std::set_difference(effects.bonds.begin(), effects.bonds.end(), guard.bonds.begin(), guard.bonds.end(),
                      std::inserter(out.created, out.created.end()));
  std::set_difference(guard.bonds.begin(), guard.bonds.end(), effects.bonds.begin(), effects.bonds.end(),
                      std::inserter(out.destroyed, out.destroyed.end()));
  return out;
}

int count_instances(const Marking& m, const TokenId& id) {
  int n = 0;
  for (const auto& [place, bag] : m.places()) n += static_cast<int>(bag.tokens.count(id));
  return n;
}

int count_bond(const Marking& m, const Bond& b) {
  int n = 0;
  for (const auto& [place, bag] : m.places()) n += static_cast<int>(bag.bonds.count(b));
  return n;
}

std::set<TokenId> identities(const Marking& m) {
  std::set<TokenId> out;
  for (const auto& [place, bag] : m.places())
    for (const auto& [id, path] : bag.tokens) out.insert(id);
  return out;
}

std::vector<std::string> check_conservation(const Marking& m, const std::set<TokenId>& declared) {
  std::vector<std::string> out;
  for (const auto& id : declared) {
    int n = count_instances(m, id);
    if (n != 1) out.push_back("token " + id.str() + " occurs " + std::to_string(n) + " times");
  }
  for (const auto& id : identities(m))
    if (!declared.count(id)) out.push_back("undeclared token " + id.str());
  std::set<Bond> all_bonds;
  for (const auto& [place, bag] : m.places())
    for (const auto& b : bag.bonds) {
      all_bonds.insert(b);
      if (!bag.contains(b.first()) || !bag.contains(b.second()))
        out.push_back("bond " + b.str() + " in " + place + " has an endpoint elsewhere");
    }
  for (const auto& b : all_bonds) {
    int n = count_bond(m, b);
    if (n > 1) out.push_back("bond " + b.str() + " occurs " + std::to_string(n) + " times");
  }
  return out;
}

}  // namespace mrpn
