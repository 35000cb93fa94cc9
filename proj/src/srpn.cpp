#include "mrpn/srpn.hpp"

#include <functional>

#include <json.hpp>

#include "mrpn/state_space.hpp"

namespace mrpn {

namespace {

template <typename K>
const std::string& lookup(const std::map<K, std::string>& m, const K& k, const std::string& what) {
  auto it = m.find(k);
  if (it == m.end()) throw NetError("unmapped " + what);
  return it->second;
}

std::string transition_name(const std::string& t, const Binding& f) {
  std::string out = t;
  for (const auto& [v, id] : f) out += "_" + v + std::to_string(id.index);
  return out;
}

}  // namespace

std::string TranslationMaps::type(const TokenId& id) const { return lookup(types, id, "instance " + id.str()); }

std::string TranslationMaps::transition(const std::string& t, const Binding& f) const {
  return lookup(transitions, std::make_pair(t, f), "transition " + t + "(" + binding_str(f) + ")");
}

std::string TranslationMaps::variable(const std::string& a, const TokenId& id) const {
  return lookup(variables, std::make_pair(a, id), "variable " + a + " for " + id.str());
}

std::vector<Diagnostic> check_single_instance(const NetDocument& doc) {
  std::vector<Diagnostic> out;
  std::map<std::string, int> count;
  for (const auto& [place, bag] : doc.initial.places())
    for (const auto& [id, path] : bag.tokens) {
      ++count[id.type];
      if (id.index != 1)
        out.push_back({"SRPN-INDEX", "instance " + id.str() + " in place " + place + " is not numbered 1"});
      if (!path.empty()) out.push_back({"SRPN-PATH", "instance " + id.str() + " has a non-empty path"});
    }
  for (const auto& type : doc.net.types) {
    int n = count.count(type) ? count[type] : 0;
    if (n != 1)
      out.push_back({"SRPN-COUNT", "type " + type + " has " + std::to_string(n) + " instances, expected exactly 1"});
  }
  return out;
}

std::vector<Binding> instance_assignments(const Net& net, const std::set<TokenId>& ids, const std::string& t) {
  const auto vars = net.guard(t).vars;
  std::vector<std::string> order(vars.begin(), vars.end());
  std::vector<Binding> out;
  Binding cur;
  std::set<TokenId> used;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == order.size()) {
      out.push_back(cur);
      return;
    }
    const std::string& type = net.type_of(order[i]);
    for (const auto& id : ids) {
      if (id.type != type || used.count(id)) continue;
      cur[order[i]] = id;
      used.insert(id);
      go(i + 1);
      used.erase(id);
      cur.erase(order[i]);
    }
  };
  go(0);
  return out;
}

Translation to_srpn(const NetDocument& doc) {
  initial_state(doc.initial);  // rejects non-empty paths
  const auto ids = identities(doc.initial);
  const Net& net = doc.net;

  Translation out;
  TranslationMaps& maps = out.maps;
  NetDocument& target = out.srpn;
  target.name = doc.name + "_srpn";
  target.net.places = net.places;

  std::set<std::string> taken;
  auto claim = [&](const std::string& name, const std::string& what) {
    if (!taken.insert(what + ":" + name).second) throw NetError("translated name clash on " + what + " " + name);
  };

  for (const auto& id : ids) {
    std::string name = id.type + "_" + std::to_string(id.index);
    claim(name, "type");
    maps.types[id] = name;
    target.net.types.insert(name);
  }
  for (const auto& [a, b] : net.bond_types)
    for (const auto& x : ids)
      for (const auto& y : ids)
        if (x != y && x.type == a && y.type == b) target.net.bond_types.insert(make_type_bond(maps.types[x], maps.types[y]));
  for (const auto& [var, type] : net.variables)
    for (const auto& id : ids)
      if (id.type == type) {
        std::string name = var + "_" + std::to_string(id.index);
        claim(name, "variable");
        maps.variables[{var, id}] = name;
        target.net.variables[name] = maps.types[id];
      }

  auto rename = [&](const ArcLabel& l, const Binding& f) {
    auto var = [&](const std::string& v) {
      auto it = f.find(v);
      if (it == f.end()) throw NetError("variable " + v + " is not bound by the guard");
      return maps.variable(v, it->second);
    };
    ArcLabel r;
    for (const auto& v : l.vars) r.vars.insert(var(v));
    for (const auto& [a, b] : l.bonds) r.bonds.insert(make_var_bond(var(a), var(b)));
    return r;
  };

  for (const auto& t : net.transitions)
    for (const auto& f : instance_assignments(net, ids, t)) {
      std::string name = transition_name(t, f);
      claim(name, "transition");
      maps.transitions[{t, f}] = name;
      maps.origin[name] = {t, f};
      target.net.transitions.insert(name);
      for (const auto& [x, l] : net.in_arcs(t)) target.net.inputs[name][x] = rename(l, f);
      for (const auto& [x, l] : net.out_arcs(t)) target.net.outputs[name][x] = rename(l, f);
    }

  for (const auto& [place, bag] : doc.initial.places()) {
    Bag nb;
    for (const auto& [id, path] : bag.tokens) nb.insert(TokenInstance{maps.types[id], 1, {}});
    for (const auto& b : bag.bonds) nb.insert(Bond({maps.types[b.first()], 1}, {maps.types[b.second()], 1}));
    target.initial.set(place, std::move(nb));
  }

  if (auto diags = validate_well_formed(target.net); !diags.empty())
    throw NetError("translated net is not well-formed: " + diags.front().str());
  return out;
}

TranslationMaps identity_maps(const NetDocument& doc) {
  if (auto diags = check_single_instance(doc); !diags.empty())
    throw NetError("identity maps need one instance per type: " + diags.front().message);
  TranslationMaps maps;
  const auto ids = identities(doc.initial);
  for (const auto& id : ids) maps.types[id] = id.type;
  for (const auto& [var, type] : doc.net.variables) maps.variables[{var, TokenId{type, 1}}] = var;
  for (const auto& t : doc.net.transitions)
    for (const auto& f : instance_assignments(doc.net, ids, t)) {
      maps.transitions[{t, f}] = t;
      maps.origin[t] = {t, f};
    }
  return maps;
}

namespace {

// γ relative to one state: occurrence (t, k) with projection f is renamed to
// t_f and renumbered by its rank among the live occurrences of t with the
// same projection.
class Gamma {
 public:
  Gamma(const TranslationMaps& maps, const State& s) : maps_(maps), s_(s) {
    for (const auto& [t, recs] : s.history) {
      std::map<Binding, int> seen;
      for (const auto& [k, f] : recs) rank_[{t, k}] = ++seen[f];
    }
  }

  int rank(const std::string& t, int k) const {
    auto it = rank_.find({t, k});
    if (it == rank_.end()) throw NetError("no history record for occurrence " + std::to_string(k) + " of " + t);
    return it->second;
  }

  const Binding& record(const std::string& t, int k) const {
    rank(t, k);
    return s_.history.at(t).at(k);
  }

  TokenInstance token(const TokenInstance& tok) const {
    TokenInstance out{maps_.type(tok.id()), 1, {}};
    for (const auto& e : tok.path) {
      const Binding& f = record(e.transition, e.key);
      std::string var = kBystander;
      if (!e.bystander()) {
        auto it = f.find(e.var);
        if (it == f.end()) throw NetError("record of " + e.transition + " does not bind " + e.var);
        var = maps_.variable(e.var, it->second);
      }
      out.path.push_back({rank(e.transition, e.key), maps_.transition(e.transition, f), var});
    }
    return out;
  }

  TokenId id(const TokenId& id) const { return {maps_.type(id), 1}; }

  Binding binding(const Binding& f) const {
    Binding out;
    for (const auto& [v, id] : f) out[maps_.variable(v, id)] = this->id(id);
    return out;
  }

 private:
  const TranslationMaps& maps_;
  const State& s_;
  std::map<std::pair<std::string, int>, int> rank_;
};

}  // namespace

TokenInstance map_token(const TranslationMaps& maps, const State& s, const TokenInstance& tok) {
  return Gamma(maps, s).token(tok);
}

State map_state(const TranslationMaps& maps, const State& s) {
  Gamma g(maps, s);
  State out;
  for (const auto& [place, bag] : s.marking.places()) {
    Bag nb;
    for (const auto& t : bag.instances()) nb.insert(g.token(t));
    for (const auto& b : bag.bonds) nb.insert(Bond(g.id(b.first()), g.id(b.second())));
    out.marking.set(place, std::move(nb));
  }
  for (const auto& [t, recs] : s.history)
    for (const auto& [k, f] : recs) out.history[maps.transition(t, f)][g.rank(t, k)] = g.binding(f);
  return out;
}

Action map_action(const TranslationMaps& maps, const State& s, const Action& a) {
  Gamma g(maps, s);
  Action out;
  out.dir = a.dir;
  out.transition = maps.transition(a.transition, project(a.assignment));
  for (const auto& [v, tok] : a.assignment) out.assignment[maps.variable(v, tok.id())] = g.token(tok);
  if (a.reverse()) out.key = g.rank(a.transition, a.key);
  return out;
}

Label map_label(const TranslationMaps& maps, const Label& l) {
  Label out{l.dir, maps.transition(l.transition, l.binding), {}};
  for (const auto& [v, id] : l.binding) out.binding[maps.variable(v, id)] = {maps.type(id), 1};
  return out;
}

Verdict verify_iso(const NetDocument& source, const NetDocument& target, const TranslationMaps& maps, int depth,
                   std::size_t state_cap) {
  const Lts src = explore(source.net, initial_state(source.initial), {depth, state_cap, KeyMode::Causal});
  const Lts tgt = explore(target.net, initial_state(target.initial), {depth, state_cap, KeyMode::Exact});
  if (src.truncated || tgt.truncated)
    return {Verdict::Status::Budget, "iso", "state cap " + std::to_string(state_cap) + " reached", {}};

  // γ on states.
  std::vector<std::size_t> image(src.states.size());
  std::vector<bool> hit(tgt.states.size(), false);
  for (std::size_t i = 0; i < src.states.size(); ++i) {
    std::string key;
    try {
      key = canonical_key(map_state(maps, src.states[i].state), KeyMode::Exact);
    } catch (const NetError& e) {
      return Verdict::fail("iso", std::string("state cannot be mapped: ") + e.what(), {src.states[i].key});
    }
    auto j = tgt.find(key);
    if (!j) return Verdict::fail("iso", "image of a source state is not reachable in the target", {src.states[i].key, key});
    if (hit[*j]) return Verdict::fail("iso", "two source states share an image", {key});
    if (tgt.states[*j].expanded != src.states[i].expanded)
      return Verdict::fail("iso", "state and image lie at different distances", {src.states[i].key, key});
    hit[*j] = true;
    image[i] = *j;
  }
  for (std::size_t j = 0; j < tgt.states.size(); ++j)
    if (!hit[j]) return Verdict::fail("iso", "target state without a preimage", {tgt.states[j].key});
  if (image[src.initial] != tgt.initial) return Verdict::fail("iso", "initial states do not correspond");

  // η on edges leaving interior states, both directions.
  auto show = [](const Lts& l, const LtsEdge& e) {
    return "s" + std::to_string(e.from) + " -" + e.label.str() + "-> s" + std::to_string(e.to) + " in " +
           l.states[e.from].key;
  };
  std::set<LtsEdge> mapped;
  for (const auto& e : src.edges) {
    if (!src.states[e.from].expanded) continue;
    LtsEdge m;
    try {
      m = {image[e.from], map_label(maps, e.label), image[e.to]};
    } catch (const NetError& err) {
      return Verdict::fail("iso", std::string("edge cannot be mapped: ") + err.what(), {show(src, e)});
    }
    mapped.insert(m);
  }
  std::set<LtsEdge> actual;
  for (const auto& e : tgt.edges)
    if (tgt.states[e.from].expanded) actual.insert(e);
  for (const auto& e : src.edges)
    if (src.states[e.from].expanded &&
        !actual.count({image[e.from], map_label(maps, e.label), image[e.to]}))
      return Verdict::fail("iso", "source edge has no image in the target", {show(src, e)});
  for (const auto& e : actual)
    if (!mapped.count(e)) return Verdict::fail("iso", "target edge has no preimage", {show(tgt, e)});

  return Verdict::ok("iso", std::to_string(src.states.size()) + " states, " + std::to_string(mapped.size()) +
                                " edges at depth " + std::to_string(depth));
}

std::string maps_to_json(const TranslationMaps& maps) {
  nlohmann::json types = nlohmann::json::array(), transitions = nlohmann::json::array(),
                 variables = nlohmann::json::array();
  for (const auto& [id, name] : maps.types) types.push_back({{"source", id.str()}, {"target", name}});
  for (const auto& [key, name] : maps.transitions) {
    nlohmann::json assign = nlohmann::json::object();
    for (const auto& [v, id] : key.second) assign[v] = id.str();
    transitions.push_back({{"source", key.first}, {"assign", assign}, {"target", name}});
  }
  for (const auto& [key, name] : maps.variables)
    variables.push_back({{"source", key.first}, {"instance", key.second.str()}, {"target", name}});
  nlohmann::json out = {{"types", types}, {"transitions", transitions}, {"variables", variables}};
  return out.dump(2) + "\n";
}

}  // namespace mrpn
