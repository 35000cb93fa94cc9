#include "mrpn/engine.hpp"

#include <algorithm>
#include <functional>

namespace mrpn {

Binding project(const Assignment& a) {
  Binding out;
  for (const auto& [var, tok] : a) out.emplace(var, tok.id());
  return out;
}

std::string binding_str(const Binding& b) {
  std::string out;
  for (const auto& [var, id] : b) {
    if (!out.empty()) out += ",";
    out += var + "=" + id.str();
  }
  return out;
}

std::set<int> history_keys(const History& h, const std::string& t) {
  std::set<int> out;
  if (auto it = h.find(t); it != h.end())
    for (const auto& [k, b] : it->second) out.insert(k);
  return out;
}

State initial_state(const Marking& m0) {
  for (const auto& [place, bag] : m0.places())
    for (const auto& [id, path] : bag.tokens)
      if (!path.empty()) throw NetError("initial token " + id.str() + " in " + place + " has a non-empty path");
  return State{m0, {}};
}

int next_key(const State& s, const std::string& t) {
  auto keys = history_keys(s.history, t);
  return (keys.empty() ? 0 : *keys.rbegin()) + 1;
}

std::set<Bond> instantiate_bonds(const std::set<VarBond>& bonds, const Assignment& a) {
  std::set<Bond> out;
  for (const auto& [x, y] : bonds) {
    auto ix = a.find(x), iy = a.find(y);
    if (ix == a.end() || iy == a.end())
      throw NetError("bond " + x + "-" + y + " uses a variable outside the assignment");
    out.emplace(ix->second.id(), iy->second.id());
  }
  return out;
}

namespace {

// Union of the contents of a set of places.
Bag union_of(const Marking& m, const std::map<std::string, ArcLabel>& arcs) {
  Bag out;
  for (const auto& [place, label] : arcs) out.merge(m.at(place));
  return out;
}

bool label_present(const ArcLabel& label, const Assignment& a, const Bag& bag) {
  for (const auto& v : label.vars)
    if (!bag.contains(a.at(v))) return false;
  for (const auto& b : instantiate_bonds(label.bonds, a))
    if (!bag.contains(b)) return false;
  return true;
}

struct Slot {
  std::string var;
  std::string type;
  std::string place;
};

void search(const std::vector<Slot>& slots, std::size_t i, const Marking& m, std::set<TokenId>& used,
            Assignment& cur, const std::function<void(const Assignment&)>& emit) {
  if (i == slots.size()) {
    emit(cur);
    return;
  }
  const Slot& slot = slots[i];
  for (const auto& [id, path] : m.at(slot.place).tokens) {
    if (id.type != slot.type || used.count(id)) continue;
    used.insert(id);
    cur[slot.var] = TokenInstance{id.type, id.index, path};
    search(slots, i + 1, m, used, cur, emit);
    cur.erase(slot.var);
    used.erase(id);
  }
}

}  // namespace

Bag compute_after(const Net& net, const Marking& m, const std::string& t, const Assignment& a) {
  const auto fx = transition_effects(net, t);
  Bag out = union_of(m, net.in_arcs(t));
  for (const auto& b : instantiate_bonds(fx.created, a)) out.insert(b);
  for (const auto& b : instantiate_bonds(fx.destroyed, a)) out.bonds.erase(b);
  return out;
}

Bag compute_before(const Net& net, const Marking& m, const std::string& t, const Assignment& r) {
  const auto fx = transition_effects(net, t);
  Bag out = union_of(m, net.out_arcs(t));
  for (const auto& b : instantiate_bonds(fx.destroyed, r)) out.insert(b);
  for (const auto& b : instantiate_bonds(fx.created, r)) out.bonds.erase(b);
  return out;
}

namespace {

bool forward_conditions(const Net& net, const Marking& m, const std::string& t, const Assignment& a,
                        const BondEffects& fx) {
  // Availability of tokens and bonds on every in-arc.
  for (const auto& [place, label] : net.in_arcs(t))
    if (!label_present(label, a, m.at(place))) return false;
  // Created bonds must not already exist when both ends come from one in-place.
  for (const auto& [place, label] : net.in_arcs(t))
    for (const auto& [x, y] : fx.created)
      if (label.vars.count(x) && label.vars.count(y) && m.at(place).contains(Bond(a.at(x).id(), a.at(y).id())))
        return false;
  // Tokens sent to distinct out-places must not be connected after the firing.
  const auto& outs = net.out_arcs(t);
  if (outs.size() > 1) {
    const Bag after = compute_after(net, m, t, a);
    std::map<TokenId, std::string> dest;
    for (const auto& [place, label] : outs)
      for (const auto& v : label.vars) {
        for (const auto& [id, path] : connected(a.at(v), after).tokens) {
          auto [it, fresh] = dest.emplace(id, place);
          if (!fresh && it->second != place) return false;
        }
      }
  }
  return true;
}

// Domain is exactly guard(t) variables, types match, and the map is injective.
bool well_typed(const Net& net, const std::string& t, const Assignment& a) {
  const auto vars = net.guard(t).vars;
  if (a.size() != vars.size()) return false;
  std::set<TokenId> ids;
  for (const auto& [var, tok] : a) {
    if (!vars.count(var) || tok.type != net.type_of(var)) return false;
    if (!ids.insert(tok.id()).second) return false;
  }
  return true;
}

}  // namespace

std::vector<Assignment> enumerate_forward(const Net& net, const State& s, const std::string& t) {
  net.require_transition(t);
  std::vector<Slot> slots;
  for (const auto& [place, label] : net.in_arcs(t))
    for (const auto& v : label.vars) slots.push_back({v, net.type_of(v), place});
  std::sort(slots.begin(), slots.end(), [](const Slot& a, const Slot& b) { return a.var < b.var; });

  const auto fx = transition_effects(net, t);
  std::vector<Assignment> out;
  std::set<TokenId> used;
  Assignment cur;
  search(slots, 0, s.marking, used, cur, [&](const Assignment& a) {
    if (forward_conditions(net, s.marking, t, a, fx)) out.push_back(a);
  });
  return out;
}

namespace {

// Removal happens before insertion so that a place that is both source and
// destination ends up holding the new components.
Marking relocate(const Marking& m, const std::map<std::string, Bag>& removed, const std::map<std::string, Bag>& added) {
  Marking out = m;
  for (const auto& [place, bag] : removed) {
    Bag b = out.at(place);
    b.subtract(bag);
    out.set(place, std::move(b));
  }
  for (const auto& [place, bag] : added) {
    Bag b = out.at(place);
    b.merge(bag);
    out.set(place, std::move(b));
  }
  return out;
}

}  // namespace

State fire_forward(const Net& net, const State& s, const std::string& t, const Assignment& a) {
  net.require_transition(t);
  const auto fx = transition_effects(net, t);
  if (!well_typed(net, t, a) || !forward_conditions(net, s.marking, t, a, fx))
    throw NetError("transition " + t + " is not forward-enabled under " + binding_str(project(a)));

  const int k = next_key(s, t);
  std::map<TokenId, std::string> selected;
  for (const auto& [var, tok] : a) selected.emplace(tok.id(), var);

  std::map<std::string, Bag> removed;
  for (const auto& [place, label] : net.in_arcs(t))
    for (const auto& v : label.vars) removed[place].merge(connected(a.at(v), s.marking.at(place)));

  const Bag after = compute_after(net, s.marking, t, a);
  std::map<std::string, Bag> added;
  std::set<TokenId> stamped;
  for (const auto& [place, label] : net.out_arcs(t))
    for (const auto& v : label.vars) {
      Bag comp = connected(a.at(v), after);
      Bag& dst = added[place];
      for (auto& [id, path] : comp.tokens) {
        if (stamped.insert(id).second) {
          auto sel = selected.find(id);
          path.push_back({k, t, sel == selected.end() ? std::string(kBystander) : sel->second});
        } else {
          path = dst.tokens.at(id);
        }
      }
      dst.merge(comp);
    }

  State out{relocate(s.marking, removed, added), s.history};
  out.history[t][k] = project(a);
  return out;
}

std::vector<ReverseCandidate> enumerate_reverse(const Net& net, const State& s, const std::string& t) {
  net.require_transition(t);
  std::vector<ReverseCandidate> out;
  auto hit = s.history.find(t);
  if (hit == s.history.end()) return out;
  const ArcLabel effects = net.effects(t);

  for (const auto& [k, binding] : hit->second) {
    bool blocked = false;
    Assignment r;
    for (const auto& [place, bag] : s.marking.places()) {
      for (const auto& [id, path] : bag.tokens) {
        for (std::size_t j = 0; j < path.size(); ++j) {
          const auto& e = path[j];
          if (e.key != k || e.transition != t) continue;
          if (j + 1 != path.size()) {
            blocked = true;
          } else if (!e.bystander() && effects.vars.count(e.var)) {
            r[e.var] = TokenInstance{id.type, id.index, path};
          }
        }
      }
    }
    if (blocked || r.size() != effects.vars.size()) continue;
    bool ok = true;
    for (const auto& [var, tok] : r)
      if (tok.type != net.type_of(var)) ok = false;
    for (const auto& [place, label] : net.out_arcs(t))
      if (ok && !label_present(label, r, s.marking.at(place))) ok = false;
    if (ok) out.push_back({k, std::move(r)});
  }
  return out;
}

State fire_reverse(const Net& net, const State& s, const std::string& t, const ReverseCandidate& c) {
  net.require_transition(t);
  const auto candidates = enumerate_reverse(net, s, t);
  if (std::find(candidates.begin(), candidates.end(), c) == candidates.end())
    throw NetError("occurrence " + std::to_string(c.key) + " of " + t + " is not reverse-enabled under " +
                   binding_str(project(c.assignment)));
  const Assignment& r = c.assignment;

  std::map<std::string, Bag> removed;
  for (const auto& [place, label] : net.out_arcs(t))
    for (const auto& v : label.vars) removed[place].merge(connected(r.at(v), s.marking.at(place)));

  const Bag before = compute_before(net, s.marking, t, r);
  std::map<std::string, Bag> added;
  std::set<TokenId> popped;
  for (const auto& [place, label] : net.in_arcs(t))
    for (const auto& v : label.vars) {
      Bag comp = connected(r.at(v), before);
      Bag& dst = added[place];
      for (auto& [id, path] : comp.tokens) {
        if (popped.insert(id).second) {
          if (path.empty() || path.back().key != c.key || path.back().transition != t)
            throw NetError("reversal of " + t + " occurrence " + std::to_string(c.key) +
                           " would pop a foreign path entry of " + id.str());
          path.pop_back();
        } else {
          path = dst.tokens.at(id);
        }
      }
      dst.merge(comp);
    }

  State out{relocate(s.marking, removed, added), s.history};
  auto& recs = out.history[t];
  recs.erase(c.key);
  if (recs.empty()) out.history.erase(t);
  return out;
}

std::string Label::str() const {
  return (dir == Direction::Reverse ? "~" : "") + transition + "(" + binding_str(binding) + ")";
}

Label label_of(const Action& a) { return {a.dir, a.transition, project(a.assignment)}; }

std::vector<Action> enabled_actions(const Net& net, const State& s) {
  std::vector<Action> out;
  for (const auto& t : net.transitions) {
    for (auto& a : enumerate_forward(net, s, t)) out.push_back({Direction::Forward, t, std::move(a), 0});
    for (auto& c : enumerate_reverse(net, s, t)) out.push_back({Direction::Reverse, t, std::move(c.assignment), c.key});
  }
  return out;
}

State apply(const Net& net, const State& s, const Action& a) {
  if (a.reverse()) return fire_reverse(net, s, a.transition, {a.key, a.assignment});
  return fire_forward(net, s, a.transition, a.assignment);
}

std::optional<Action> resolve(const Net& net, const State& s, const Label& l) {
  if (!net.transitions.count(l.transition)) return std::nullopt;
  if (l.dir == Direction::Forward) {
    for (auto& a : enumerate_forward(net, s, l.transition))
      if (project(a) == l.binding) return Action{Direction::Forward, l.transition, std::move(a), 0};
  } else {
    for (auto& c : enumerate_reverse(net, s, l.transition))
      if (project(c.assignment) == l.binding)
        return Action{Direction::Reverse, l.transition, std::move(c.assignment), c.key};
  }
  return std::nullopt;
}

}  // namespace mrpn
