#include "oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace oracle {

BondI bond(const Tok& a, const Tok& b) { return a < b ? BondI{a, b} : BondI{b, a}; }

St from_state(const mrpn::State& s) {
  St out;
  for (const auto& [place, bag] : s.marking.places()) {
    Stuff& st = out.m[place];
    auto full = [&](const mrpn::TokenId& id) {
      Tok t{id.type, id.index, {}};
      for (const auto& e : bag.tokens.at(id)) t.path.emplace_back(e.key, e.transition, e.var);
      return t;
    };
    for (const auto& [id, path] : bag.tokens) st.toks.insert(full(id));
    for (const auto& b : bag.bonds) st.bonds.insert(bond(full(b.first()), full(b.second())));
  }
  for (const auto& [t, recs] : s.history)
    for (const auto& [k, binding] : recs) out.h[t].insert(k);
  return out;
}

St initial(const mrpn::Marking& m0) { return from_state(mrpn::State{m0, {}}); }

namespace {

using Arcs = std::map<std::string, mrpn::ArcLabel>;
using Assign = std::map<std::string, Tok>;

const Arcs& arcs(const std::map<std::string, Arcs>& all, const std::string& t) {
  static const Arcs none;
  auto it = all.find(t);
  return it == all.end() ? none : it->second;
}

std::set<std::string> vars_of(const Arcs& a) {
  std::set<std::string> out;
  for (const auto& [x, l] : a) out.insert(l.vars.begin(), l.vars.end());
  return out;
}

std::set<std::pair<std::string, std::string>> bonds_of(const Arcs& a) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& [x, l] : a) out.insert(l.bonds.begin(), l.bonds.end());
  return out;
}

const Stuff& at(const St& s, const std::string& x) {
  static const Stuff none;
  auto it = s.m.find(x);
  return it == s.m.end() ? none : it->second;
}

Stuff unite(const Stuff& a, const Stuff& b) {
  Stuff out = a;
  out.toks.insert(b.toks.begin(), b.toks.end());
  out.bonds.insert(b.bonds.begin(), b.bonds.end());
  return out;
}

Stuff minus(const Stuff& a, const Stuff& b) {
  Stuff out;
  std::set_difference(a.toks.begin(), a.toks.end(), b.toks.begin(), b.toks.end(), std::inserter(out.toks, out.toks.end()));
  std::set_difference(a.bonds.begin(), a.bonds.end(), b.bonds.begin(), b.bonds.end(),
                      std::inserter(out.bonds, out.bonds.end()));
  return out;
}

Stuff connected(const Tok& seed, const Stuff& pool) {
  Stuff out;
  if (!pool.toks.count(seed)) return out;
  out.toks.insert(seed);
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& b : pool.bonds)
      if (pool.toks.count(b.first) && pool.toks.count(b.second) &&
          (out.toks.count(b.first) || out.toks.count(b.second))) {
        grew |= out.toks.insert(b.first).second;
        grew |= out.toks.insert(b.second).second;
        out.bonds.insert(b);
      }
  }
  return out;
}

std::set<BondI> inst(const std::set<std::pair<std::string, std::string>>& bs, const Assign& w) {
  std::set<BondI> out;
  for (const auto& [a, b] : bs) out.insert(bond(w.at(a), w.at(b)));
  return out;
}

std::vector<Tok> all_tokens(const St& s) {
  std::vector<Tok> out;
  for (const auto& [x, st] : s.m) out.insert(out.end(), st.toks.begin(), st.toks.end());
  return out;
}

// Every injective, type-respecting map from `vars` to the tokens of s.
std::vector<Assign> assignments(const mrpn::Net& net, const St& s, const std::set<std::string>& vars) {
  const auto toks = all_tokens(s);
  std::vector<std::string> order(vars.begin(), vars.end());
  std::vector<Assign> out;
  Assign cur;
  std::function<void(std::size_t)> go = [&](std::size_t i) {
    if (i == order.size()) {
      out.push_back(cur);
      return;
    }
    for (const auto& tok : toks) {
      if (tok.type != net.variables.at(order[i])) continue;
      bool used = false;
      for (const auto& [v, u] : cur) used |= u == tok;
      if (used) continue;
      cur[order[i]] = tok;
      go(i + 1);
      cur.erase(order[i]);
    }
  };
  go(0);
  return out;
}

bool covered(const mrpn::ArcLabel& l, const Assign& w, const Stuff& st) {
  for (const auto& v : l.vars)
    if (!st.toks.count(w.at(v))) return false;
  for (const auto& [a, b] : l.bonds)
    if (!st.bonds.count(bond(w.at(a), w.at(b)))) return false;
  return true;
}

Tok stamp(const Tok& tok, const Assign& w, const std::string& t, int k) {
  Tok out = tok;
  std::string var = "*";
  for (const auto& [v, u] : w)
    if (u == tok) var = v;
  out.path.emplace_back(k, t, var);
  return out;
}

Tok pop(const Tok& tok) {
  Tok out = tok;
  out.path.pop_back();
  return out;
}

template <typename F>
Stuff map_stuff(const Stuff& st, F f) {
  Stuff out;
  for (const auto& t : st.toks) out.toks.insert(f(t));
  for (const auto& b : st.bonds) out.bonds.insert(bond(f(b.first), f(b.second)));
  return out;
}

Move move_of(bool forward, const std::string& t, const Assign& w, int key) {
  Move m{forward, t, {}, key};
  for (const auto& [v, tok] : w) m.bind[v] = {tok.type, tok.idx};
  return m;
}

void set_place(St& s, const std::string& x, Stuff st) {
  if (st.toks.empty() && st.bonds.empty())
    s.m.erase(x);
  else
    s.m[x] = std::move(st);
}

}  // namespace

std::vector<std::pair<Move, St>> successors(const mrpn::Net& net, const St& s) {
  std::vector<std::pair<Move, St>> out;
  for (const auto& t : net.transitions) {
    const Arcs& in = arcs(net.inputs, t);
    const Arcs& outs = arcs(net.outputs, t);
    const auto guard_b = bonds_of(in), eff_b = bonds_of(outs);
    std::set<std::pair<std::string, std::string>> plus, minus_b;
    std::set_difference(eff_b.begin(), eff_b.end(), guard_b.begin(), guard_b.end(), std::inserter(plus, plus.end()));
    std::set_difference(guard_b.begin(), guard_b.end(), eff_b.begin(), eff_b.end(), std::inserter(minus_b, minus_b.end()));

    // Forward.
    for (const auto& w : assignments(net, s, vars_of(in))) {
      bool ok = true;
      for (const auto& [x, l] : in) ok = ok && covered(l, w, at(s, x));
      for (const auto& [x, l] : in)
        for (const auto& [a, b] : plus)
          if (l.vars.count(a) && l.vars.count(b) && at(s, x).bonds.count(bond(w.at(a), w.at(b)))) ok = false;
      if (!ok) continue;
      Stuff after;
      for (const auto& [x, l] : in) after = unite(after, at(s, x));
      for (const auto& b : inst(plus, w)) after.bonds.insert(b);
      for (const auto& b : inst(minus_b, w)) after.bonds.erase(b);
      for (const auto& [y1, l1] : outs)
        for (const auto& [y2, l2] : outs) {
          if (y1 == y2) continue;
          for (const auto& a : l1.vars)
            for (const auto& b : l2.vars)
              if (connected(w.at(a), after) == connected(w.at(b), after)) ok = false;
        }
      if (!ok) continue;

      int k = 1;
      if (auto it = s.h.find(t); it != s.h.end() && !it->second.empty()) k = *it->second.rbegin() + 1;
      St next;
      next.h = s.h;
      next.h[t].insert(k);
      std::set<std::string> places;
      for (const auto& [x, st] : s.m) places.insert(x);
      for (const auto& [x, l] : outs) places.insert(x);
      for (const auto& x : places) {
        Stuff cur = at(s, x);
        if (auto it = in.find(x); it != in.end())
          for (const auto& a : it->second.vars) cur = minus(cur, connected(w.at(a), at(s, x)));
        if (auto it = outs.find(x); it != outs.end())
          for (const auto& a : it->second.vars)
            cur = unite(cur, map_stuff(connected(w.at(a), after), [&](const Tok& u) { return stamp(u, w, t, k); }));
        set_place(next, x, std::move(cur));
      }
      out.emplace_back(move_of(true, t, w, 0), std::move(next));
    }

    // Reverse.
    auto hit = s.h.find(t);
    if (hit == s.h.end()) continue;
    for (int k : hit->second) {
      bool last_ok = true;
      for (const auto& tok : all_tokens(s))
        for (std::size_t j = 0; j < tok.path.size(); ++j)
          if (std::get<0>(tok.path[j]) == k && std::get<1>(tok.path[j]) == t && j + 1 != tok.path.size())
            last_ok = false;
      if (!last_ok) continue;
      for (const auto& r : assignments(net, s, vars_of(outs))) {
        bool ok = true;
        for (const auto& [x, l] : outs) ok = ok && covered(l, r, at(s, x));
        for (const auto& [v, tok] : r)
          ok = ok && !tok.path.empty() && tok.path.back() == Entry{k, t, v};
        if (!ok) continue;
        Stuff before;
        for (const auto& [x, l] : outs) before = unite(before, at(s, x));
        for (const auto& b : inst(minus_b, r)) before.bonds.insert(b);
        for (const auto& b : inst(plus, r)) before.bonds.erase(b);

        St next;
        next.h = s.h;
        next.h[t].erase(k);
        if (next.h[t].empty()) next.h.erase(t);
        std::set<std::string> places;
        for (const auto& [x, st] : s.m) places.insert(x);
        for (const auto& [x, l] : in) places.insert(x);
        for (const auto& x : places) {
          Stuff cur = at(s, x);
          if (auto it = outs.find(x); it != outs.end())
            for (const auto& a : it->second.vars) cur = minus(cur, connected(r.at(a), at(s, x)));
          if (auto it = in.find(x); it != in.end())
            for (const auto& a : it->second.vars) cur = unite(cur, map_stuff(connected(r.at(a), before), pop));
          set_place(next, x, std::move(cur));
        }
        out.emplace_back(move_of(false, t, r, k), std::move(next));
      }
    }
  }
  return out;
}

St normalize(const St& s) {
  std::map<std::string, std::set<int>> keys = s.h;
  for (const auto& tok : all_tokens(s))
    for (const auto& [k, t, v] : tok.path) keys[t].insert(k);
  std::map<std::pair<std::string, int>, int> rename;
  for (const auto& [t, ks] : keys) {
    int n = 0;
    for (int k : ks) rename[{t, k}] = ++n;
  }
  auto re = [&](const Tok& tok) {
    Tok out = tok;
    for (auto& [k, t, v] : out.path) k = rename.at({t, k});
    return out;
  };
  St out;
  for (const auto& [x, st] : s.m) out.m[x] = map_stuff(st, re);
  for (const auto& [t, ks] : s.h)
    for (int k : ks) out.h[t].insert(rename.at({t, k}));
  return out;
}

Counts explore(const mrpn::Net& net, const St& s0, int depth) {
  std::map<St, int> seen{{normalize(s0), 0}};
  std::deque<St> queue{normalize(s0)};
  Counts c;
  while (!queue.empty()) {
    St cur = queue.front();
    queue.pop_front();
    int d = seen.at(cur);
    if (d >= depth) continue;
    for (auto& [mv, next] : successors(net, cur)) {
      (mv.forward ? c.forward : c.reverse)++;
      St n = normalize(next);
      if (seen.emplace(n, d + 1).second) queue.push_back(std::move(n));
    }
  }
  c.states = seen.size();
  return c;
}

}  // namespace oracle
