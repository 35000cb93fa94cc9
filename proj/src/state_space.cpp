#include "mrpn/state_space.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

#include <json.hpp>

#include "mrpn/format.hpp"

namespace mrpn {

KeyMode parse_key_mode(const std::string& s) {
  if (s == "exact") return KeyMode::Exact;
  if (s == "normalized") return KeyMode::Normalized;
  if (s == "causal") return KeyMode::Causal;
  throw NetError("unknown key mode '" + s + "' (expected exact, normalized or causal)");
}

const char* key_mode_name(KeyMode m) {
  switch (m) {
    case KeyMode::Exact: return "exact";
    case KeyMode::Normalized: return "normalized";
    case KeyMode::Causal: return "causal";
  }
  return "?";
}

State normalize_keys(const State& s) {
  // Keys named by the history or by any path entry.
  std::map<std::string, std::set<int>> keys;
  for (const auto& [t, recs] : s.history)
    for (const auto& [k, b] : recs) keys[t].insert(k);
  for (const auto& [place, bag] : s.marking.places())
    for (const auto& [id, path] : bag.tokens)
      for (const auto& e : path) keys[e.transition].insert(e.key);

  std::map<std::string, std::map<int, int>> rename;
  for (const auto& [t, ks] : keys) {
    int next = 1;
    for (int k : ks) rename[t][k] = next++;
  }

  State out;
  for (const auto& [place, bag] : s.marking.places()) {
    Bag nb = bag;
    for (auto& [id, path] : nb.tokens)
      for (auto& e : path) e.key = rename[e.transition][e.key];
    out.marking.set(place, std::move(nb));
  }
  for (const auto& [t, recs] : s.history)
    for (const auto& [k, b] : recs) out.history[t][rename[t][k]] = b;
  return out;
}

namespace {

std::string causal_key(const State& s) {
  // Each occurrence is named by its first carrier position. The scan order
  // (place, token, path index) does not depend on key values.
  std::map<std::pair<std::string, int>, std::string> anchor;
  for (const auto& [place, bag] : s.marking.places())
    for (const auto& [id, path] : bag.tokens)
      for (std::size_t j = 0; j < path.size(); ++j)
        anchor.emplace(std::make_pair(path[j].transition, path[j].key), id.str() + ":" + std::to_string(j));

  std::ostringstream os;
  for (const auto& [place, bag] : s.marking.places()) {
    os << place << "{";
    bool first = true;
    for (const auto& [id, path] : bag.tokens) {
      os << (first ? "" : ",") << id.str() << "[";
      for (std::size_t j = 0; j < path.size(); ++j)
        os << (j ? "," : "") << path[j].transition << "." << path[j].var << "@"
           << anchor.at({path[j].transition, path[j].key});
      os << "]";
      first = false;
    }
    for (const auto& b : bag.bonds) os << "," << b.str();
    os << "}";
  }
  os << "|";
  for (const auto& [t, recs] : s.history) {
    std::vector<std::string> occ;
    for (const auto& [k, binding] : recs) {
      auto it = anchor.find({t, k});
      occ.push_back((it == anchor.end() ? std::string("-") : it->second) + "(" + binding_str(binding) + ")");
    }
    std::sort(occ.begin(), occ.end());
    os << t << "{";
    for (std::size_t i = 0; i < occ.size(); ++i) os << (i ? "," : "") << occ[i];
    os << "}";
  }
  return os.str();
}

}  // namespace

std::string canonical_key(const State& s, KeyMode mode) {
  switch (mode) {
    case KeyMode::Exact: return compact_state(s);
    case KeyMode::Normalized: return compact_state(normalize_keys(s));
    case KeyMode::Causal: return causal_key(s);
  }
  return {};
}

std::size_t Lts::count_edges(Direction d) const {
  return static_cast<std::size_t>(
      std::count_if(edges.begin(), edges.end(), [d](const LtsEdge& e) { return e.label.dir == d; }));
}

std::vector<const LtsEdge*> Lts::out_edges(std::size_t state) const {
  std::vector<const LtsEdge*> out;
  for (const auto& e : edges)
    if (e.from == state) out.push_back(&e);
  return out;
}

std::optional<std::size_t> Lts::find(const std::string& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Lts explore(const Net& net, const State& s0, const ExploreConfig& cfg) {
  if (cfg.depth < 0) throw NetError("exploration depth must be non-negative");
  if (cfg.state_cap == 0) throw NetError("state cap must be positive");
  const std::set<TokenId> declared = identities(s0.marking);

  Lts lts;
  lts.keys = cfg.keys;
  auto representative = [&](const State& s) { return cfg.keys == KeyMode::Exact ? s : normalize_keys(s); };
  auto add = [&](const State& s, int depth) -> std::optional<std::size_t> {
    std::string key = canonical_key(s, cfg.keys);
    if (auto it = lts.index_.find(key); it != lts.index_.end()) return it->second;
    if (lts.states.size() >= cfg.state_cap) {
      lts.truncated = true;
      return std::nullopt;
    }
    if (auto bad = check_conservation(s.marking, declared); !bad.empty())
      throw NetError("conservation violated in explored state: " + bad.front());
    lts.index_.emplace(key, lts.states.size());
    lts.states.push_back({std::move(key), representative(s), depth, false});
    return lts.states.size() - 1;
  };

  add(s0, 0);
  std::deque<std::size_t> queue{0};
  while (!queue.empty() && !lts.truncated) {
    std::size_t cur = queue.front();
    queue.pop_front();
    if (lts.states[cur].depth >= cfg.depth) continue;
    const State from = lts.states[cur].state;
    const int depth = lts.states[cur].depth;
    std::vector<LtsEdge> found;
    for (const auto& action : enabled_actions(net, from)) {
      std::size_t before = lts.states.size();
      auto to = add(apply(net, from, action), depth + 1);
      if (!to) break;
      if (lts.states.size() > before) queue.push_back(*to);
      found.push_back({cur, label_of(action), *to});
    }
    if (lts.truncated) break;
    lts.states[cur].expanded = true;
    lts.edges.insert(lts.edges.end(), found.begin(), found.end());
  }
  return lts;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

nlohmann::json marking_json(const Marking& m) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [place, bag] : m.places()) {
    nlohmann::json toks = nlohmann::json::array(), bonds = nlohmann::json::array();
    for (const auto& t : bag.instances()) toks.push_back(format_token(t));
    for (const auto& b : bag.bonds) bonds.push_back(b.str());
    out[place] = {{"tokens", toks}, {"bonds", bonds}};
  }
  return out;
}

nlohmann::json binding_json(const Binding& b) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [v, id] : b) out[v] = id.str();
  return out;
}

nlohmann::json history_json(const History& h) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [t, recs] : h) {
    nlohmann::json r = nlohmann::json::object();
    for (const auto& [k, b] : recs) r[std::to_string(k)] = binding_json(b);
    out[t] = r;
  }
  return out;
}

}  // namespace

std::string export_dot(const Lts& lts) {
  std::ostringstream os;
  os << "digraph lts {\n";
  for (std::size_t i = 0; i < lts.states.size(); ++i) {
    os << "  s" << i << " [label=\"s" << i << "\", tooltip=\"" << dot_escape(lts.states[i].key) << "\"";
    if (i == lts.initial) os << ", peripheries=2";
    os << "];\n";
  }
  for (const auto& e : lts.edges)
    os << "  s" << e.from << " -> s" << e.to << " [label=\"" << dot_escape(e.label.str()) << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string export_jsonl(const Lts& lts) {
  std::ostringstream os;
  for (std::size_t i = 0; i < lts.states.size(); ++i) {
    const auto& s = lts.states[i];
    nlohmann::json j = {{"kind", "state"},
                        {"id", "s" + std::to_string(i)},
                        {"key", s.key},
                        {"depth", s.depth},
                        {"initial", i == lts.initial},
                        {"marking", marking_json(s.state.marking)},
                        {"history", history_json(s.state.history)}};
    os << j.dump() << "\n";
  }
  for (const auto& e : lts.edges) {
    nlohmann::json label = {{"dir", e.label.dir == Direction::Forward ? "fwd" : "rev"},
                            {"t", e.label.transition},
                            {"assign", binding_json(e.label.binding)}};
    nlohmann::json j = {{"kind", "edge"},
                        {"from", "s" + std::to_string(e.from)},
                        {"label", label},
                        {"to", "s" + std::to_string(e.to)}};
    os << j.dump() << "\n";
  }
  return os.str();
}

}  // namespace mrpn
