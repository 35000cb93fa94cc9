#include "random_net.hpp"

#include <random>
#include <stdexcept>

namespace testkit {

namespace {

using mrpn::ArcLabel;

int pick(std::mt19937& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool coin(std::mt19937& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::optional<mrpn::NetDocument> attempt(std::mt19937& rng, std::uint32_t seed) {
  mrpn::NetDocument doc;
  doc.name = "random" + std::to_string(seed);
  mrpn::Net& net = doc.net;

  const int ntypes = pick(rng, 1, 3);
  std::vector<std::string> types;
  for (int i = 0; i < ntypes; ++i) types.push_back(std::string(1, static_cast<char>('A' + i)));
  net.types.insert(types.begin(), types.end());
  for (int i = 0; i < ntypes; ++i)
    for (int j = i + 1; j < ntypes; ++j)
      if (coin(rng, 0.8)) net.bond_types.insert(mrpn::make_type_bond(types[i], types[j]));

  const int nplaces = pick(rng, 2, 6);
  std::vector<std::string> places;
  for (int i = 0; i < nplaces; ++i) places.push_back("p" + std::to_string(i));
  net.places.insert(places.begin(), places.end());
  auto any_place = [&] { return places[pick(rng, 0, nplaces - 1)]; };

  const int ntrans = pick(rng, 1, 4);
  int fresh = 0;
  std::vector<std::string> inputs;
  for (int ti = 0; ti < ntrans; ++ti) {
    const std::string t = "t" + std::to_string(ti + 1);
    net.transitions.insert(t);
    const int nvars = pick(rng, 1, 2);
    std::vector<std::string> vars;
    for (int v = 0; v < nvars; ++v) {
      std::string name = std::string(1, static_cast<char>('a' + fresh++));
      std::string ty = types[pick(rng, 0, ntypes - 1)];
      if (v == 1 && ntypes > 1 && coin(rng, 0.7))
        while (ty == net.variables[vars[0]]) ty = types[pick(rng, 0, ntypes - 1)];
      net.variables[name] = ty;
      vars.push_back(name);
    }
    std::map<std::string, std::string> in_of, out_of;
    const bool same_in = coin(rng, 0.5), same_out = coin(rng, 0.5);
    for (const auto& v : vars) {
      in_of[v] = same_in && !in_of.empty() ? in_of.begin()->second : any_place();
      out_of[v] = same_out && !out_of.empty() ? out_of.begin()->second : any_place();
      inputs.push_back(in_of[v]);
      net.inputs[t][in_of[v]].vars.insert(v);
      net.outputs[t][out_of[v]].vars.insert(v);
    }
    if (nvars == 2 && net.bondable(net.variables[vars[0]], net.variables[vars[1]])) {
      const auto vb = mrpn::make_var_bond(vars[0], vars[1]);
      bool needed = in_of[vars[0]] == in_of[vars[1]] && coin(rng, 0.4);
      if (needed) net.inputs[t][in_of[vars[0]]].bonds.insert(vb);
      if (out_of[vars[0]] == out_of[vars[1]] && (needed ? coin(rng, 0.5) : coin(rng, 0.6)))
        net.outputs[t][out_of[vars[0]]].bonds.insert(vb);
    }
  }

  // Instances: at most 6 in total, each type at least once.
  const int ninst = pick(rng, ntypes, 6);
  std::map<std::string, int> per_type;
  std::vector<mrpn::TokenId> ids;
  for (int i = 0; i < ninst; ++i) {
    const std::string& ty = i < ntypes ? types[i] : types[pick(rng, 0, ntypes - 1)];
    ids.push_back({ty, ++per_type[ty]});
  }
  for (const auto& id : ids) doc.initial.mut(coin(rng, 0.7) ? inputs[pick(rng, 0, static_cast<int>(inputs.size()) - 1)] : any_place()).insert(mrpn::TokenInstance{id.type, id.index, {}});
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j) {
      if (!net.bondable(ids[i].type, ids[j].type) || !coin(rng, 0.3)) continue;
      auto pi = doc.initial.locate(ids[i]), pj = doc.initial.locate(ids[j]);
      if (pi && pj && *pi == *pj) doc.initial.mut(*pi).insert(mrpn::Bond(ids[i], ids[j]));
    }

  if (!mrpn::validate_well_formed(net).empty()) return std::nullopt;
  auto parsed = mrpn::parse_net(mrpn::serialize_net(doc));
  if (!parsed.ok()) return std::nullopt;
  return parsed.value;
}

}  // namespace

mrpn::NetDocument random_net(std::uint32_t seed) {
  std::mt19937 rng(seed);
  for (int tries = 0; tries < 1000; ++tries)
    if (auto doc = attempt(rng, seed)) return *doc;
  throw std::runtime_error("no well-formed net for seed " + std::to_string(seed));
}

}  // namespace testkit
