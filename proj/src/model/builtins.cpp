#include <map>

#include "slowfast/model/model_file.hpp"

namespace slowfast {

namespace {

const std::map<std::string, std::string>& sources() {
  static const std::map<std::string, std::string> table = {
      {"mm2d", R"({
  "name": "mm2d",
  "description": "Michaelis-Menten after eliminating e = e0 - c, small total enzyme",
  "species": ["s", "c"],
  "parameters": ["k1", "km1", "k2", {"name": "e0", "eps_order": 1}],
  "raw_system": {
    "s": "-k1*e0*s + (k1*s + km1)*c",
    "c": "k1*e0*s - (k1*s + km1 + k2)*c"
  },
  "initial_values": {"s": "s0", "c": "0"},
  "fast": ["c"]
})"},
      {"mm3d", R"({
  "name": "mm3d",
  "description": "Michaelis-Menten with free enzyme, e and c scaled",
  "species": ["s", "e", "c"],
  "reactions": [
    {"reactants": {"e": 1, "s": 1}, "products": {"c": 1}, "rate": "k1"},
    {"reactants": {"c": 1}, "products": {"e": 1, "s": 1}, "rate": "km1"},
    {"reactants": {"c": 1}, "products": {"e": 1}, "rate": "k2"}
  ],
  "initial_values": {"s": "s0", "e": {"base": "e0", "eps_order": 1}, "c": "0"},
  "fast": ["e", "c"]
})"},
      {"mm3d_deg", R"({
  "name": "mm3d_deg",
  "description": "Michaelis-Menten with slow degradation of free enzyme",
  "species": ["s", "e", "c"],
  "reactions": [
    {"reactants": {"e": 1, "s": 1}, "products": {"c": 1}, "rate": "k1"},
    {"reactants": {"c": 1}, "products": {"e": 1, "s": 1}, "rate": "km1"},
    {"reactants": {"c": 1}, "products": {"e": 1}, "rate": "k2"},
    {"reactants": {"e": 1}, "products": {}, "rate": "delta", "eps_order": 1}
  ],
  "initial_values": {"s": "s0", "e": {"base": "e0", "eps_order": 1}, "c": "0"},
  "fast": ["e", "c"]
})"},
      {"chain3", R"({
  "name": "chain3",
  "description": "Enzyme reaction through three intermediate complexes, all reactions fast",
  "species": ["e", "s", "c1", "c2", "c3"],
  "reactions": [
    {"reactants": {"e": 1, "s": 1}, "products": {"c1": 1}, "rate": "k1"},
    {"reactants": {"c1": 1}, "products": {"e": 1, "s": 1}, "rate": "km1"},
    {"reactants": {"c1": 1}, "products": {"c2": 1}, "rate": "k2"},
    {"reactants": {"c2": 1}, "products": {"c1": 1}, "rate": "km2"},
    {"reactants": {"c2": 1}, "products": {"c3": 1}, "rate": "k3"},
    {"reactants": {"c3": 1}, "products": {"c2": 1}, "rate": "km3"},
    {"reactants": {"c3": 1}, "products": {"e": 1}, "rate": "k4"}
  ],
  "initial_values": {"e": {"base": "e0", "eps_order": 1}, "s": "s0", "c1": "0", "c2": "0", "c3": "0"},
  "eliminate": ["e"],
  "fast": ["c1", "c2", "c3"]
})"},
      {"chain3_slow", R"({
  "name": "chain3_slow",
  "description": "Three-intermediate chain with a slow product-release step",
  "species": ["e", "s", "c1", "c2", "c3"],
  "reactions": [
    {"reactants": {"e": 1, "s": 1}, "products": {"c1": 1}, "rate": "k1"},
    {"reactants": {"c1": 1}, "products": {"e": 1, "s": 1}, "rate": "km1"},
    {"reactants": {"c1": 1}, "products": {"c2": 1}, "rate": "k2"},
    {"reactants": {"c2": 1}, "products": {"c1": 1}, "rate": "km2"},
    {"reactants": {"c2": 1}, "products": {"c3": 1}, "rate": "k3"},
    {"reactants": {"c3": 1}, "products": {"c2": 1}, "rate": "km3"},
    {"reactants": {"c3": 1}, "products": {"e": 1}, "rate": "k4", "eps_order": 1}
  ],
  "initial_values": {"e": {"base": "e0", "eps_order": 1}, "s": "s0", "c1": "0", "c2": "0", "c3": "0"},
  "eliminate": ["e"],
  "fast": ["c1", "c2", "c3"]
})"},
      {"inhibitor", R"({
  "name": "inhibitor",
  "description": "Michaelis-Menten with a competitive inhibitor that degrades slowly",
  "species": ["e", "s", "c1", "c2", "y"],
  "reactions": [
    {"reactants": {"e": 1, "s": 1}, "products": {"c1": 1}, "rate": "k1"},
    {"reactants": {"c1": 1}, "products": {"e": 1, "s": 1}, "rate": "km1"},
    {"reactants": {"c1": 1}, "products": {"e": 1}, "rate": "k2"},
    {"reactants": {"e": 1, "y": 1}, "products": {"c2": 1}, "rate": "k3"},
    {"reactants": {"c2": 1}, "products": {"e": 1, "y": 1}, "rate": "km3"},
    {"reactants": {"y": 1}, "products": {}, "rate": "k4", "eps_order": 1}
  ],
  "initial_values": {"e": {"base": "e0", "eps_order": 1}, "s": "s0", "c1": "0", "c2": "0", "y": "y0"},
  "fast": ["e", "c1", "c2"]
})"},
      {"mm_diffusion", R"({
  "name": "mm_diffusion",
  "description": "Michaelis-Menten in four compartments with slow diffusion, w = e + c",
  "species": ["s", "c", "w"],
  "parameters": ["k1", "km1", "k2", "theta_s", "theta_c", "theta_e"],
  "raw_system": {
    "s": "-k1*s*w + (k1*s + km1)*c",
    "c": "k1*s*w - (k1*s + km1 + k2)*c",
    "w": "0"
  },
  "initial_values": {"s": "s0", "c": "0", "w": {"base": "e0", "eps_order": 1}},
  "transport": {
    "compartments": 4,
    "terms": [
      {"target": "s", "rate": "theta_s", "eps_order": 1},
      {"target": "c", "rate": "theta_c", "eps_order": 1},
      {"target": "w", "rate": "theta_e", "eps_order": 1},
      {"target": "w", "source": "c", "rate": "theta_c - theta_e", "eps_order": 1}
    ]
  },
  "fast": ["c", "w"]
})"},
      {"transport_binding", R"({
  "name": "transport_binding",
  "description": "Binding S + P <-> C in four cells with diffusive transport",
  "species": ["s", "p", "c"],
  "reactions": [
    {"reactants": {"s": 1, "p": 1}, "products": {"c": 1}, "rate": "k1"},
    {"reactants": {"c": 1}, "products": {"s": 1, "p": 1}, "rate": "km1"}
  ],
  "parameters": ["delta_s", "delta_p", "delta_c"],
  "initial_values": {"s": {"base": "s0", "eps_order": 1}, "p": "p0", "c": {"base": "c0", "eps_order": 1}},
  "transport": {
    "compartments": 4,
    "terms": [
      {"target": "s", "rate": "delta_s", "eps_order": 1},
      {"target": "p", "rate": "delta_p", "eps_order": 1},
      {"target": "c", "rate": "delta_c", "eps_order": 1}
    ]
  },
  "fast": ["s", "c"]
})"},
  };
  return table;
}

}  // namespace

std::vector<std::string> builtin_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : sources()) names.push_back(name);
  return names;
}

const std::string& builtin_source(const std::string& name) {
  auto it = sources().find(name);
  if (it == sources().end()) throw ModelError("unknown builtin model '" + name + "'");
  return it->second;
}

Model builtin_model(const std::string& name) { return load_model_json(builtin_source(name)); }

}  // namespace slowfast
