#include "slowfast/model/model_file.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "slowfast/symbolic/parser.hpp"

namespace slowfast {

using nlohmann::json;

namespace {

SymbolResolver lenient_resolver(SymbolTable& table) {
  return [&table](const std::string& name) {
    if (auto id = table.find(name)) return *id;
    return table.add(name, SymbolKind::Parameter);
  };
}

Polynomial parse_in(SymbolTable& table, const json& value) {
  if (value.is_number_integer()) return Polynomial(Rational(value.get<long>()));
  if (!value.is_string()) throw ModelError("expected a polynomial string, got " + value.dump());
  return parse_polynomial(value.get<std::string>(), lenient_resolver(table));
}

int order_of(const json& obj) {
  if (!obj.contains("eps_order")) return 0;
  const int k = obj.at("eps_order").get<int>();
  if (k < 0) throw ModelError("eps_order must be nonnegative");
  return k;
}

std::vector<std::pair<std::string, unsigned>> stoichiometry(const json& side) {
  std::vector<std::pair<std::string, unsigned>> out;
  if (side.is_null()) return out;
  if (side.is_array()) {
    for (const auto& name : side) out.emplace_back(name.get<std::string>(), 1u);
    return out;
  }
  for (const auto& [name, k] : side.items()) out.emplace_back(name, k.get<unsigned>());
  return out;
}

}  // namespace

Model load_model_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ModelError(std::string("model file is not valid JSON: ") + e.what());
  }
  Model model;
  model.name = doc.value("name", "model");
  model.description = doc.value("description", "");
  if (!doc.contains("species")) throw ModelError("model needs a 'species' list");

  ReactionNetwork net = make_network(doc.at("species").get<std::vector<std::string>>());
  SymbolTable& table = net.symbols;
  std::map<SymbolId, int> parameter_orders;
  std::set<SymbolId> signed_parameters;
  if (doc.contains("parameters")) {
    for (const auto& p : doc.at("parameters")) {
      const std::string name = p.is_string() ? p.get<std::string>() : p.at("name").get<std::string>();
      const SymbolId id = table.intern(name, SymbolKind::Parameter);
      if (p.is_object()) {
        if (const int k = order_of(p); k > 0) parameter_orders[id] = k;
        if (!p.value("nonnegative", true)) signed_parameters.insert(id);
        if (p.contains("value")) model.values[name] = parse_rational(p.at("value").get<std::string>());
      }
    }
  }
  if (doc.contains("reactions")) {
    for (const auto& r : doc.at("reactions")) {
      net.add(stoichiometry(r.value("reactants", json())), stoichiometry(r.value("products", json())),
              r.at("rate").get<std::string>(), order_of(r));
    }
  }
  // Raw rows are parsed before compiling so that new parameter names land in the table.
  std::vector<std::pair<std::size_t, std::pair<int, Polynomial>>> raw_terms;
  if (doc.contains("raw_system")) {
    const json& raw = doc.at("raw_system");
    auto add_row = [&](std::size_t i, const json& row) {
      if (row.is_object()) {
        for (const auto& [g, text] : row.items()) raw_terms.push_back({i, {std::stoi(g), parse_in(table, text)}});
      } else {
        raw_terms.push_back({i, {0, parse_in(table, row)}});
      }
    };
    if (raw.is_array()) {
      if (raw.size() != net.species.size()) throw ModelError("raw_system needs one entry per species");
      for (std::size_t i = 0; i < raw.size(); ++i) add_row(i, raw[i]);
    } else {
      for (const auto& [name, row] : raw.items()) {
        auto id = table.find(name);
        auto it = id ? std::find(net.species.begin(), net.species.end(), *id) : net.species.end();
        if (it == net.species.end()) throw ModelError("raw_system row for unknown species '" + name + "'");
        add_row(static_cast<std::size_t>(it - net.species.begin()), row);
      }
    }
  }
  std::vector<InitialValue> ivs(net.species.size());
  if (doc.contains("initial_values")) {
    for (const auto& [name, iv] : doc.at("initial_values").items()) {
      auto id = table.find(name);
      auto it = id ? std::find(net.species.begin(), net.species.end(), *id) : net.species.end();
      if (it == net.species.end()) throw ModelError("initial value for unknown species '" + name + "'");
      auto& slot = ivs[static_cast<std::size_t>(it - net.species.begin())];
      if (iv.is_object()) {
        slot.base = parse_in(table, iv.at("base"));
        slot.eps_order = order_of(iv);
      } else {
        slot.base = parse_in(table, iv);
      }
    }
  }

  EpsilonGradedSystem sys = compile_network(net);
  for (auto& [i, term] : raw_terms) sys.add_term(term.first, i, term.second);
  sys.normalize();
  sys.initial_values = ivs;
  for (auto id : table.of_kind(SymbolKind::Parameter)) {
    if (!signed_parameters.count(id)) sys.nonnegative.insert(id);
  }
  model.local = grade_parameters(sys, parameter_orders);

  if (doc.contains("transport")) {
    const json& t = doc.at("transport");
    TransportSpec spec;
    spec.compartments = t.value("compartments", 2u);
    for (const auto& term : t.at("terms")) {
      TransportTerm tt;
      tt.target = term.at("target").get<std::string>();
      tt.source = term.value("source", tt.target);
      tt.eps_order = term.value("eps_order", 1);
      tt.rate = parse_in(model.local.symbols, term.at("rate"));
      if (term.contains("matrix")) {
        const auto& rows = term.at("matrix");
        QMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size(), Rational(0));
        for (std::size_t a = 0; a < rows.size(); ++a) {
          if (rows[a].size() != m.cols()) throw ModelError("transport matrix is not rectangular");
          for (std::size_t b = 0; b < m.cols(); ++b) {
            const auto& v = rows[a][b];
            m(a, b) = v.is_string() ? parse_rational(v.get<std::string>()) : Rational(v.get<long>());
          }
        }
        tt.matrix = std::move(m);
      }
      spec.terms.push_back(std::move(tt));
    }
    for (auto id : model.local.symbols.of_kind(SymbolKind::Parameter)) {
      if (!signed_parameters.count(id)) model.local.nonnegative.insert(id);
    }
    model.transport = std::move(spec);
  }
  if (doc.contains("eliminate")) model.eliminate = doc.at("eliminate").get<std::vector<std::string>>();
  if (doc.contains("fast")) model.fast = doc.at("fast").get<std::vector<std::string>>();
  if (doc.contains("decomposition")) {
    DecompositionHint hint;
    hint.p = doc.at("decomposition").at("P").get<std::vector<std::vector<std::string>>>();
    hint.mu = doc.at("decomposition").at("mu").get<std::vector<std::string>>();
    model.decomposition = std::move(hint);
  }
  if (doc.contains("values")) {
    for (const auto& [name, v] : doc.at("values").items()) {
      model.values[name] = v.is_string() ? parse_rational(v.get<std::string>()) : Rational(v.get<long>());
    }
  }
  model.local.validate();
  return model;
}

Model load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_model_json(buffer.str());
}

EpsilonGradedSystem assemble(const Model& model) {
  EpsilonGradedSystem sys = model.transport ? build_transport_system(model.local, *model.transport) : model.local;
  for (const auto& name : model.eliminate) {
    sys = eliminate_state(sys, sys.states[sys.require_index(name)]);
  }
  return sys;
}

Partition resolve_partition(const EpsilonGradedSystem& sys, const std::vector<std::string>& names) {
  std::vector<std::size_t> fast;
  for (const auto& name : names) {
    if (auto id = sys.symbols.find(name); id && sys.is_state(*id)) {
      fast.push_back(*sys.index_of(*id));
      continue;
    }
    bool found = false;
    for (std::size_t a = 1; a <= kMaxCompartments; ++a) {
      auto id = sys.symbols.find(compartment_name(name, a));
      if (!id || !sys.is_state(*id)) break;
      fast.push_back(*sys.index_of(*id));
      found = true;
    }
    if (!found) throw ModelError("unknown state '" + name + "'");
  }
  return make_partition(sys, fast);
}

void set_fast_transport(Model& model, const std::vector<std::string>& species) {
  if (!model.transport) throw ModelError("model '" + model.name + "' has no transport");
  for (const auto& s : species) {
    bool found = false;
    for (auto& term : model.transport->terms) {
      if (term.target == s && term.source == s) {
        term.eps_order = 0;
        found = true;
      }
    }
    if (!found) throw ModelError("no transport term for species '" + s + "'");
  }
}

void set_initial_order(Model& model, const std::string& state, int order) {
  if (order < 0) throw ModelError("initial value order must be nonnegative");
  model.local.initial_values[model.local.require_index(state)].eps_order = order;
}

}  // namespace slowfast
