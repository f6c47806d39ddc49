#include "slowfast/model/network.hpp"

#include <algorithm>

namespace slowfast {

void ReactionNetwork::add(const std::vector<std::pair<std::string, unsigned>>& reactants,
                          const std::vector<std::pair<std::string, unsigned>>& products, const std::string& rate,
                          int eps_order) {
  auto stoich = [this](const std::vector<std::pair<std::string, unsigned>>& side) {
    std::vector<unsigned> v(species.size(), 0);
    for (const auto& [name, k] : side) {
      const SymbolId id = symbols.require(name);
      auto it = std::find(species.begin(), species.end(), id);
      if (it == species.end()) throw ModelError("'" + name + "' is not a species");
      v[static_cast<std::size_t>(it - species.begin())] += k;
    }
    return v;
  };
  Reaction r;
  r.reactants = stoich(reactants);
  r.products = stoich(products);
  r.rate = symbols.intern(rate, SymbolKind::Parameter);
  r.eps_order = eps_order;
  reactions.push_back(std::move(r));
}

ReactionNetwork make_network(const std::vector<std::string>& species) {
  ReactionNetwork net;
  for (const auto& s : species) net.species.push_back(net.symbols.add(s, SymbolKind::State));
  return net;
}

EpsilonGradedSystem compile_network(const ReactionNetwork& net) {
  const std::size_t n = net.species.size();
  std::vector<SymbolId> rates;
  for (const auto& r : net.reactions) {
    if (r.reactants.size() != n || r.products.size() != n) throw ModelError("stoichiometry length mismatch");
    if (r.eps_order < 0 || r.eps_order > 1) throw ModelError("rate constant eps order must be 0 or 1");
    if (std::find(rates.begin(), rates.end(), r.rate) != rates.end()) {
      throw ModelError("rate constant '" + net.symbols.name(r.rate) + "' used twice");
    }
    rates.push_back(r.rate);
  }
  EpsilonGradedSystem sys = make_system(net.symbols, net.species);
  for (const auto& r : net.reactions) {
    Monomial m = Monomial::variable(r.rate);
    for (std::size_t i = 0; i < n; ++i) {
      if (r.reactants[i] > 0) m = m * Monomial::variable(net.species[i], r.reactants[i]);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const long change = static_cast<long>(r.products[i]) - static_cast<long>(r.reactants[i]);
      if (change != 0) sys.add_term(r.eps_order, i, Polynomial::monomial(m, Rational(change)));
    }
    sys.nonnegative.insert(r.rate);
  }
  sys.normalize();
  return sys;
}

void TransportSpec::diffuse(SymbolTable& symbols, const std::string& species, const std::string& rate,
                            int eps_order) {
  TransportTerm t;
  t.target = species;
  t.source = species;
  t.eps_order = eps_order;
  t.rate = Polynomial::variable(symbols.intern(rate, SymbolKind::Parameter));
  terms.push_back(std::move(t));
}

QMatrix neumann_laplacian(std::size_t n) {
  QMatrix d(n, n, Rational(0));
  if (n < 2) return d;
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t lo = a == 0 ? 0 : a - 1;
    const std::size_t hi = a + 1 == n ? a : a + 1;
    d(a, lo) += 1;
    d(a, hi) += 1;
    d(a, a) -= 2;
  }
  return d;
}

std::string compartment_name(const std::string& species, std::size_t a) { return species + "_" + std::to_string(a); }

namespace {

Polynomial rename(const Polynomial& p, const std::map<SymbolId, SymbolId>& ids) {
  std::vector<Term> terms;
  terms.reserve(p.size());
  for (const auto& t : p.terms()) {
    Monomial m;
    for (const auto& [id, e] : t.monomial.factors()) {
      auto it = ids.find(id);
      if (it == ids.end()) throw ModelError("symbol without a compartment image");
      m = m * Monomial::variable(it->second, e);
    }
    terms.push_back({m, t.coefficient});
  }
  return Polynomial::from_terms(std::move(terms));
}

}  // namespace

EpsilonGradedSystem build_transport_system(const EpsilonGradedSystem& local, const TransportSpec& spec) {
  const std::size_t n_comp = spec.compartments;
  if (n_comp < 1) throw ModelError("at least one compartment is required");
  if (n_comp > kMaxCompartments) throw ModelError("too many compartments");
  const std::size_t n = local.dimension();
  const SymbolTable& lt = local.symbols;

  // Parameters that are only initial constants are replicated per compartment.
  std::set<SymbolId> iv_constants;
  for (const auto& iv : local.initial_values) {
    for (auto id : iv.base.variables()) iv_constants.insert(id);
  }
  std::set<SymbolId> used;
  for (int g = local.lowest_order; g <= local.highest_order(); ++g) {
    for (const auto& p : local.grade(g)) {
      for (auto id : p.variables()) used.insert(id);
    }
  }
  for (std::size_t k = 0; k < spec.terms.size(); ++k) {
    for (auto id : spec.terms[k].rate.variables()) used.insert(id);
  }

  EpsilonGradedSystem out;
  // compartment -> local id -> new id
  std::vector<std::map<SymbolId, SymbolId>> ids(n_comp);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < n_comp; ++a) {
      const SymbolId id = out.symbols.add(compartment_name(lt.name(local.states[i]), a + 1), SymbolKind::State);
      ids[a][local.states[i]] = id;
      out.states.push_back(id);
    }
  }
  for (SymbolId id = 1; id < lt.size(); ++id) {
    if (lt.kind(id) != SymbolKind::Parameter) continue;
    if (used.count(id)) {
      const SymbolId nid = out.symbols.add(lt.name(id), SymbolKind::Parameter);
      for (auto& m : ids) m[id] = nid;
      if (local.nonnegative.count(id)) out.nonnegative.insert(nid);
    } else if (iv_constants.count(id)) {
      for (std::size_t a = 0; a < n_comp; ++a) {
        const SymbolId nid = out.symbols.add(compartment_name(lt.name(id), a + 1), SymbolKind::Parameter);
        ids[a][id] = nid;
        out.nonnegative.insert(nid);
      }
    }
  }

  out.initial_values.resize(n * n_comp);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t a = 0; a < n_comp; ++a) {
      const auto& iv = local.initial_values[i];
      out.initial_values[i * n_comp + a] = {rename(iv.base, ids[a]), iv.eps_order};
    }
  }

  for (int g = local.lowest_order; g <= local.highest_order(); ++g) {
    const PolyVector h = local.grade(g);
    for (std::size_t i = 0; i < n; ++i) {
      if (h[i].is_zero()) continue;
      for (std::size_t a = 0; a < n_comp; ++a) out.add_term(g, i * n_comp + a, rename(h[i], ids[a]));
    }
  }

  const QMatrix laplacian = neumann_laplacian(n_comp);
  for (const auto& term : spec.terms) {
    const std::size_t target = local.require_index(term.target);
    const std::size_t source = local.require_index(term.source);
    if (term.eps_order < 0) throw ModelError("negative transport order");
    const QMatrix& theta = term.matrix ? *term.matrix : laplacian;
    if (theta.rows() != n_comp || theta.cols() != n_comp) throw ModelError("transport matrix has the wrong size");
    const Polynomial rate = rename(term.rate, ids[0]);
    for (std::size_t a = 0; a < n_comp; ++a) {
      Polynomial flow;
      for (std::size_t b = 0; b < n_comp; ++b) {
        if (theta(a, b) == 0) continue;
        flow += Polynomial::monomial(Monomial::variable(out.states[source * n_comp + b]), theta(a, b));
      }
      out.add_term(term.eps_order, target * n_comp + a, rate * flow);
    }
  }
  out.normalize();
  return out;
}

EpsilonGradedSystem build_transport_system(const ReactionNetwork& net, const TransportSpec& spec) {
  return build_transport_system(compile_network(net), spec);
}

}  // namespace slowfast
