#include "slowfast/model/system.hpp"

#include <algorithm>
#include <numeric>

namespace slowfast {

namespace {

// Makes a kernel vector presentable: denominators cleared, and, when every
// entry is a rational constant, scaled to primitive integers with a positive
// leading entry.
RFVector tidy(RFVector v) {
  Polynomial lcm(1);
  for (const auto& x : v) {
    if (x.is_polynomial()) continue;
    Polynomial d = x.denominator();
    if (!lcm.divide_exact(d)) lcm *= d;
  }
  if (!(lcm == Polynomial(1))) {
    for (auto& x : v) x *= RationalFunction(lcm);
  }
  bool all_constant = std::all_of(v.begin(), v.end(), [](const RationalFunction& x) { return x.is_constant(); });
  if (all_constant) {
    mpz_class den_lcm = 1;
    for (const auto& x : v) {
      mpz_class d = x.numerator().constant_term().get_den();
      mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), d.get_mpz_t());
    }
    mpz_class num_gcd = 0;
    for (const auto& x : v) {
      Rational q = x.numerator().constant_term() * den_lcm;
      mpz_class n = q.get_num();
      mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), n.get_mpz_t());
    }
    if (num_gcd != 0) {
      Rational scale(den_lcm, num_gcd);
      scale.canonicalize();
      for (const auto& x : v) {
        if (x.is_zero()) continue;
        if (x.numerator().constant_term() < 0) scale = -scale;
        break;
      }
      for (auto& x : v) x = RationalFunction(x.numerator().constant_term() * scale);
    }
  }
  return v;
}

}  // namespace

PolyVector EpsilonGradedSystem::grade(int g) const {
  const int k = g - lowest_order;
  if (k < 0 || k >= static_cast<int>(grades.size())) return PolyVector(states.size());
  return grades[static_cast<std::size_t>(k)];
}

void EpsilonGradedSystem::add_term(int g, std::size_t row, const Polynomial& p) {
  if (p.is_zero()) return;
  if (grades.empty()) lowest_order = std::min(g, 0);
  while (g < lowest_order) {
    grades.insert(grades.begin(), PolyVector(states.size()));
    --lowest_order;
  }
  while (g > highest_order()) grades.emplace_back(states.size());
  grades[static_cast<std::size_t>(g - lowest_order)][row] += p;
}

void EpsilonGradedSystem::normalize() {
  for (auto& g : grades) g.resize(states.size());
  auto is_zero = [](const PolyVector& v) {
    return std::all_of(v.begin(), v.end(), [](const Polynomial& p) { return p.is_zero(); });
  };
  while (!grades.empty() && is_zero(grades.back())) grades.pop_back();
  while (lowest_order < 0 && !grades.empty() && is_zero(grades.front())) {
    grades.erase(grades.begin());
    ++lowest_order;
  }
  if (grades.empty()) lowest_order = 0;
  while (lowest_order > 0) {
    grades.insert(grades.begin(), PolyVector(states.size()));
    --lowest_order;
  }
}

void EpsilonGradedSystem::validate() const {
  if (initial_values.size() != states.size()) throw ModelError("initial values do not match the state list");
  for (const auto& g : grades) {
    if (g.size() != states.size()) throw ModelError("grade length differs from the number of states");
    for (const auto& p : g) {
      if (p.depends_on(symbols.epsilon())) throw ModelError("eps occurs inside a grade");
    }
  }
  for (auto s : states) {
    if (symbols.kind(s) != SymbolKind::State) throw ModelError("'" + symbols.name(s) + "' is not a state symbol");
  }
}

std::optional<std::size_t> EpsilonGradedSystem::index_of(SymbolId id) const {
  auto it = std::find(states.begin(), states.end(), id);
  if (it == states.end()) return std::nullopt;
  return static_cast<std::size_t>(it - states.begin());
}

std::size_t EpsilonGradedSystem::require_index(const std::string& name) const {
  auto id = symbols.find(name);
  if (!id) throw ModelError("unknown state '" + name + "'");
  auto idx = index_of(*id);
  if (!idx) throw ModelError("'" + name + "' is not a state of this system");
  return *idx;
}

std::vector<SymbolId> EpsilonGradedSystem::parameters() const { return symbols.of_kind(SymbolKind::Parameter); }

bool EpsilonGradedSystem::is_state(SymbolId id) const { return index_of(id).has_value(); }

PolyVector EpsilonGradedSystem::combined() const {
  if (lowest_order < 0) throw ModelError("combined field of a Laurent system");
  PolyVector out(states.size());
  const Polynomial eps = Polynomial::variable(symbols.epsilon());
  for (int g = lowest_order; g <= highest_order(); ++g) {
    const PolyVector h = grade(g);
    const Polynomial w = eps.pow(static_cast<unsigned>(g));
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += w * h[i];
  }
  return out;
}

bool same_field(const EpsilonGradedSystem& a, const EpsilonGradedSystem& b) {
  if (a.states != b.states) return false;
  const int lo = std::min(a.lowest_order, b.lowest_order);
  const int hi = std::max(a.highest_order(), b.highest_order());
  for (int g = lo; g <= hi; ++g) {
    if (a.grade(g) != b.grade(g)) return false;
  }
  return true;
}

EpsilonGradedSystem make_system(SymbolTable symbols, std::vector<SymbolId> states) {
  EpsilonGradedSystem sys;
  sys.symbols = std::move(symbols);
  sys.states = std::move(states);
  sys.initial_values.resize(sys.states.size());
  return sys;
}

Partition make_partition(const EpsilonGradedSystem& sys, const std::vector<std::size_t>& fast) {
  const std::size_t n = sys.dimension();
  std::vector<bool> is_fast(n, false);
  for (auto i : fast) {
    if (i >= n) throw ModelError("fast index out of range");
    if (is_fast[i]) throw ModelError("fast variable listed twice");
    is_fast[i] = true;
  }
  Partition p;
  for (std::size_t i = 0; i < n; ++i) (is_fast[i] ? p.fast : p.slow).push_back(i);
  if (p.fast.empty()) throw ModelError("partition needs at least one fast variable");
  if (p.slow.empty()) throw ModelError("partition needs at least one slow variable");
  return p;
}

Partition make_partition(const EpsilonGradedSystem& sys, const std::vector<std::string>& fast_names) {
  std::vector<std::size_t> idx;
  for (const auto& n : fast_names) idx.push_back(sys.require_index(n));
  return make_partition(sys, idx);
}

std::vector<SymbolId> fast_symbols(const EpsilonGradedSystem& sys, const Partition& part) {
  std::vector<SymbolId> out;
  for (auto i : part.fast) out.push_back(sys.states[i]);
  return out;
}

std::vector<SymbolId> slow_symbols(const EpsilonGradedSystem& sys, const Partition& part) {
  std::vector<SymbolId> out;
  for (auto i : part.slow) out.push_back(sys.states[i]);
  return out;
}

LtcVerdict check_ltc(const EpsilonGradedSystem& sys, const Partition& part) {
  Assignment zero;
  for (auto i : part.fast) zero[sys.states[i]] = 0;
  const PolyVector h0 = sys.grade(0);
  LtcVerdict v;
  for (auto i : part.fast) {
    Polynomial r = h0[i].evaluate(zero);
    if (!r.is_zero()) {
      v.kind = LtcKind::Inconsistent;
      v.witness_row = i;
      v.witness = std::move(r);
      return v;
    }
  }
  for (auto i : part.slow) {
    Polynomial r = h0[i].evaluate(zero);
    if (!r.is_zero()) {
      v.kind = LtcKind::ConsistentOnly;
      v.witness_row = i;
      v.witness = std::move(r);
      return v;
    }
  }
  return v;
}

std::string to_string(LtcKind kind) {
  switch (kind) {
    case LtcKind::FullLtc:
      return "fullLTC";
    case LtcKind::ConsistentOnly:
      return "consistentOnly";
    case LtcKind::Inconsistent:
      return "inconsistent";
  }
  return "?";
}

ScaledSystem apply_scaling(const EpsilonGradedSystem& sys, const Partition& part, bool assume_iv_consistent) {
  std::vector<bool> is_fast(sys.dimension(), false);
  for (auto i : part.fast) is_fast[i] = true;
  std::set<SymbolId> fast_ids;
  for (auto i : part.fast) fast_ids.insert(sys.states[i]);

  ScaledSystem out;
  out.partition = part;
  out.system = sys;
  out.system.grades.clear();
  out.system.lowest_order = 0;
  for (int g = sys.lowest_order; g <= sys.highest_order(); ++g) {
    const PolyVector h = sys.grade(g);
    for (std::size_t i = 0; i < h.size(); ++i) {
      // y = eps y* multiplies a term by eps^(y-degree); fast rows are divided by eps.
      std::map<int, std::vector<Term>> by_order;
      for (const auto& t : h[i].terms()) {
        int k = 0;
        for (const auto& [id, e] : t.monomial.factors()) {
          if (fast_ids.count(id)) k += static_cast<int>(e);
        }
        by_order[g + k - (is_fast[i] ? 1 : 0)].push_back(t);
      }
      for (auto& [order, terms] : by_order) out.system.add_term(order, i, Polynomial::from_terms(std::move(terms)));
    }
  }
  out.system.normalize();
  out.laurent_flag = std::min(out.system.lowest_order, 0);

  out.iv_consistent = true;
  for (auto i : part.fast) {
    auto& iv = out.system.initial_values[i];
    if (iv.base.is_zero() || assume_iv_consistent) continue;
    iv.eps_order -= 1;
    if (iv.eps_order < 0) out.iv_consistent = false;
  }
  return out;
}

EpsilonGradedSystem time_rescale(const EpsilonGradedSystem& sys, TimeDirection direction) {
  EpsilonGradedSystem out = sys;
  out.lowest_order += direction == TimeDirection::ToSlow ? -1 : 1;
  out.normalize();
  return out;
}

EpsilonGradedSystem epsilon_grade(const EpsilonGradedSystem& sys, const Assignment& pivot,
                                  const std::map<SymbolId, Polynomial>& direction) {
  const SymbolId eps = sys.symbols.epsilon();
  Bindings bindings;
  for (const auto& [id, value] : pivot) bindings[id] = RationalFunction(Polynomial(value));
  for (const auto& [id, dir] : direction) {
    Polynomial base = pivot.count(id) ? Polynomial(pivot.at(id)) : Polynomial();
    bindings[id] = RationalFunction(base + Polynomial::variable(eps) * dir);
  }
  EpsilonGradedSystem out = sys;
  out.grades.clear();
  out.lowest_order = 0;
  for (int g = sys.lowest_order; g <= sys.highest_order(); ++g) {
    const PolyVector h = sys.grade(g);
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (h[i].is_zero()) continue;
      const Polynomial expanded = substitute(h[i], bindings).as_polynomial();
      for (const auto& [k, c] : expanded.coefficients_in(eps)) out.add_term(g + static_cast<int>(k), i, c);
    }
  }
  out.normalize();
  return out;
}

EpsilonGradedSystem grade_parameters(const EpsilonGradedSystem& sys, const std::map<SymbolId, int>& orders) {
  const SymbolId eps = sys.symbols.epsilon();
  Bindings bindings;
  for (const auto& [id, order] : orders) {
    if (order < 0) throw ModelError("negative parameter order");
    if (order == 0) continue;
    bindings[id] = RationalFunction(Polynomial::variable(eps).pow(static_cast<unsigned>(order)) * Polynomial::variable(id));
  }
  EpsilonGradedSystem out = sys;
  if (bindings.empty()) return out;
  out.grades.clear();
  out.lowest_order = 0;
  for (int g = sys.lowest_order; g <= sys.highest_order(); ++g) {
    const PolyVector h = sys.grade(g);
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (h[i].is_zero()) continue;
      const Polynomial expanded = substitute(h[i], bindings).as_polynomial();
      for (const auto& [k, c] : expanded.coefficients_in(eps)) out.add_term(g + static_cast<int>(k), i, c);
    }
  }
  out.normalize();
  return out;
}

std::vector<RFVector> linear_first_integrals(const EpsilonGradedSystem& sys, bool fast_only) {
  const auto in_states = [&sys](SymbolId id) { return sys.is_state(id); };
  // Column key: (grade, monomial in the states).
  std::vector<std::pair<int, Monomial>> keys;
  std::vector<std::map<std::size_t, Polynomial>> columns;
  const int hi = fast_only ? std::min(0, sys.highest_order()) : sys.highest_order();
  for (int g = sys.lowest_order; g <= hi; ++g) {
    if (fast_only && g != 0) continue;
    const PolyVector h = sys.grade(g);
    for (std::size_t i = 0; i < h.size(); ++i) {
      for (auto& [m, coeff] : h[i].split(in_states)) {
        std::size_t col = keys.size();
        for (std::size_t k = 0; k < keys.size(); ++k) {
          if (keys[k].first == g && keys[k].second == m) {
            col = k;
            break;
          }
        }
        if (col == keys.size()) {
          keys.emplace_back(g, m);
          columns.emplace_back();
        }
        columns[col][i] += coeff;
      }
    }
  }
  const std::size_t n = sys.dimension();
  RFMatrix at(columns.size(), n, RationalFunction());
  for (std::size_t c = 0; c < columns.size(); ++c)
    for (const auto& [i, p] : columns[c]) at(c, i) = RationalFunction(p);
  if (columns.empty()) {
    std::vector<RFVector> basis;
    for (std::size_t i = 0; i < n; ++i) {
      RFVector e(n);
      e[i] = RationalFunction(1);
      basis.push_back(std::move(e));
    }
    return basis;
  }
  std::vector<RFVector> basis;
  for (auto& v : nullspace(at)) basis.push_back(tidy(std::move(v)));
  return basis;
}

EpsilonGradedSystem eliminate_state(const EpsilonGradedSystem& sys, SymbolId state, const RFVector& w,
                                    const std::string& constant, int constant_order) {
  const auto idx = sys.index_of(state);
  if (!idx) throw ModelError("cannot eliminate a non-state symbol");
  if (w.size() != sys.dimension()) throw ModelError("first integral has the wrong length");
  if (!w[*idx].is_constant() || w[*idx].is_zero()) {
    throw ModelError("first integral must have a nonzero constant coefficient on '" + sys.symbols.name(state) + "'");
  }
  for (const auto& x : w) {
    if (!x.is_polynomial()) throw ModelError("first integral with rational coefficients cannot be eliminated");
  }
  if (constant_order < 0) throw ModelError("negative order for the integral constant");

  EpsilonGradedSystem out;
  out.symbols = sys.symbols;
  const SymbolId c = out.symbols.intern(constant, SymbolKind::Parameter);
  const SymbolId eps = out.symbols.epsilon();
  const Rational lead = w[*idx].numerator().constant_term();
  Polynomial value = Polynomial::variable(eps).pow(static_cast<unsigned>(constant_order)) * Polynomial::variable(c);
  for (std::size_t j = 0; j < sys.dimension(); ++j) {
    if (j == *idx) continue;
    value -= w[j].numerator() * Polynomial::variable(sys.states[j]);
  }
  value = value.scaled(1 / lead);
  Bindings bindings{{state, RationalFunction(value)}};

  for (std::size_t j = 0; j < sys.dimension(); ++j) {
    if (j == *idx) continue;
    out.states.push_back(sys.states[j]);
    out.initial_values.push_back(sys.initial_values[j]);
  }
  out.nonnegative = sys.nonnegative;
  out.nonnegative.insert(c);
  for (int g = sys.lowest_order; g <= sys.highest_order(); ++g) {
    const PolyVector h = sys.grade(g);
    std::size_t row = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (i == *idx) continue;
      if (!h[i].is_zero()) {
        const Polynomial expanded = substitute(h[i], bindings).as_polynomial();
        for (const auto& [k, coeff] : expanded.coefficients_in(eps)) out.add_term(g + static_cast<int>(k), row, coeff);
      }
      ++row;
    }
  }
  out.normalize();
  return out;
}

EpsilonGradedSystem eliminate_state(const EpsilonGradedSystem& sys, SymbolId state) {
  const auto idx = sys.index_of(state);
  if (!idx) throw ModelError("cannot eliminate a non-state symbol");
  for (const auto& w : linear_first_integrals(sys)) {
    if (!w[*idx].is_constant() || w[*idx].is_zero()) continue;
    if (!std::all_of(w.begin(), w.end(), [](const RationalFunction& x) { return x.is_constant(); })) continue;
    // The integral's value is w . z0; name it after the eliminated state's
    // initial constant when that is the only contribution.
    const auto& iv = sys.initial_values[*idx];
    bool only_this = true;
    int order = iv.eps_order;
    bool have_order = !iv.base.is_zero();
    for (std::size_t j = 0; j < w.size(); ++j) {
      if (j == *idx || w[j].is_zero() || sys.initial_values[j].base.is_zero()) continue;
      only_this = false;
      order = have_order ? std::min(order, sys.initial_values[j].eps_order) : sys.initial_values[j].eps_order;
      have_order = true;
    }
    std::string name = sys.symbols.name(state) + "_tot";
    if (only_this && iv.base.size() == 1 && iv.base.variables().size() == 1 &&
        iv.base.leading_term().coefficient == 1 && iv.base.total_degree() == 1) {
      name = sys.symbols.name(*iv.base.variables().begin());
    }
    RFVector scaled = w;
    const Rational lead = w[*idx].numerator().constant_term();
    for (auto& x : scaled) x = x / RationalFunction(lead);
    return eliminate_state(sys, state, scaled, name, have_order ? std::max(order, 0) : 0);
  }
  throw ModelError("no linear first integral allows eliminating '" + sys.symbols.name(state) + "'");
}

}  // namespace slowfast
