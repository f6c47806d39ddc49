#include <algorithm>
#include <numeric>

#include "slowfast/reduction/reduction.hpp"

namespace slowfast {

namespace {

// Unknown count above which the polynomial ansatz for a row of P is skipped.
constexpr std::size_t kMaxAnsatzUnknowns = 400;

std::uint32_t state_degree(const Polynomial& p, const std::set<SymbolId>& states) {
  std::uint32_t d = 0;
  for (const auto& t : p.terms()) {
    std::uint32_t k = 0;
    for (const auto& [id, e] : t.monomial.factors())
      if (states.count(id)) k += e;
    d = std::max(d, k);
  }
  return d;
}

// Monomials in `vars` of total degree <= d.
std::vector<Monomial> monomials_up_to(const std::vector<SymbolId>& vars, std::uint32_t d) {
  std::vector<Monomial> out{Monomial()};
  std::vector<Monomial> frontier{Monomial()};
  for (std::uint32_t k = 1; k <= d; ++k) {
    std::vector<Monomial> next;
    for (const auto& m : frontier) {
      // Extend only by variables at or after the last factor to avoid repeats.
      const SymbolId last = m.is_one() ? 0 : m.factors().back().first;
      for (auto v : vars) {
        if (!m.is_one() && v < last) continue;
        next.push_back(m * Monomial::variable(v));
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  return out;
}

// Solves sum_k c_k * basis_k = target for coefficients c free of the states,
// by matching coefficients of state monomials.
std::optional<RFVector> match_coefficients(const std::vector<Polynomial>& basis, const Polynomial& target,
                                           const std::set<SymbolId>& states) {
  const auto in_states = [&states](SymbolId id) { return states.count(id) > 0; };
  std::map<Monomial, std::map<std::size_t, Polynomial>, MonomialLess> rows;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    for (auto& [m, c] : basis[k].split(in_states)) rows[m][k] = c;
  }
  std::map<Monomial, Polynomial, MonomialLess> rhs;
  for (auto& [m, c] : target.split(in_states)) {
    if (!rows.count(m)) return std::nullopt;
    rhs[m] = c;
  }
  RFMatrix a(rows.size(), basis.size(), RationalFunction());
  RFVector b(rows.size());
  std::size_t i = 0;
  for (const auto& [m, entries] : rows) {
    for (const auto& [k, c] : entries) a(i, k) = RationalFunction(c);
    if (auto it = rhs.find(m); it != rhs.end()) b[i] = RationalFunction(it->second);
    ++i;
  }
  auto solved = linear_solve(a, b);
  if (std::holds_alternative<NoSolution>(solved)) return std::nullopt;
  return std::get<RFVector>(std::move(solved));
}

std::size_t rank_at(const RFMatrix& m, const Assignment& sample) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  return rank(evaluate(m, sample));
}

}  // namespace

Assignment generic_sample(const SymbolTable& symbols, std::mt19937_64& rng) {
  std::vector<SymbolId> vars;
  for (SymbolId id = 0; id < symbols.size(); ++id)
    if (symbols.kind(id) != SymbolKind::Epsilon) vars.push_back(id);
  return random_positive_point(vars, rng);
}

Decomposition supplied_decomposition(const PolyVector& h0, const std::vector<SymbolId>& vars, RFMatrix p, RFVector mu,
                                     const Assignment& sample, std::string method) {
  const std::size_t n = vars.size();
  if (h0.size() != n) throw std::invalid_argument("h0 and the state list differ in length");
  if (p.rows() != n || p.cols() != mu.size()) throw DecompositionError("P must be n x r with r = length of mu");
  Decomposition dec;
  dec.vars = vars;
  dec.p = std::move(p);
  dec.mu = std::move(mu);
  dec.method = std::move(method);
  dec.sample = sample;
  const RFVector prod = dec.p * dec.mu;
  for (std::size_t i = 0; i < n; ++i) {
    if (prod[i] != RationalFunction(h0[i])) {
      throw DecompositionError("P mu differs from h0 in entry " + std::to_string(i));
    }
  }
  const std::size_t r = dec.mu.size();
  dec.dmu = r == 0 ? RFMatrix(0, n) : jacobian(dec.mu, vars);
  dec.dmu_p = dec.dmu * dec.p;
  if (rank_at(dec.p, sample) != r) throw DecompositionError("P does not have full column rank at the sample point");
  if (rank_at(dec.dmu, sample) != r) throw DecompositionError("D mu does not have full row rank at the sample point");
  return dec;
}

Decomposition find_decomposition(const PolyVector& h0, const std::vector<SymbolId>& vars, const Assignment& sample) {
  const std::size_t n = vars.size();
  if (h0.size() != n) throw std::invalid_argument("h0 and the state list differ in length");
  const QMatrix jac = evaluate(jacobian(h0, vars), sample);

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i)
    if (!h0[i].is_zero()) order.push_back(i);
  std::stable_sort(order.begin(), order.end(),
                   [&h0](std::size_t a, std::size_t b) { return h0[a].size() < h0[b].size(); });
  std::vector<std::size_t> chosen;
  std::size_t current = 0;
  for (auto i : order) {
    std::vector<std::size_t> trial = chosen;
    trial.push_back(i);
    QMatrix rows(trial.size(), n);
    for (std::size_t k = 0; k < trial.size(); ++k)
      for (std::size_t j = 0; j < n; ++j) rows(k, j) = jac(trial[k], j);
    const std::size_t rk = rank(rows);
    if (rk > current) {
      chosen = std::move(trial);
      current = rk;
    }
  }
  if (current == n && n > 0) {
    throw DecompositionError("D h0 has full rank at the sample point; there is no critical manifold");
  }
  std::sort(chosen.begin(), chosen.end());
  const std::size_t r = chosen.size();

  std::set<SymbolId> states(vars.begin(), vars.end());
  std::vector<Polynomial> mu_poly;
  for (auto i : chosen) mu_poly.push_back(h0[i]);

  RFMatrix p(n, r, RationalFunction());
  std::string method = "constant";
  for (std::size_t i = 0; i < n; ++i) {
    if (h0[i].is_zero()) continue;
    if (auto pos = std::find(chosen.begin(), chosen.end(), i); pos != chosen.end()) {
      p(i, static_cast<std::size_t>(pos - chosen.begin())) = RationalFunction(1);
      continue;
    }
    if (auto c = match_coefficients(mu_poly, h0[i], states)) {
      for (std::size_t k = 0; k < r; ++k) p(i, k) = (*c)[k];
      continue;
    }
    // Polynomial coefficients: ansatz P_ik = sum_m a_{k,m} m over state monomials.
    std::uint32_t min_mu = std::numeric_limits<std::uint32_t>::max();
    for (const auto& m : mu_poly) min_mu = std::min(min_mu, state_degree(m, states));
    const std::uint32_t d = state_degree(h0[i], states);
    bool found = false;
    if (d > min_mu) {
      std::vector<SymbolId> used;
      for (auto v : vars) {
        bool occurs = false;
        for (const auto& h : h0) occurs = occurs || h.depends_on(v);
        if (occurs) used.push_back(v);
      }
      const auto basis_monomials = monomials_up_to(used, d - min_mu);
      if (basis_monomials.size() * r <= kMaxAnsatzUnknowns) {
        std::vector<Polynomial> basis;
        for (std::size_t k = 0; k < r; ++k)
          for (const auto& m : basis_monomials) basis.push_back(Polynomial::monomial(m) * mu_poly[k]);
        if (auto c = match_coefficients(basis, h0[i], states)) {
          std::size_t idx = 0;
          for (std::size_t k = 0; k < r; ++k) {
            RationalFunction entry;
            for (const auto& m : basis_monomials) {
              if (!(*c)[idx].is_zero()) entry += (*c)[idx] * RationalFunction(Polynomial::monomial(m));
              ++idx;
            }
            p(i, k) = entry;
          }
          method = "polynomial";
          found = true;
        }
      }
    }
    if (!found) {
      throw DecompositionError("entry " + std::to_string(i) +
                               " of h0 is not a constant or polynomial combination of the chosen mu; "
                               "supply (P, mu) in the model file");
    }
  }
  RFVector mu;
  for (const auto& m : mu_poly) mu.emplace_back(m);
  Decomposition dec = supplied_decomposition(h0, vars, std::move(p), std::move(mu), sample, method);
  dec.mu_rows = chosen;
  return dec;
}

Decomposition standard_decomposition(const EpsilonGradedSystem& sys, const Partition& part, const Assignment& sample) {
  const LtcVerdict verdict = check_ltc(sys, part);
  if (verdict.kind != LtcKind::FullLtc) {
    throw ReductionRefused("the partition is not Tikhonov consistent (" + to_string(verdict.kind) + ")");
  }
  const PolyVector h0 = sys.grade(0);
  const auto y = fast_symbols(sys, part);
  const RFMatrix factor = hadamard_factor(h0, y);  // n x s, h0 = factor * y
  RFVector mu;
  for (auto id : y) mu.push_back(RationalFunction::variable(id));
  return supplied_decomposition(h0, sys.states, factor, std::move(mu), sample, "standard");
}

RFMatrix projection(const Decomposition& dec) {
  const std::size_t n = dec.vars.size();
  RFMatrix q = RFMatrix::identity(n);
  if (dec.rank() == 0) return q;
  auto x = linear_solve(dec.dmu_p, dec.dmu);
  if (!x) throw ReductionRefused("D mu P is singular; no projection exists");
  return q - dec.p * *x;
}

RFVector reduce_field(const Decomposition& dec, const RFVector& h1) {
  if (h1.size() != dec.vars.size()) throw std::invalid_argument("h1 and the decomposition differ in length");
  if (dec.rank() == 0) return h1;
  auto gamma = linear_solve(dec.dmu_p, dec.dmu * h1);
  if (std::holds_alternative<NoSolution>(gamma)) throw ReductionRefused("D mu P is singular; the reduction is refused");
  const RFVector pg = dec.p * std::get<RFVector>(gamma);
  RFVector q(h1.size());
  for (std::size_t i = 0; i < h1.size(); ++i) q[i] = h1[i] - pg[i];
  return q;
}

FirstOrderManifold slow_manifold_first_order(const Decomposition& dec, const RFVector& h1) {
  FirstOrderManifold out;
  out.order0 = dec.mu;
  if (dec.rank() == 0) return out;
  auto psi = linear_solve(dec.dmu_p, dec.dmu * h1);
  if (std::holds_alternative<NoSolution>(psi)) throw ReductionRefused("D mu P is singular");
  out.order1 = std::get<RFVector>(std::move(psi));
  return out;
}

std::pair<RFVector, RFVector> invariance_residual(const Decomposition& dec, const RFVector& h0, const RFVector& h1) {
  const FirstOrderManifold phi = slow_manifold_first_order(dec, h1);
  const std::size_t r = dec.rank();
  if (r == 0) return {};
  const RFMatrix dpsi = jacobian(phi.order1, dec.vars);
  const RFMatrix l1 = dpsi * dec.p;
  const RFVector a0 = dec.dmu * h0;
  const RFVector b0 = dec.dmu_p * dec.mu;
  const RFVector a1 = dec.dmu * h1;
  const RFVector a2 = dpsi * h0;
  const RFVector b1 = dec.dmu_p * phi.order1;
  const RFVector b2 = l1 * dec.mu;
  RFVector e0(r), e1(r);
  for (std::size_t k = 0; k < r; ++k) {
    e0[k] = a0[k] - b0[k];
    e1[k] = a1[k] + a2[k] - b1[k] - b2[k];
  }
  return {e0, e1};
}

}  // namespace slowfast
