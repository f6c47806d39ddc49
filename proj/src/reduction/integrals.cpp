#include <Eigen/Dense>
#include <cmath>

#include "slowfast/reduction/reduction.hpp"
#include "slowfast/symbolic/numeric.hpp"

namespace slowfast {

namespace {

// Lowest eps power of p and its coefficient.
std::pair<int, Polynomial> lowest_in(const Polynomial& p, SymbolId eps) {
  const auto coeffs = p.coefficients_in(eps);
  if (coeffs.empty()) return {0, Polynomial()};
  return {static_cast<int>(coeffs.begin()->first), coeffs.begin()->second};
}

bool free_of_states(const RationalFunction& f, const std::vector<SymbolId>& states) {
  for (auto id : states)
    if (f.depends_on(id)) return false;
  return true;
}

InitialValueResult newton(const RFVector& equations, const std::vector<SymbolId>& states, const Bindings& z0,
                          const Assignment& parameters) {
  const std::size_t n = states.size();
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = z0.at(states[i]).value(parameters).get_d();
  const CompiledField f(equations, states, parameters);
  std::vector<CompiledField> grad;
  for (auto id : states) {
    RFVector d;
    for (const auto& e : equations) d.push_back(e.derivative(id));
    grad.emplace_back(d, states, parameters);
  }
  const auto m = static_cast<Eigen::Index>(equations.size());
  InitialValueResult out;
  out.method = "newton";
  for (int it = 0; it < kNewtonMaxIterations; ++it) {
    const std::vector<double> r = f(z);
    double norm = 0;
    for (double v : r) norm = std::max(norm, std::abs(v));
    out.iterations = it;
    if (norm < kNewtonTolerance) {
      for (std::size_t i = 0; i < n; ++i) out.point[states[i]] = RationalFunction(to_rational(z[i]));
      return out;
    }
    Eigen::MatrixXd jac(m, static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) {
      const std::vector<double> col = grad[j](z);
      for (Eigen::Index i = 0; i < m; ++i) jac(i, static_cast<Eigen::Index>(j)) = col[static_cast<std::size_t>(i)];
    }
    Eigen::VectorXd rhs(m);
    for (Eigen::Index i = 0; i < m; ++i) rhs(i) = -r[static_cast<std::size_t>(i)];
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(jac);
    if (qr.rank() < static_cast<Eigen::Index>(n)) throw InitialValueError("Newton iteration met a singular Jacobian");
    const Eigen::VectorXd step = qr.solve(rhs);
    for (std::size_t i = 0; i < n; ++i) z[i] += step(static_cast<Eigen::Index>(i));
  }
  throw InitialValueError("Newton iteration did not converge in " + std::to_string(kNewtonMaxIterations) +
                          " iterations");
}

}  // namespace

TransportedIntegral transform_first_integral(const RationalFunction& phi, const EpsilonGradedSystem& sys,
                                             const Partition& part, const Bindings& manifold) {
  if (sys.lowest_order < 0) throw std::invalid_argument("first integrals need a system without negative eps powers");
  const PolyVector h = sys.combined();
  RationalFunction lie;
  for (std::size_t i = 0; i < sys.dimension(); ++i) {
    if (h[i].is_zero()) continue;
    lie += phi.derivative(sys.states[i]) * RationalFunction(h[i]);
  }
  if (!lie.is_zero()) {
    throw std::invalid_argument("not a first integral; Lie derivative " + lie.to_string(sys.symbols));
  }
  const SymbolId eps = sys.symbols.epsilon();
  Bindings scale;
  for (auto id : fast_symbols(sys, part))
    scale[id] = RationalFunction(Polynomial::variable(eps) * Polynomial::variable(id));
  const RationalFunction scaled = phi.substitute(scale);
  TransportedIntegral out;
  if (scaled.is_zero()) return out;
  const auto [kn, num] = lowest_in(scaled.numerator(), eps);
  const auto [kd, den] = lowest_in(scaled.denominator(), eps);
  out.value = RationalFunction::quotient(num, den);
  out.order = kn - kd;
  const RationalFunction on_manifold = manifold.empty() ? out.value : out.value.substitute(manifold);
  out.constant_on_manifold = free_of_states(on_manifold, sys.states);
  return out;
}

RFVector fast_integrals_approx(const RFMatrix& f0, const RFMatrix& g0, const std::vector<SymbolId>& x,
                               const std::vector<SymbolId>& y) {
  if (f0.rows() != x.size() || f0.cols() != y.size() || g0.rows() != y.size() || !g0.is_square()) {
    throw std::invalid_argument("F0 must be r x s and G0 s x s");
  }
  RFVector yv;
  for (auto id : y) yv.push_back(RationalFunction::variable(id));
  const RFVector v = solve_or_throw(g0, yv);
  const RFVector fv = f0 * v;
  RFVector out;
  for (std::size_t k = 0; k < x.size(); ++k) out.push_back(RationalFunction::variable(x[k]) - fv[k]);
  return out;
}

InitialValueResult reduced_initial_value(const RFVector& manifold, const RFVector& integrals,
                                         const std::vector<SymbolId>& states, const Bindings& z0,
                                         const Assignment& parameters) {
  RFVector equations = manifold;
  for (const auto& psi : integrals) equations.push_back(psi - psi.substitute(z0));
  if (equations.size() < states.size()) {
    throw InitialValueError("manifold equations and first integrals do not determine a point (" +
                            std::to_string(equations.size()) + " equations for " + std::to_string(states.size()) +
                            " states)");
  }
  const std::vector<SymbolId> preference(states.rbegin(), states.rend());
  SequentialSolution sol = solve_sequentially(equations, preference);
  if (sol.leftover.empty() && sol.solved.size() == states.size()) {
    InitialValueResult out;
    out.method = "exact";
    out.point = std::move(sol.solved);
    return out;
  }
  if (!sol.leftover.empty() && sol.solved.size() == states.size()) {
    throw InitialValueError("the level sets do not meet the manifold: an equation is left inconsistent");
  }
  // Newton needs every symbol numeric.
  for (const auto& [id, v] : z0) {
    for (auto s : v.variables())
      if (!parameters.count(s)) throw InitialValueError("exact solve incomplete and no numeric values for Newton");
  }
  return newton(equations, states, z0, parameters);
}

InitialValueResult reduced_initial_value(const ReducedSystem& reduced, const ScaledSystem& scaled,
                                         const Assignment& parameters) {
  const Bindings z0 = scaled_initial_point(scaled);
  const auto& states = scaled.system.states;
  if (reduced.kind == "standard") {
    // The reduced initial value is x0 up to O(eps).
    InitialValueResult out;
    out.method = "exact";
    Bindings x0;
    for (auto i : scaled.partition.slow) x0[states[i]] = z0.at(states[i]);
    out.point = x0;
    for (const auto& [id, f] : reduced.eliminated.solved) out.point[id] = f.substitute(x0);
    return out;
  }
  RFVector integrals;
  for (const auto& w : linear_first_integrals(scaled.system, true)) {
    RationalFunction psi;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (!w[i].is_zero()) psi += w[i] * RationalFunction::variable(states[i]);
    integrals.push_back(psi);
  }
  return reduced_initial_value(reduced.manifold, integrals, states, z0, parameters);
}

}  // namespace slowfast
