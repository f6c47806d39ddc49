#include <algorithm>

#include "slowfast/reduction/reduction.hpp"

namespace slowfast {

namespace {

bool linear_in(const RationalFunction& f, SymbolId v) {
  if (f.numerator().degree_in(v) != 1) return false;
  for (const auto& factor : f.denominator_factors())
    if (factor.base.depends_on(v)) return false;
  return true;
}

// Root of f = 0 in v, for f linear in v.
RationalFunction solve_for(const RationalFunction& f, SymbolId v) {
  const auto coeffs = f.numerator().coefficients_in(v);
  const Polynomial a = coeffs.at(1);
  const Polynomial b = coeffs.count(0) ? coeffs.at(0) : Polynomial();
  return RationalFunction::quotient(-b, a);
}

void bind(Bindings& solved, SymbolId v, RationalFunction value) {
  const Bindings one{{v, value}};
  for (auto& [id, expr] : solved)
    if (expr.depends_on(v)) expr = expr.substitute(one);
  solved[v] = std::move(value);
}

// Fast states with a nonzero grade-0 row come first, each group in reverse
// order, so that the trailing variables are eliminated first.
std::vector<SymbolId> elimination_preference(const EpsilonGradedSystem& sys, const Partition& part) {
  const PolyVector h0 = sys.grade(0);
  std::vector<SymbolId> moving, resting;
  for (auto it = part.fast.rbegin(); it != part.fast.rend(); ++it) {
    (h0[*it].is_zero() ? resting : moving).push_back(sys.states[*it]);
  }
  moving.insert(moving.end(), resting.begin(), resting.end());
  return moving;
}

EliminatedForm eliminate(const ReducedSystem& red, const ScaledSystem& scaled) {
  const EpsilonGradedSystem& sys = scaled.system;
  const auto preference = elimination_preference(sys, scaled.partition);
  SequentialSolution sol = solve_sequentially(red.manifold, preference);
  EliminatedForm out;
  out.complete = sol.leftover.empty();
  Bindings solved = std::move(sol.solved);

  // Conservation laws that involve an eliminated state close the system.
  const Bindings z0 = scaled_initial_point(scaled);
  for (const auto& w : linear_first_integrals(sys)) {
    bool touches = false;
    RationalFunction law, value;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i].is_zero()) continue;
      const SymbolId z = sys.states[i];
      touches = touches || solved.count(z) > 0;
      law += w[i] * RationalFunction::variable(z);
      value += w[i] * z0.at(z);
    }
    if (!touches) continue;
    const RationalFunction relation = law - value;
    const RationalFunction reduced = relation.substitute(solved);
    if (reduced.is_zero()) continue;
    for (auto v : preference) {
      if (solved.count(v) || !linear_in(reduced, v)) continue;
      bind(solved, v, solve_for(reduced, v));
      out.integrals.push_back(relation);
      break;
    }
  }
  for (std::size_t i = 0; i < red.states.size(); ++i) {
    const SymbolId z = red.states[i];
    if (solved.count(z)) continue;
    out.states.push_back(z);
    out.field.push_back(red.field[i].substitute(solved));
  }
  out.solved = std::move(solved);
  return out;
}

}  // namespace

SequentialSolution solve_sequentially(const RFVector& equations, const std::vector<SymbolId>& preference) {
  SequentialSolution out;
  std::vector<RationalFunction> pending(equations.begin(), equations.end());
  for (;;) {
    std::vector<RationalFunction> live;
    for (auto& e : pending) {
      RationalFunction r = out.solved.empty() ? e : e.substitute(out.solved);
      if (!r.is_zero()) live.push_back(std::move(r));
    }
    pending = std::move(live);
    // The shortest equation with a linearly occurring unknown goes first.
    std::size_t best = pending.size();
    SymbolId var = 0;
    for (std::size_t k = 0; k < pending.size(); ++k) {
      if (best < pending.size() && pending[k].numerator().size() >= pending[best].numerator().size()) continue;
      for (auto v : preference) {
        if (out.solved.count(v) || !linear_in(pending[k], v)) continue;
        best = k;
        var = v;
        break;
      }
    }
    if (best == pending.size()) break;
    bind(out.solved, var, solve_for(pending[best], var));
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best));
  }
  out.leftover = std::move(pending);
  return out;
}

Bindings scaled_initial_point(const ScaledSystem& scaled) {
  Bindings z0;
  const auto& sys = scaled.system;
  for (std::size_t i = 0; i < sys.dimension(); ++i) {
    const auto& iv = sys.initial_values.at(i);
    // Positive orders vanish in the limit; negative orders are inconsistent
    // and keep their base as a placeholder.
    z0[sys.states[i]] = iv.eps_order > 0 ? RationalFunction() : RationalFunction(iv.base);
  }
  return z0;
}

ReducedSystem reduce(const ScaledSystem& scaled, const Decomposition& dec) {
  const EpsilonGradedSystem& sys = scaled.system;
  if (scaled.laurent_flag < 0) throw ReductionRefused("the scaling is not locally consistent");
  if (dec.vars != sys.states) throw std::invalid_argument("decomposition and system use different states");
  const std::size_t r = dec.rank();
  if (r > 0 && rank(evaluate(dec.dmu_p, dec.sample)) != r) {
    throw ReductionRefused("D mu P is singular at the sample point; the reduction is refused");
  }
  ReducedSystem red;
  red.kind = dec.nonstandard ? "nonstandard" : "general";
  red.states = sys.states;
  red.field = reduce_field(dec, to_rf(sys.grade(1)));
  red.manifold = dec.mu;
  red.manifold_dimension = sys.dimension() - r;
  red.stability_matrix = dec.dmu_p;
  red.decomposition = dec;
  red.eliminated = eliminate(red, scaled);
  return red;
}

ReducedSystem standard_reduce(const EpsilonGradedSystem& sys, const Partition& part) {
  const LtcVerdict verdict = check_ltc(sys, part);
  if (verdict.kind != LtcKind::FullLtc) {
    throw ReductionRefused("the partition is not Tikhonov consistent (" + to_string(verdict.kind) + ")");
  }
  if (sys.lowest_order < 0) throw ReductionRefused("the system has negative eps powers");
  const auto x = slow_symbols(sys, part);
  const auto y = fast_symbols(sys, part);
  const PolyVector h0 = sys.grade(0);
  const PolyVector h1 = sys.grade(1);
  PolyVector f0, g0;
  RFVector f1, g1;
  Bindings at_zero;
  for (auto id : y) at_zero[id] = RationalFunction();
  for (auto i : part.slow) {
    f0.push_back(h0[i]);
    f1.push_back(substitute(h1[i], at_zero));
  }
  for (auto i : part.fast) {
    g0.push_back(h0[i]);
    g1.push_back(substitute(h1[i], at_zero));
  }
  const RFMatrix big_f0 = substitute(hadamard_factor(f0, y), at_zero);
  const RFMatrix big_g0 = substitute(hadamard_factor(g0, y), at_zero);
  if (determinant(big_g0).is_zero()) {
    throw ReductionRefused("G0(x,0) is singular; use the nonstandard reduction");
  }
  const RFVector v = solve_or_throw(big_g0, g1);
  const RFVector fv = big_f0 * v;

  ReducedSystem red;
  red.kind = "standard";
  red.states = x;
  for (std::size_t k = 0; k < x.size(); ++k) red.field.push_back(f1[k] - fv[k]);
  for (std::size_t j = 0; j < y.size(); ++j) red.manifold.push_back(RationalFunction::variable(y[j]) + v[j]);
  red.manifold_dimension = x.size();
  red.stability_matrix = big_g0;
  std::mt19937_64 rng(1);
  try {
    red.decomposition = standard_decomposition(sys, part, generic_sample(sys.symbols, rng));
  } catch (const DecompositionError&) {
    // The reduced field does not depend on it; certificates use G0(x,0).
  }
  red.eliminated.states = x;
  red.eliminated.field = red.field;
  for (std::size_t j = 0; j < y.size(); ++j) red.eliminated.solved[y[j]] = -v[j];
  return red;
}

ReducedSystem nonstandard_reduce(const ScaledSystem& scaled, const Assignment& sample) {
  const EpsilonGradedSystem& sys = scaled.system;
  if (scaled.laurent_flag < 0) throw ReductionRefused("the scaling is not locally consistent");
  const PolyVector h0 = sys.grade(0);
  for (auto i : scaled.partition.slow) {
    if (!h0[i].is_zero()) {
      throw ReductionRefused("slow row '" + sys.symbols.name(sys.states[i]) +
                             "' has a nonzero fast part; the scaling is not Tikhonov consistent");
    }
  }
  const auto ystar = fast_symbols(sys, scaled.partition);
  PolyVector gy;
  for (auto i : scaled.partition.fast) gy.push_back(h0[i]);
  const RFMatrix g0 = jacobian(gy, ystar);
  for (std::size_t a = 0; a < g0.rows(); ++a)
    for (std::size_t b = 0; b < g0.cols(); ++b)
      for (auto id : ystar)
        if (g0(a, b).depends_on(id)) throw ReductionRefused("the scaled fast block is not affine in the scaled variables");
  Bindings at_zero;
  for (auto id : ystar) at_zero[id] = RationalFunction();
  RFVector g1;
  for (const auto& p : gy) g1.push_back(substitute(p, at_zero));

  const RankFactorization rf = rank_and_factor(g0, sample);
  if (rf.rank == 0) throw ReductionRefused("G0(x,0) vanishes at the sample point");
  auto solved = linear_solve(rf.g_tilde, g1);
  if (auto* bad = std::get_if<NoSolution>(&solved)) {
    const std::size_t row = scaled.partition.fast.at(bad->row);
    throw NonstandardError("g1(x,0) is not in the column space of G~0 (row '" + sys.symbols.name(sys.states[row]) +
                               "'); no reduction is produced",
                           row, bad->residual);
  }
  // Lift the coefficients onto the kept columns: then G0 w = G~0 R w = g1.
  const RFVector& coeffs = std::get<RFVector>(solved);
  NonstandardData data;
  data.g0 = g0;
  data.g_tilde = rf.g_tilde;
  data.r = rf.r;
  data.w = RFVector(ystar.size());
  for (std::size_t k = 0; k < rf.rank; ++k) data.w[rf.columns[k]] = coeffs[k];
  data.s1 = rf.rank;
  data.columns = rf.columns;

  RFVector shifted;
  for (std::size_t j = 0; j < ystar.size(); ++j) shifted.push_back(RationalFunction::variable(ystar[j]) + data.w[j]);
  RFVector mu = rf.r * shifted;

  RFMatrix p(sys.dimension(), rf.rank, RationalFunction());
  for (std::size_t a = 0; a < scaled.partition.fast.size(); ++a)
    for (std::size_t k = 0; k < rf.rank; ++k) p(scaled.partition.fast[a], k) = rf.g_tilde(a, k);
  Decomposition dec = supplied_decomposition(h0, sys.states, std::move(p), std::move(mu), sample, "nonstandard");
  dec.nonstandard = std::move(data);
  return reduce(scaled, dec);
}

}  // namespace slowfast
