#include "slowfast/symbolic/linalg.hpp"

#include <algorithm>
#include <numeric>

namespace slowfast {

namespace {

using PMatrix = Matrix<Polynomial>;
using Factors = std::vector<RationalFunction::Factor>;

unsigned exponent_of(const Factors& fs, const Polynomial& base) {
  for (const auto& f : fs) {
    if (f.base == base) return f.exponent;
  }
  return 0;
}

// Multiplies a row of rational functions by the lcm of its denominators.
// Returns the polynomial row and the lcm.
std::pair<PolyVector, Polynomial> clear_row(const RFVector& row) {
  Factors lcm;
  for (const auto& x : row) {
    for (const auto& f : x.denominator_factors()) {
      const unsigned have = exponent_of(lcm, f.base);
      if (f.exponent > have) {
        bool found = false;
        for (auto& g : lcm) {
          if (g.base == f.base) {
            g.exponent = f.exponent;
            found = true;
          }
        }
        if (!found) lcm.push_back(f);
      }
    }
  }
  Polynomial l(1);
  for (const auto& f : lcm) l *= f.base.pow(f.exponent);
  PolyVector out;
  out.reserve(row.size());
  for (const auto& x : row) {
    if (x.is_zero()) {
      out.emplace_back();
      continue;
    }
    Polynomial cofactor(1);
    for (const auto& f : lcm) cofactor *= f.base.pow(f.exponent - exponent_of(x.denominator_factors(), f.base));
    out.push_back(x.numerator() * cofactor);
  }
  return {std::move(out), std::move(l)};
}

struct Echelon {
  PMatrix a;                          // augmented, in row echelon form
  std::size_t ncoef = 0;              // number of coefficient columns
  std::vector<std::size_t> pivots;    // pivot column of row k
  std::vector<std::size_t> origin;    // input row now stored at row k
  std::vector<Polynomial> row_scale;  // lcm each input row was multiplied by
  int sign = 1;
};

// Fraction-free elimination. After processing pivots in columns c_1..c_k the
// entry (i, j) equals the minor on rows {1..k, i} and columns {c_1..c_k, j},
// so each division by the previous pivot is exact even when columns without
// a pivot are skipped.
Echelon bareiss(const RFMatrix& m, const RFMatrix& rhs) {
  Echelon e;
  const std::size_t rows = m.rows();
  e.ncoef = m.cols();
  const std::size_t width = m.cols() + rhs.cols();
  e.a = PMatrix(rows, width);
  e.origin.resize(rows);
  std::iota(e.origin.begin(), e.origin.end(), 0);
  for (std::size_t i = 0; i < rows; ++i) {
    RFVector row = m.row_vector(i);
    for (std::size_t j = 0; j < rhs.cols(); ++j) row.push_back(rhs(i, j));
    auto [prow, scale] = clear_row(row);
    for (std::size_t j = 0; j < width; ++j) e.a(i, j) = std::move(prow[j]);
    e.row_scale.push_back(std::move(scale));
  }
  Polynomial prev(1);
  std::size_t r = 0;
  for (std::size_t c = 0; c < e.ncoef && r < rows; ++c) {
    std::size_t best = rows;
    for (std::size_t i = r; i < rows; ++i) {
      if (e.a(i, c).is_zero()) continue;
      if (best == rows || e.a(i, c).size() < e.a(best, c).size()) best = i;
    }
    if (best == rows) continue;
    if (best != r) {
      for (std::size_t j = 0; j < width; ++j) std::swap(e.a(r, j), e.a(best, j));
      std::swap(e.origin[r], e.origin[best]);
      e.sign = -e.sign;
    }
    const Polynomial pivot = e.a(r, c);
    for (std::size_t i = r + 1; i < rows; ++i) {
      const Polynomial lead = e.a(i, c);
      for (std::size_t j = c + 1; j < width; ++j) {
        Polynomial v = pivot * e.a(i, j);
        if (!lead.is_zero() && !e.a(r, j).is_zero()) v -= lead * e.a(r, j);
        e.a(i, j) = prev.is_constant() ? v.scaled(1 / prev.constant_term()) : v.divide_or_throw(prev);
      }
      e.a(i, c) = Polynomial();
    }
    prev = pivot;
    e.pivots.push_back(c);
    ++r;
  }
  return e;
}

// Reduced row echelon form over the rational-function field.
struct Reduced {
  RFMatrix a;
  std::size_t ncoef = 0;
  std::vector<std::size_t> pivots;
  std::vector<std::size_t> origin;
};

std::size_t weight(const RationalFunction& x) {
  std::size_t w = x.numerator().size();
  for (const auto& f : x.denominator_factors()) w += f.base.size();
  return w;
}

// Gauss-Jordan elimination; the pivot in each column is the entry of
// smallest size. Entries stay reduced through the gcd in RationalFunction.
Reduced gauss_jordan(const RFMatrix& m, const RFMatrix& rhs) {
  Reduced e;
  const std::size_t rows = m.rows();
  e.ncoef = m.cols();
  const std::size_t width = m.cols() + rhs.cols();
  e.a = RFMatrix(rows, width);
  e.origin.resize(rows);
  std::iota(e.origin.begin(), e.origin.end(), 0);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) e.a(i, j) = m(i, j);
    for (std::size_t j = 0; j < rhs.cols(); ++j) e.a(i, m.cols() + j) = rhs(i, j);
  }
  std::size_t r = 0;
  for (std::size_t c = 0; c < e.ncoef && r < rows; ++c) {
    std::size_t best = rows;
    for (std::size_t i = r; i < rows; ++i) {
      if (e.a(i, c).is_zero()) continue;
      if (best == rows || weight(e.a(i, c)) < weight(e.a(best, c))) best = i;
    }
    if (best == rows) continue;
    if (best != r) {
      for (std::size_t j = 0; j < width; ++j) std::swap(e.a(r, j), e.a(best, j));
      std::swap(e.origin[r], e.origin[best]);
    }
    const RationalFunction inv = e.a(r, c).inverse();
    for (std::size_t j = c; j < width; ++j)
      if (!e.a(r, j).is_zero()) e.a(r, j) *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || e.a(i, c).is_zero()) continue;
      const RationalFunction lead = e.a(i, c);
      for (std::size_t j = c; j < width; ++j)
        if (!e.a(r, j).is_zero()) e.a(i, j) -= lead * e.a(r, j);
    }
    e.pivots.push_back(c);
    ++r;
  }
  return e;
}

// Solution for right-hand-side column `k`; free variables are zero.
RFVector solution_column(const Reduced& e, std::size_t k) {
  RFVector x(e.ncoef);
  for (std::size_t p = 0; p < e.pivots.size(); ++p) x[e.pivots[p]] = e.a(p, e.ncoef + k);
  return x;
}

template <typename T>
std::vector<T> faddeev_leverrier(const Matrix<T>& a) {
  if (!a.is_square()) throw std::invalid_argument("characteristic polynomial of a non-square matrix");
  const std::size_t n = a.rows();
  std::vector<T> coeffs(n + 1, T(0));
  coeffs[0] = T(1);
  Matrix<T> mk(n, n, T(0));
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{k-1} I,  c_k = -tr(A M_k) / k
    Matrix<T> next = a * mk;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += coeffs[k - 1];
    mk = std::move(next);
    Matrix<T> am = a * mk;
    T trace(0);
    for (std::size_t i = 0; i < n; ++i) trace += am(i, i);
    coeffs[k] = -trace / T(static_cast<long>(k));
  }
  return coeffs;
}

}  // namespace

SolveResult linear_solve(const RFMatrix& m, const RFVector& b) {
  if (b.size() != m.rows()) throw std::invalid_argument("linear_solve: right-hand side size mismatch");
  Reduced e = gauss_jordan(m, RFMatrix::column(b));
  for (std::size_t i = e.pivots.size(); i < m.rows(); ++i) {
    if (!e.a(i, e.ncoef).is_zero()) return NoSolution{e.origin[i], e.a(i, e.ncoef)};
  }
  return solution_column(e, 0);
}

RFVector solve_or_throw(const RFMatrix& m, const RFVector& b) {
  auto result = linear_solve(m, b);
  if (auto* bad = std::get_if<NoSolution>(&result)) {
    throw LinearAlgebraError("linear system is inconsistent in row " + std::to_string(bad->row));
  }
  return std::get<RFVector>(std::move(result));
}

std::optional<RFMatrix> linear_solve(const RFMatrix& m, const RFMatrix& b) {
  if (b.rows() != m.rows()) throw std::invalid_argument("linear_solve: right-hand side size mismatch");
  Reduced e = gauss_jordan(m, b);
  for (std::size_t i = e.pivots.size(); i < m.rows(); ++i) {
    for (std::size_t k = 0; k < b.cols(); ++k) {
      if (!e.a(i, e.ncoef + k).is_zero()) return std::nullopt;
    }
  }
  RFMatrix x(m.cols(), b.cols());
  for (std::size_t k = 0; k < b.cols(); ++k) {
    RFVector col = solution_column(e, k);
    for (std::size_t i = 0; i < m.cols(); ++i) x(i, k) = std::move(col[i]);
  }
  return x;
}

RationalFunction determinant(const RFMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("determinant of a non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return RationalFunction(1);
  Echelon e = bareiss(m, RFMatrix(n, 0));
  if (e.pivots.size() < n) return {};
  Polynomial scale(1);
  for (const auto& s : e.row_scale) scale *= s;
  return RationalFunction::quotient(e.a(n - 1, n - 1).scaled(e.sign), scale);
}

std::vector<RFVector> nullspace(const RFMatrix& m) {
  Echelon e = bareiss(m, RFMatrix(m.rows(), 0));
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : e.pivots) is_pivot[c] = true;
  std::vector<RFVector> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    RFVector x(m.cols());
    x[f] = RationalFunction(1);
    for (std::size_t p = e.pivots.size(); p-- > 0;) {
      const std::size_t c = e.pivots[p];
      RationalFunction acc = -RationalFunction(e.a(p, f));
      for (std::size_t q = p + 1; q < e.pivots.size(); ++q) {
        const std::size_t cq = e.pivots[q];
        if (e.a(p, cq).is_zero() || x[cq].is_zero()) continue;
        acc -= RationalFunction(e.a(p, cq)) * x[cq];
      }
      x[c] = acc / RationalFunction(e.a(p, c));
    }
    basis.push_back(std::move(x));
  }
  return basis;
}

std::size_t symbolic_rank(const RFMatrix& m) { return bareiss(m, RFMatrix(m.rows(), 0)).pivots.size(); }

RFVector char_poly(const RFMatrix& m) { return faddeev_leverrier(m); }

std::vector<Rational> char_poly(const QMatrix& m) { return faddeev_leverrier(m); }

RFMatrix jacobian(const RFVector& f, const std::vector<SymbolId>& vars) {
  RFMatrix j(f.size(), vars.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t k = 0; k < vars.size(); ++k) j(i, k) = f[i].derivative(vars[k]);
  return j;
}

RFMatrix jacobian(const PolyVector& f, const std::vector<SymbolId>& vars) {
  RFMatrix j(f.size(), vars.size());
  for (std::size_t i = 0; i < f.size(); ++i)
    for (std::size_t k = 0; k < vars.size(); ++k) j(i, k) = RationalFunction(f[i].derivative(vars[k]));
  return j;
}

QMatrix evaluate(const RFMatrix& m, const Assignment& at) {
  return m.map([&](const RationalFunction& x) { return x.value(at); });
}

RFMatrix evaluate_partial(const RFMatrix& m, const Assignment& at) {
  return m.map([&](const RationalFunction& x) { return x.evaluate(at); });
}

RFMatrix substitute(const RFMatrix& m, const Bindings& bindings) {
  return m.map([&](const RationalFunction& x) { return x.substitute(bindings); });
}

RFVector substitute(const RFVector& v, const Bindings& bindings) {
  RFVector out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.substitute(bindings));
  return out;
}

PivotChoice greedy_columns(const QMatrix& m, const std::vector<std::size_t>& order) {
  // Gaussian elimination on the transpose: a column is kept when it is not in
  // the span of the columns kept before it.
  PivotChoice out;
  std::vector<std::vector<Rational>> basis;  // reduced kept columns
  std::vector<std::size_t> lead;             // leading row of each basis vector
  for (std::size_t c : order) {
    std::vector<Rational> v = m.column_vector(c);
    for (std::size_t b = 0; b < basis.size(); ++b) {
      const Rational f = v[lead[b]];
      if (f == 0) continue;
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= f * basis[b][i];
    }
    auto it = std::find_if(v.begin(), v.end(), [](const Rational& x) { return x != 0; });
    if (it == v.end()) continue;
    const std::size_t row = static_cast<std::size_t>(it - v.begin());
    const Rational inv = 1 / v[row];
    for (auto& x : v) x *= inv;
    for (auto& w : basis) {
      const Rational f = w[row];
      if (f == 0) continue;
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= f * v[i];
    }
    basis.push_back(std::move(v));
    lead.push_back(row);
    out.columns.push_back(c);
  }
  out.rank = out.columns.size();
  std::sort(out.columns.begin(), out.columns.end());
  return out;
}

std::size_t rank(const QMatrix& m) {
  std::vector<std::size_t> order(m.cols());
  std::iota(order.begin(), order.end(), 0);
  return greedy_columns(m, order).rank;
}

RFMatrix hadamard_factor(const PolyVector& v, const std::vector<SymbolId>& yvars) {
  Assignment zero;
  for (auto y : yvars) zero[y] = 0;
  RFMatrix g(v.size(), yvars.size(), RationalFunction());
  for (std::size_t i = 0; i < v.size(); ++i) {
    Polynomial residual = v[i].evaluate(zero);
    if (!residual.is_zero()) {
      throw ConsistencyError("entry " + std::to_string(i) + " does not vanish on the subspace y = 0", i,
                             std::move(residual));
    }
    std::vector<std::vector<Term>> parts(yvars.size());
    for (const auto& t : v[i].terms()) {
      for (std::size_t k = 0; k < yvars.size(); ++k) {
        if (!t.monomial.contains(yvars[k])) continue;
        parts[k].push_back({Monomial::variable(yvars[k]).quotient_of(t.monomial), t.coefficient});
        break;
      }
    }
    for (std::size_t k = 0; k < yvars.size(); ++k) g(i, k) = Polynomial::from_terms(std::move(parts[k]));
  }
  return g;
}

RankFactorization rank_and_factor(const RFMatrix& m, const Assignment& sample) {
  QMatrix at = evaluate(m, sample);
  std::vector<std::size_t> order(m.cols());
  std::iota(order.rbegin(), order.rend(), 0);
  PivotChoice choice = greedy_columns(at, order);

  RankFactorization out;
  out.rank = choice.rank;
  out.columns = choice.columns;
  out.sample = sample;
  out.g_tilde = RFMatrix(m.rows(), out.rank);
  for (std::size_t k = 0; k < out.rank; ++k)
    for (std::size_t i = 0; i < m.rows(); ++i) out.g_tilde(i, k) = m(i, out.columns[k]);

  out.r = RFMatrix(out.rank, m.cols(), RationalFunction());
  for (std::size_t j = 0; j < m.cols(); ++j) {
    auto pos = std::find(out.columns.begin(), out.columns.end(), j);
    if (pos != out.columns.end()) {
      out.r(static_cast<std::size_t>(pos - out.columns.begin()), j) = RationalFunction(1);
      continue;
    }
    auto solved = linear_solve(out.g_tilde, m.column_vector(j));
    if (std::holds_alternative<NoSolution>(solved)) {
      throw RankError("column " + std::to_string(j) +
                      " is not in the span of the chosen columns away from the sample; try another sample");
    }
    const auto& col = std::get<RFVector>(solved);
    for (std::size_t k = 0; k < out.rank; ++k) out.r(k, j) = col[k];
  }
  if (!(out.g_tilde * out.r - m).is_zero()) {
    throw RankError("rank factorization does not hold identically; try another sample");
  }
  return out;
}

RankFactorization rank_and_factor(const RFMatrix& m, const std::vector<SymbolId>& vars, std::mt19937_64& rng,
                                  int attempts) {
  std::string last;
  for (int i = 0; i < attempts; ++i) {
    try {
      return rank_and_factor(m, random_positive_point(vars, rng));
    } catch (const RankError& e) {
      last = e.what();
    } catch (const SubstitutionError& e) {
      last = e.what();
    }
  }
  throw RankError("rank factorization failed at " + std::to_string(attempts) + " samples: " + last);
}

Assignment random_positive_point(const std::vector<SymbolId>& vars, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(1, 9);
  std::uniform_int_distribution<int> den(1, 4);
  Assignment out;
  for (auto v : vars) {
    Rational q(num(rng), den(rng));
    q.canonicalize();
    out[v] = q;
  }
  return out;
}

}  // namespace slowfast
