#include <algorithm>
#include <random>

#include "slowfast/symbolic/polynomial.hpp"

namespace slowfast {

namespace {

using Dense = std::vector<Rational>;  // coefficient of x^k at index k

void trim(Dense& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Remainder of a by b, b nonzero.
Dense remainder(Dense a, const Dense& b) {
  while (a.size() >= b.size() && !a.empty()) {
    const Rational f = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t k = 0; k < b.size(); ++k) a[k + shift] -= f * b[k];
    a.pop_back();
    trim(a);
  }
  return a;
}

std::size_t univariate_gcd_degree(Dense a, Dense b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Dense r = remainder(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return a.empty() ? 0 : a.size() - 1;
}

Dense dense_in(const Polynomial& p, SymbolId v) {
  Dense out(p.degree_in(v) + 1, Rational(0));
  for (const auto& [k, c] : p.coefficients_in(v)) out[k] = c.constant_term();
  return out;
}

// True when a and b are certainly coprime: for every shared variable v, a
// specialization of the others that keeps both v-degrees has a constant
// univariate gcd. A nonconstant gcd involves only shared variables and
// survives every such specialization.
bool certainly_coprime(const Polynomial& a, const Polynomial& b) {
  const auto va = a.variables();
  const auto vb = b.variables();
  std::vector<SymbolId> shared;
  std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(shared));
  if (shared.empty()) return true;
  std::set<SymbolId> all = va;
  all.insert(vb.begin(), vb.end());
  std::mt19937_64 rng(0x5eed);
  std::uniform_int_distribution<long> draw(3, 10007);
  for (auto v : shared) {
    bool excluded = false;
    for (int attempt = 0; attempt < 3 && !excluded; ++attempt) {
      Assignment point;
      for (auto id : all)
        if (id != v) point[id] = Rational(draw(rng));
      const Polynomial sa = a.evaluate(point);
      const Polynomial sb = b.evaluate(point);
      if (sa.degree_in(v) != a.degree_in(v) || sb.degree_in(v) != b.degree_in(v)) continue;
      if (univariate_gcd_degree(dense_in(sa, v), dense_in(sb, v)) > 0) return false;
      excluded = true;
    }
    if (!excluded) return false;
  }
  return true;
}

Polynomial leading_in(const Polynomial& p, SymbolId v) { return p.coefficients_in(v).rbegin()->second; }

Polynomial gcd_rec(const Polynomial& a, const Polynomial& b);

// gcd of the coefficients of p as a polynomial in v.
Polynomial content_in(const Polynomial& p, SymbolId v) {
  Polynomial c;
  for (const auto& [k, coeff] : p.coefficients_in(v)) {
    c = c.is_zero() ? coeff.monic() : gcd_rec(c, coeff);
    if (c.is_constant()) return Polynomial(1);
  }
  return c;
}

Polynomial primitive_in(const Polynomial& p, SymbolId v) {
  const Polynomial c = content_in(p, v);
  return c.is_constant() ? p.monic() : p.divide_or_throw(c).monic();
}

// Pseudo-remainder of a by b in v.
Polynomial pseudo_remainder(Polynomial a, const Polynomial& b, SymbolId v) {
  const std::uint32_t db = b.degree_in(v);
  const Polynomial lb = leading_in(b, v);
  while (!a.is_zero() && a.degree_in(v) >= db) {
    const std::uint32_t da = a.degree_in(v);
    const Polynomial la = leading_in(a, v);
    a = lb * a - la * Polynomial::monomial(Monomial::variable(v, da - db)) * b;
  }
  return a;
}

Polynomial gcd_rec(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return Polynomial(1);
  if (a == b) return a.monic();
  if (auto q = a.divide_exact(b)) return b.monic();
  if (auto q = b.divide_exact(a)) return a.monic();
  if (certainly_coprime(a, b)) return Polynomial(1);
  const auto va = a.variables();
  const auto vb = b.variables();
  // A variable present in one argument only cannot occur in the gcd.
  for (auto v : va)
    if (!vb.count(v)) return gcd_rec(content_in(a, v), b);
  for (auto v : vb)
    if (!va.count(v)) return gcd_rec(a, content_in(b, v));
  // Main variable: the one of lowest degree keeps the remainder sequence short.
  SymbolId v = *va.begin();
  for (auto id : va)
    if (std::max(a.degree_in(id), b.degree_in(id)) < std::max(a.degree_in(v), b.degree_in(v))) v = id;
  const Polynomial ca = content_in(a, v);
  const Polynomial cb = content_in(b, v);
  const Polynomial c = gcd_rec(ca, cb);
  Polynomial p = ca.is_constant() ? a : a.divide_or_throw(ca);
  Polynomial q = cb.is_constant() ? b : b.divide_or_throw(cb);
  if (p.degree_in(v) < q.degree_in(v)) std::swap(p, q);
  for (;;) {
    const Polynomial r = pseudo_remainder(p, q, v);
    if (r.is_zero()) break;
    if (r.degree_in(v) == 0) return c;
    p = std::move(q);
    q = primitive_in(r, v);
  }
  return (c * primitive_in(q, v)).monic();
}

}  // namespace

Polynomial gcd(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  // Split off the common monomial content first.
  const Monomial ma = a.monomial_content();
  const Monomial mb = b.monomial_content();
  Monomial common;
  for (const auto& [id, e] : ma.factors()) {
    const auto f = std::min(e, mb.exponent(id));
    if (f > 0) common = common * Monomial::variable(id, f);
  }
  const Polynomial ra = ma.is_one() ? a : a.divide_or_throw(Polynomial::monomial(ma));
  const Polynomial rb = mb.is_one() ? b : b.divide_or_throw(Polynomial::monomial(mb));
  return (Polynomial::monomial(common) * gcd_rec(ra, rb)).monic();
}

}  // namespace slowfast
