#pragma once

#include <random>
#include <string>

#include "slowfast/symbolic/parser.hpp"
#include "slowfast/symbolic/rational_function.hpp"

namespace testing_support {

using namespace slowfast;

/// Parses with unknown names interned as parameters.
inline Polynomial poly(SymbolTable& t, const std::string& text) {
  return parse_polynomial(text, [&t](const std::string& n) {
    if (auto id = t.find(n)) return *id;
    return t.add(n, SymbolKind::Parameter);
  });
}

inline RationalFunction rf(SymbolTable& t, const std::string& num, const std::string& den = "1") {
  return RationalFunction::quotient(poly(t, num), poly(t, den));
}

/// Random polynomial in `vars` with small integer coefficients.
inline Polynomial random_poly(std::mt19937_64& rng, const std::vector<SymbolId>& vars, unsigned max_degree,
                              int terms) {
  std::uniform_int_distribution<int> coef(-5, 5);
  std::uniform_int_distribution<std::size_t> pick(0, vars.size() - 1);
  std::uniform_int_distribution<unsigned> deg(0, max_degree);
  Polynomial p;
  for (int i = 0; i < terms; ++i) {
    Monomial m;
    const unsigned d = deg(rng);
    for (unsigned k = 0; k < d; ++k) m = m * Monomial::variable(vars[pick(rng)]);
    p += Polynomial::monomial(m, coef(rng));
  }
  return p;
}

}  // namespace testing_support
