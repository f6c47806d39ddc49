#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "slowfast/symbolic/symbol.hpp"

namespace slowfast {

using Rational = mpq_class;

/// Exact rational assignment to a subset of symbols.
using Assignment = std::map<SymbolId, Rational>;

/// Power product stored sparsely as (symbol, exponent) pairs sorted by symbol
/// id; exponents are strictly positive.
class Monomial {
 public:
  using Factor = std::pair<SymbolId, std::uint32_t>;

  Monomial() = default;
  static Monomial variable(SymbolId id, std::uint32_t exponent = 1);

  const std::vector<Factor>& factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }
  std::uint32_t degree() const;
  std::uint32_t exponent(SymbolId id) const;
  bool contains(SymbolId id) const { return exponent(id) > 0; }

  Monomial operator*(const Monomial& other) const;
  bool divides(const Monomial& other) const;
  /// Requires divides(other); returns other / *this.
  Monomial quotient_of(const Monomial& other) const;
  /// Removes `id` entirely; returns the exponent it carried.
  std::pair<Monomial, std::uint32_t> without(SymbolId id) const;
  /// Keeps only the symbols for which `keep` is true.
  Monomial restricted(const std::function<bool(SymbolId)>& keep) const;

  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  std::vector<Factor> factors_;
};

/// Graded lexicographic comparison with the lower symbol id ranking higher.
/// Returns <0, 0, >0.
int compare_grlex(const Monomial& a, const Monomial& b);

struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return compare_grlex(a, b) < 0; }
};

struct Term {
  Monomial monomial;
  Rational coefficient;
};

class DivisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sparse multivariate polynomial over Q. Terms are kept in descending
/// graded-lex order with no zero coefficients, so equal polynomials have
/// identical representations.
class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(const Rational& constant);  // NOLINT(google-explicit-constructor)
  Polynomial(long constant) : Polynomial(Rational(constant)) {}  // NOLINT
  Polynomial(int constant) : Polynomial(Rational(constant)) {}   // NOLINT
  static Polynomial variable(SymbolId id);
  static Polynomial monomial(const Monomial& m, const Rational& coefficient = 1);
  static Polynomial from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Constant term (coefficient of the unit monomial).
  Rational constant_term() const;
  const Term& leading_term() const;
  std::uint32_t total_degree() const;
  std::uint32_t degree_in(SymbolId id) const;
  std::set<SymbolId> variables() const;
  bool depends_on(SymbolId id) const;
  bool depends_on_any(const std::function<bool(SymbolId)>& pred) const;

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(const Polynomial& other);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial scaled(const Rational& factor) const;
  Polynomial pow(unsigned exponent) const;

  Polynomial derivative(SymbolId id) const;
  /// Substitutes rational values for the assigned symbols, leaving the rest.
  Polynomial evaluate(const Assignment& values) const;
  /// Full evaluation; throws if a symbol is unassigned.
  Rational value(const Assignment& values) const;

  /// Collects coefficients of the powers of `id`: p = sum_k c_k * id^k.
  std::map<std::uint32_t, Polynomial> coefficients_in(SymbolId id) const;
  /// Splits p = sum_m c_m * m where m ranges over monomials in the symbols
  /// selected by `in_key`, and the c_m are free of those symbols.
  std::map<Monomial, Polynomial, MonomialLess> split(const std::function<bool(SymbolId)>& in_key) const;

  /// Exact quotient, or nullopt when `divisor` does not divide *this.
  std::optional<Polynomial> divide_exact(const Polynomial& divisor) const;
  /// Quotient that must be exact; throws DivisionError otherwise.
  Polynomial divide_or_throw(const Polynomial& divisor) const;

  /// Monic normalization: divides by the leading coefficient.
  Polynomial monic() const;
  /// Largest monomial dividing every term.
  Monomial monomial_content() const;

  std::string to_string(const SymbolTable& symbols) const;

  friend bool operator==(const Polynomial& a, const Polynomial& b);
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

 private:
  void normalize();
  std::vector<Term> terms_;
};

/// Total order on polynomials for use as map keys (term-wise grlex, then
/// coefficient).
bool polynomial_less(const Polynomial& a, const Polynomial& b);

using PolyVector = std::vector<Polynomial>;

/// Greatest common divisor over Q, normalized to leading coefficient 1; the
/// gcd with zero is the other argument made monic.
Polynomial gcd(const Polynomial& a, const Polynomial& b);

std::string rational_to_string(const Rational& q);
/// Parses "p", "-p" or "p/q" (decimal integers).
Rational parse_rational(const std::string& text);

}  // namespace slowfast
