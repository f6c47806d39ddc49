#pragma once

#include <map>
#include <string>
#include <vector>

#include "slowfast/symbolic/polynomial.hpp"

namespace slowfast {

class SubstitutionError : public std::runtime_error {
 public:
  explicit SubstitutionError(const std::string& what, std::optional<SymbolId> binding = std::nullopt)
      : std::runtime_error(what), binding_(binding) {}
  /// The single binding that makes the denominator vanish, when one exists.
  std::optional<SymbolId> binding() const { return binding_; }

 private:
  std::optional<SymbolId> binding_;
};

/// Quotient of polynomials over Q.
///
/// The denominator is kept as a product of monic, non-constant factors. New
/// factors enter through inversion, where the numerator is split into its
/// monomial content and a monic remainder; after every operation each
/// denominator factor is trial-divided out of the numerator. There is no
/// multivariate gcd, so two equal functions may have different
/// representations. Equality is decided by cross-multiplication.
class RationalFunction {
 public:
  struct Factor {
    Polynomial base;
    unsigned exponent;
  };

  RationalFunction() = default;
  RationalFunction(Polynomial numerator);     // NOLINT(google-explicit-constructor)
  RationalFunction(const Rational& constant);  // NOLINT(google-explicit-constructor)
  RationalFunction(long constant) : RationalFunction(Polynomial(constant)) {}  // NOLINT
  RationalFunction(int constant) : RationalFunction(Polynomial(constant)) {}   // NOLINT
  static RationalFunction quotient(const Polynomial& numerator, const Polynomial& denominator);
  static RationalFunction variable(SymbolId id) { return {Polynomial::variable(id)}; }

  const Polynomial& numerator() const { return num_; }
  const std::vector<Factor>& denominator_factors() const { return den_; }
  Polynomial denominator() const;

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.empty(); }
  bool is_constant() const { return den_.empty() && num_.is_constant(); }
  /// Throws unless is_polynomial().
  const Polynomial& as_polynomial() const;
  bool depends_on(SymbolId id) const;
  bool depends_on_any(const std::function<bool(SymbolId)>& pred) const;
  std::set<SymbolId> variables() const;

  RationalFunction operator-() const;
  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  RationalFunction& operator+=(const RationalFunction& b) { return *this = *this + b; }
  RationalFunction& operator-=(const RationalFunction& b) { return *this = *this - b; }
  RationalFunction& operator*=(const RationalFunction& b) { return *this = *this * b; }
  RationalFunction& operator/=(const RationalFunction& b) { return *this = *this / b; }
  RationalFunction inverse() const;
  RationalFunction pow(unsigned exponent) const;

  RationalFunction derivative(SymbolId id) const;
  /// Partial evaluation at rational values. Throws SubstitutionError if the
  /// denominator vanishes.
  RationalFunction evaluate(const Assignment& values) const;
  Rational value(const Assignment& values) const;
  /// Simultaneous substitution of the bound symbols.
  RationalFunction substitute(const std::map<SymbolId, RationalFunction>& bindings) const;

  std::string to_string(const SymbolTable& symbols) const;

  friend bool operator==(const RationalFunction& a, const RationalFunction& b);
  friend bool operator!=(const RationalFunction& a, const RationalFunction& b) { return !(a == b); }

 private:
  void cancel();
  Polynomial num_;
  std::vector<Factor> den_;
};

using RFVector = std::vector<RationalFunction>;
using Bindings = std::map<SymbolId, RationalFunction>;

/// Substitutes into a polynomial; powers of each binding are cached.
RationalFunction substitute(const Polynomial& p, const Bindings& bindings);

RFVector to_rf(const PolyVector& v);

}  // namespace slowfast
