#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "slowfast/symbolic/rational_function.hpp"

namespace slowfast {

/// A denominator vanished or a value stopped being finite.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Polynomial in an ordered variable list, evaluated in double precision.
/// Every other symbol must be bound exactly in `constants`.
class CompiledPolynomial {
 public:
  CompiledPolynomial() = default;
  CompiledPolynomial(const Polynomial& p, const std::vector<SymbolId>& vars, const Assignment& constants);
  double operator()(const double* z) const;

 private:
  struct Term {
    double coefficient;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> powers;  // (variable index, exponent)
  };
  std::vector<Term> terms_;
};

class CompiledFunction {
 public:
  CompiledFunction() = default;
  CompiledFunction(const RationalFunction& f, const std::vector<SymbolId>& vars, const Assignment& constants);
  double operator()(const double* z) const;

 private:
  CompiledPolynomial num_;
  std::vector<std::pair<CompiledPolynomial, unsigned>> den_;
};

/// Vector field z' = f(z).
class CompiledField {
 public:
  CompiledField() = default;
  CompiledField(const RFVector& f, const std::vector<SymbolId>& vars, const Assignment& constants);
  CompiledField(const PolyVector& f, const std::vector<SymbolId>& vars, const Assignment& constants);
  std::size_t size() const { return entries_.size(); }
  void operator()(const double* z, double* out) const;
  std::vector<double> operator()(const std::vector<double>& z) const;

 private:
  std::vector<CompiledFunction> entries_;
};

double to_double(const Rational& q);
/// Exact rational equal to a finite double.
Rational to_rational(double x);

}  // namespace slowfast
