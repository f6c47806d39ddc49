#include "slowfast/symbolic/numeric.hpp"

#include <cmath>
#include <map>
#include <string>

namespace slowfast {

CompiledPolynomial::CompiledPolynomial(const Polynomial& p, const std::vector<SymbolId>& vars,
                                       const Assignment& constants) {
  std::map<SymbolId, std::uint32_t> index;
  for (std::size_t i = 0; i < vars.size(); ++i) index[vars[i]] = static_cast<std::uint32_t>(i);
  // Bind the constants exactly first so that like terms merge before rounding.
  Assignment bound;
  for (const auto& [id, v] : constants) {
    if (!index.count(id)) bound[id] = v;
  }
  const Polynomial q = bound.empty() ? p : p.evaluate(bound);
  for (const auto& t : q.terms()) {
    Term term{to_double(t.coefficient), {}};
    for (const auto& [id, e] : t.monomial.factors()) {
      auto it = index.find(id);
      if (it == index.end()) throw std::invalid_argument("unbound symbol #" + std::to_string(id) + " in compiled polynomial");
      term.powers.emplace_back(it->second, e);
    }
    terms_.push_back(std::move(term));
  }
}

double CompiledPolynomial::operator()(const double* z) const {
  double sum = 0;
  for (const auto& t : terms_) {
    double v = t.coefficient;
    for (const auto& [i, e] : t.powers) {
      const double x = z[i];
      switch (e) {
        case 1: v *= x; break;
        case 2: v *= x * x; break;
        default: v *= std::pow(x, static_cast<double>(e));
      }
    }
    sum += v;
  }
  return sum;
}

CompiledFunction::CompiledFunction(const RationalFunction& f, const std::vector<SymbolId>& vars,
                                   const Assignment& constants)
    : num_(f.numerator(), vars, constants) {
  for (const auto& factor : f.denominator_factors()) {
    den_.emplace_back(CompiledPolynomial(factor.base, vars, constants), factor.exponent);
  }
}

double CompiledFunction::operator()(const double* z) const {
  double v = num_(z);
  for (const auto& [p, e] : den_) {
    const double d = p(z);
    if (d == 0 || !std::isfinite(d)) throw EvaluationError("denominator vanished during evaluation");
    v /= std::pow(d, static_cast<double>(e));
  }
  if (!std::isfinite(v)) throw EvaluationError("non-finite value during evaluation");
  return v;
}

CompiledField::CompiledField(const RFVector& f, const std::vector<SymbolId>& vars, const Assignment& constants) {
  for (const auto& x : f) entries_.emplace_back(x, vars, constants);
}

CompiledField::CompiledField(const PolyVector& f, const std::vector<SymbolId>& vars, const Assignment& constants) {
  for (const auto& x : f) entries_.emplace_back(RationalFunction(x), vars, constants);
}

void CompiledField::operator()(const double* z, double* out) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) out[i] = entries_[i](z);
}

std::vector<double> CompiledField::operator()(const std::vector<double>& z) const {
  std::vector<double> out(entries_.size());
  (*this)(z.data(), out.data());
  return out;
}

double to_double(const Rational& q) { return q.get_d(); }

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("cannot convert a non-finite double to a rational");
  return Rational(x);
}

}  // namespace slowfast
