#include "slowfast/symbolic/rational_function.hpp"

#include <algorithm>
#include <sstream>

namespace slowfast {

namespace {

using Factors = std::vector<RationalFunction::Factor>;

bool factor_less(const RationalFunction::Factor& a, const RationalFunction::Factor& b) {
  return polynomial_less(a.base, b.base);
}

// Inserts base^exponent keeping the bases monic and pairwise coprime: a base
// sharing a factor with an existing one splits both.
void add_factor(Factors& fs, const Polynomial& base, unsigned exponent) {
  if (exponent == 0 || base.is_constant()) return;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (fs[i].base == base) {
      fs[i].exponent += exponent;
      return;
    }
    const Polynomial g = gcd(fs[i].base, base);
    if (g.is_constant()) continue;
    const RationalFunction::Factor old = fs[i];
    fs.erase(fs.begin() + static_cast<std::ptrdiff_t>(i));
    add_factor(fs, g, old.exponent);
    add_factor(fs, old.base.divide_or_throw(g), old.exponent);
    add_factor(fs, g, exponent);
    add_factor(fs, base.divide_or_throw(g), exponent);
    return;
  }
  fs.push_back({base, exponent});
  std::sort(fs.begin(), fs.end(), factor_less);
}

// Splits p = c * monomial * rest with rest monic, and returns c together with
// the non-constant factors.
std::pair<Rational, Factors> split_syntactic(const Polynomial& p) {
  Factors fs;
  const Monomial content = p.monomial_content();
  Polynomial rest = content.is_one() ? p : p.divide_or_throw(Polynomial::monomial(content));
  for (const auto& [id, e] : content.factors()) add_factor(fs, Polynomial::variable(id), e);
  Rational c = rest.leading_term().coefficient;
  rest = rest.scaled(1 / c);
  if (!rest.is_constant()) add_factor(fs, rest, 1);
  return {c, fs};
}

Polynomial expand(const Factors& fs) {
  Polynomial p(1);
  for (const auto& f : fs) p *= f.base.pow(f.exponent);
  return p;
}

// Exponents of fs over a coprime basis refining its bases.
std::vector<unsigned> exponents_over(const Factors& fs, const Factors& basis) {
  std::vector<unsigned> out(basis.size(), 0);
  for (const auto& f : fs) {
    for (std::size_t k = 0; k < basis.size(); ++k) {
      if (basis[k].base == f.base) {
        out[k] += f.exponent;
        break;
      }
      Polynomial rest = f.base;
      unsigned m = 0;
      while (auto q = rest.divide_exact(basis[k].base)) {
        rest = std::move(*q);
        ++m;
      }
      out[k] += m * f.exponent;
    }
  }
  return out;
}

}  // namespace

RationalFunction::RationalFunction(Polynomial numerator) : num_(std::move(numerator)) {}

RationalFunction::RationalFunction(const Rational& constant) : num_(constant) {}

RationalFunction RationalFunction::quotient(const Polynomial& numerator, const Polynomial& denominator) {
  if (denominator.is_zero()) throw DivisionError("rational function with zero denominator");
  return RationalFunction(numerator) / RationalFunction(denominator);
}

Polynomial RationalFunction::denominator() const { return expand(den_); }

const Polynomial& RationalFunction::as_polynomial() const {
  if (!den_.empty()) throw std::logic_error("rational function is not a polynomial");
  return num_;
}

bool RationalFunction::depends_on(SymbolId id) const {
  if (num_.depends_on(id)) return true;
  return std::any_of(den_.begin(), den_.end(), [id](const Factor& f) { return f.base.depends_on(id); });
}

bool RationalFunction::depends_on_any(const std::function<bool(SymbolId)>& pred) const {
  if (num_.depends_on_any(pred)) return true;
  return std::any_of(den_.begin(), den_.end(), [&](const Factor& f) { return f.base.depends_on_any(pred); });
}

std::set<SymbolId> RationalFunction::variables() const {
  auto out = num_.variables();
  for (const auto& f : den_) {
    auto v = f.base.variables();
    out.insert(v.begin(), v.end());
  }
  return out;
}

void RationalFunction::cancel() {
  if (num_.is_zero()) {
    den_.clear();
    return;
  }
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& f : den_) {
      while (f.exponent > 0) {
        auto q = num_.divide_exact(f.base);
        if (!q) break;
        num_ = std::move(*q);
        --f.exponent;
      }
    }
    std::erase_if(den_, [](const Factor& f) { return f.exponent == 0; });
    for (std::size_t i = 0; i < den_.size(); ++i) {
      const Polynomial g = gcd(num_, den_[i].base);
      if (g.is_constant()) continue;
      // base = g h: base^e / g = g^(e-1) h^e.
      const Factor f = den_[i];
      num_ = num_.divide_or_throw(g);
      den_.erase(den_.begin() + static_cast<std::ptrdiff_t>(i));
      add_factor(den_, g, f.exponent - 1);
      add_factor(den_, f.base.divide_or_throw(g), f.exponent);
      changed = true;
      break;
    }
  }
}

RationalFunction RationalFunction::operator-() const {
  RationalFunction r = *this;
  r.num_ = -r.num_;
  return r;
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  RationalFunction r;
  bool same = a.den_.size() == b.den_.size();
  for (std::size_t i = 0; same && i < a.den_.size(); ++i) {
    same = a.den_[i].exponent == b.den_[i].exponent && a.den_[i].base == b.den_[i].base;
  }
  if (same) {
    r.num_ = a.num_ + b.num_;
    r.den_ = a.den_;
  } else {
    Factors basis;
    for (const auto& f : a.den_) add_factor(basis, f.base, 1);
    for (const auto& f : b.den_) add_factor(basis, f.base, 1);
    const auto ea = exponents_over(a.den_, basis);
    const auto eb = exponents_over(b.den_, basis);
    Factors lcm;
    Factors miss_a;
    Factors miss_b;
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const unsigned top = std::max(ea[k], eb[k]);
      if (top > 0) lcm.push_back({basis[k].base, top});
      if (top > ea[k]) miss_a.push_back({basis[k].base, top - ea[k]});
      if (top > eb[k]) miss_b.push_back({basis[k].base, top - eb[k]});
    }
    r.num_ = a.num_ * expand(miss_a) + b.num_ * expand(miss_b);
    r.den_ = std::move(lcm);
  }
  r.cancel();
  return r;
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  if (a.is_zero() || b.is_zero()) return {};
  RationalFunction r;
  r.num_ = a.num_ * b.num_;
  r.den_ = a.den_;
  for (const auto& f : b.den_) add_factor(r.den_, f.base, f.exponent);
  if (!a.den_.empty() || !b.den_.empty()) r.cancel();
  return r;
}

RationalFunction RationalFunction::inverse() const {
  if (num_.is_zero()) throw DivisionError("inverse of the zero rational function");
  auto [c, fs] = split_syntactic(num_);
  RationalFunction r;
  r.num_ = expand(den_).scaled(1 / c);
  r.den_ = std::move(fs);
  r.cancel();
  return r;
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) { return a * b.inverse(); }

RationalFunction RationalFunction::pow(unsigned exponent) const {
  RationalFunction r;
  r.num_ = num_.pow(exponent);
  for (const auto& f : den_) {
    if (exponent > 0) r.den_.push_back({f.base, f.exponent * exponent});
  }
  return r;
}

RationalFunction RationalFunction::derivative(SymbolId id) const {
  RationalFunction d = RationalFunction(num_.derivative(id));
  if (!den_.empty()) {
    d.den_ = den_;
    d.cancel();
    // d(N/D) = N'/D - (N/D) * sum_f e_f * f'/f
    RationalFunction log_derivative;
    for (const auto& f : den_) {
      Polynomial df = f.base.derivative(id);
      if (df.is_zero()) continue;
      RationalFunction term(df.scaled(f.exponent));
      term.den_.push_back({f.base, 1});
      term.cancel();
      log_derivative += term;
    }
    d -= *this * log_derivative;
  }
  return d;
}

RationalFunction RationalFunction::evaluate(const Assignment& values) const {
  Polynomial den = expand(den_).evaluate(values);
  if (den.is_zero()) throw SubstitutionError("denominator vanishes at the evaluation point");
  return RationalFunction(num_.evaluate(values)) / RationalFunction(den);
}

Rational RationalFunction::value(const Assignment& values) const {
  Rational den = expand(den_).value(values);
  if (den == 0) throw SubstitutionError("denominator vanishes at the evaluation point");
  return num_.value(values) / den;
}

RationalFunction substitute(const Polynomial& p, const Bindings& bindings) {
  std::map<std::pair<SymbolId, std::uint32_t>, RationalFunction> powers;
  auto power = [&](SymbolId id, std::uint32_t e) -> const RationalFunction& {
    auto key = std::make_pair(id, e);
    auto it = powers.find(key);
    if (it == powers.end()) it = powers.emplace(key, bindings.at(id).pow(e)).first;
    return it->second;
  };
  // Unbound part of each term stays polynomial; group terms by their bound
  // part so each distinct bound product is formed once.
  std::map<Monomial, Polynomial, MonomialLess> groups;
  for (const auto& t : p.terms()) {
    Monomial bound = t.monomial.restricted([&](SymbolId id) { return bindings.count(id) > 0; });
    Monomial free = t.monomial.restricted([&](SymbolId id) { return bindings.count(id) == 0; });
    groups[bound] += Polynomial::monomial(free, t.coefficient);
  }
  RationalFunction out;
  for (const auto& [bound, coefficient] : groups) {
    RationalFunction product(coefficient);
    for (const auto& [id, e] : bound.factors()) product *= power(id, e);
    out += product;
  }
  return out;
}

RationalFunction RationalFunction::substitute(const Bindings& bindings) const {
  RationalFunction num = slowfast::substitute(num_, bindings);
  if (den_.empty()) return num;
  RationalFunction den(1);
  for (const auto& f : den_) den *= slowfast::substitute(f.base, bindings).pow(f.exponent);
  if (den.is_zero()) {
    for (const auto& [id, value] : bindings) {
      Bindings single{{id, value}};
      RationalFunction d(1);
      for (const auto& f : den_) d *= slowfast::substitute(f.base, single).pow(f.exponent);
      if (d.is_zero()) {
        throw SubstitutionError("denominator vanishes after substituting symbol #" + std::to_string(id), id);
      }
    }
    throw SubstitutionError("denominator vanishes under the joint bindings");
  }
  return num / den;
}

std::string RationalFunction::to_string(const SymbolTable& symbols) const {
  if (den_.empty()) return num_.to_string(symbols);
  std::ostringstream os;
  if (num_.size() > 1) {
    os << "(" << num_.to_string(symbols) << ")";
  } else {
    os << num_.to_string(symbols);
  }
  os << "/";
  const bool wrap = den_.size() > 1 || den_[0].exponent > 1 || den_[0].base.size() > 1;
  if (wrap) os << "(";
  bool first = true;
  for (const auto& f : den_) {
    if (!first) os << "*";
    first = false;
    if (f.base.size() > 1) {
      os << "(" << f.base.to_string(symbols) << ")";
    } else {
      os << f.base.to_string(symbols);
    }
    if (f.exponent > 1) os << "^" << f.exponent;
  }
  if (wrap) os << ")";
  return os.str();
}

bool operator==(const RationalFunction& a, const RationalFunction& b) {
  if (a.den_.empty() && b.den_.empty()) return a.num_ == b.num_;
  return (a - b).is_zero();
}

RFVector to_rf(const PolyVector& v) {
  RFVector out;
  out.reserve(v.size());
  for (const auto& p : v) out.emplace_back(p);
  return out;
}

}  // namespace slowfast
