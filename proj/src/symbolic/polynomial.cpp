#include "slowfast/symbolic/polynomial.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace slowfast {

// ---------------------------------------------------------------- Monomial

Monomial Monomial::variable(SymbolId id, std::uint32_t exponent) {
  Monomial m;
  if (exponent > 0) m.factors_.emplace_back(id, exponent);
  return m;
}

std::uint32_t Monomial::degree() const {
  std::uint32_t d = 0;
  for (const auto& [id, e] : factors_) d += e;
  return d;
}

std::uint32_t Monomial::exponent(SymbolId id) const {
  for (const auto& [v, e] : factors_) {
    if (v == id) return e;
    if (v > id) break;
  }
  return 0;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial out;
  out.factors_.reserve(factors_.size() + other.factors_.size());
  auto a = factors_.begin();
  auto b = other.factors_.begin();
  while (a != factors_.end() || b != other.factors_.end()) {
    if (b == other.factors_.end() || (a != factors_.end() && a->first < b->first)) {
      out.factors_.push_back(*a++);
    } else if (a == factors_.end() || b->first < a->first) {
      out.factors_.push_back(*b++);
    } else {
      out.factors_.emplace_back(a->first, a->second + b->second);
      ++a;
      ++b;
    }
  }
  return out;
}

bool Monomial::divides(const Monomial& other) const {
  for (const auto& [id, e] : factors_) {
    if (other.exponent(id) < e) return false;
  }
  return true;
}

Monomial Monomial::quotient_of(const Monomial& other) const {
  Monomial out;
  for (const auto& [id, e] : other.factors_) {
    const std::uint32_t mine = exponent(id);
    if (mine > e) throw DivisionError("monomial does not divide");
    if (e > mine) out.factors_.emplace_back(id, e - mine);
  }
  return out;
}

std::pair<Monomial, std::uint32_t> Monomial::without(SymbolId id) const {
  Monomial out;
  std::uint32_t removed = 0;
  for (const auto& f : factors_) {
    if (f.first == id) {
      removed = f.second;
    } else {
      out.factors_.push_back(f);
    }
  }
  return {out, removed};
}

Monomial Monomial::restricted(const std::function<bool(SymbolId)>& keep) const {
  Monomial out;
  for (const auto& f : factors_) {
    if (keep(f.first)) out.factors_.push_back(f);
  }
  return out;
}

int compare_grlex(const Monomial& a, const Monomial& b) {
  const auto da = a.degree();
  const auto db = b.degree();
  if (da != db) return da < db ? -1 : 1;
  const auto& fa = a.factors();
  const auto& fb = b.factors();
  std::size_t i = 0;
  while (i < fa.size() && i < fb.size()) {
    if (fa[i].first != fb[i].first) {
      // The monomial holding the lower symbol id has the larger exponent there.
      return fa[i].first < fb[i].first ? 1 : -1;
    }
    if (fa[i].second != fb[i].second) return fa[i].second < fb[i].second ? -1 : 1;
    ++i;
  }
  if (i < fa.size()) return 1;
  if (i < fb.size()) return -1;
  return 0;
}

// -------------------------------------------------------------- Polynomial

namespace {

bool term_desc(const Term& a, const Term& b) { return compare_grlex(a.monomial, b.monomial) > 0; }

// Merges two descending term lists with a sign on the second.
std::vector<Term> merge_terms(const std::vector<Term>& a, const std::vector<Term>& b, int sign) {
  std::vector<Term> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    int c = 0;
    if (i == a.size()) {
      c = -1;
    } else if (j == b.size()) {
      c = 1;
    } else {
      c = compare_grlex(a[i].monomial, b[j].monomial);
    }
    if (c > 0) {
      out.push_back(a[i++]);
    } else if (c < 0) {
      Term t = b[j++];
      if (sign < 0) t.coefficient = -t.coefficient;
      out.push_back(std::move(t));
    } else {
      Rational sum = sign < 0 ? Rational(a[i].coefficient - b[j].coefficient)
                              : Rational(a[i].coefficient + b[j].coefficient);
      if (sum != 0) out.push_back({a[i].monomial, sum});
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

Polynomial::Polynomial(const Rational& constant) {
  if (constant != 0) terms_.push_back({Monomial{}, constant});
}

Polynomial Polynomial::variable(SymbolId id) { return monomial(Monomial::variable(id)); }

Polynomial Polynomial::monomial(const Monomial& m, const Rational& coefficient) {
  Polynomial p;
  if (coefficient != 0) p.terms_.push_back({m, coefficient});
  return p;
}

Polynomial Polynomial::from_terms(std::vector<Term> terms) {
  Polynomial p;
  p.terms_ = std::move(terms);
  p.normalize();
  return p;
}

void Polynomial::normalize() {
  std::sort(terms_.begin(), terms_.end(), term_desc);
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!out.empty() && out.back().monomial == t.monomial) {
      out.back().coefficient += t.coefficient;
    } else {
      out.push_back(std::move(t));
    }
  }
  std::erase_if(out, [](const Term& t) { return t.coefficient == 0; });
  terms_ = std::move(out);
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].monomial.is_one());
}

Rational Polynomial::constant_term() const {
  if (!terms_.empty() && terms_.back().monomial.is_one()) return terms_.back().coefficient;
  return 0;
}

const Term& Polynomial::leading_term() const {
  if (terms_.empty()) throw std::logic_error("leading term of the zero polynomial");
  return terms_.front();
}

std::uint32_t Polynomial::total_degree() const { return terms_.empty() ? 0 : terms_.front().monomial.degree(); }

std::uint32_t Polynomial::degree_in(SymbolId id) const {
  std::uint32_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.monomial.exponent(id));
  return d;
}

std::set<SymbolId> Polynomial::variables() const {
  std::set<SymbolId> out;
  for (const auto& t : terms_) {
    for (const auto& f : t.monomial.factors()) out.insert(f.first);
  }
  return out;
}

bool Polynomial::depends_on(SymbolId id) const {
  return std::any_of(terms_.begin(), terms_.end(), [id](const Term& t) { return t.monomial.contains(id); });
}

bool Polynomial::depends_on_any(const std::function<bool(SymbolId)>& pred) const {
  for (const auto& t : terms_) {
    for (const auto& f : t.monomial.factors()) {
      if (pred(f.first)) return true;
    }
  }
  return false;
}

Polynomial Polynomial::operator-() const {
  Polynomial p = *this;
  for (auto& t : p.terms_) t.coefficient = -t.coefficient;
  return p;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  terms_ = merge_terms(terms_, other.terms_, 1);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  terms_ = merge_terms(terms_, other.terms_, -1);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.is_constant()) return b.scaled(a.terms_[0].coefficient);
  if (b.is_constant()) return a.scaled(b.terms_[0].coefficient);
  std::vector<Term> products;
  products.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& ta : a.terms_) {
    for (const auto& tb : b.terms_) {
      products.push_back({ta.monomial * tb.monomial, ta.coefficient * tb.coefficient});
    }
  }
  return Polynomial::from_terms(std::move(products));
}

Polynomial& Polynomial::operator*=(const Polynomial& other) {
  *this = *this * other;
  return *this;
}

Polynomial Polynomial::scaled(const Rational& factor) const {
  if (factor == 0) return {};
  Polynomial p = *this;
  for (auto& t : p.terms_) t.coefficient *= factor;
  return p;
}

Polynomial Polynomial::pow(unsigned exponent) const {
  Polynomial result(1);
  Polynomial base = *this;
  while (exponent > 0) {
    if (exponent & 1U) result *= base;
    exponent >>= 1U;
    if (exponent > 0) base *= base;
  }
  return result;
}

Polynomial Polynomial::derivative(SymbolId id) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    auto [rest, e] = t.monomial.without(id);
    if (e == 0) continue;
    out.push_back({rest * Monomial::variable(id, e - 1), t.coefficient * e});
  }
  return from_terms(std::move(out));
}

Polynomial Polynomial::evaluate(const Assignment& values) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    Rational c = t.coefficient;
    Monomial rest;
    for (const auto& [id, e] : t.monomial.factors()) {
      auto it = values.find(id);
      if (it == values.end()) {
        rest = rest * Monomial::variable(id, e);
      } else {
        Rational pw = 1;
        for (std::uint32_t k = 0; k < e; ++k) pw *= it->second;
        c *= pw;
      }
    }
    if (c != 0) out.push_back({rest, c});
  }
  return from_terms(std::move(out));
}

Rational Polynomial::value(const Assignment& values) const {
  Polynomial p = evaluate(values);
  if (!p.is_constant()) throw SymbolError("value(): unassigned symbols remain");
  return p.constant_term();
}

std::map<std::uint32_t, Polynomial> Polynomial::coefficients_in(SymbolId id) const {
  std::map<std::uint32_t, std::vector<Term>> buckets;
  for (const auto& t : terms_) {
    auto [rest, e] = t.monomial.without(id);
    buckets[e].push_back({rest, t.coefficient});
  }
  std::map<std::uint32_t, Polynomial> out;
  for (auto& [e, ts] : buckets) out.emplace(e, from_terms(std::move(ts)));
  return out;
}

std::map<Monomial, Polynomial, MonomialLess> Polynomial::split(const std::function<bool(SymbolId)>& in_key) const {
  std::map<Monomial, std::vector<Term>, MonomialLess> buckets;
  for (const auto& t : terms_) {
    Monomial key = t.monomial.restricted(in_key);
    Monomial rest = t.monomial.restricted([&](SymbolId id) { return !in_key(id); });
    buckets[key].push_back({rest, t.coefficient});
  }
  std::map<Monomial, Polynomial, MonomialLess> out;
  for (auto& [m, ts] : buckets) out.emplace(m, from_terms(std::move(ts)));
  return out;
}

std::optional<Polynomial> Polynomial::divide_exact(const Polynomial& divisor) const {
  if (divisor.is_zero()) throw DivisionError("division by the zero polynomial");
  if (is_zero()) return Polynomial{};
  if (divisor.is_constant()) return scaled(1 / divisor.terms_[0].coefficient);
  const Term& lead = divisor.leading_term();
  Polynomial remainder = *this;
  std::vector<Term> quotient;
  while (!remainder.is_zero()) {
    const Term& rt = remainder.leading_term();
    if (!lead.monomial.divides(rt.monomial)) return std::nullopt;
    Term q{lead.monomial.quotient_of(rt.monomial), rt.coefficient / lead.coefficient};
    Polynomial step = divisor * Polynomial::monomial(q.monomial, q.coefficient);
    remainder -= step;
    quotient.push_back(std::move(q));
  }
  return from_terms(std::move(quotient));
}

Polynomial Polynomial::divide_or_throw(const Polynomial& divisor) const {
  auto q = divide_exact(divisor);
  if (!q) throw DivisionError("inexact polynomial division");
  return *q;
}

Polynomial Polynomial::monic() const {
  if (is_zero()) return {};
  return scaled(1 / terms_.front().coefficient);
}

Monomial Polynomial::monomial_content() const {
  if (terms_.empty()) return {};
  std::vector<Monomial::Factor> common = terms_.front().monomial.factors();
  for (const auto& t : terms_) {
    std::vector<Monomial::Factor> next;
    for (const auto& [id, e] : common) {
      const auto te = t.monomial.exponent(id);
      if (te > 0) next.emplace_back(id, std::min(e, te));
    }
    common = std::move(next);
    if (common.empty()) break;
  }
  Monomial m;
  for (const auto& [id, e] : common) m = m * Monomial::variable(id, e);
  return m;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (!(a.terms_[i].monomial == b.terms_[i].monomial) || a.terms_[i].coefficient != b.terms_[i].coefficient) {
      return false;
    }
  }
  return true;
}

bool polynomial_less(const Polynomial& a, const Polynomial& b) {
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  for (std::size_t i = 0; i < ta.size() && i < tb.size(); ++i) {
    int c = compare_grlex(ta[i].monomial, tb[i].monomial);
    if (c != 0) return c < 0;
    if (ta[i].coefficient != tb[i].coefficient) return ta[i].coefficient < tb[i].coefficient;
  }
  return ta.size() < tb.size();
}

std::string rational_to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str();
}

Rational parse_rational(const std::string& text) {
  Rational q;
  if (q.set_str(text, 10) != 0) throw std::invalid_argument("not a rational literal: '" + text + "'");
  if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
  q.canonicalize();
  return q;
}

std::string Polynomial::to_string(const SymbolTable& symbols) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    Rational c = t.coefficient;
    const bool negative = c < 0;
    if (negative) c = -c;
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    bool need_star = false;
    if (c != 1 || t.monomial.is_one()) {
      os << rational_to_string(c);
      need_star = true;
    }
    // eps and parameters are written before states: k1*s*e rather than s*e*k1.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& [id, e] : t.monomial.factors()) {
        if ((symbols.kind(id) == SymbolKind::State) != (pass == 1)) continue;
        if (need_star) os << "*";
        os << symbols.name(id);
        if (e > 1) os << "^" << e;
        need_star = true;
      }
    }
  }
  return os.str();
}

}  // namespace slowfast
