#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "slowfast/reduction/reduction.hpp"

namespace slowfast {

namespace {

// Largest characteristic-polynomial degree handled by exact Routh-Hurwitz tests.
constexpr std::size_t kExactDegree = 4;

Rational exact_determinant(QMatrix a) {
  const std::size_t n = a.rows();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = n;
    for (std::size_t i = c; i < n; ++i)
      if (a(i, c) != 0) {
        pivot = i;
        break;
      }
    if (pivot == n) return 0;
    if (pivot != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(c, j), a(pivot, j));
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (a(i, c) == 0) continue;
      const Rational f = a(i, c) / a(c, c);
      for (std::size_t j = c; j < n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  return det;
}

std::vector<double> eigen_real_parts(const QMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.rows());
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)).get_d();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, false);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < n; ++i) out.push_back(solver.eigenvalues()(i).real());
  return out;
}

}  // namespace

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Indeterminate: return "indeterminate";
  }
  return "?";
}

std::vector<Rational> hurwitz_minors(const std::vector<Rational>& coefficients) {
  if (coefficients.empty() || coefficients[0] == 0) throw std::invalid_argument("Hurwitz test needs a nonzero leading coefficient");
  const std::size_t n = coefficients.size() - 1;
  const auto a = [&](long k) -> Rational {
    if (k < 0 || k > static_cast<long>(n)) return 0;
    return coefficients[static_cast<std::size_t>(k)] / coefficients[0];
  };
  // H(i, j) = a_{2j - i} with 1-based indices.
  QMatrix h(n, n, Rational(0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) = a(2 * static_cast<long>(j + 1) - static_cast<long>(i + 1));
  std::vector<Rational> minors;
  for (std::size_t k = 1; k <= n; ++k) {
    QMatrix lead(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) lead(i, j) = h(i, j);
    minors.push_back(exact_determinant(lead));
  }
  return minors;
}

EigenCertificate eigen_certificate(const RFMatrix& m, const ManifoldSampler& sampler, const CertificateOptions& options) {
  if (!m.is_square()) throw std::invalid_argument("eigenvalue certificate needs a square matrix");
  EigenCertificate cert;
  cert.matrix = m;
  const bool exact = m.rows() <= kExactDegree;
  cert.method = exact ? "routh_hurwitz_exact" : "numeric_sampling";
  if (m.rows() == 0) {
    cert.verdict = Verdict::Pass;
    return cert;
  }
  std::mt19937_64 rng(options.seed);
  double margin = std::numeric_limits<double>::infinity();
  bool failed = false;
  for (std::size_t attempt = 0; attempt < options.max_attempts && cert.samples.size() < options.samples; ++attempt) {
    auto point = sampler(rng);
    if (!point) {
      ++cert.rejected;
      continue;
    }
    QMatrix at;
    try {
      at = evaluate(m, *point);
    } catch (const std::exception&) {
      ++cert.rejected;
      continue;
    }
    EigenSample s;
    s.point = std::move(*point);
    s.real_parts = eigen_real_parts(at);
    const double worst = *std::max_element(s.real_parts.begin(), s.real_parts.end());
    bool ok = worst <= -options.nu_min;
    if (exact) {
      s.hurwitz_minors = hurwitz_minors(char_poly(at));
      const bool hurwitz = std::all_of(s.hurwitz_minors.begin(), s.hurwitz_minors.end(),
                                       [](const Rational& q) { return q > 0; });
      ok = ok && hurwitz;
      failed = failed || !hurwitz;
    }
    failed = failed || worst >= 0;
    s.passed = ok;
    margin = std::min(margin, -worst);
    cert.samples.push_back(std::move(s));
  }
  if (cert.samples.empty()) {
    cert.verdict = Verdict::Indeterminate;
    return cert;
  }
  cert.nu_margin = margin;
  if (failed) {
    cert.verdict = Verdict::Fail;
  } else {
    const bool all = std::all_of(cert.samples.begin(), cert.samples.end(), [](const EigenSample& s) { return s.passed; });
    cert.verdict = all ? Verdict::Pass : Verdict::Indeterminate;
  }
  return cert;
}

RFMatrix certificate_matrix(const ReducedSystem& reduced) { return reduced.stability_matrix; }

ManifoldSampler manifold_sampler(const ReducedSystem& reduced, const SymbolTable& symbols, const Assignment& fixed) {
  std::set<SymbolId> free;
  const auto collect = [&free](const RationalFunction& f) {
    for (auto id : f.variables()) free.insert(id);
  };
  for (const auto& f : reduced.manifold) collect(f);
  for (const auto& f : reduced.field) collect(f);
  for (const auto& [id, f] : reduced.eliminated.solved) collect(f);
  for (std::size_t i = 0; i < reduced.stability_matrix.rows(); ++i)
    for (std::size_t j = 0; j < reduced.stability_matrix.cols(); ++j) collect(reduced.stability_matrix(i, j));
  for (auto id : reduced.states) free.insert(id);
  for (const auto& [id, f] : reduced.eliminated.solved) free.erase(id);
  free.erase(symbols.epsilon());
  for (const auto& [id, v] : fixed) free.erase(id);
  const std::vector<SymbolId> draw(free.begin(), free.end());
  const bool complete = reduced.eliminated.complete;

  return [reduced, draw, fixed, complete](std::mt19937_64& rng) -> std::optional<Assignment> {
    if (!complete) return std::nullopt;
    Assignment point = random_positive_point(draw, rng);
    for (const auto& [id, v] : fixed) point[id] = v;
    try {
      for (const auto& [id, f] : reduced.eliminated.solved) {
        const Rational v = f.value(point);
        if (v < 0) return std::nullopt;
        point[id] = v;
      }
      for (const auto& f : reduced.manifold)
        if (f.value(point) != 0) return std::nullopt;
    } catch (const std::exception&) {
      return std::nullopt;
    }
    return point;
  };
}

}  // namespace slowfast
