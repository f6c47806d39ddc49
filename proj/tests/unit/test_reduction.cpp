#include <doctest.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>

#include "../support/random_ltc.hpp"
#include "helpers.hpp"
#include "slowfast/model/model_file.hpp"
#include "slowfast/reduction/reduction.hpp"

using namespace slowfast;
using testing_support::poly;
using testing_support::rf;

namespace {

struct Prepared {
  EpsilonGradedSystem sys;
  Partition part;
  ScaledSystem scaled;
  Assignment sample;
};

Prepared prepare(const std::string& name, const std::vector<std::string>& fast_transport = {}) {
  Model model = builtin_model(name);
  if (!fast_transport.empty()) set_fast_transport(model, fast_transport);
  Prepared p;
  p.sys = assemble(model);
  p.part = resolve_partition(p.sys, model.fast);
  p.scaled = apply_scaling(p.sys, p.part);
  std::mt19937_64 rng(1);
  p.sample = generic_sample(p.sys.symbols, rng);
  return p;
}

SymbolId id_of(const EpsilonGradedSystem& sys, const std::string& name) { return *sys.symbols.find(name); }

const RationalFunction& field_of(const EliminatedForm& e, SymbolId id) {
  for (std::size_t i = 0; i < e.states.size(); ++i)
    if (e.states[i] == id) return e.field[i];
  throw std::out_of_range("state not kept");
}

const RationalFunction& field_of(const ReducedSystem& r, SymbolId id) {
  for (std::size_t i = 0; i < r.states.size(); ++i)
    if (r.states[i] == id) return r.field[i];
  throw std::out_of_range("state not kept");
}

bool proportional(const RFVector& a, const RFVector& b) {
  RationalFunction ratio;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero() != b[i].is_zero()) return false;
    if (a[i].is_zero()) continue;
    if (ratio.is_zero()) ratio = a[i] / b[i];
    else if (a[i] != ratio * b[i]) return false;
  }
  return true;
}

// Roots of a real polynomial (leading coefficient first) by Durand-Kerner.
std::vector<std::complex<double>> poly_roots(const std::vector<Rational>& c) {
  const std::size_t n = c.size() - 1;
  std::vector<std::complex<double>> z(n);
  for (std::size_t k = 0; k < n; ++k) z[k] = std::pow(std::complex<double>(0.4, 0.9), static_cast<double>(k));
  const auto eval = [&c](std::complex<double> x) {
    std::complex<double> v = 0;
    for (const auto& a : c) v = v * x + a.get_d() / c[0].get_d();
    return v;
  };
  for (int it = 0; it < 500; ++it)
    for (std::size_t k = 0; k < n; ++k) {
      std::complex<double> den = 1;
      for (std::size_t j = 0; j < n; ++j)
        if (j != k) den *= z[k] - z[j];
      z[k] -= eval(z[k]) / den;
    }
  return z;
}

}  // namespace

TEST_CASE("decomposition of the three-dimensional Michaelis-Menten system") {
  Prepared p = prepare("mm3d");
  SymbolTable& t = p.sys.symbols;
  const auto& sc = p.scaled.system;
  const Decomposition dec = find_decomposition(sc.grade(0), sc.states, p.sample);
  REQUIRE(dec.rank() == 1);
  CHECK(proportional({dec.p(0, 0), dec.p(1, 0), dec.p(2, 0)}, {RationalFunction(0), 1, -1}));
  CHECK(proportional(dec.mu, {rf(t, "k1*e*s - (km1 + k2)*c")}));
  const RFVector prod = dec.p * dec.mu;
  const RFVector h0 = to_rf(sc.grade(0));
  for (std::size_t i = 0; i < 3; ++i) CHECK(prod[i] == h0[i]);

  const RationalFunction d = rf(t, "k1*s + km1 + k2");
  RFMatrix expect(3, 3, RationalFunction());
  expect(0, 0) = 1;
  expect(1, 0) = rf(t, "-k1*e") / d;
  expect(1, 1) = rf(t, "km1 + k2") / d;
  expect(1, 2) = rf(t, "km1 + k2") / d;
  expect(2, 0) = rf(t, "k1*e") / d;
  expect(2, 1) = rf(t, "k1*s") / d;
  expect(2, 2) = rf(t, "k1*s") / d;
  CHECK(projection(dec) == expect);
  CHECK(evaluate(dec.dmu_p, p.sample)(0, 0) < 0);
}

TEST_CASE("decomposition of the competitive inhibition system") {
  Prepared p = prepare("inhibitor");
  SymbolTable& t = p.sys.symbols;
  const auto& sc = p.scaled.system;
  const Decomposition dec = find_decomposition(sc.grade(0), sc.states, p.sample);
  REQUIRE(dec.rank() == 2);
  CHECK(dec.method == "constant");
  const std::vector<std::vector<int>> rows{{-1, -1}, {0, 0}, {1, 0}, {0, 1}, {0, 0}};
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t k = 0; k < 2; ++k) CHECK(dec.p(i, k) == RationalFunction(rows[i][k]));
  CHECK(dec.mu[0] == rf(t, "k1*e*s - km1*c1 - k2*c1"));
  CHECK(dec.mu[1] == rf(t, "k3*e*y - km3*c2"));
}

TEST_CASE("full-rank grade zero has no critical manifold") {
  SymbolTable t;
  const SymbolId x = t.add("x", SymbolKind::State), y = t.add("y", SymbolKind::State);
  const PolyVector h0{poly(t, "x + y"), poly(t, "x - 2*y")};
  std::mt19937_64 rng(3);
  CHECK_THROWS_AS(find_decomposition(h0, {x, y}, generic_sample(t, rng)), DecompositionError);
  // A supplied P mu that does not reproduce h0 is rejected.
  RFMatrix pm(2, 1, RationalFunction(1));
  CHECK_THROWS_AS(supplied_decomposition(h0, {x, y}, pm, {RationalFunction::variable(x)}, generic_sample(t, rng)),
                  DecompositionError);
}

TEST_CASE("zero first-order term reduces to the zero field") {
  Prepared p = prepare("mm3d");
  const auto& sc = p.scaled.system;
  const Decomposition dec = find_decomposition(sc.grade(0), sc.states, p.sample);
  const RFVector q = reduce_field(dec, RFVector(3));
  CHECK(testing_support::all_zero(q));
  const FirstOrderManifold phi = slow_manifold_first_order(dec, RFVector(3));
  CHECK(phi.order0 == dec.mu);
  CHECK(testing_support::all_zero(phi.order1));
}

TEST_CASE("standard reduction of two-dimensional Michaelis-Menten") {
  Prepared p = prepare("mm2d");
  SymbolTable& t = p.sys.symbols;
  const ReducedSystem red = standard_reduce(p.sys, p.part);
  REQUIRE(red.states.size() == 1);
  CHECK(red.field[0] == rf(t, "-k1*k2*e0*s", "k1*s + km1 + k2"));
  CHECK(red.eliminated.solved.at(id_of(p.sys, "c")) == rf(t, "k1*e0*s", "k1*s + km1 + k2"));
  CHECK(red.kind == "standard");
  CHECK(red.manifold_dimension == 1);

  const ReducedSystem general = reduce(p.scaled, find_decomposition(p.scaled.system.grade(0), p.scaled.system.states,
                                                                    p.sample));
  CHECK(field_of(general.eliminated, id_of(p.sys, "s")) == red.field[0]);
  const InitialValueResult iv = reduced_initial_value(general, p.scaled);
  CHECK(iv.point.at(id_of(p.sys, "c")) == rf(t, "k1*e0*s0", "k1*s0 + km1 + k2"));
  CHECK(iv.point.at(id_of(p.sys, "s")) == rf(t, "s0"));
}

TEST_CASE("chain of three complexes: denominator against an exact point oracle") {
  Prepared p = prepare("chain3");
  SymbolTable& t = p.sys.symbols;
  const ReducedSystem red = standard_reduce(p.sys, p.part);
  const SymbolId s = id_of(p.sys, "s");
  REQUIRE(red.states == std::vector<SymbolId>{s});

  // Quasi-steady state of the complexes at random rational values, by Cramer's rule.
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const Assignment at = generic_sample(t, rng);
    const auto v = [&](const char* name) { return at.at(id_of(p.sys, name)); };
    const Rational k1 = v("k1"), km1 = v("km1"), k2 = v("k2"), km2 = v("km2"), k3 = v("k3"), km3 = v("km3"),
                   k4 = v("k4"), e0 = v("e0"), sv = v("s");
    // Unknowns c1, c2, c3 with e = e0 - c1 - c2 - c3.
    const Rational a[3][3] = {{-k1 * sv - km1 - k2, -k1 * sv + km2, -k1 * sv},
                              {k2, -km2 - k3, km3},
                              {0, k3, -km3 - k4}};
    const Rational b[3] = {-k1 * e0 * sv, 0, 0};
    const auto det3 = [](const Rational m[3][3]) -> Rational {
      return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
             m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    const Rational det = det3(a);
    Rational c[3];
    for (int k = 0; k < 3; ++k) {
      Rational m[3][3];
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i][j] = j == k ? b[i] : a[i][j];
      c[k] = det3(m) / det;
    }
    const Rational sdot = -k1 * (e0 - c[0] - c[1] - c[2]) * sv + km1 * c[0];
    CHECK(red.field[0].value(at) == sdot);
  }

  const RationalFunction d = rf(t,
                                "(k1*k2*k3 + k1*k2*k4 + k1*k2*km3 + k1*k3*k4 + k1*k4*km2 + k1*km2*km3)*s"
                                " + k3*k4*km1 + k4*km1*km2 + km1*km2*km3 + k2*k3*k4");
  CHECK(red.field[0] == rf(t, "-k1*k2*k3*k4*e0*s") / d);
  CHECK(d.numerator().size() == 10);
  // Without the k2*k3*k4 term the field would differ.
  const RationalFunction nine = d - rf(t, "k2*k3*k4");
  CHECK(red.field[0] != rf(t, "-k1*k2*k3*k4*e0*s") / nine);
}

TEST_CASE("chain with a slow last step has a stationary substrate") {
  Prepared p = prepare("chain3_slow");
  const ReducedSystem red = standard_reduce(p.sys, p.part);
  CHECK(field_of(red, id_of(p.sys, "s")).is_zero());
}

TEST_CASE("standard and general reductions agree") {
  for (const std::string name : {"mm2d", "chain3", "chain3_slow"}) {
    CAPTURE(name);
    Prepared p = prepare(name);
    const ReducedSystem standard = standard_reduce(p.sys, p.part);
    const auto& sc = p.scaled.system;
    const ReducedSystem general = reduce(p.scaled, find_decomposition(sc.grade(0), sc.states, p.sample));
    for (std::size_t i = 0; i < standard.states.size(); ++i) {
      const RationalFunction g = field_of(general, standard.states[i]).substitute(general.eliminated.solved);
      CHECK(g == standard.field[i]);
    }
  }
}

TEST_CASE("projection identities on random Tikhonov consistent systems") {
  const auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240611);
  int built[2] = {0, 0};
  int attempts = 0, agreements = 0;
  while ((built[0] < 25 || built[1] < 25) && attempts < 400) {
    ++attempts;
    const bool standard = built[0] < 25;
    auto c = testing_support::random_ltc_case(rng, standard);
    if (!c) continue;
    ++built[standard ? 0 : 1];
    const auto rep = testing_support::check_case(*c);
    CAPTURE(attempts);
    CHECK(rep.idempotent);
    CHECK(rep.kills_p);
    CHECK(rep.tangent);
    CHECK(rep.field_tangent);
    CHECK(rep.projects_h1);
    CHECK(rep.hadamard);
    CHECK(rep.invariant);

    if (standard) {
      // Psi = G0^-1 g1 on y = 0.
      const auto y = fast_symbols(c->sys, c->part);
      Bindings at_zero;
      for (auto id : y) at_zero[id] = RationalFunction();
      const RFVector h1 = to_rf(c->sys.grade(1));
      const FirstOrderManifold phi = slow_manifold_first_order(c->dec, h1);
      PolyVector g0;
      RFVector g1;
      for (auto i : c->part.fast) {
        g0.push_back(c->sys.grade(0)[i]);
        g1.push_back(h1[i].substitute(at_zero));
      }
      const RFVector expect = solve_or_throw(substitute(hadamard_factor(g0, y), at_zero), g1);
      CHECK(substitute(phi.order1, at_zero) == expect);

      // The standard formula matches the general reduction of the scaled system.
      const ReducedSystem std_red = standard_reduce(c->sys, c->part);
      const ScaledSystem scaled = apply_scaling(c->sys, c->part);
      std::mt19937_64 srng(attempts);
      const auto& sc = scaled.system;
      const ReducedSystem general = reduce(scaled, find_decomposition(sc.grade(0), sc.states,
                                                                      generic_sample(sc.symbols, srng)));
      if (general.eliminated.complete) {
        for (std::size_t i = 0; i < std_red.states.size(); ++i)
          CHECK(field_of(general, std_red.states[i]).substitute(general.eliminated.solved) == std_red.field[i]);
        ++agreements;
      }
    }
  }
  CHECK(built[0] == 25);
  CHECK(built[1] == 25);
  CHECK(agreements >= 20);
  CHECK(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() < 60.0);
}

TEST_CASE("eigenvalue certificates") {
  SUBCASE("Michaelis-Menten is attracting") {
    Prepared p = prepare("mm2d");
    const ReducedSystem red = standard_reduce(p.sys, p.part);
    const EigenCertificate cert = eigen_certificate(certificate_matrix(red), manifold_sampler(red, p.sys.symbols));
    CHECK(cert.verdict == Verdict::Pass);
    CHECK(cert.method == "routh_hurwitz_exact");
    CHECK(cert.samples.size() == CertificateOptions{}.samples);
  }
  SUBCASE("a zero matrix fails") {
    RFMatrix zero(1, 1, RationalFunction());
    const ManifoldSampler any = [](std::mt19937_64&) { return std::optional<Assignment>(Assignment{}); };
    CHECK(eigen_certificate(zero, any).verdict == Verdict::Fail);
  }
  SUBCASE("chain block at unit constants") {
    Prepared p = prepare("chain3");
    const ReducedSystem red = standard_reduce(p.sys, p.part);
    Assignment fixed;
    for (auto id : p.sys.parameters()) fixed[id] = 1;
    fixed[id_of(p.sys, "s")] = 1;
    const EigenCertificate cert = eigen_certificate(certificate_matrix(red), manifold_sampler(red, p.sys.symbols, fixed));
    REQUIRE(cert.verdict == Verdict::Pass);
    const QMatrix at = evaluate(red.stability_matrix, fixed);
    auto roots = poly_roots(char_poly(at));
    std::vector<double> expect;
    for (auto z : roots) expect.push_back(z.real());
    auto got = cert.samples.front().real_parts;
    std::sort(expect.begin(), expect.end());
    std::sort(got.begin(), got.end());
    REQUIRE(got.size() == expect.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-9));
    for (const auto& m : cert.samples.front().hurwitz_minors) CHECK(m > 0);
  }
  SUBCASE("Hurwitz minors of a known polynomial") {
    // (x+1)(x+2)(x+3) = x^3 + 6x^2 + 11x + 6.
    const auto minors = hurwitz_minors({1, 6, 11, 6});
    REQUIRE(minors.size() == 3);
    CHECK(minors[0] == 6);
    CHECK(minors[1] == 60);
    CHECK(minors[2] == 360);
    // x^2 - x + 1 has roots in the right half plane.
    CHECK(hurwitz_minors({1, -1, 1})[0] < 0);
  }
}

TEST_CASE("transport of first integrals") {
  Prepared p = prepare("mm3d");
  SymbolTable& t = p.sys.symbols;
  const TransportedIntegral ec = transform_first_integral(rf(t, "e + c"), p.sys, p.part);
  CHECK(ec.order == 1);
  CHECK(ec.value == rf(t, "e + c"));
  const TransportedIntegral constant = transform_first_integral(RationalFunction(3), p.sys, p.part);
  CHECK(constant.order == 0);
  CHECK(constant.value == RationalFunction(3));
  CHECK_THROWS_AS(transform_first_integral(rf(t, "s"), p.sys, p.part), std::invalid_argument);

  // The enzyme total on the chain, with e kept as a state.
  Model model = builtin_model("chain3");
  model.eliminate.clear();
  const EpsilonGradedSystem sys = assemble(model);
  const Partition part = resolve_partition(sys, {"e", "c1", "c2", "c3"});
  const ScaledSystem scaled = apply_scaling(sys, part);
  SymbolTable chain_symbols = sys.symbols;
  const TransportedIntegral total = transform_first_integral(rf(chain_symbols, "e + c1 + c2 + c3"), sys, part);
  REQUIRE(total.order == 1);
  std::mt19937_64 rng(5);
  const ReducedSystem red = reduce(scaled, find_decomposition(scaled.system.grade(0), scaled.system.states,
                                                              generic_sample(sys.symbols, rng)));
  RationalFunction lie;
  for (std::size_t i = 0; i < red.states.size(); ++i) lie += total.value.derivative(red.states[i]) * red.field[i];
  CHECK(lie.substitute(red.eliminated.solved).is_zero());
}

TEST_CASE("fast integrals and the reduced initial value of a linear system") {
  SymbolTable t;
  const SymbolId x = t.add("x", SymbolKind::State), y = t.add("y", SymbolKind::State);
  const RationalFunction b = rf(t, "b"), c = rf(t, "c");
  RFMatrix f0(1, 1, b), g0(1, 1, c);
  const RFVector psi = fast_integrals_approx(f0, g0, {x}, {y});
  REQUIRE(psi.size() == 1);
  CHECK(psi[0] == rf(t, "c*x - b*y", "c"));

  const Bindings z0{{x, rf(t, "x0")}, {y, rf(t, "y0")}};
  const InitialValueResult iv = reduced_initial_value({RationalFunction::variable(y)}, psi, {x, y}, z0);
  CHECK(iv.method == "exact");
  CHECK(iv.point.at(x) == rf(t, "c*x0 - b*y0", "c"));
  CHECK(iv.point.at(y).is_zero());

  const Bindings on{{x, rf(t, "x0")}, {y, RationalFunction()}};
  const InitialValueResult same = reduced_initial_value({RationalFunction::variable(y)}, psi, {x, y}, on);
  CHECK(same.point.at(x) == on.at(x));
  CHECK(same.point.at(y).is_zero());

  // A curved manifold needs Newton: y = x^2 with x + y conserved.
  const Bindings num{{x, RationalFunction(1)}, {y, RationalFunction(1)}};
  const InitialValueResult newton =
      reduced_initial_value({rf(t, "y - x^2")}, {rf(t, "x + y")}, {x, y}, num, Assignment{});
  CHECK(newton.method == "newton");
  const double xv = newton.point.at(x).value({}).get_d();
  CHECK(xv == doctest::Approx((-1 + std::sqrt(9.0)) / 2).epsilon(1e-10));
}

TEST_CASE("nonstandard reduction") {
  SUBCASE("agrees with the general reduction on mm3d") {
    Prepared p = prepare("mm3d");
    const auto& sc = p.scaled.system;
    const ReducedSystem general = reduce(p.scaled, find_decomposition(sc.grade(0), sc.states, p.sample));
    const ReducedSystem ns = nonstandard_reduce(p.scaled, p.sample);
    CHECK(ns.kind == "nonstandard");
    CHECK(ns.manifold_dimension == 2);
    const SymbolId s = id_of(p.sys, "s");
    CHECK(field_of(ns.eliminated, s) == field_of(general.eliminated, s));
    CHECK(field_of(ns.eliminated, s) == rf(p.sys.symbols, "-k1*k2*e0*s", "k1*s + km1 + k2"));
  }
  SUBCASE("slow degradation of free enzyme") {
    Prepared p = prepare("mm3d_deg");
    SymbolTable& t = p.sys.symbols;
    const ReducedSystem ns = nonstandard_reduce(p.scaled, p.sample);
    const EliminatedForm& e = ns.eliminated;
    const SymbolId s = id_of(p.sys, "s"), en = id_of(p.sys, "e"), c = id_of(p.sys, "c");
    CHECK(e.solved.at(c) == rf(t, "k1*e*s", "km1 + k2"));
    CHECK(field_of(e, s) == rf(t, "-k1*k2*e*s", "km1 + k2"));
    const RationalFunction inner = rf(t, "-k1*k2*e*s", "km1 + k2") + rf(t, "delta*(km1 + k2)", "k1");
    CHECK(field_of(e, en) == rf(t, "-k1*e", "k1*s + km1 + k2") * inner);
  }
  SUBCASE("rank-deficient fast block gives a larger manifold") {
    SymbolTable t;
    const SymbolId x = t.add("x", SymbolKind::State), y1 = t.add("y1", SymbolKind::State),
                   y2 = t.add("y2", SymbolKind::State);
    EpsilonGradedSystem sys = make_system(t, {x, y1, y2});
    // x' = y1 - eps x, y' = A22 y + eps g(x, y) with rank A22 = 1 and g(x,0) in its range.
    sys.add_term(0, 0, poly(sys.symbols, "y1"));
    sys.add_term(1, 0, poly(sys.symbols, "-x"));
    sys.add_term(0, 1, poly(sys.symbols, "-y1 - y2"));
    sys.add_term(0, 2, poly(sys.symbols, "-y1 - y2"));
    sys.add_term(1, 1, poly(sys.symbols, "x + y1*y2"));
    sys.add_term(1, 2, poly(sys.symbols, "x"));
    sys.normalize();
    const Partition part = make_partition(sys, std::vector<std::size_t>{1, 2});
    const ScaledSystem scaled = apply_scaling(sys, part, true);
    std::mt19937_64 rng(9);
    const Assignment sample = generic_sample(sys.symbols, rng);
    const ReducedSystem red = nonstandard_reduce(scaled, sample);
    CHECK(red.manifold_dimension == 2);
    CHECK(red.manifold_dimension > sys.dimension() - part.fast.size());
    // Direct check: the zero set of the scaled grade-0 field has codimension
    // rank D h0 at a generic point.
    const QMatrix jac = evaluate(jacobian(scaled.system.grade(0), scaled.system.states), sample);
    CHECK(sys.dimension() - rank(jac) == red.manifold_dimension);
    REQUIRE(red.decomposition);
    CHECK(testing_support::all_zero(red.decomposition->dmu * red.field));
    CHECK(red.decomposition->nonstandard->s1 == 1);
    CHECK(evaluate(red.stability_matrix, sample)(0, 0) < 0);

    // g(x,0) outside the range of A22 is refused.
    EpsilonGradedSystem bad = sys;
    bad.add_term(1, 2, poly(bad.symbols, "x"));
    bad.normalize();
    const ScaledSystem bad_scaled = apply_scaling(bad, part, true);
    CHECK_THROWS_AS(nonstandard_reduce(bad_scaled, sample), NonstandardError);
  }
}

TEST_CASE("compartment models") {
  SUBCASE("Michaelis-Menten with slow diffusion") {
    Prepared p = prepare("mm_diffusion");
    SymbolTable& t = p.sys.symbols;
    const auto& sc = p.scaled.system;
    const ReducedSystem red = reduce(p.scaled, find_decomposition(sc.grade(0), sc.states, p.sample));
    CHECK(red.manifold_dimension == 8);
    const auto cstar = [&](int i) {
      const std::string k = std::to_string(i);
      return rf(t, "k1*s_" + k + "*w_" + k, "k1*s_" + k + " + km1 + k2");
    };
    for (int i = 1; i <= 4; ++i) CHECK(red.eliminated.solved.at(id_of(p.sys, "c_" + std::to_string(i))) == cstar(i));
    const auto w = [&](int i) { return rf(t, "w_" + std::to_string(i)); };
    const RationalFunction te = rf(t, "theta_e"), dc = rf(t, "theta_c - theta_e");
    const RationalFunction w1 = te * (w(2) - w(1)) + dc * (cstar(2) - cstar(1));
    const RationalFunction w2 = te * (w(1) - 2 * w(2) + w(3)) + dc * (cstar(1) - 2 * cstar(2) + cstar(3));
    CHECK(field_of(red.eliminated, id_of(p.sys, "w_1")) == w1);
    CHECK(field_of(red.eliminated, id_of(p.sys, "w_2")) == w2);
    const RationalFunction s1 = rf(t, "theta_s*(s_2 - s_1)") - rf(t, "k1*k2*s_1*w_1", "k1*s_1 + km1 + k2");
    CHECK(field_of(red.eliminated, id_of(p.sys, "s_1")) == s1);
  }
  SUBCASE("binding with fast substrate transport") {
    Prepared p = prepare("transport_binding", {"s"});
    SymbolTable& t = p.sys.symbols;
    const auto& sc = p.scaled.system;
    const ReducedSystem red = reduce(p.scaled, find_decomposition(sc.grade(0), sc.states, p.sample));
    const InitialValueResult iv = reduced_initial_value(red, p.scaled);
    const RationalFunction sbar = rf(t, "km1*(s0_1 + s0_2 + s0_3 + s0_4 + c0_1 + c0_2 + c0_3 + c0_4)",
                                     "k1*(p0_1 + p0_2 + p0_3 + p0_4) + 4*km1");
    for (int i = 1; i <= 4; ++i) {
      const std::string k = std::to_string(i);
      CHECK(iv.point.at(id_of(p.sys, "s_" + k)) == sbar);
      CHECK(iv.point.at(id_of(p.sys, "p_" + k)) == rf(t, "p0_" + k));
      CHECK(iv.point.at(id_of(p.sys, "c_" + k)) == rf(t, "k1*p0_" + k) * sbar / rf(t, "km1"));
    }
  }
}
