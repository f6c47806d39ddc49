#include <doctest.h>

#include <cmath>
#include <sstream>

#include "helpers.hpp"
#include "slowfast/model/model_file.hpp"
#include "slowfast/sim/sim.hpp"

using namespace slowfast;
using testing_support::rf;

namespace {

const OdeFunction decay = [](double, const std::vector<double>& z, std::vector<double>& dz) { dz[0] = -z[0]; };

Assignment unit_parameters(const SymbolTable& t) {
  Assignment a;
  for (SymbolId id = 0; id < t.size(); ++id)
    if (t.kind(id) == SymbolKind::Parameter) a[id] = 1;
  return a;
}

struct Setup {
  EpsilonGradedSystem sys;
  Partition part;
  ScaledSystem scaled;
  Assignment sample;
};

Setup setup(const std::string& name) {
  const Model model = builtin_model(name);
  Setup s;
  s.sys = assemble(model);
  s.part = resolve_partition(s.sys, model.fast);
  s.scaled = apply_scaling(s.sys, s.part);
  std::mt19937_64 rng(1);
  s.sample = generic_sample(s.sys.symbols, rng);
  return s;
}

}  // namespace

TEST_CASE("integrator on exponential decay") {
  const Trajectory traj = integrate(decay, {1.0}, 0.0, 1.0);
  CHECK(traj.t.back() == 1.0);
  CHECK(std::abs(traj.final_state()[0] - std::exp(-1.0)) < 1e-8);
  for (std::size_t k = 1; k < traj.t.size(); ++k) CHECK(traj.t[k] > traj.t[k - 1]);
  // Dense output between steps.
  CHECK(std::abs(traj.at(0.37)[0] - std::exp(-0.37)) < 1e-6);
  CHECK(traj.stats.steps + 1 == traj.t.size());
}

TEST_CASE("integrator order") {
  const auto error_with_step = [](double h) {
    IntegrateOptions o;
    o.fixed_step = h;
    return std::abs(integrate(decay, {1.0}, 0.0, 1.0, o).final_state()[0] - std::exp(-1.0));
  };
  // Halving a fixed step cuts the global error by at least 2^4.
  CHECK(error_with_step(0.1) / error_with_step(0.05) >= 16);
  CHECK(error_with_step(0.2) / error_with_step(0.1) >= 16);

  const auto error_with_rtol = [](double rtol) {
    IntegrateOptions o;
    o.rtol = rtol;
    o.atol = rtol * 1e-3;
    return std::abs(integrate(decay, {1.0}, 0.0, 3.0, o).final_state()[0] - std::exp(-3.0));
  };
  // Tolerance proportionality: 100x tighter tolerance, at least 2^4 smaller error.
  CHECK(error_with_rtol(1e-6) / error_with_rtol(1e-8) >= 16);
}

TEST_CASE("linear reduced equation") {
  const double a = -1, x0 = 2;
  const OdeFunction f = [a](double, const std::vector<double>& z, std::vector<double>& dz) { dz[0] = a * z[0]; };
  const Trajectory traj = integrate(f, {x0}, 0.0, 2.0);
  for (double tau : {0.5, 1.0, 2.0}) CHECK(traj.at(tau)[0] == doctest::Approx(x0 * std::exp(a * tau)).epsilon(1e-7));
}

TEST_CASE("integrator failures") {
  const OdeFunction stiff = [](double, const std::vector<double>& z, std::vector<double>& dz) { dz[0] = -1e15 * z[0]; };
  CHECK_THROWS_AS(integrate(stiff, {1.0}, 0.0, 1.0), StiffnessError);
  try {
    integrate(stiff, {1.0}, 0.0, 1.0);
  } catch (const StiffnessError& e) {
    CHECK(e.tau() >= 0);
    CHECK(e.tau() < 1);
  }

  SymbolTable t;
  const SymbolId z = t.add("z", SymbolKind::State);
  const CompiledField pole({rf(t, "-1", "z")}, {z}, {});
  // z' = -1/z reaches z = 0 at tau = 1/2.
  CHECK_THROWS(integrate(ode_function(pole), {1.0}, 0.0, 1.0));
  CHECK_THROWS_AS(integrate(decay, {1.0}, 1.0, 0.0), std::invalid_argument);
}

TEST_CASE("first integrals are conserved along full trajectories") {
  Setup s = setup("mm3d");
  const Assignment params = unit_parameters(s.sys.symbols);
  const double eps = 1e-2;
  IntegrateOptions o;
  o.rtol = 1e-10;
  o.atol = 1e-12;
  const std::vector<double> z0 = scaled_initial_values(s.scaled, params, eps);
  const Trajectory traj = integrate(slow_time_field(s.scaled, params, eps), z0, 0.0, 2.0, o);
  // States are (s, e, c); e + c is conserved.
  double norm = 0;
  for (double v : z0) norm = std::max(norm, std::abs(v));
  double drift = 0;
  for (const auto& z : traj.z) drift = std::max(drift, std::abs(z[1] + z[2] - z0[1] - z0[2]));
  CHECK(drift < 1e-9);
  CHECK(drift < 10 * o.rtol * norm);
}

TEST_CASE("sup-norm comparison and CSV export") {
  const Trajectory traj = integrate(decay, {1.0}, 0.0, 2.0);
  const auto same = sup_errors(traj, traj, 0.1, 2.0, 101);
  CHECK(same == std::vector<double>{0.0});
  std::ostringstream csv;
  write_csv(csv, traj, {"z"});
  CHECK(csv.str().rfind("tau,z\n0,1\n", 0) == 0);
}

TEST_CASE("ladders, order fits and extrapolation") {
  const auto ladder = halving_ladder(1e-1, 1e-3);
  REQUIRE(ladder.size() == 7);
  CHECK(ladder.back() == doctest::Approx(1e-1 / 64));
  std::vector<double> err;
  for (double e : ladder) err.push_back(3 * e * e);
  CHECK(*fit_order(ladder, err) == doctest::Approx(2.0));
  CHECK(!fit_order({0.1}, {1.0}));

  std::vector<double> values;
  for (double e : ladder) values.push_back(0.5 + 2 * e - 7 * e * e + e * e * e);
  CHECK(richardson_limit(values) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("convergence of the Michaelis-Menten reduction") {
  Setup s = setup("mm2d");
  const Assignment params = unit_parameters(s.sys.symbols);
  const ReducedSystem red = standard_reduce(s.sys, s.part);
  const ConvergenceReport rep = convergence_study(s.scaled, red, params);
  REQUIRE(rep.entries.size() == 7);
  CHECK(rep.strictly_decreasing);
  REQUIRE(rep.order);
  CHECK(*rep.order >= 0.8);
  CHECK(*rep.order <= 1.2);
  CHECK(rep.verdict == "converges");
  CHECK(!rep.partial);
  CHECK(rep.states == std::vector<std::string>{"s", "c"});

  // Sequential runs give the same numbers.
  ConvergenceOptions seq;
  seq.parallel = false;
  const ConvergenceReport again = convergence_study(s.scaled, red, params, seq);
  for (std::size_t k = 0; k < rep.entries.size(); ++k) CHECK(again.entries[k].max_error == rep.entries[k].max_error);
}

TEST_CASE("convergence of other reductions") {
  SUBCASE("three-dimensional Michaelis-Menten, nonstandard") {
    Setup s = setup("mm3d");
    const ReducedSystem red = nonstandard_reduce(s.scaled, s.sample);
    const ConvergenceReport rep = convergence_study(s.scaled, red, unit_parameters(s.sys.symbols));
    CHECK(rep.strictly_decreasing);
    CHECK(rep.verdict == "converges");
  }
  SUBCASE("chain of complexes, standard") {
    Setup s = setup("chain3");
    const ReducedSystem red = standard_reduce(s.sys, s.part);
    const ConvergenceReport rep = convergence_study(s.scaled, red, unit_parameters(s.sys.symbols));
    CHECK(rep.strictly_decreasing);
    CHECK(rep.verdict == "converges");
  }
  SUBCASE("invalid ladders are rejected") {
    Setup s = setup("mm2d");
    const ReducedSystem red = standard_reduce(s.sys, s.part);
    ConvergenceOptions o;
    o.ladder = {1e-2, 1e-1};
    CHECK_THROWS_AS(convergence_study(s.scaled, red, unit_parameters(s.sys.symbols), o), std::invalid_argument);
  }
}

TEST_CASE("initial value inconsistency on the linear example") {
  SUBCASE("inconsistent data keep a limit discrepancy") {
    LinexDemoOptions o;
    const LinexDemoReport rep = iv_inconsistency_demo(o);
    CHECK(rep.closed_form == doctest::Approx(std::exp(-1.0)));
    CHECK(std::abs(rep.extrapolated - std::exp(-1.0)) < 1e-3);
    CHECK(rep.verdict == "does not converge");
    // Exact solution: discrepancy = b y0 (e^(c tau/eps) - e^(a tau)) / (c - a eps).
    for (const auto& row : rep.rows) {
      const double exact = (std::exp(-1.0 / row.eps) - std::exp(-1.0)) / (-1.0 + row.eps);
      CHECK(row.discrepancy == doctest::Approx(exact).epsilon(1e-8));
    }
  }
  SUBCASE("consistent data converge") {
    LinexDemoOptions o;
    o.consistent = true;
    const LinexDemoReport rep = iv_inconsistency_demo(o);
    CHECK(std::abs(rep.extrapolated) < 1e-3);
    CHECK(rep.verdict == "converges");
    for (std::size_t k = 1; k < rep.rows.size(); ++k)
      CHECK(std::abs(rep.rows[k].discrepancy) < std::abs(rep.rows[k - 1].discrepancy));
  }
  SUBCASE("no fast initial value, no discrepancy") {
    LinexDemoOptions o;
    o.y0 = 0;
    // Zero up to the integration tolerance.
    for (const auto& row : iv_inconsistency_demo(o).rows) CHECK(std::abs(row.discrepancy) < 1e-9);
  }
  SUBCASE("parameter checks") {
    LinexDemoOptions o;
    o.c = 1;
    CHECK_THROWS_AS(iv_inconsistency_demo(o), std::invalid_argument);
  }
}
