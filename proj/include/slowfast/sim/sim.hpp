#pragma once

#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "slowfast/reduction/reduction.hpp"
#include "slowfast/symbolic/numeric.hpp"

namespace slowfast {

/// The step size fell below the floor; `tau()` is where it happened.
class StiffnessError : public std::runtime_error {
 public:
  StiffnessError(const std::string& what, double tau) : std::runtime_error(what), tau_(tau) {}
  double tau() const { return tau_; }

 private:
  double tau_;
};

/// z' = f(tau, z), written into `dz`.
using OdeFunction = std::function<void(double, const std::vector<double>&, std::vector<double>&)>;

struct IntegratorStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
  std::size_t evaluations = 0;
  double min_step = 0;
};

struct IntegrateOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double min_step = 1e-12;          // relative to max(1, |tau|)
  double fixed_step = 0;            // > 0 disables step control
  std::size_t max_steps = 20'000'000;
};

/// Accepted steps with derivatives, for cubic Hermite dense output.
struct Trajectory {
  std::vector<double> t;
  std::vector<std::vector<double>> z;
  std::vector<std::vector<double>> dz;
  IntegratorStats stats;

  std::size_t dimension() const { return z.empty() ? 0 : z.front().size(); }
  /// Hermite interpolant at tau inside [t.front(), t.back()].
  std::vector<double> at(double tau) const;
  const std::vector<double>& final_state() const { return z.back(); }
};

/// Dormand-Prince 5(4) with per-component error control.
Trajectory integrate(const OdeFunction& f, std::vector<double> z0, double t0, double t1,
                     const IntegrateOptions& options = {});
/// Wraps an autonomous compiled field.
OdeFunction ode_function(const CompiledField& field);

/// Writes "tau,<names...>" followed by one row per accepted step.
void write_csv(std::ostream& out, const Trajectory& traj, const std::vector<std::string>& names);

/// Sup norm of the difference per component over `points` equally spaced
/// times in [t1, t2].
std::vector<double> sup_errors(const Trajectory& a, const Trajectory& b, double t1, double t2, std::size_t points);

/// eps_max, eps_max/2, ... while >= eps_min.
std::vector<double> halving_ladder(double eps_max, double eps_min);

struct ConvergenceOptions {
  std::vector<double> ladder = halving_ladder(1e-1, 1e-3);
  double t1 = 0.1;
  double t2 = 2.0;
  std::size_t grid_points = 401;
  IntegrateOptions integrator{1e-10, 1e-12};
  bool parallel = true;
};

struct LadderEntry {
  double eps = 0;
  std::vector<double> errors;       // per compared state
  double max_error = 0;
  bool ok = false;
  std::string failure;
  IntegratorStats stats;
};

struct ConvergenceReport {
  std::vector<std::string> states;
  std::vector<LadderEntry> entries;
  double t1 = 0;
  double t2 = 0;
  std::optional<double> order;      // slope of log error on log eps
  bool strictly_decreasing = false;
  bool partial = false;             // some integration failed
  std::string verdict;              // "converges", "does not converge" or "partial"
};

/// Reduced trajectory in the coordinates of the scaled system: kept states
/// are integrated, eliminated states follow their solved expressions.
class ReducedSolution {
 public:
  ReducedSolution(const ScaledSystem& full, const ReducedSystem& reduced, const Bindings& iv,
                  const Assignment& parameters, double t_end, const IntegrateOptions& options = {});
  /// Every state of the scaled system at tau in [0, t_end].
  std::vector<double> at(double tau) const;

 private:
  std::vector<SymbolId> kept_;
  std::vector<std::pair<std::size_t, CompiledFunction>> slots_;
  Trajectory traj_;
};

/// Least-squares slope of log(error) against log(eps) over the smallest
/// half of the ladder (at least two points).
std::optional<double> fit_order(const std::vector<double>& eps, const std::vector<double>& errors);

/// Integrates the scaled system in slow time, dz/dtau = sum_g eps^(g-1) h^(g),
/// from its initial values at each eps, and compares with the reduced
/// trajectory from `reduced_iv` on [t1, t2]. Every state of the scaled system
/// is compared; eliminated states follow their solved expressions.
/// `parameters` binds every parameter and initial-value constant.
ConvergenceReport convergence_study(const ScaledSystem& full, const ReducedSystem& reduced, const Bindings& reduced_iv,
                                    const Assignment& parameters, const ConvergenceOptions& options = {});
/// As above with the reduced initial value from reduced_initial_value.
ConvergenceReport convergence_study(const ScaledSystem& full, const ReducedSystem& reduced,
                                    const Assignment& parameters, const ConvergenceOptions& options = {});

/// dz/dtau = sum_g eps^(g-1) h^(g), the scaled system in slow time.
OdeFunction slow_time_field(const ScaledSystem& full, const Assignment& parameters, double eps);

/// Initial point of the scaled system at a given eps: base * eps^order.
std::vector<double> scaled_initial_values(const ScaledSystem& full, const Assignment& parameters, double eps);

/// x' = a x + b y*, y*' = c y* / eps in slow time, against x_red = x0 e^(a tau).
struct LinexDemoOptions {
  double a = -1;
  double b = 1;
  double c = -1;
  double x0 = 1;
  double y0 = 1;
  /// true: y*(0) = y0 (data of order eps); false: y*(0) = y0 / eps.
  bool consistent = false;
  double tau = 1;
  std::vector<double> ladder = halving_ladder(1e-1, 1e-3);
  IntegrateOptions integrator{1e-11, 1e-13};
  double tolerance = 1e-3;          // |limit| below this counts as convergence
};

struct LinexRow {
  double eps = 0;
  double x = 0;
  double x_red = 0;
  double discrepancy = 0;
};

struct LinexDemoReport {
  std::vector<LinexRow> rows;
  double extrapolated = 0;          // Richardson limit of the discrepancy
  double closed_form = 0;           // -(b y0 / c) e^(a tau), or 0 when consistent
  std::string verdict;              // "converges" or "does not converge"
};

LinexDemoReport iv_inconsistency_demo(const LinexDemoOptions& options);

/// Richardson extrapolation to eps = 0 of values on a halving ladder,
/// assuming an expansion in integer powers of eps.
double richardson_limit(const std::vector<double>& values);

}  // namespace slowfast
