#include <algorithm>
#include <cmath>
#include <future>

#include "slowfast/sim/sim.hpp"

namespace slowfast {

namespace {

constexpr std::size_t kRichardsonDepth = 3;

void check_ladder(const std::vector<double>& ladder) {
  if (ladder.empty()) throw std::invalid_argument("the eps ladder is empty");
  for (std::size_t k = 0; k < ladder.size(); ++k) {
    if (!(ladder[k] > 0)) throw std::invalid_argument("eps values must be positive");
    if (k > 0 && !(ladder[k] < ladder[k - 1])) throw std::invalid_argument("the eps ladder must be strictly decreasing");
  }
}

LadderEntry run_one(const ScaledSystem& full, const ReducedSolution& reduced, const Assignment& parameters, double eps,
                    const ConvergenceOptions& options) {
  LadderEntry entry;
  entry.eps = eps;
  try {
    const Trajectory traj = integrate(slow_time_field(full, parameters, eps),
                                      scaled_initial_values(full, parameters, eps), 0.0, options.t2,
                                      options.integrator);
    entry.stats = traj.stats;
    entry.errors.assign(full.system.dimension(), 0.0);
    for (std::size_t k = 0; k < options.grid_points; ++k) {
      const double tau = options.t1 + (options.t2 - options.t1) * static_cast<double>(k) /
                                          static_cast<double>(options.grid_points - 1);
      const auto a = traj.at(tau), b = reduced.at(tau);
      for (std::size_t i = 0; i < a.size(); ++i) entry.errors[i] = std::max(entry.errors[i], std::abs(a[i] - b[i]));
    }
    entry.max_error = *std::max_element(entry.errors.begin(), entry.errors.end());
    entry.ok = true;
  } catch (const std::exception& e) {
    entry.failure = e.what();
  }
  return entry;
}

}  // namespace

OdeFunction slow_time_field(const ScaledSystem& full, const Assignment& parameters, double eps) {
  const auto& sys = full.system;
  std::vector<std::pair<double, CompiledField>> parts;
  for (int g = sys.lowest_order; g <= sys.highest_order(); ++g) {
    const PolyVector h = sys.grade(g);
    if (std::all_of(h.begin(), h.end(), [](const Polynomial& p) { return p.is_zero(); })) continue;
    parts.emplace_back(std::pow(eps, g - 1), CompiledField(h, sys.states, parameters));
  }
  const std::size_t n = sys.dimension();
  return [parts, n](double, const std::vector<double>& z, std::vector<double>& dz) {
    std::vector<double> buf(n);
    std::fill(dz.begin(), dz.end(), 0.0);
    for (const auto& [w, f] : parts) {
      f(z.data(), buf.data());
      for (std::size_t i = 0; i < n; ++i) dz[i] += w * buf[i];
    }
  };
}

ReducedSolution::ReducedSolution(const ScaledSystem& full, const ReducedSystem& reduced, const Bindings& iv,
                                 const Assignment& parameters, double t_end, const IntegrateOptions& options) {
  const auto& states = full.system.states;
  const bool eliminated = reduced.eliminated.complete;
  kept_ = eliminated ? reduced.eliminated.states : reduced.states;
  const RFVector& field = eliminated ? reduced.eliminated.field : reduced.field;
  std::vector<double> z0;
  for (auto id : kept_) {
    auto it = iv.find(id);
    if (it == iv.end()) throw std::invalid_argument("the reduced initial value misses a state");
    z0.push_back(it->second.value(parameters).get_d());
  }
  for (auto id : states) {
    const auto pos = std::find(kept_.begin(), kept_.end(), id);
    if (pos != kept_.end()) {
      slots_.push_back({static_cast<std::size_t>(pos - kept_.begin()), {}});
    } else if (eliminated && reduced.eliminated.solved.count(id)) {
      slots_.push_back({kept_.size(), CompiledFunction(reduced.eliminated.solved.at(id), kept_, parameters)});
    } else {
      throw std::invalid_argument("the reduced system does not determine every state");
    }
  }
  if (!kept_.empty()) traj_ = integrate(ode_function(CompiledField(field, kept_, parameters)), z0, 0.0, t_end, options);
}

std::vector<double> ReducedSolution::at(double tau) const {
  const std::vector<double> k = kept_.empty() ? std::vector<double>{} : traj_.at(tau);
  std::vector<double> out;
  for (const auto& [index, f] : slots_) out.push_back(index < kept_.size() ? k[index] : f(k.data()));
  return out;
}

std::vector<double> halving_ladder(double eps_max, double eps_min) {
  if (!(eps_max > 0) || !(eps_min > 0) || eps_min > eps_max) throw std::invalid_argument("invalid eps ladder bounds");
  std::vector<double> out;
  // Tolerate rounding in eps_min itself.
  for (double e = eps_max; e >= eps_min * (1 - 1e-12); e /= 2) out.push_back(e);
  return out;
}

std::vector<double> scaled_initial_values(const ScaledSystem& full, const Assignment& parameters, double eps) {
  std::vector<double> z0;
  for (const auto& iv : full.system.initial_values)
    z0.push_back(iv.base.value(parameters).get_d() * std::pow(eps, iv.eps_order));
  return z0;
}

std::optional<double> fit_order(const std::vector<double>& eps, const std::vector<double>& errors) {
  if (eps.size() != errors.size()) throw std::invalid_argument("eps and errors differ in length");
  const std::size_t n = eps.size();
  const std::size_t use = std::max<std::size_t>(2, (n + 1) / 2);
  if (n < 2) return std::nullopt;
  std::vector<double> lx, ly;
  for (std::size_t k = n - std::min(use, n); k < n; ++k) {
    if (!(errors[k] > 0) || !(eps[k] > 0)) continue;
    lx.push_back(std::log(eps[k]));
    ly.push_back(std::log(errors[k]));
  }
  if (lx.size() < 2) return std::nullopt;
  const double m = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < lx.size(); ++k) {
    sx += lx[k];
    sy += ly[k];
    sxx += lx[k] * lx[k];
    sxy += lx[k] * ly[k];
  }
  const double den = m * sxx - sx * sx;
  if (den == 0) return std::nullopt;
  return (m * sxy - sx * sy) / den;
}

ConvergenceReport convergence_study(const ScaledSystem& full, const ReducedSystem& reduced, const Bindings& reduced_iv,
                                    const Assignment& parameters, const ConvergenceOptions& options) {
  check_ladder(options.ladder);
  if (!(options.t2 > options.t1) || options.t1 < 0) throw std::invalid_argument("need 0 <= t1 < t2");
  if (options.grid_points < 2) throw std::invalid_argument("at least two comparison points are needed");
  const ReducedSolution red(full, reduced, reduced_iv, parameters, options.t2, options.integrator);

  ConvergenceReport report;
  report.t1 = options.t1;
  report.t2 = options.t2;
  for (auto id : full.system.states) report.states.push_back(full.system.symbols.name(id));
  if (options.parallel) {
    std::vector<std::future<LadderEntry>> jobs;
    for (double eps : options.ladder)
      jobs.push_back(std::async(std::launch::async, [&, eps] { return run_one(full, red, parameters, eps, options); }));
    for (auto& j : jobs) report.entries.push_back(j.get());
  } else {
    for (double eps : options.ladder) report.entries.push_back(run_one(full, red, parameters, eps, options));
  }

  std::vector<double> eps, errors;
  for (const auto& e : report.entries) {
    if (!e.ok) {
      report.partial = true;
      continue;
    }
    eps.push_back(e.eps);
    errors.push_back(e.max_error);
  }
  report.strictly_decreasing = errors.size() >= 2;
  for (std::size_t k = 1; k < errors.size(); ++k)
    report.strictly_decreasing = report.strictly_decreasing && errors[k] < errors[k - 1];
  report.order = fit_order(eps, errors);
  const bool all_zero = !errors.empty() && std::all_of(errors.begin(), errors.end(), [](double e) { return e == 0; });
  if (report.partial) {
    report.verdict = "partial";
  } else if (all_zero || (report.strictly_decreasing && report.order && *report.order > 0)) {
    report.verdict = "converges";
  } else {
    report.verdict = "does not converge";
  }
  return report;
}

ConvergenceReport convergence_study(const ScaledSystem& full, const ReducedSystem& reduced,
                                    const Assignment& parameters, const ConvergenceOptions& options) {
  const InitialValueResult iv = reduced_initial_value(reduced, full, parameters);
  return convergence_study(full, reduced, iv.point, parameters, options);
}

double richardson_limit(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("no values to extrapolate");
  const std::size_t depth = std::min(kRichardsonDepth, values.size() - 1);
  // Columns of the Neville table for a halving ladder, using the finest entries.
  std::vector<double> col(values.end() - static_cast<std::ptrdiff_t>(depth + 1), values.end());
  for (std::size_t j = 1; j <= depth; ++j) {
    const double f = std::pow(2.0, static_cast<double>(j)) - 1;
    for (std::size_t i = col.size() - 1; i >= j; --i) col[i] = col[i] + (col[i] - col[i - 1]) / f;
  }
  return col.back();
}

LinexDemoReport iv_inconsistency_demo(const LinexDemoOptions& o) {
  check_ladder(o.ladder);
  if (o.a > 0 || o.c >= 0) throw std::invalid_argument("the demo needs a <= 0 and c < 0");
  LinexDemoReport report;
  const double x_red = o.x0 * std::exp(o.a * o.tau);
  std::vector<double> disc;
  for (double eps : o.ladder) {
    const OdeFunction f = [&o, eps](double, const std::vector<double>& z, std::vector<double>& dz) {
      dz[0] = o.a * z[0] + o.b * z[1];
      dz[1] = o.c * z[1] / eps;
    };
    const double y_star = o.consistent ? o.y0 : o.y0 / eps;
    const Trajectory traj = integrate(f, {o.x0, y_star}, 0.0, o.tau, o.integrator);
    LinexRow row;
    row.eps = eps;
    row.x = traj.final_state()[0];
    row.x_red = x_red;
    row.discrepancy = row.x - x_red;
    disc.push_back(row.discrepancy);
    report.rows.push_back(row);
  }
  report.extrapolated = richardson_limit(disc);
  report.closed_form = o.consistent ? 0.0 : -(o.b * o.y0 / o.c) * std::exp(o.a * o.tau);
  report.verdict = std::abs(report.extrapolated) < o.tolerance ? "converges" : "does not converge";
  return report;
}

}  // namespace slowfast
