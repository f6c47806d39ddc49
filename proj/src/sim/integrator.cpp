#include <algorithm>
#include <cmath>
#include <limits>

#include "slowfast/sim/sim.hpp"

namespace slowfast {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// Fifth- minus fourth-order weights.
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 5.0;

bool finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double error_norm(const std::vector<double>& err, const std::vector<double>& y0, const std::vector<double>& y1,
                  const IntegrateOptions& o) {
  double sum = 0;
  for (std::size_t i = 0; i < err.size(); ++i) {
    const double sc = o.atol + o.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = err[i] / sc;
    sum += r * r;
  }
  return err.empty() ? 0 : std::sqrt(sum / static_cast<double>(err.size()));
}

}  // namespace

std::vector<double> Trajectory::at(double tau) const {
  if (t.empty()) throw std::logic_error("empty trajectory");
  if (tau <= t.front()) return z.front();
  if (tau >= t.back()) return z.back();
  const auto it = std::upper_bound(t.begin(), t.end(), tau);
  const std::size_t k = static_cast<std::size_t>(it - t.begin()) - 1;
  const double h = t[k + 1] - t[k];
  const double s = (tau - t[k]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
  std::vector<double> out(z[k].size());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = h00 * z[k][i] + h10 * h * dz[k][i] + h01 * z[k + 1][i] + h11 * h * dz[k + 1][i];
  return out;
}

OdeFunction ode_function(const CompiledField& field) {
  return [field](double, const std::vector<double>& z, std::vector<double>& dz) { field(z.data(), dz.data()); };
}

Trajectory integrate(const OdeFunction& f, std::vector<double> z0, double t0, double t1,
                     const IntegrateOptions& o) {
  if (!(t1 > t0)) throw std::invalid_argument("integration interval must be increasing");
  const std::size_t n = z0.size();
  Trajectory out;
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y1(n), err(n);
  const auto eval = [&](double t, const std::vector<double>& y, std::vector<double>& dy) {
    ++out.stats.evaluations;
    try {
      f(t, y, dy);
    } catch (const EvaluationError& e) {
      throw EvaluationError(std::string(e.what()) + " at tau = " + std::to_string(t));
    }
  };
  if (!finite(z0)) throw EvaluationError("non-finite initial value");
  eval(t0, z0, k1);
  out.t.push_back(t0);
  out.z.push_back(z0);
  out.dz.push_back(k1);

  double h;
  if (o.fixed_step > 0) {
    h = o.fixed_step;
  } else {
    // Initial step from the scale of y and y'.
    double d0 = 0, d1 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sc = o.atol + o.rtol * std::abs(z0[i]);
      d0 = std::max(d0, std::abs(z0[i]) / sc);
      d1 = std::max(d1, std::abs(k1[i]) / sc);
    }
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min(h, t1 - t0);
  }
  out.stats.min_step = std::numeric_limits<double>::infinity();

  double t = t0;
  std::vector<double> y = std::move(z0);
  while (t < t1) {
    if (out.stats.steps + out.stats.rejected >= o.max_steps) {
      throw StiffnessError("step budget of " + std::to_string(o.max_steps) + " exhausted", t);
    }
    bool last = false;
    // A remainder below 1e-8 h is absorbed into this step.
    if (t1 - (t + h) <= 1e-8 * h) {
      h = t1 - t;
      last = true;
    }
    if (h < o.min_step * std::max(1.0, std::abs(t))) {
      throw StiffnessError("step size underflow at tau = " + std::to_string(t), t);
    }
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * a21 * k1[i];
    eval(t + c2 * h, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    eval(t + c3 * h, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    eval(t + c4 * h, tmp, k4);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    eval(t + c5 * h, tmp, k5);
    for (std::size_t i = 0; i < n; ++i)
      tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    eval(t + h, tmp, k6);
    for (std::size_t i = 0; i < n; ++i)
      y1[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    const bool ok = finite(y1);
    if (ok) eval(t + h, y1, k7);

    double norm = 0;
    if (ok && o.fixed_step <= 0) {
      for (std::size_t i = 0; i < n; ++i)
        err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      norm = error_norm(err, y, y1, o);
    }
    if (!ok || !std::isfinite(norm) || norm > 1) {
      if (o.fixed_step > 0) throw StiffnessError("non-finite state with a fixed step", t);
      ++out.stats.rejected;
      const double factor = ok && std::isfinite(norm) ? std::max(kMinFactor, kSafety * std::pow(norm, -0.2)) : kMinFactor;
      h *= factor;
      continue;
    }
    out.stats.min_step = std::min(out.stats.min_step, h);
    t = last ? t1 : t + h;
    std::swap(y, y1);
    std::swap(k1, k7);
    out.t.push_back(t);
    out.z.push_back(y);
    out.dz.push_back(k1);
    ++out.stats.steps;
    if (o.fixed_step <= 0) {
      const double factor = norm == 0 ? kMaxFactor : std::clamp(kSafety * std::pow(norm, -0.2), kMinFactor, kMaxFactor);
      h *= factor;
    } else {
      h = o.fixed_step;
    }
  }
  return out;
}

void write_csv(std::ostream& out, const Trajectory& traj, const std::vector<std::string>& names) {
  out << "tau";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  out.precision(17);
  for (std::size_t k = 0; k < traj.t.size(); ++k) {
    out << traj.t[k];
    for (double v : traj.z[k]) out << ',' << v;
    out << '\n';
  }
}

std::vector<double> sup_errors(const Trajectory& a, const Trajectory& b, double t1, double t2, std::size_t points) {
  if (a.dimension() != b.dimension()) throw std::invalid_argument("trajectories differ in dimension");
  if (points < 2) throw std::invalid_argument("at least two comparison points are needed");
  std::vector<double> out(a.dimension(), 0.0);
  for (std::size_t k = 0; k < points; ++k) {
    const double tau = t1 + (t2 - t1) * static_cast<double>(k) / static_cast<double>(points - 1);
    const auto za = a.at(tau), zb = b.at(tau);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], std::abs(za[i] - zb[i]));
  }
  return out;
}

}  // namespace slowfast
