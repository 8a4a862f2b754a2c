#include "granular/moment_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "granular/error.hpp"

namespace granular {

namespace odeint = boost::numeric::odeint;

EnergyProfile constant_energy(double e) {
  return [e](double) { return e; };
}

EnergyProfile tabulated_energy(std::vector<double> t, std::vector<double> e) {
  if (t.empty() || t.size() != e.size()) throw DomainError("energy table is empty or ragged");
  return [t = std::move(t), e = std::move(e)](double s) {
    if (s <= t.front()) return e.front();
    if (s >= t.back()) return e.back();
    const auto it = std::upper_bound(t.begin(), t.end(), s);
    const std::size_t k = static_cast<std::size_t>(it - t.begin());
    const double w = (s - t[k - 1]) / (t[k] - t[k - 1]);
    return (1.0 - w) * e[k - 1] + w * e[k];
  };
}

double default_gamma_p(double p) { return 0.9 * std::min(1.0, 4.0 / (p + 1.0)); }

namespace {

double log_binomial(double p, double k) {
  return std::lgamma(p + 1.0) - std::lgamma(k + 1.0) - std::lgamma(p - k + 1.0);
}

long k_max(double p) { return static_cast<long>(std::floor(0.5 * (p + 1.0))); }

}  // namespace

double MomentOdeSystem::a_p(double p) const {
  const double denom = std::lgamma(a * p + 0.5 * a + 1.0);
  double s = 0.0;
  for (long k = 1; k <= k_max(p); ++k) {
    const double kk = static_cast<double>(k);
    const double lb = log_binomial(p, kk);
    s += std::exp(lb + std::lgamma(a * kk + 0.5 * a + 0.5) + std::lgamma(a * (p - kk) + 0.5) -
                  denom);
    s += std::exp(lb + std::lgamma(a * kk + 0.5) + std::lgamma(a * (p - kk) + 0.5 * a + 0.5) -
                  denom);
  }
  return s;
}

MomentOdeSystem MomentOdeSystem::make(double a, double p_max, Intensity alpha,
                                      std::function<double(double)> gamma_p) {
  if (!(a >= 1.0)) throw DomainError("moment scale a must be >= 1");
  if (!(p_max >= 1.5)) throw DomainError("p_max must be >= 3/2");
  MomentOdeSystem s;
  s.a = a;
  s.alpha = alpha;
  s.gamma_p = std::move(gamma_p);
  s.grid = half_integer_grid(1.5, p_max);
  for (double p : s.grid) {
    const double g = s.gamma_p(p);
    if (!(g > 0.0 && g < std::min(1.0, 4.0 / (p + 1.0)))) {
      throw DomainError("gamma_p out of (0, min{1, 4/(p+1)}) at p = " + std::to_string(p));
    }
    s.A = std::max(s.A, s.a_p(p));
  }
  s.A_dprime = std::numeric_limits<double>::infinity();
  for (double p : s.grid) {
    const double g = s.gamma_p(p);
    const double ratio = std::exp(std::lgamma(a * p + 0.5 * a + 1.0) - std::lgamma(a * p + 0.5));
    s.A_prime = std::max(s.A_prime, s.A * g * ratio / std::pow(p, 0.5 * a - 0.5));
    s.A_dprime = std::min(s.A_dprime, (1.0 - g) * std::exp(std::lgamma(a * p + 0.5) / (2.0 * p)) /
                                          std::pow(p, 0.5 * a));
  }
  return s;
}

double MomentOdeSystem::p0() const {
  const double r = 2.0 * A_prime / A_dprime;
  return std::max(1.5, r * r);
}

void MomentOdeSystem::rhs(const std::vector<double>& z, double energy,
                          std::vector<double>& dz) const {
  const double al = alpha(energy);
  const double e = std::max(energy, 0.0);
  const double z_half = std::sqrt(e) / std::tgamma(0.5 * a + 0.5);
  const double z_one = e / std::tgamma(a + 0.5);
  auto comp = [&](double q) {
    if (std::abs(q - 0.5) < 1e-9) return z_half;
    if (std::abs(q - 1.0) < 1e-9) return z_one;
    const auto idx = static_cast<std::size_t>(std::lround(2.0 * (q - 1.5)));
    return z[idx];
  };
  dz.assign(z.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double p = grid[i];
    double zp = 0.0;
    for (long k = 1; k <= k_max(p); ++k) {
      const double kk = static_cast<double>(k);
      zp = std::max({zp, comp(kk + 0.5) * comp(p - kk), comp(kk) * comp(p - kk + 0.5)});
    }
    const double zi = std::max(z[i], 0.0);
    dz[i] = al * (A_prime * std::pow(p, 0.5 * a - 0.5) * zp -
                  A_dprime * std::pow(p, 0.5 * a) * std::pow(zi, 1.0 + 0.5 / p));
  }
}

namespace {

using State = std::vector<double>;

// Adaptive Dormand-Prince driver with an extra rejection whenever a
// component would turn negative.
template <class Sys>
void drive(Sys&& sys, State& x, double horizon, double record, double rtol, double atol,
           MomentBoundTrajectory& out, const std::function<void(double, const State&)>& on_record) {
  auto stepper = odeint::make_controlled(atol, rtol, odeint::runge_kutta_dopri5<State>());
  double t = 0.0;
  double dt = std::max(horizon * 1e-6, 1e-12);
  const double dt_min = std::max(horizon, 1.0) * 1e-15;
  double next_record = record > 0.0 ? record : 0.0;
  on_record(0.0, x);
  constexpr std::size_t kMaxSteps = 5000000;
  while (t < horizon) {
    if (out.accepted_steps + out.rejected_steps > kMaxSteps) {
      throw NumericError("moment ODE: step budget exhausted at t = " + std::to_string(t) +
                         " (accepted " + std::to_string(out.accepted_steps) + ", rejected " +
                         std::to_string(out.rejected_steps) + ")");
    }
    double h = std::min(dt, horizon - t);
    if (record > 0.0) h = std::min(h, next_record - t);
    if (h < dt_min) {
      if (horizon - t < dt_min) break;
      throw NumericError("moment ODE: step size underflow at t = " + std::to_string(t) +
                         " (accepted " + std::to_string(out.accepted_steps) + ", rejected " +
                         std::to_string(out.rejected_steps) + ")");
    }
    State trial = x;
    double tt = t, hh = h;
    if (stepper.try_step(sys, trial, tt, hh) == odeint::fail) {
      ++out.rejected_steps;
      dt = hh;
      continue;
    }
    if (std::any_of(trial.begin(), trial.end(), [](double v) { return v < 0.0 || !std::isfinite(v); })) {
      ++out.rejected_steps;
      dt = 0.5 * h;
      continue;
    }
    ++out.accepted_steps;
    x = std::move(trial);
    t = tt;
    dt = hh;
    if (record <= 0.0) {
      on_record(t, x);
    } else if (t >= next_record - 1e-12 * std::max(1.0, horizon)) {
      on_record(t, x);
      next_record += record;
    }
  }
  if (record > 0.0 && (out.t.empty() || out.t.back() < t)) on_record(t, x);
}

}  // namespace

MomentBoundTrajectory integrate_moment_bounds(const MomentOdeSystem& system,
                                              const std::vector<double>& z0,
                                              const EnergyProfile& energy, double horizon,
                                              double record, double rtol, double atol) {
  if (z0.size() != system.grid.size()) throw DomainError("initial bounds do not match the grid");
  for (double v : z0) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw DomainError("initial bounds must be finite and >= 0");
  }
  if (!(horizon >= 0.0)) throw DomainError("horizon must be nonnegative");
  MomentBoundTrajectory out;
  State x = z0;
  auto sys = [&](const State& s, State& ds, double t) { system.rhs(s, energy(t), ds); };
  drive(sys, x, horizon, record, rtol, atol, out, [&](double t, const State& s) {
    out.t.push_back(t);
    out.z.push_back(s);
  });
  return out;
}

std::vector<double> bound_initial_data(const MomentOdeSystem& system, const MomentVector& est,
                                       double margin, double factor) {
  std::vector<double> z0;
  for (double p : system.grid) {
    const std::size_t i = est.index(p);
    z0.push_back(factor * normalized_moment(est.m[i] + margin * est.se[i], p, system.a));
  }
  return z0;
}

std::vector<InvariantCheck> invariant_region_check(const MomentOdeSystem& system, double x,
                                                   const std::vector<double>& p_values,
                                                   double energy, double horizon) {
  if (!(x > 0.0)) throw DomainError("invariant region parameter x must be positive");
  const double al = system.alpha(energy);
  std::vector<InvariantCheck> out;
  for (double p : p_values) {
    if (p < 1.5) throw DomainError("invariant check needs p >= 3/2");
    const bool self_coupled = std::abs(p - 1.5) < 1e-9;
    // y = z_p / x^p; every other component sits at x^k so Z_p / x^{p+1/2}
    // is 1, or max{1, y} when z_p itself enters Z_p.
    auto sys = [&](const State& s, State& ds, double) {
      const double y = std::max(s[0], 0.0);
      const double zhat = self_coupled ? std::max(1.0, y) : 1.0;
      ds[0] = al * std::sqrt(x) * std::pow(p, 0.5 * system.a) *
              (system.A_prime / std::sqrt(p) * zhat - system.A_dprime * std::pow(y, 1.0 + 0.5 / p));
    };
    State s{1.0};
    MomentBoundTrajectory traj;
    double peak = 1.0;
    drive(sys, s, horizon, 0.0, 1e-10, 1e-14, traj,
          [&](double, const State& st) { peak = std::max(peak, st[0]); });
    out.push_back({p, peak, peak <= 1.0 + 1e-9});
  }
  return out;
}

}  // namespace granular
