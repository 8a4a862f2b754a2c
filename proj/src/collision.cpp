#include "granular/collision.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "granular/error.hpp"
#include "granular/quadrature.hpp"

namespace granular {

namespace {
constexpr double kUnitSlack = 1e-12;
}

CollisionOutcome post_collisional(const Velocity& v, const Velocity& v_star, const Velocity& z) {
  if (v.dim() != v_star.dim() || z.dim() != v.dim()) throw DomainError("dimension mismatch");
  const double z2 = z.norm2();
  if (!(z2 <= 1.0 + kUnitSlack)) throw DomainError("|z| > 1 would create energy");
  const Velocity u = v - v_star;
  const double speed = u.norm();
  const Velocity mid = 0.5 * (v + v_star);
  const Velocity half = z * (0.5 * speed);
  CollisionOutcome out{mid + half, mid - half, z, 0.0};
  out.energy_loss = std::max(0.0, 0.5 * (1.0 - z2) * speed * speed);
  return out;
}

Velocity bcue_z(const Velocity& u_hat, const Velocity& sigma, double e) {
  return 0.5 * (1.0 - e) * u_hat + 0.5 * (1.0 + e) * sigma;
}

CollisionOutcome visco_elastic_outcome(const Velocity& v, const Velocity& v_star,
                                       const Velocity& sigma, double e) {
  if (std::abs(sigma.norm() - 1.0) > 1e-10) throw DomainError("sigma must be a unit vector");
  if (!(e >= 0.0 && e <= 1.0)) throw DomainError("restitution e outside [0,1]");
  const Velocity u = v - v_star;
  const double speed = u.norm();
  if (speed == 0.0) return {v, v_star, sigma, 0.0};
  const Velocity kick = 0.25 * (1.0 + e) * (u - speed * sigma);
  const Velocity z = bcue_z(u / speed, sigma, e);
  CollisionOutcome out{v - kick, v_star + kick, z, 0.0};
  out.energy_loss = std::max(0.0, 0.5 * (1.0 - z.norm2()) * speed * speed);
  return out;
}

Velocity sample_z(const KernelSpec& spec, double energy, const Velocity& u, Rng& rng) {
  const double speed = u.norm();
  if (speed == 0.0 || spec.is_sticky()) return Velocity(u.dim());
  if (const auto* m = std::get_if<CustomMeasure>(&spec.restitution)) {
    return m->sample_z(energy, u, rng);
  }
  const Velocity u_hat = u / speed;
  const Velocity sigma = spec.angular.sample_sigma(u_hat, rng);
  const double x = std::clamp(dot(u_hat, sigma), -1.0, 1.0);
  const double g = speed * std::sqrt(0.5 * (1.0 - x));
  return bcue_z(u_hat, sigma, spec.restitution_at(energy, g));
}

QuadratureEstimate dissipation_rate(const KernelSpec& spec, double energy, const Velocity& u) {
  if (!(energy > 0.0)) throw DomainError("dissipation rate needs E > 0");
  const double alpha = spec.intensity(energy);
  if (alpha == 0.0) return {};
  if (spec.is_sticky()) return {0.25 * alpha, 0.0};
  if (const auto* m = std::get_if<CustomMeasure>(&spec.restitution)) {
    if (!m->delta) throw DomainError("custom measure has no dissipation rate estimator");
    return {alpha * m->delta(energy, u), 0.0};
  }
  const double speed = u.norm();
  SphereQuadrature quad(spec.dimension, spec.quadrature_order);
  auto r = quad.integrate([&](double x) {
    const double e = spec.restitution_at(energy, speed * std::sqrt(0.5 * (1.0 - x)));
    return (1.0 - e * e) * 0.5 * (1.0 - x) * spec.angular.density(x);
  });
  if (!std::isfinite(r.value)) throw NumericError("dissipation rate quadrature is not finite");
  return {0.25 * alpha * r.value, 0.25 * alpha * r.residual};
}

double angular_spreading(const KernelSpec& spec, double energy, double eps, double speed) {
  if (!(energy > 0.0)) throw DomainError("angular spreading needs E > 0");
  if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("eps must lie in (0, 1]");
  if (const auto* m = std::get_if<CustomMeasure>(&spec.restitution)) {
    return m->spreading(energy, eps);
  }
  if (spec.is_sticky()) return eps >= 1.0 ? 1.0 : 0.0;

  auto excess = [&](double x) {
    const double e = spec.restitution_at(energy, speed * std::sqrt(0.5 * (1.0 - x)));
    return std::abs(0.5 * (1.0 - e) + 0.5 * (1.0 + e) * x) - (1.0 - eps);
  };
  // Locate sign changes of the indicator on a grid in the polar angle, refine
  // them by bisection and integrate the density over the active pieces.
  constexpr int kGrid = 4096;
  std::vector<double> cuts{-1.0};
  double th_prev = std::numbers::pi;
  double h_prev = excess(-1.0);
  for (int i = kGrid - 1; i >= 0; --i) {
    const double th = std::numbers::pi * i / kGrid;
    const double h = excess(std::cos(th));
    if ((h > 0.0) != (h_prev > 0.0)) {
      double lo = th, hi = th_prev;  // lo has the sign of h
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((excess(std::cos(mid)) > 0.0) == (h > 0.0)) lo = mid; else hi = mid;
      }
      cuts.push_back(std::cos(0.5 * (lo + hi)));
    }
    th_prev = th;
    h_prev = h;
  }
  cuts.push_back(1.0);

  SphereQuadrature quad(spec.dimension, spec.quadrature_order);
  double mass = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    if (b <= a) continue;
    if (excess(0.5 * (a + b)) > 0.0) {
      mass += quad.integrate([&](double x) { return spec.angular.density(x); }, a, b).value;
    }
  }
  return std::clamp(mass, 0.0, 1.0);
}

double angular_spreading_sup(const KernelSpec& spec, double energy, double eps,
                             double max_speed) {
  if (!std::holds_alternative<ViscoElasticRestitution>(spec.restitution)) {
    return angular_spreading(spec, energy, eps, max_speed);
  }
  double best = 0.0;
  constexpr int kSpeeds = 64;
  for (int i = 1; i <= kSpeeds; ++i) {
    const double s = max_speed * std::pow(1e-6, 1.0 - static_cast<double>(i) / kSpeeds);
    best = std::max(best, angular_spreading(spec, energy, eps, s));
  }
  return best;
}

DissipationEstimate dissipation_functional(const ParticleEnsemble& ensemble,
                                           const KernelSpec& spec,
                                           const DissipationOptions& options) {
  const std::size_t n = ensemble.size();
  if (n == 0) throw DomainError("dissipation functional of an empty ensemble");
  const double energy = ensemble.energy();
  if (n < 2 || !(energy > 0.0) || spec.is_elastic() || spec.intensity(energy) == 0.0) return {};

  const bool visco = std::holds_alternative<ViscoElasticRestitution>(spec.restitution);
  const bool custom = std::holds_alternative<CustomMeasure>(spec.restitution);

  // Delta as a function of |u| only, except for custom measures.
  double delta_const = 0.0;
  std::vector<double> table;
  double table_step = 0.0;
  if (visco) {
    const double umax = 2.0 * ensemble.max_speed();
    constexpr int kTable = 1024;
    table.resize(kTable + 1);
    table_step = umax / kTable;
    Velocity u(spec.dimension);
    for (int k = 0; k <= kTable; ++k) {
      u[0] = k * table_step;
      table[static_cast<std::size_t>(k)] = dissipation_rate(spec, energy, u).value;
    }
  } else if (!custom) {
    delta_const = dissipation_rate(spec, energy, Velocity::unit_axis(spec.dimension, 0)).value;
  }
  auto pair_term = [&](const Velocity& u) {
    const double s = u.norm();
    double d = delta_const;
    if (visco) {
      const double pos = table_step > 0.0 ? s / table_step : 0.0;
      const auto k = std::min(static_cast<std::size_t>(pos), table.size() - 2);
      const double w = pos - static_cast<double>(k);
      d = (1.0 - w) * table[k] + w * table[k + 1];
    } else if (custom) {
      d = dissipation_rate(spec, energy, u).value;
    }
    return s * s * s * d;
  };

  const double nn = static_cast<double>(n);
  if (n <= options.exact_threshold) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) sum += pair_term(ensemble.v[i] - ensemble.v[j]);
    }
    return {2.0 * sum / (nn * nn), 0.0, true};
  }

  Rng rng(options.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  double mean = 0.0, m2 = 0.0;
  const std::size_t m = std::max<std::size_t>(options.samples, 2);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    while (j == i) j = pick(rng);
    const double x = pair_term(ensemble.v[i] - ensemble.v[j]);
    const double delta = x - mean;
    mean += delta / static_cast<double>(k + 1);
    m2 += delta * (x - mean);
  }
  const double scale = nn * (nn - 1.0) / (nn * nn);
  const double se = std::sqrt(m2 / static_cast<double>(m - 1) / static_cast<double>(m));
  return {scale * mean, scale * se, false};
}

}  // namespace granular
