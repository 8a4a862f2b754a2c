#include "granular/dsmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "granular/error.hpp"

namespace granular {

void SimConfig::validate() const {
  if (n < 2) throw DomainError("n must be at least 2");
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  if (!(horizon >= 0.0)) throw DomainError("horizon must be nonnegative");
  if (!(energy_floor >= 0.0 && energy_floor < 1.0)) throw DomainError("energy_floor outside [0,1)");
  if (refresh_interval < 1) throw DomainError("refresh_interval must be >= 1");
  kernel.validate();
}

void MajorantTracker::refresh(const ParticleEnsemble& ens) {
  g_max = 2.0 * ens.max_speed();
  steps_since_refresh = 0;
  ++refreshes;
}

DsmcEngine::DsmcEngine(KernelSpec kernel, ParticleEnsemble ensemble, std::uint64_t seed,
                       int refresh_interval)
    : kernel_(std::move(kernel)), ens_(std::move(ensemble)), rng_(seed) {
  kernel_.validate();
  if (ens_.dim != kernel_.dimension) throw DomainError("ensemble and kernel dimensions differ");
  if (ens_.size() < 2) throw DomainError("an ensemble needs at least two particles");
  tracker_.refresh_interval = refresh_interval;
  tracker_.refresh(ens_);
  energy_ = ens_.energy();
}

CollisionOutcome DsmcEngine::apply(std::size_t i, std::size_t j, const Velocity& z) {
  CollisionOutcome out = post_collisional(ens_.v[i], ens_.v[j], z);
  ens_.v[i] = out.v_prime;
  ens_.v[j] = out.v_star_prime;
  ++collisions_;
  return out;
}

CollisionOutcome DsmcEngine::force_collision(std::size_t i, std::size_t j) {
  if (i == j || i >= ens_.size() || j >= ens_.size()) throw DomainError("bad particle pair");
  const Velocity u = ens_.v[i] - ens_.v[j];
  const Velocity z = sample_z(kernel_, std::max(energy_, 1e-300), u, rng_);
  CollisionOutcome out = apply(i, j, z);
  energy_ = ens_.energy();
  tracker_.g_max = std::max(tracker_.g_max, 2.0 * ens_.max_speed());
  return out;
}

CollisionOutcome DsmcEngine::force_collision(std::size_t i, std::size_t j, const Velocity& z) {
  if (i == j || i >= ens_.size() || j >= ens_.size()) throw DomainError("bad particle pair");
  CollisionOutcome out = apply(i, j, z);
  energy_ = ens_.energy();
  tracker_.g_max = std::max(tracker_.g_max, 2.0 * ens_.max_speed());
  return out;
}

StepStats DsmcEngine::step(double dt) {
  if (!(dt > 0.0)) throw DomainError("dt must be positive");
  StepStats stats;
  const std::size_t n = ens_.size();
  const double energy = energy_;
  const double alpha = energy > 0.0 ? kernel_.intensity(energy) : 0.0;
  if (energy <= 0.0 || alpha == 0.0) {
    ens_.time += dt;
    return stats;
  }
  if (!std::isfinite(alpha)) {
    throw SimulationAbort("intensity is not finite at E = " + std::to_string(energy), ens_);
  }

  if (++tracker_.steps_since_refresh >= tracker_.refresh_interval) tracker_.refresh(ens_);
  double run_max = 0.5 * tracker_.g_max;
  const double half_pairs = 0.5 * static_cast<double>(n - 1) * alpha;
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_real_distribution<double> unif;
  double t = 0.0;
  while (tracker_.g_max > 0.0) {
    const double rate = half_pairs * tracker_.g_max;
    t += std::exponential_distribution<double>(rate)(rng_);
    if (t > dt) break;
    ++stats.candidates;
    const std::size_t i = pick(rng_);
    std::size_t j = pick(rng_);
    while (j == i) j = pick(rng_);
    const Velocity u = ens_.v[i] - ens_.v[j];
    const double speed = u.norm();
    if (speed > tracker_.g_max) {
      // Cannot happen while run_max bounds every speed; kept as a guard.
      ++tracker_.violations;
      tracker_.refresh(ens_);
      run_max = 0.5 * tracker_.g_max;
      continue;
    }
    if (unif(rng_) * tracker_.g_max >= speed) continue;
    const Velocity z = sample_z(kernel_, energy, u, rng_);
    const CollisionOutcome out = apply(i, j, z);
    ++stats.collisions;
    stats.energy_lost += out.energy_loss / static_cast<double>(n);
    if (!out.v_prime.is_finite() || !out.v_star_prime.is_finite()) {
      std::ostringstream msg;
      msg << "non-finite velocity after collision of particles " << i << " and " << j
          << " at t = " << ens_.time + t;
      throw SimulationAbort(msg.str(), ens_);
    }
    const double m = std::max(out.v_prime.norm(), out.v_star_prime.norm());
    if (m > run_max) {
      run_max = m;
      tracker_.g_max = std::max(tracker_.g_max, 2.0 * run_max);
    }
  }
  ens_.time += dt;
  energy_ = ens_.energy();
  if (!std::isfinite(energy_)) throw SimulationAbort("energy is not finite", ens_);
  return stats;
}

namespace {

TrajectoryRow make_row(const ParticleEnsemble& ens, double t, std::uint64_t collisions) {
  TrajectoryRow r;
  r.t = t;
  double m32 = 0.0, m2 = 0.0, m3 = 0.0, e = 0.0;
  for (const auto& v : ens.v) {
    const double s2 = v.norm2();
    e += s2;
    m32 += s2 * std::sqrt(s2);
    m2 += s2 * s2;
    m3 += s2 * s2 * s2;
  }
  const double n = static_cast<double>(ens.size());
  r.energy = e / n;
  r.m32 = m32 / n;
  r.m2 = m2 / n;
  r.m3 = m3 / n;
  r.collisions = collisions;
  r.d_estimate = std::numeric_limits<double>::quiet_NaN();
  return r;
}

}  // namespace

TrajectoryRecord run(const SimConfig& config, const DiagnosticsSchedule& schedule) {
  config.validate();
  ParticleEnsemble initial = init_ensemble(config.initial, config.kernel.dimension, config.n,
                                           config.seed, config.initial_energy);
  return run(config, std::move(initial), schedule);
}

TrajectoryRecord run(const SimConfig& config, ParticleEnsemble initial,
                     const DiagnosticsSchedule& schedule) {
  config.validate();
  if (!(schedule.record_interval > 0.0)) throw DomainError("record interval must be positive");
  TrajectoryRecord rec;
  rec.seed = config.seed;
  DsmcEngine engine(config.kernel, std::move(initial), config.seed ^ 0x9e3779b97f4a7c15ULL,
                    config.refresh_interval);
  const double e0 = engine.energy();
  rec.initial_energy = e0;

  const auto steps = static_cast<std::uint64_t>(std::ceil(config.horizon / config.dt - 1e-9));
  const auto record_every =
      std::max<std::uint64_t>(1, static_cast<std::uint64_t>(
                                     std::llround(schedule.record_interval / config.dt)));

  auto record = [&](double t) {
    TrajectoryRow row = make_row(engine.ensemble(), t, engine.collisions());
    if (!rec.rows.empty()) {
      const auto& prev = rec.rows.back();
      row.dEdt_measured = (row.energy - prev.energy) / (t - prev.t);
    } else {
      row.dEdt_measured = std::numeric_limits<double>::quiet_NaN();
    }
    if (schedule.estimate_dissipation) {
      row.d_estimate = dissipation_functional(engine.ensemble(), engine.kernel(),
                                              schedule.dissipation)
                           .value;
    }
    rec.rows.push_back(row);
    if (schedule.on_record) schedule.on_record(engine.ensemble(), t);
  };

  record(0.0);
  for (std::uint64_t k = 1; k <= steps; ++k) {
    engine.step(config.dt);
    const double t = static_cast<double>(k) * config.dt;
    const double e = engine.energy();
    const bool cooled = e <= 0.0 || e < config.energy_floor * e0;
    if (cooled && !rec.cooling_time) rec.cooling_time = t;
    if (k % record_every == 0 || k == steps || (cooled && schedule.stop_on_cooling)) record(t);
    if (cooled && schedule.stop_on_cooling) break;
  }
  rec.collisions = engine.collisions();
  rec.majorant_refreshes = engine.majorant().refreshes;
  rec.majorant_violations = engine.majorant().violations;
  rec.final_state = engine.ensemble();
  return rec;
}

DissipationCheck measured_dissipation_check(const ParticleEnsemble& ensemble,
                                            const KernelSpec& spec,
                                            const DissipationWindow& window) {
  if (window.replicas < 1 || window.min_collisions < 1) {
    throw DomainError("dissipation window needs replicas and a collision target");
  }
  DissipationCheck out;
  const double e0 = ensemble.energy();
  const double d = dissipation_functional(ensemble, spec).value;
  out.rhs = -d;
  const double alpha = e0 > 0.0 ? spec.intensity(e0) : 0.0;
  if (alpha == 0.0 || !(e0 > 0.0)) return out;

  // Expected collision rate (n-1)/2 alpha <|u|>, with <|u|> from random pairs.
  Rng rng(window.seed);
  const std::size_t n = ensemble.size();
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  double mean_speed = 0.0;
  constexpr int kProbe = 20000;
  for (int k = 0; k < kProbe; ++k) {
    const std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    while (j == i) j = pick(rng);
    mean_speed += (ensemble.v[i] - ensemble.v[j]).norm() / kProbe;
  }
  const double rate = 0.5 * static_cast<double>(n - 1) * alpha * mean_speed;
  if (!(rate > 0.0)) return out;
  out.window = static_cast<double>(window.min_collisions) / rate;

  double sum = 0.0, sum2 = 0.0, colls = 0.0;
  for (int r = 0; r < window.replicas; ++r) {
    DsmcEngine engine(spec, ensemble, window.seed * 1000003ULL + static_cast<std::uint64_t>(r));
    const StepStats s = engine.step(out.window);
    const double slope = (engine.energy() - e0) / out.window;
    sum += slope;
    sum2 += slope * slope;
    colls += static_cast<double>(s.collisions);
  }
  const double m = static_cast<double>(window.replicas);
  out.lhs = sum / m;
  out.mean_collisions = colls / m;
  if (window.replicas > 1) {
    out.lhs_standard_error = std::sqrt(std::max(0.0, (sum2 / m - out.lhs * out.lhs)) / (m - 1.0));
  }
  if (out.mean_collisions < 0.5 * static_cast<double>(window.min_collisions)) {
    throw DomainError("insufficient collisions in dissipation window: " +
                      std::to_string(out.mean_collisions));
  }
  const double scale = std::abs(out.rhs);
  out.relative_gap = scale > 0.0 ? std::abs(out.lhs - out.rhs) / scale
                                 : (out.lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
  return out;
}

}  // namespace granular
