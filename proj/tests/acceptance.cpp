// Acceptance battery: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "granular/collision.hpp"
#include "granular/config.hpp"
#include "granular/cooling.hpp"
#include "granular/dsmc.hpp"
#include "granular/geometry.hpp"
#include "granular/haff.hpp"
#include "granular/moment_bounds.hpp"
#include "granular/moments.hpp"
#include "granular/orlicz.hpp"
#include "granular/scenario.hpp"

using namespace granular;

namespace {

constexpr double kRoundTripGamma = -0.99;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

Velocity gaussian(int dim, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Velocity v(dim);
  for (int k = 0; k < dim; ++k) v[k] = g(rng);
  return v;
}

KernelSpec model(int which, int dim) {
  KernelSpec k;
  k.dimension = dim;
  k.angular = AngularCrossSection::isotropic(dim);
  switch (which) {
    case 0: k.restitution = ConstantRestitution{0.7}; break;
    case 1: k.restitution = ViscoElasticRestitution{0.3, 0.05}; break;
    case 2: k.restitution = EnergyDependentRestitution{0.5, 1.0}; break;
    default: k.restitution = StickyRestitution{}; break;
  }
  return k;
}

double det(std::vector<double> m, int n) {
  double d = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r) {
      if (std::abs(m[r * n + c]) > std::abs(m[piv * n + c])) piv = r;
    }
    if (m[piv * n + c] == 0.0) return 0.0;
    if (piv != c) {
      for (int k = 0; k < n; ++k) std::swap(m[c * n + k], m[piv * n + k]);
      d = -d;
    }
    d *= m[c * n + c];
    for (int r = c + 1; r < n; ++r) {
      const double f = m[r * n + c] / m[c * n + c];
      for (int k = c; k < n; ++k) m[r * n + k] -= f * m[c * n + k];
    }
  }
  return d;
}

ExperimentConfig bundled(const std::string& name) { return load_config(bundled_scenario(name)); }

// ---------------------------------------------------------------------------

Outcome collision_identities() {
  Clock clock;
  Rng rng(101);
  std::uniform_real_distribution<double> level(0.01, 2.0);
  double mom = 0.0, energy = 0.0;
  long count = 0;
  for (int m = 0; m < 4; ++m) {
    for (int dim : {2, 3}) {
      const KernelSpec k = model(m, dim);
      for (int i = 0; i < 125000; ++i, ++count) {
        const Velocity v = gaussian(dim, rng), w = gaussian(dim, rng);
        const CollisionOutcome c = post_collisional(v, w, sample_z(k, level(rng), v - w, rng));
        const double scale = v.norm2() + w.norm2();
        mom = std::max(mom, ((c.v_prime + c.v_star_prime) - (v + w)).norm() / std::sqrt(scale));
        const double lost = scale - c.v_prime.norm2() - c.v_star_prime.norm2();
        energy = std::max(energy, std::abs(lost - c.energy_loss) / scale);
      }
    }
  }
  const double secs = clock.seconds();
  return {mom <= 1e-12 && energy <= 1e-12 && secs < 30.0,
          fmt("%ld collisions, momentum %.2e, energy %.2e (tol 1e-12), %.1f s", count, mom, energy,
              secs)};
}

Outcome bcue_equivalence() {
  Rng rng(202);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const int dim = 2 + i % 2;
    const Velocity v = gaussian(dim, rng), w = gaussian(dim, rng);
    const Velocity sigma = uniform_on_sphere(dim, rng);
    const double e = unif(rng);
    const auto a = visco_elastic_outcome(v, w, sigma, e);
    const auto b = post_collisional(v, w, bcue_z(unit(v - w), sigma, e));
    const double scale = std::max(1.0, v.norm() + w.norm());
    worst = std::max(worst, std::max((a.v_prime - b.v_prime).norm(),
                                     (a.v_star_prime - b.v_star_prime).norm()) /
                                scale);
  }
  return {worst <= 1e-12, fmt("1e5 inputs, max relative difference %.2e (tol 1e-12)", worst)};
}

Outcome geometry_lemmas() {
  Rng rng(303);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double jac = 0.0, round = 0.0, prepost = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const int dim = 2 + i % 2;
    const Velocity z = uniform_on_sphere(dim, rng) * (0.95 * unif(rng));
    const Velocity u = gaussian(dim, rng);
    std::vector<double> m(static_cast<std::size_t>(dim * dim));
    const double h = 1e-6 * std::max(1.0, u.norm());
    for (int c = 0; c < dim; ++c) {
      Velocity up = u, dn = u;
      up[c] += h;
      dn[c] -= h;
      const Velocity d = (shift_map(z, up) - shift_map(z, dn)) / (2.0 * h);
      for (int r = 0; r < dim; ++r) m[static_cast<std::size_t>(r * dim + c)] = d[r];
    }
    jac = std::max(jac, std::abs(det(m, dim) - shift_jacobian(z, u)));
    round = std::max(round, (shift_map_inverse(z, shift_map(z, u)) - u).norm() / std::max(1.0, u.norm()));
    PrePostMap map;
    map.kind = i % 4 < 2 ? MapKind::Pre : MapKind::PreStar;
    map.e = unif(rng);
    map.sigma = uniform_on_sphere(dim, rng);
    map.anchor = gaussian(dim, rng);
    // Round trips are taken on the cone anchor + Omega_gamma of the lemma.
    map.gamma = kRoundTripGamma;
    Velocity x = gaussian(dim, rng);
    while (!in_cone(x - map.anchor, map.sigma, map.gamma)) x = gaussian(dim, rng);
    prepost = std::max(prepost, (pre_post_inverse(map, pre_post_forward(map, x)) - x).norm() /
                                    std::max(1.0, x.norm()));
  }

  // int F(Phi_z(u)) J_z(u) du = int F for a unit Gaussian F, u ~ N(0, 4 I).
  const Velocity z{0.3, -0.35, 0.1};
  const double s = 2.0;
  std::normal_distribution<double> g(0.0, s);
  const double nf = std::pow(2.0 * std::numbers::pi, -1.5);
  const double np = std::pow(2.0 * std::numbers::pi * s * s, -1.5);
  double m1 = 0.0, m2 = 0.0;
  constexpr int kMc = 1000000;
  for (int i = 0; i < kMc; ++i) {
    const Velocity u{g(rng), g(rng), g(rng)};
    const double val = nf * std::exp(-0.5 * shift_map(z, u).norm2()) * shift_jacobian(z, u) /
                       (np * std::exp(-0.5 * u.norm2() / (s * s)));
    m1 += val;
    m2 += val * val;
  }
  const double mean = m1 / kMc, se = std::sqrt((m2 / kMc - mean * mean) / kMc);

  double interp = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const Velocity vp = gaussian(3, rng), vs = gaussian(3, rng), sigma = uniform_on_sphere(3, rng);
    const auto r = restitution_interpolation_residual(unif(rng), unif(rng), unif(rng), vp, vs, sigma);
    interp = std::max(interp, r.residual);
  }
  const bool ok = jac <= 1e-6 && round <= 1e-10 && prepost <= 1e-10 &&
                  std::abs(mean - 1.0) <= 3.0 * se && interp < 1e-8;
  return {ok, fmt("jacobian %.1e, round trips %.1e/%.1e, MC %.5f +- %.5f (%.2f SE), "
                  "interpolation %.1e",
                  jac, round, prepost, mean, se, std::abs(mean - 1.0) / se, interp)};
}

Outcome dissipation_closed_form() {
  double worst = 0.0;
  Rng rng(404);
  for (int i = 0; i <= 20; ++i) {
    const double e = 0.05 * i;
    KernelSpec k;
    k.restitution = ConstantRestitution{e};
    const double d = dissipation_rate(k, 1.0, gaussian(3, rng)).value;
    worst = std::max(worst, std::abs(d - (1.0 - e * e) / 8.0));
  }
  return {worst <= 1e-8, fmt("21 values of e, max |Delta - (1-e^2)/8| = %.1e (tol 1e-8)", worst)};
}

Outcome elastic_equilibrium() {
  Clock clock;
  SimConfig sim;
  sim.n = 100000;
  sim.dt = 0.02;
  sim.horizon = 3.0;
  sim.seed = 505;
  sim.initial = Maxwellian{1.0 / 3.0};
  sim.initial_energy = 1.0;
  DiagnosticsSchedule sched;
  sched.record_interval = 0.1;
  MomentVector last;
  sched.on_record = [&](const ParticleEnsemble& ens, double) {
    last = moments(ens, {1.0, 2.0});
  };
  const auto rec = run(sim, sched);
  double drift = 0.0;
  for (const auto& r : rec.rows) drift = std::max(drift, std::abs(r.energy / rec.initial_energy - 1.0));
  const double m1 = last.at(1.0), m2 = last.at(2.0);
  const double ratio = m2 / (m1 * m1);
  const double rel = std::abs(ratio / (5.0 / 3.0) - 1.0);
  const double secs = clock.seconds();
  return {drift <= 1e-9 && rel <= 0.02 && secs < 120.0,
          fmt("n=1e5, %llu collisions, energy drift %.1e, m2/m1^2 = %.4f (%.2f%% from 5/3), %.1f s",
              static_cast<unsigned long long>(rec.collisions), drift, ratio, 100.0 * rel, secs)};
}

Outcome dissipation_balance() {
  KernelSpec k;
  k.restitution = ConstantRestitution{0.9};
  const auto ens = init_ensemble(UniformBall{1.0}, 3, 10000, 606, 1.0);
  DissipationWindow w;
  w.replicas = 32;
  const auto d = measured_dissipation_check(ens, k, w);
  return {d.relative_gap < 0.05,
          fmt("dE/dt %.5f +- %.5f vs -D(f) %.5f, gap %.2f%% (tol 5%%), %d windows of %.0f collisions",
              d.lhs, d.lhs_standard_error, d.rhs, 100.0 * d.relative_gap, w.replicas,
              d.mean_collisions)};
}

// The constant e = 0.9 run feeds the Haff, moment and exponential-moment criteria.
struct HaffRun {
  TrajectoryRecord rec;
  std::vector<MomentVector> mom;
  std::vector<ScalarEstimate> expm;
  std::vector<double> t;
  double seconds = 0.0;
};

const HaffRun& haff_run() {
  static const HaffRun r = [] {
    HaffRun out;
    Clock clock;
    const auto cfg = bundled("haff-e09");
    DiagnosticsSchedule sched;
    sched.record_interval = cfg.record_interval;
    const auto grid = half_integer_grid(1.5, cfg.moments_p_max);
    sched.on_record = [&](const ParticleEnsemble& ens, double t) {
      out.t.push_back(t);
      out.mom.push_back(moments(ens, grid));
      out.expm.push_back(exp_moment(ens, 0.1, 0.4));
    };
    out.rec = run(cfg.sim, sched);
    out.seconds = clock.seconds();
    return out;
  }();
  return r;
}

Outcome haff_decay() {
  const auto& h = haff_run();
  std::vector<double> t, e;
  bool strict = true;
  for (const auto& row : h.rec.rows) {
    if (!e.empty() && !(row.energy < e.back())) strict = false;
    t.push_back(row.t);
    e.push_back(row.energy);
  }
  const double decades = std::log10(e.front() / e.back());
  const auto fit = haff_fit(t, e);
  const bool ok = strict && decades >= 2.0 && fit.exponent >= 1.9 && fit.exponent <= 2.1 &&
                  h.seconds < 300.0;
  return {ok, fmt("kappa %.4f (tau %.2f), %.2f decades, strictly decreasing: %s, %.1f s",
                  fit.exponent, fit.tau, decades, strict ? "yes" : "no", h.seconds)};
}

Outcome finite_cooling(std::vector<double>* bound_out) {
  const auto cfg = bundled("sticky-finite");
  const auto v = classify_cooling(cfg.sim.kernel, TailClass::of(cfg.sim.initial), 1.0);
  const auto rec = run(cfg.sim, DiagnosticsSchedule{cfg.record_interval, false, {}, true, {}});
  const double bound = v.bound ? *v.bound * rec.initial_energy : std::nan("");
  if (v.bound) bound_out->push_back(*v.bound);
  const bool ok = v.verdict == Verdict::Finite && rec.cooling_time && *rec.cooling_time < 1.1 * bound;
  return {ok, fmt("verdict %s (%s), crossing at t = %.4f, bound %.4f, ratio %.3f (tol < 1.1)",
                  to_string(v.verdict).c_str(), to_string(v.rationale).c_str(),
                  rec.cooling_time ? *rec.cooling_time : std::nan(""), bound,
                  rec.cooling_time ? *rec.cooling_time / bound : std::nan(""))};
}

// Bounded-alpha run shared by the infinite-cooling and Gronwall criteria.
struct BoundedRun {
  TrajectoryRecord rec;
  std::vector<GronwallSample> samples;
  std::vector<DensityGrid> densities;
  double horizon = 0.0;
};

const BoundedRun& bounded_run(double finite_bound) {
  static const BoundedRun r = [finite_bound] {
    BoundedRun out;
    auto cfg = bundled("bounded-infinite");
    out.horizon = 10.0 * finite_bound;
    cfg.sim.horizon = out.horizon;
    const double e0 = 1.0;
    const double radius = 6.0 * std::sqrt(e0 / 3.0);
    DiagnosticsSchedule sched;
    sched.record_interval = cfg.record_interval;
    sched.on_record = [&](const ParticleEnsemble& ens, double t) {
      out.densities.push_back(radial_histogram(ens, cfg.orlicz_bins, radius));
      double l1 = 0.0;
      for (const auto& v : ens.v) l1 += (1.0 + v.norm()) / static_cast<double>(ens.size());
      out.samples.push_back({t, 0.0, 0.0, l1});
    };
    out.rec = run(cfg.sim, sched);
    const auto lambda = build_young_from_density(out.densities.front());
    for (std::size_t k = 0; k < out.densities.size(); ++k) {
      const auto est = orlicz_norm_with_error(out.densities[k], lambda, 100, 700 + k);
      out.samples[k].norm = est.value;
      out.samples[k].norm_se = est.standard_error;
    }
    return out;
  }();
  return r;
}

Outcome infinite_cooling(double finite_bound) {
  const auto cfg = bundled("bounded-infinite");
  const auto v = classify_cooling(cfg.sim.kernel, TailClass::of(cfg.sim.initial), 1.0);
  const auto& b = bounded_run(finite_bound);
  double min_ratio = 1.0;
  for (const auto& row : b.rec.rows) min_ratio = std::min(min_ratio, row.energy / b.rec.initial_energy);
  const bool ok = v.verdict == Verdict::Infinite && v.rationale == Rationale::AlphaJ &&
                  !b.rec.cooling_time && b.rec.rows.back().t >= b.horizon - 1e-9;
  return {ok, fmt("verdict %s (%s), horizon %.2f = 10x finite bound, min E/E0 %.3e (floor %.0e)",
                  to_string(v.verdict).c_str(), to_string(v.rationale).c_str(), b.horizon, min_ratio,
                  cfg.sim.energy_floor)};
}

Outcome moment_suite() {
  const auto& h = haff_run();
  const auto sys = MomentOdeSystem::make(1.0, h.mom.front().p.back(), Intensity{});
  const auto z0 = bound_initial_data(sys, h.mom.front());
  std::vector<double> et, ee;
  for (const auto& r : h.rec.rows) {
    et.push_back(r.t);
    ee.push_back(r.energy);
  }
  const auto traj = integrate_moment_bounds(sys, z0, tabulated_energy(et, ee), et.back(), 1.0);
  std::size_t exceed = 0, checked = 0, cursor = 0;
  double worst = -1e300, sup_bound32 = 0.0, sup_m32 = 0.0;
  for (std::size_t s = 0; s < h.t.size(); ++s) {
    while (cursor + 1 < traj.t.size() && traj.t[cursor] < h.t[s] - 1e-9) ++cursor;
    const auto& mv = h.mom[s];
    for (std::size_t i = 0; i < sys.grid.size(); ++i) {
      const double se_z = mv.se[i] * mv.z[i] / mv.m[i];
      const double bound = traj.z[cursor][i];
      ++checked;
      if (mv.z[i] - 2.0 * se_z > bound) ++exceed;
      worst = std::max(worst, (mv.z[i] - 2.0 * se_z) / bound);
    }
    sup_bound32 = std::max(sup_bound32, traj.z[cursor][0] * std::tgamma(2.0));
    sup_m32 = std::max(sup_m32, mv.m[0]);
  }
  const double m32_0 = h.mom.front().m[0];
  const double c_fit = sup_bound32;
  const bool bounded = std::isfinite(sup_m32) && sup_m32 <= std::max(m32_0, c_fit);

  std::size_t grid_fail = 0;
  for (int i = 0; i < 200; ++i) {
    for (int j = 0; j < 200; ++j) {
      const double x = std::pow(10.0, -6.0 + 12.0 * i / 199.0), y = std::pow(10.0, -6.0 + 12.0 * j / 199.0);
      if (!povzner_bound(x, y).holds) ++grid_fail;
    }
  }
  return {exceed == 0 && bounded && grid_fail == 0,
          fmt("%zu/%zu moment samples above the supersolution (max ratio %.3f); sup m_3/2 %.4f <= "
              "max(m_3/2(0) %.4f, C %.4f); Povzner 200x200 failures %zu",
              exceed, checked, worst, sup_m32, m32_0, c_fit, grid_fail)};
}

Outcome exponential_moments() {
  const auto& h = haff_run();
  const double horizon = h.t.back();
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < h.t.size(); ++k) {
    if (h.t[k] >= 0.1 * horizon - 1e-9) idx.push_back(k);
  }
  const std::size_t third = idx.size() / 3;
  double first = 0.0, first_se = 0.0, last = 0.0, last_se = 0.0;
  bool finite = true;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const auto& e = h.expm[idx[j]];
    finite = finite && std::isfinite(e.value);
    if (j < third && e.value > first) {
      first = e.value;
      first_se = e.standard_error;
    }
    if (j >= idx.size() - third && e.value > last) {
      last = e.value;
      last_se = e.standard_error;
    }
  }
  const bool ok = finite && last <= first + 3.0 * std::hypot(first_se, last_se);
  return {ok, fmt("max over first third %.6f, over last third %.6f (3 SE band %.1e), %zu records",
                  first, last, 3.0 * std::hypot(first_se, last_se), idx.size())};
}

Outcome orlicz_appendix() {
  Clock clock;
  Rng rng(1212);
  std::uniform_real_distribution<double> val(0.0, 4.0), vol(0.01, 0.3), unif(0.0, 1.0);
  auto random_grid = [&](std::size_t cells) {
    std::vector<double> v, w;
    for (std::size_t i = 0; i < cells; ++i) {
      v.push_back(val(rng));
      w.push_back(vol(rng));
    }
    return make_density(v, w);
  };
  const std::vector<YoungFunction> family{YoungFunction::power(1.5), YoungFunction::power(2.0),
                                          YoungFunction::power(4.0), YoungFunction::entropy(),
                                          build_young_from_density(random_grid(40))};
  double cert = 0.0, power = 0.0, young = 0.0, deriv = 0.0;
  for (int k = 0; k < 200; ++k) {
    const auto f = random_grid(30);
    for (const auto& lam : family) {
      cert = std::max(cert, std::abs(norm_certificate(f, lam, orlicz_norm(f, lam)) - 1.0));
    }
    for (double p : {1.5, 2.0, 3.0, 4.0}) {
      double ip = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i) ip += std::pow(f.values[i], p) * f.volumes[i];
      const double exact = std::pow(p, -1.0 / p) * std::pow(ip, 1.0 / p);
      power = std::max(power, std::abs(orlicz_norm(f, YoungFunction::power(p)) / exact - 1.0));
    }
  }
  for (const auto& lam : family) {
    const auto dual = lam.complementary();
    for (int i = 0; i < 100; ++i) {
      const double x = std::pow(10.0, -3.0 + 5.0 * i / 99.0);
      const double y = lam.derivative(x);
      young = std::max(young, std::abs(x * y - lam(x) - dual(y)) / std::max(1.0, x * y));
    }
  }
  for (int k = 0; k < 40; ++k) {
    const auto base = random_grid(12);
    std::vector<double> rate, phase;
    for (std::size_t i = 0; i < base.size(); ++i) {
      rate.push_back(unif(rng) - 0.5);
      phase.push_back(6.0 * unif(rng));
    }
    auto family_at = [&](double t) {
      DensityGrid f = base;
      for (std::size_t i = 0; i < f.size(); ++i) {
        f.values[i] = 0.5 + base.values[i] * std::exp(rate[i] * t) + 0.3 * std::sin(t + phase[i]);
      }
      return f;
    };
    const double t = 2.0 * unif(rng);
    const auto& lam = family[static_cast<std::size_t>(k) % family.size()];
    DensityGrid dfdt = base;
    for (std::size_t i = 0; i < base.size(); ++i) {
      dfdt.values[i] = base.values[i] * rate[i] * std::exp(rate[i] * t) + 0.3 * std::cos(t + phase[i]);
    }
    const double a = norm_derivative(family_at(t), dfdt, lam);
    const double fd = norm_derivative_fd(family_at, lam, t);
    deriv = std::max(deriv, std::abs(a - fd) / std::max(std::abs(fd), 1e-3));
  }
  const double secs = clock.seconds();
  const bool ok = cert <= 1e-8 && power <= 1e-8 && young <= 1e-9 && deriv <= 1e-6 && secs < 10.0;
  return {ok, fmt("certificate %.1e, power form %.1e, Young equality %.1e, derivative %.1e, %.2f s",
                  cert, power, young, deriv, secs)};
}

Outcome gronwall(double finite_bound) {
  const auto& b = bounded_run(finite_bound);
  const std::size_t half = b.samples.size() / 2;
  const std::vector<GronwallSample> head(b.samples.begin(), b.samples.begin() + static_cast<long>(half));
  const double fitted = gronwall_envelope(head, 0.0).minimal_c_k;
  const auto env = gronwall_envelope(b.samples, fitted);
  const auto whole = gronwall_envelope(b.samples, 0.0);
  return {env.crossing_free(),
          fmt("soft pass: C_K fitted on first half %.4f, crossings over full run %zu (2 SE band), "
              "empirical minimal C_K %.4f",
              fitted, env.crossings.size(), whole.minimal_c_k)};
}

Outcome concentration() {
  const auto cfg = bundled("sticky-finite");
  const double r = 0.5;
  std::vector<double> mass, energy, mass_tol, energy_tol, t;
  DiagnosticsSchedule sched;
  sched.record_interval = cfg.record_interval;
  sched.on_record = [&](const ParticleEnsemble& ens, double time) {
    const auto c = concentration_diagnostics(ens, r);
    const double n = static_cast<double>(ens.size());
    double s2 = 0.0;
    for (const auto& v : ens.v) {
      if (v.norm() > r) s2 += v.norm2() * v.norm2() / n;
    }
    const double e_out = c.energy_outside * ens.energy();
    t.push_back(time);
    mass.push_back(c.mass_outside);
    energy.push_back(e_out);
    mass_tol.push_back(3.0 * std::sqrt(c.mass_outside * (1.0 - c.mass_outside) / n));
    energy_tol.push_back(3.0 * std::sqrt(std::max(0.0, s2 - e_out * e_out) / n));
  };
  run(cfg.sim, sched);
  std::size_t rises = 0;
  for (std::size_t k = 1; k < t.size(); ++k) {
    if (mass[k] > mass[k - 1] + std::hypot(mass_tol[k], mass_tol[k - 1])) ++rises;
    if (energy[k] > energy[k - 1] + std::hypot(energy_tol[k], energy_tol[k - 1])) ++rises;
  }
  const double mass_ratio = mass.back() / mass.front(), energy_ratio = energy.back() / energy.front();
  const bool ok = rises == 0 && mass_ratio < 0.01 && energy_ratio < 0.01;
  return {ok, fmt("r = %.1f, %zu records, rises beyond noise %zu, final/initial mass %.2e, energy %.2e",
                  r, t.size(), rises, mass_ratio, energy_ratio)};
}

}  // namespace

int main() {
  std::vector<double> finite_bound;
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria{
      {"collision identities", collision_identities},
      {"parametrization equivalence", bcue_equivalence},
      {"geometry lemmas", geometry_lemmas},
      {"dissipation-rate closed form", dissipation_closed_form},
      {"elastic equilibrium", elastic_equilibrium},
      {"energy-dissipation balance", dissipation_balance},
      {"Haff decay", haff_decay},
      {"finite-time cooling", [&] { return finite_cooling(&finite_bound); }},
      {"infinite cooling", [&] { return infinite_cooling(finite_bound.empty() ? 2.83 : finite_bound[0]); }},
      {"moment suite", moment_suite},
      {"exponential-moment appearance", exponential_moments},
      {"Orlicz appendix", orlicz_appendix},
      {"Gronwall envelope", [&] { return gronwall(finite_bound.empty() ? 2.83 : finite_bound[0]); }},
      {"concentration", concentration},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
