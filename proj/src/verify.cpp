#include "granular/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "json.hpp"

#include "granular/collision.hpp"
#include "granular/cooling.hpp"
#include "granular/error.hpp"
#include "granular/geometry.hpp"
#include "granular/moment_bounds.hpp"
#include "granular/moments.hpp"
#include "granular/orlicz.hpp"
#include "granular/report.hpp"

namespace granular {

namespace {

constexpr double kRoundTripGamma = -0.99;

using nlohmann::json;

json vec_json(const Velocity& v) {
  json a = json::array();
  for (int k = 0; k < v.dim(); ++k) a.push_back(v[k]);
  return a;
}

Velocity gaussian(int dim, Rng& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Velocity v(dim);
  for (int k = 0; k < dim; ++k) v[k] = g(rng);
  return v;
}

// Tracks the worst error of one check and the input that produced it.
struct Worst {
  double err = 0.0;
  json input;
  bool failed = false;
  json first_failure;

  void update(double e, double tol, const std::function<json()>& describe) {
    if (!(e <= tol) && !failed) {
      failed = true;
      first_failure = describe();
      first_failure["error"] = std::isfinite(e) ? json(e) : json("non-finite");
    }
    if (!(e <= err)) err = e;
  }
};

struct Suite {
  std::string name;
  std::vector<CheckResult> results;

  void add(const std::string& check, const Worst& w, double tol) {
    results.push_back({name, check, w.err, tol, !w.failed && w.err <= tol,
                       w.failed ? w.first_failure.dump() : std::string{}});
  }
  void add(const std::string& check, double measured, double tol, bool passed, json ce = {}) {
    results.push_back({name, check, measured, tol, passed, passed ? std::string{} : ce.dump()});
  }
};

double determinant(std::vector<double> m, int n) {
  double det = 1.0;
  for (int c = 0; c < n; ++c) {
    int piv = c;
    for (int r = c + 1; r < n; ++r) {
      if (std::abs(m[r * n + c]) > std::abs(m[piv * n + c])) piv = r;
    }
    if (m[piv * n + c] == 0.0) return 0.0;
    if (piv != c) {
      for (int k = 0; k < n; ++k) std::swap(m[c * n + k], m[piv * n + k]);
      det = -det;
    }
    det *= m[c * n + c];
    for (int r = c + 1; r < n; ++r) {
      const double f = m[r * n + c] / m[c * n + c];
      for (int k = c; k < n; ++k) m[r * n + k] -= f * m[c * n + k];
    }
  }
  return det;
}

KernelSpec model_kernel(int which, int dim) {
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

void collision_identities(Suite& s, const VerifyOptions& o) {
  Rng rng(o.seed);
  const char* names[] = {"constant", "visco", "energy", "sticky"};
  Worst mom, energy;
  constexpr int kPerModel = 25000;
  for (int model = 0; model < 4; ++model) {
    for (int dim : {2, 3}) {
      const KernelSpec k = model_kernel(model, dim);
      for (int i = 0; i < kPerModel / 2; ++i) {
        const Velocity v = gaussian(dim, rng), w = gaussian(dim, rng);
        const double e_level = std::uniform_real_distribution<double>(0.01, 2.0)(rng);
        const Velocity z = sample_z(k, e_level, v - w, rng);
        const CollisionOutcome c = post_collisional(v, w, z);
        const double scale = v.norm2() + w.norm2();
        const double loss = o.inject_deltav_sign_fault ? -c.energy_loss : c.energy_loss;
        const double lost = scale - c.v_prime.norm2() - c.v_star_prime.norm2();
        auto describe = [&] {
          return json{{"model", names[model]}, {"v", vec_json(v)}, {"v_star", vec_json(w)},
                      {"z", vec_json(z)}, {"energy_loss", loss}, {"measured_loss", lost}};
        };
        mom.update(((c.v_prime + c.v_star_prime) - (v + w)).norm() / std::sqrt(scale), 1e-12, describe);
        energy.update(std::abs(lost - loss) / scale, 1e-12, describe);
      }
    }
  }
  s.add("momentum conservation (relative)", mom, 1e-12);
  s.add("energy-loss identity (relative)", energy, 1e-12);

  Worst bcue;
  for (int i = 0; i < 10000; ++i) {
    const int dim = 2 + i % 2;
    const Velocity v = gaussian(dim, rng), w = gaussian(dim, rng);
    const Velocity sigma = uniform_on_sphere(dim, rng);
    const double e = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const auto a = visco_elastic_outcome(v, w, sigma, e);
    const auto b = post_collisional(v, w, bcue_z(unit(v - w), sigma, e));
    const double scale = std::max(1.0, v.norm() + w.norm());
    bcue.update(std::max((a.v_prime - b.v_prime).norm(), (a.v_star_prime - b.v_star_prime).norm()) / scale,
                1e-12, [&] {
                  return json{{"v", vec_json(v)}, {"v_star", vec_json(w)}, {"sigma", vec_json(sigma)}, {"e", e}};
                });
  }
  s.add("bCue parametrization equivalence", bcue, 1e-12);

  Worst delta;
  for (double e : {0.0, 0.3, 0.5, 0.9, 1.0}) {
    KernelSpec k;
    k.restitution = ConstantRestitution{e};
    const double d = dissipation_rate(k, 1.0, Velocity{0.3, -1.0, 0.2}).value;
    delta.update(std::abs(d - (1.0 - e * e) / 8.0), 1e-8, [&] { return json{{"e", e}, {"delta", d}}; });
  }
  s.add("isotropic N=3 Delta = (1-e^2)/8", delta, 1e-8);
}

void geometry_lemmas(Suite& s, const VerifyOptions& o) {
  Rng rng(o.seed + 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Worst jac, round, prepost;
  for (int i = 0; i < 2000; ++i) {
    const int dim = 2 + i % 2;
    Velocity z = uniform_on_sphere(dim, rng) * (0.95 * unif(rng));
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
    const double fd = determinant(m, dim);
    const double an = shift_jacobian(z, u);
    jac.update(std::abs(fd - an), 1e-6, [&] {
      return json{{"z", vec_json(z)}, {"u", vec_json(u)}, {"analytic", an}, {"fd", fd}};
    });
    const Velocity back = shift_map_inverse(z, shift_map(z, u));
    round.update((back - u).norm() / std::max(1.0, u.norm()), 1e-10,
                 [&] { return json{{"z", vec_json(z)}, {"u", vec_json(u)}}; });

    PrePostMap map;
    map.kind = i % 4 < 2 ? MapKind::Pre : MapKind::PreStar;
    map.e = unif(rng);
    map.sigma = uniform_on_sphere(dim, rng);
    map.anchor = gaussian(dim, rng);
    // Round trips are taken on the cone anchor + Omega_gamma of the lemma.
    map.gamma = kRoundTripGamma;
    Velocity x = gaussian(dim, rng);
    while (!in_cone(x - map.anchor, map.sigma, map.gamma)) x = gaussian(dim, rng);
    const Velocity y = pre_post_inverse(map, pre_post_forward(map, x));
    prepost.update((y - x).norm() / std::max(1.0, x.norm()), 1e-10, [&] {
      return json{{"e", map.e}, {"sigma", vec_json(map.sigma)}, {"anchor", vec_json(map.anchor)},
                  {"x", vec_json(x)}};
    });
  }
  s.add("shift-map Jacobian vs finite differences", jac, 1e-6);
  s.add("shift-map inverse round trip", round, 1e-10);
  s.add("pre/post map inverse round trip", prepost, 1e-10);

  Worst interp;
  std::size_t outside = 0;
  for (int i = 0; i < 300; ++i) {
    const Velocity vp = gaussian(3, rng), vs = gaussian(3, rng), sigma = uniform_on_sphere(3, rng);
    const double e = unif(rng), ep = unif(rng), t = unif(rng);
    const auto r = restitution_interpolation_residual(e, ep, t, vp, vs, sigma);
    if (r.e_doubleprime < std::min(e, ep) - 1e-12 || r.e_doubleprime > std::max(e, ep) + 1e-12) ++outside;
    interp.update(r.residual, 1e-8, [&] {
      return json{{"e", e}, {"e_prime", ep}, {"t", t}, {"v_prime", vec_json(vp)},
                  {"v_star", vec_json(vs)}, {"sigma", vec_json(sigma)}};
    });
  }
  s.add("restitution interpolation residual", interp, 1e-8);
  s.add("interpolated e'' inside [e, e']", static_cast<double>(outside), 0.0, outside == 0);
}

DensityGrid random_density(Rng& rng, std::size_t cells) {
  std::uniform_real_distribution<double> u(0.05, 3.0), w(0.01, 0.1);
  std::vector<double> v(cells), vol(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    v[i] = u(rng);
    vol[i] = w(rng);
  }
  return make_density(std::move(v), std::move(vol));
}

void orlicz_appendix(Suite& s, const VerifyOptions& o) {
  Rng rng(o.seed + 2);
  std::vector<YoungFunction> family = {YoungFunction::power(2.0), YoungFunction::power(3.5),
                                       YoungFunction::entropy()};
  Worst cert, power, young, deriv;
  for (int i = 0; i < 20; ++i) {
    const DensityGrid f = random_density(rng, 40);
    family.push_back(build_young_from_density(f));
    for (const auto& lam : family) {
      const double n = orlicz_norm(f, lam);
      const double c = norm_certificate(f, lam, n);
      cert.update(std::abs(c - 1.0), 1e-8, [&] { return json{{"young", lam.name()}, {"norm", n}, {"certificate", c}}; });
    }
    family.pop_back();
    for (double p : {1.5, 2.0, 3.0, 4.5}) {
      double lp = 0.0;
      for (std::size_t k = 0; k < f.size(); ++k) lp += f.volumes[k] * std::pow(f.values[k], p);
      const double closed = std::pow(p, -1.0 / p) * std::pow(lp, 1.0 / p);
      const double n = orlicz_norm(f, YoungFunction::power(p));
      power.update(std::abs(n - closed) / closed, 1e-8, [&] { return json{{"p", p}, {"norm", n}, {"closed_form", closed}}; });
    }
    // f_t = f + t g with a smooth direction g.
    const DensityGrid g = random_density(rng, 40);
    for (const auto& lam : family) {
      const double t0 = 0.3;
      auto fam = [&](double t) {
        DensityGrid h = f;
        for (std::size_t k = 0; k < h.size(); ++k) h.values[k] += t * g.values[k];
        return h;
      };
      const double exact = norm_derivative(fam(t0), g, lam);
      const double fd = norm_derivative_fd(fam, lam, t0, 1e-4);
      deriv.update(std::abs(exact - fd) / std::abs(exact), 1e-6,
                   [&] { return json{{"young", lam.name()}, {"formula", exact}, {"finite_difference", fd}}; });
    }
  }
  for (const auto& lam : family) {
    const YoungFunction star = lam.complementary();
    for (int i = 0; i < 100; ++i) {
      const double x = 0.01 * std::pow(1000.0, i / 99.0);
      const double y = lam.derivative(x);
      const double gap = std::abs(x * y - lam(x) - star(y));
      young.update(gap, 1e-9, [&] { return json{{"young", lam.name()}, {"x", x}, {"y", y}, {"gap", gap}}; });
    }
  }
  s.add("norm certificate int Lambda(|f|/N) = 1", cert, 1e-8);
  s.add("power family closed form p^{-1/p} |f|_p", power, 1e-8);
  s.add("Young equality at y = Lambda'(x)", young, 1e-9);
  s.add("norm derivative vs finite differences", deriv, 1e-6);
}

void moments_povzner(Suite& s, const VerifyOptions& o) {
  Worst pov;
  for (int i = 0; i < 200; ++i) {
    for (int j = 0; j < 200; ++j) {
      const double x = std::pow(10.0, -4.0 + 8.0 * i / 199.0);
      const double y = std::pow(10.0, -4.0 + 8.0 * j / 199.0);
      const auto c = povzner_bound(x, y);
      pov.update(c.holds ? 0.0 : c.lhs / c.rhs - 1.0, 0.0, [&] { return json{{"x", x}, {"y", y}, {"lhs", c.lhs}, {"rhs", c.rhs}}; });
    }
  }
  s.add("Povzner inequality on 200x200 grid", pov, 0.0);
  const double cmin = povzner_constant_minimal();
  s.add("minimal Povzner constant sqrt(2)-1", std::abs(cmin - kPovznerConstant), 1e-9,
        std::abs(cmin - kPovznerConstant) <= 1e-9, json{{"minimal", cmin}});

  const ParticleEnsemble ens = init_ensemble(Maxwellian{1.0}, 3, 20000, o.seed + 3, 3.0);
  const auto mv = moments(ens, half_integer_grid(0.5, 3.0));
  double se_gap = 0.0;
  for (std::size_t k = 0; k < mv.p.size(); ++k) {
    double s1 = 0.0, s2 = 0.0;
    for (const auto& v : ens.v) {
      const double x = std::pow(v.norm2(), mv.p[k]);
      s1 += x;
      s2 += x * x;
    }
    const double n = static_cast<double>(ens.size());
    const double sd = std::sqrt((s2 / n - (s1 / n) * (s1 / n)) * n / (n - 1.0));
    se_gap = std::max(se_gap, std::abs(mv.se[k] - sd / std::sqrt(n)) / (sd / std::sqrt(n)));
  }
  s.add("jackknife SE equals SD/sqrt(n)", se_gap, 1e-9, se_gap <= 1e-9);

  const auto sys = MomentOdeSystem::make(1.0, 5.0, Intensity{1.0, 0.0});
  const auto z0 = bound_initial_data(sys, moments(ens, sys.grid));
  const auto traj = integrate_moment_bounds(sys, z0, constant_energy(3.0), 5.0, 0.5);
  bool finite = true;
  for (const auto& z : traj.z) {
    for (double x : z) finite = finite && std::isfinite(x) && x >= 0.0;
  }
  s.add("moment supersolution stays finite and nonnegative", traj.z.size(), 0.0, finite);
}

void cooling_criteria(Suite& s, const VerifyOptions&) {
  struct Case {
    const char* name;
    KernelSpec kernel;
    Verdict verdict;
    Rationale rationale;
  };
  KernelSpec sticky;
  sticky.restitution = StickyRestitution{};
  sticky.intensity = {1.0, -1.0};
  KernelSpec bounded;
  bounded.restitution = ConstantRestitution{0.9};
  KernelSpec coupled;
  coupled.restitution = EnergyDependentRestitution{0.5, 1.0};
  coupled.intensity = {1.0, -0.5};
  const Case cases[] = {
      {"sticky, alpha = 1/E", sticky, Verdict::Finite, Rationale::DeltaGeMinusHalf},
      {"constant e = 0.9, alpha = 1", bounded, Verdict::Infinite, Rationale::AlphaJ},
      {"e = 1 - E/2, alpha = E^{-1/2}", coupled, Verdict::Infinite, Rationale::DeltaLe0},
  };
  const TailClass maxwell = TailClass::of(Maxwellian{1.0});
  for (const auto& c : cases) {
    const CoolingVerdict v = classify_cooling(c.kernel, maxwell, 1.0);
    const bool ok = v.verdict == c.verdict && v.rationale == c.rationale;
    s.add(std::string("verdict: ") + c.name, 0.0, 0.0, ok,
          json{{"verdict", to_string(v.verdict)}, {"rationale", to_string(v.rationale)},
               {"expected", to_string(c.verdict) + "/" + to_string(c.rationale)}});
  }
  const double b = finite_cooling_bound(1.0, 1.0, -1.0);
  s.add("finite bound E0=1, Delta0=1, delta=-1 is 1/sqrt(2)", std::abs(b - std::sqrt(0.5)), 1e-14,
        std::abs(b - std::sqrt(0.5)) <= 1e-14, json{{"bound", b}});
}

std::string short_number(double x) {
  std::ostringstream os;
  os << std::setprecision(4) << x;
  return os.str();
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"collision-identities", "geometry-lemmas",
                                                 "orlicz-appendix", "moments-povzner",
                                                 "cooling-criteria"};
  return names;
}

std::vector<CheckResult> run_suite(const std::string& suite, const VerifyOptions& options) {
  if (suite == "all") {
    std::vector<CheckResult> all;
    for (const auto& n : suite_names()) {
      auto r = run_suite(n, options);
      all.insert(all.end(), r.begin(), r.end());
    }
    return all;
  }
  Suite s{suite, {}};
  auto guarded = [&](auto&& body) {
    try {
      body(s, options);
    } catch (const Error& e) {
      s.add("exception", std::nan(""), 0.0, false, json{{"what", e.what()}});
    }
  };
  if (suite == "collision-identities") {
    guarded(collision_identities);
  } else if (suite == "geometry-lemmas") {
    guarded(geometry_lemmas);
  } else if (suite == "orlicz-appendix") {
    guarded(orlicz_appendix);
  } else if (suite == "moments-povzner") {
    guarded(moments_povzner);
  } else if (suite == "cooling-criteria") {
    guarded(cooling_criteria);
  } else {
    throw DomainError("unknown verify suite '" + suite + "'");
  }
  return s.results;
}

int verify(const std::string& suite, const VerifyOptions& options, std::ostream& out) {
  const auto results = run_suite(suite, options);
  out << std::left << std::setw(22) << "suite" << std::setw(52) << "check" << std::setw(16)
      << "measured" << std::setw(12) << "tolerance" << "result\n";
  const CheckResult* first = nullptr;
  for (const auto& r : results) {
    out << std::left << std::setw(22) << r.suite << std::setw(52) << r.name << std::setw(16)
        << short_number(r.measured) << std::setw(12) << short_number(r.tolerance)
        << (r.passed ? "PASS" : "FAIL") << '\n';
    if (!r.passed && !first) first = &r;
  }
  if (first) {
    out << "first counterexample (" << first->suite << " / " << first->name
        << "): " << first->counterexample << '\n';
    return 1;
  }
  return 0;
}

}  // namespace granular
