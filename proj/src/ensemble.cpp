#include "granular/ensemble.hpp"

#include <algorithm>
#include <cmath>

#include "granular/error.hpp"

namespace granular {

double ParticleEnsemble::energy() const {
  double s = 0.0;
  for (const auto& x : v) s += x.norm2();
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

Velocity ParticleEnsemble::momentum() const {
  Velocity p(dim);
  for (const auto& x : v) p += x;
  return v.empty() ? p : p / static_cast<double>(v.size());
}

double ParticleEnsemble::max_speed() const {
  double m = 0.0;
  for (const auto& x : v) m = std::max(m, x.norm2());
  return std::sqrt(m);
}

bool ParticleEnsemble::all_finite() const {
  return std::all_of(v.begin(), v.end(), [](const Velocity& x) { return x.is_finite(); });
}

namespace {

Velocity draw(const InitialDistribution& dist, int dim, std::size_t index, std::size_t n,
              Rng& rng) {
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unif;
  if (const auto* m = std::get_if<Maxwellian>(&dist)) {
    Velocity x(dim);
    const double s = std::sqrt(m->temperature);
    for (int i = 0; i < dim; ++i) x[i] = s * gauss(rng);
    return x;
  }
  if (const auto* b = std::get_if<UniformBall>(&dist)) {
    const double r = b->radius * std::pow(unif(rng), 1.0 / dim);
    return uniform_on_sphere(dim, rng) * r;
  }
  if (const auto* t = std::get_if<TwoBeam>(&dist)) {
    Velocity x(dim);
    x[0] = index < n / 2 ? t->speed : -t->speed;
    return x;
  }
  const auto& s = std::get<StretchedExponential>(dist);
  // |v|^eta a is Gamma(N/eta) distributed.
  std::gamma_distribution<double> gam(dim / s.eta, 1.0);
  const double r = std::pow(gam(rng) / s.a, 1.0 / s.eta);
  return uniform_on_sphere(dim, rng) * r;
}

}  // namespace

ParticleEnsemble init_ensemble(const InitialDistribution& dist, int dim, std::size_t n,
                               std::uint64_t seed, double target_energy) {
  if (dim < 2 || dim > kMaxDim) throw DomainError("dimension out of range");
  ParticleEnsemble ens;
  ens.dim = dim;
  if (const auto* u = std::get_if<UserSamples>(&dist)) {
    ens.v = u->samples;
    for (const auto& x : ens.v) {
      if (x.dim() != dim) throw DomainError("user sample dimension mismatch");
      if (!x.is_finite()) throw DomainError("user sample is not finite");
    }
  } else {
    if (const auto* m = std::get_if<Maxwellian>(&dist); m && !(m->temperature > 0.0)) {
      throw DomainError("Maxwellian temperature must be positive");
    }
    if (const auto* s = std::get_if<StretchedExponential>(&dist);
        s && !(s->a > 0.0 && s->eta > 0.0)) {
      throw DomainError("stretched exponential needs a > 0 and eta > 0");
    }
    if (const auto* t = std::get_if<TwoBeam>(&dist); t && n % 2 != 0) {
      throw DomainError("two-beam initial data needs an even particle count");
    }
    Rng rng(seed);
    ens.v.reserve(n);
    for (std::size_t i = 0; i < n; ++i) ens.v.push_back(draw(dist, dim, i, n, rng));
  }
  if (ens.v.size() < 2) throw DomainError("an ensemble needs at least two particles");

  const Velocity mean = ens.momentum();
  if (mean.norm2() > 0.0) {
    for (auto& x : ens.v) x -= mean;
  }
  if (target_energy > 0.0) {
    const double e = ens.energy();
    if (!(e > 0.0)) throw DomainError("cannot rescale a zero-energy ensemble");
    const double s = std::sqrt(target_energy / e);
    for (auto& x : ens.v) x *= s;
  }
  return ens;
}

std::string distribution_name(const InitialDistribution& dist) {
  switch (dist.index()) {
    case 0: return "maxwellian";
    case 1: return "uniform-ball";
    case 2: return "two-beam";
    case 3: return "stretched-exponential";
    default: return "samples";
  }
}

}  // namespace granular
