#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "granular/kernel.hpp"
#include "granular/velocity.hpp"

namespace granular {

// n equally weighted particles; each carries mass 1/n.
struct ParticleEnsemble {
  int dim = 3;
  std::vector<Velocity> v;
  double time = 0.0;

  std::size_t size() const { return v.size(); }
  double weight() const { return 1.0 / static_cast<double>(v.size()); }
  // (1/n) sum |v_i|^2
  double energy() const;
  Velocity momentum() const;
  double max_speed() const;
  bool all_finite() const;
};

struct Maxwellian {
  double temperature = 1.0;
};
struct UniformBall {
  double radius = 1.0;
};
// Half the particles at +w e_1, half at -w e_1.
struct TwoBeam {
  double speed = 1.0;
};
// Density proportional to exp(-a |v|^eta).
struct StretchedExponential {
  double a = 1.0;
  double eta = 1.0;
};
struct UserSamples {
  std::vector<Velocity> samples;
};

using InitialDistribution =
    std::variant<Maxwellian, UniformBall, TwoBeam, StretchedExponential, UserSamples>;

// Draws n particles, recenters to zero momentum and, when target_energy > 0,
// rescales to that energy. UserSamples ignores n and seed.
ParticleEnsemble init_ensemble(const InitialDistribution& dist, int dim, std::size_t n,
                               std::uint64_t seed, double target_energy = 0.0);

std::string distribution_name(const InitialDistribution& dist);

}  // namespace granular
