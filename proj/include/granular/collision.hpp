#pragma once

#include <cstdint>

#include "granular/ensemble.hpp"
#include "granular/kernel.hpp"
#include "granular/velocity.hpp"

namespace granular {

struct CollisionOutcome {
  Velocity v_prime;
  Velocity v_star_prime;
  Velocity z;
  double energy_loss = 0.0;  // 1/2 (1 - |z|^2) |u|^2
};

// v' = (v + v*)/2 + z |u|/2, v*' = (v + v*)/2 - z |u|/2. Rejects |z| > 1.
CollisionOutcome post_collisional(const Velocity& v, const Velocity& v_star, const Velocity& z);

// v' = v - (1+e)/4 (u - |u| sigma). u = 0 is a no-op.
CollisionOutcome visco_elastic_outcome(const Velocity& v, const Velocity& v_star,
                                       const Velocity& sigma, double e);

// z = (1-e) u_hat/2 + (1+e) sigma/2
Velocity bcue_z(const Velocity& u_hat, const Velocity& sigma, double e);

// Draws z from beta(E, u; dz). Returns the zero vector for u = 0.
Velocity sample_z(const KernelSpec& spec, double energy, const Velocity& u, Rng& rng);

struct QuadratureEstimate {
  double value = 0.0;
  double residual = 0.0;
};

// Delta(E,u) = 1/4 alpha(E) int (1 - |z|^2) beta(E,u;dz).
QuadratureEstimate dissipation_rate(const KernelSpec& spec, double energy, const Velocity& u);

// beta-mass of {|u_hat . z| > 1 - eps}. For visco-elastic kernels the answer
// depends on |u|, passed as `speed`.
double angular_spreading(const KernelSpec& spec, double energy, double eps, double speed = 1.0);

// Supremum of angular_spreading over relative speeds in (0, max_speed].
double angular_spreading_sup(const KernelSpec& spec, double energy, double eps,
                             double max_speed);

struct DissipationOptions {
  std::size_t exact_threshold = 20000;  // pair sum is exact up to this n
  std::size_t samples = 400000;         // random pairs beyond it
  std::uint64_t seed = 0x6a09e667f3bcc908ULL;
};

struct DissipationEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  bool exact = true;
};

// D(f) = (1/n^2) sum_{i != j} |v_i - v_j|^3 Delta(E, v_i - v_j).
DissipationEstimate dissipation_functional(const ParticleEnsemble& ensemble,
                                           const KernelSpec& spec,
                                           const DissipationOptions& options = {});

}  // namespace granular
