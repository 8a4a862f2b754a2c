#pragma once

#include <functional>
#include <vector>

#include "granular/kernel.hpp"
#include "granular/moments.hpp"

namespace granular {

// Energy as a function of time, used for alpha(E) and the lower moments
// z_{1/2}, z_1 of the closure.
using EnergyProfile = std::function<double(double t)>;

EnergyProfile constant_energy(double e);
// Piecewise-linear interpolation; constant beyond the ends.
EnergyProfile tabulated_energy(std::vector<double> t, std::vector<double> e);

double default_gamma_p(double p);

// Supersolution system dz_p/dt = alpha(E) (A' p^{a/2-1/2} Z_p - A'' p^{a/2} z_p^{1+1/(2p)})
// on p = 3/2, 2, ..., p_max.
struct MomentOdeSystem {
  double a = 1.0;
  std::vector<double> grid;
  std::function<double(double)> gamma_p = default_gamma_p;
  Intensity alpha{};
  double A = 0.0;         // sup_p A_p with S_p <= A_p Gamma(ap+a/2+1) Z_p
  double A_prime = 0.0;   // sup_p A gamma_p Gamma(ap+a/2+1) / (Gamma(ap+1/2) p^{a/2-1/2})
  double A_dprime = 0.0;  // inf_p (1-gamma_p) Gamma(ap+1/2)^{1/(2p)} / p^{a/2}

  // Computes A, A', A'' on the grid. Throws DomainError if some gamma_p
  // violates 0 < gamma_p < min{1, 4/(p+1)}.
  static MomentOdeSystem make(double a, double p_max, Intensity alpha,
                              std::function<double(double)> gamma_p = default_gamma_p);

  // max{3/2, (2A'/A'')^2}
  double p0() const;

  // Combinatorial factor A_p for one p.
  double a_p(double p) const;

  // Right-hand side for state z on the grid, energy E.
  void rhs(const std::vector<double>& z, double energy, std::vector<double>& dz) const;
};

struct MomentBoundTrajectory {
  std::vector<double> t;
  std::vector<std::vector<double>> z;  // z[k][i] at t[k], grid index i
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
};

// Integrates the supersolution system from z0 (on system.grid) over
// [0, horizon], recording at `record` spacing (0 records every step).
MomentBoundTrajectory integrate_moment_bounds(const MomentOdeSystem& system,
                                              const std::vector<double>& z0,
                                              const EnergyProfile& energy, double horizon,
                                              double record = 0.0, double rtol = 1e-10,
                                              double atol = 1e-14);

// Initial data for the bound system: z_p of the estimate plus `margin`
// standard errors, inflated by `factor`.
std::vector<double> bound_initial_data(const MomentOdeSystem& system, const MomentVector& est,
                                       double margin = 2.0, double factor = 1.0);

struct InvariantCheck {
  double p = 0.0;
  double max_ratio = 0.0;  // sup_t z_p(t) / x^p
  bool invariant = false;
};

// For each p, integrates the p-th equation from z_p(0) = x^p with every
// other component frozen at x^k, in the scaled variable y = z_p / x^p.
std::vector<InvariantCheck> invariant_region_check(const MomentOdeSystem& system, double x,
                                                   const std::vector<double>& p_values,
                                                   double energy, double horizon);

}  // namespace granular
