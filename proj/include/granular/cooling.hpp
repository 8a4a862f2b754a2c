#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "granular/ensemble.hpp"
#include "granular/kernel.hpp"

namespace granular {

// Tail class of the initial datum: f_in exp(a |v|^eta) integrable.
// Compactly supported data have every eta; eta = 0 means unknown.
struct TailClass {
  double eta = 0.0;
  double a = 0.0;
  bool compact_support = false;

  static TailClass of(const InitialDistribution& dist);
};

// Runtime-checkable facts about a kernel near E = 0.
struct CoolingAssumptions {
  bool alpha_bounded_near_zero = false;
  bool spreading_uniform_near_zero = false;
  // Delta(E,u) >= delta0_lower E^delta for all u and small E.
  std::optional<double> delta0_lower;
  double delta = 0.0;
  // Delta(E,u) <= upper(E) for all u, with `upper` increasing.
  std::function<double(double)> upper;
  bool upper_increasing = false;
  // Cross-section of the form (1-e) u_hat/2 + (1+e) sigma/2 with e = e(E,|u|)
  // and a bounded, nondecreasing, convex angular density.
  bool h4 = false;
  // sup_u Delta(E, u) <= alpha(E)/4 always; used for consistency checks.
  std::function<double(double)> alpha;
};

// Assumptions are probed on (0, initial_energy], the range the energy can
// visit along a trajectory.
CoolingAssumptions derive_assumptions(const KernelSpec& spec, double initial_energy = 1.0);

enum class Verdict { Finite, Infinite, Undetermined };
enum class Rationale { AlphaJ, DeltaLe0, DeltaGeMinusHalf, None };

std::string to_string(Verdict v);
std::string to_string(Rationale r);

struct CoolingVerdict {
  Verdict verdict = Verdict::Undetermined;
  Rationale rationale = Rationale::None;
  std::optional<double> bound;  // upper bound on T_c when finite
};

// Closed-form integration of dE/dt = -Delta0 (2E)^{3/2} E^delta from E0 to 0.
// Requires delta < -1/2.
double finite_cooling_bound(double e0, double delta0, double delta);

// Rejects contradictory bounds (lower above upper, or above alpha/4).
CoolingVerdict classify_cooling(const CoolingAssumptions& assumptions, const TailClass& tail,
                                double initial_energy = 1.0);
CoolingVerdict classify_cooling(const KernelSpec& spec, const TailClass& tail,
                                double initial_energy = 1.0);

// C1 = max{C (E + E^{1/2}), (1 + 3 E^{3/2})/2}: with Y3 = 1 + m_{3/2} it
// bounds both dY3/dt <= C1 alpha Y3 and -dE/dt <= C1 alpha Y3.
double povzner_c1(double energy, double c = 0.41421356237309515);

// Largest T* with C1 alpha0(E/2) T* <= Y3 and 2 C1 alpha0(E/2) Y3 T* <= E/2.
// Returns +inf when alpha0(E/2) = 0.
double local_existence_horizon(double e_in, double y3_in, const std::function<double(double)>& alpha0,
                               double c1);

struct CorridorCheck {
  bool holds = true;
  double max_y3_ratio = 0.0;   // sup Y3(t) / Y3(0) on [0, T*]
  double min_energy_ratio = 0.0;  // inf E(t) / E(0) on [0, T*]
};

// Checks Y3 <= 2 Y3(0) and E >= E(0)/2 on samples with t <= t_star.
CorridorCheck corridor_check(const std::vector<double>& t, const std::vector<double>& y3,
                             const std::vector<double>& energy, double t_star);

}  // namespace granular
