#pragma once

#include <vector>

#include "granular/ensemble.hpp"

namespace granular {

struct MomentVector {
  double a = 1.0;
  std::vector<double> p;
  std::vector<double> m;   // (1/n) sum |v_i|^{2p}
  std::vector<double> se;  // jackknife standard errors of m
  std::vector<double> z;   // m_p / Gamma(a p + 1/2)
  // Set when the highest moment has relative standard error above 10% or
  // p_max > 5 with n <= 1e5.
  bool unreliable = false;

  // Index of p in the grid; throws DomainError when absent.
  std::size_t index(double p_value) const;
  double at(double p_value) const { return m[index(p_value)]; }
};

// {p_min, p_min + 1/2, ..., p_max}
std::vector<double> half_integer_grid(double p_min, double p_max);

double normalized_moment(double m, double p, double a);

MomentVector moments(const ParticleEnsemble& ensemble, const std::vector<double>& p_grid,
                     double a = 1.0);

struct ScalarEstimate {
  double value = 0.0;
  double standard_error = 0.0;
  double log_value = 0.0;  // log of value, finite even when value overflows
};

// (1/n) sum exp(a |v_i|^eta), accumulated in log-sum-exp form.
ScalarEstimate exp_moment(const ParticleEnsemble& ensemble, double a, double eta);

struct Concentration {
  double mass_outside = 0.0;
  double energy_outside = 0.0;  // fraction of E carried by |v| > r; 0 when E = 0
};

Concentration concentration_diagnostics(const ParticleEnsemble& ensemble, double r);

// Smallest constant making the scalar Povzner inequality hold at x = y.
inline constexpr double kPovznerConstant = 0.41421356237309515;  // sqrt(2) - 1

struct PovznerCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
};

// lhs = (x^{1/2} + y^{1/2}) [(x+y)^{3/2} - x^{3/2} - y^{3/2}],
// rhs = C (2xy + x^{1/2} y^{3/2} + x^{3/2} y^{1/2}), x = |v|^2, y = |v*|^2.
PovznerCheck povzner_bound(double x, double y, double c = kPovznerConstant);
PovznerCheck povzner_bound(const Velocity& v, const Velocity& v_star,
                           double c = kPovznerConstant);

// sup of lhs/rhs over a log-spaced grid of ratios x/y in [10^-span, 10^span].
double povzner_constant_minimal(int points = 2001, double span = 6.0);

}  // namespace granular
