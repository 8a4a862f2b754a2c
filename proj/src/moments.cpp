#include "granular/moments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "granular/error.hpp"

namespace granular {

std::size_t MomentVector::index(double p_value) const {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (std::abs(p[i] - p_value) < 1e-12) return i;
  }
  throw DomainError("moment index " + std::to_string(p_value) + " not on the grid");
}

std::vector<double> half_integer_grid(double p_min, double p_max) {
  std::vector<double> g;
  const long lo = std::lround(std::ceil(2.0 * p_min - 1e-9));
  const long hi = std::lround(std::floor(2.0 * p_max + 1e-9));
  for (long k = lo; k <= hi; ++k) g.push_back(0.5 * static_cast<double>(k));
  return g;
}

double normalized_moment(double m, double p, double a) {
  return m / std::tgamma(a * p + 0.5);
}

MomentVector moments(const ParticleEnsemble& ensemble, const std::vector<double>& p_grid,
                     double a) {
  if (!(a >= 1.0)) throw DomainError("moment scale a must be >= 1");
  const std::size_t n = ensemble.size();
  if (n == 0) throw DomainError("moments of an empty ensemble");
  MomentVector out;
  out.a = a;
  out.p = p_grid;
  const double nn = static_cast<double>(n);
  std::vector<double> s2(n);
  for (std::size_t i = 0; i < n; ++i) s2[i] = ensemble.v[i].norm2();
  for (double p : p_grid) {
    if (p < 0.0) throw DomainError("negative moment index");
    double sum = 0.0, sum2 = 0.0;
    for (double x : s2) {
      const double w = p == 0.0 ? 1.0 : std::pow(x, p);
      sum += w;
      sum2 += w * w;
    }
    const double mean = sum / nn;
    // Leave-one-out means theta_i = (sum - w_i)/(n-1); the jackknife variance
    // (n-1)/n sum (theta_i - theta)^2 reduces to the sample variance / n.
    double var = 0.0;
    if (n > 1) var = std::max(0.0, (sum2 - nn * mean * mean) / (nn - 1.0)) / nn;
    out.m.push_back(mean);
    out.se.push_back(std::sqrt(var));
    out.z.push_back(normalized_moment(mean, p, a));
  }
  if (!p_grid.empty()) {
    const double p_max = *std::max_element(p_grid.begin(), p_grid.end());
    const std::size_t top = static_cast<std::size_t>(
        std::max_element(p_grid.begin(), p_grid.end()) - p_grid.begin());
    const double rel = out.m[top] > 0.0 ? out.se[top] / out.m[top] : 0.0;
    out.unreliable = rel > 0.1 || (p_max > 5.0 && n <= 100000);
  }
  return out;
}

ScalarEstimate exp_moment(const ParticleEnsemble& ensemble, double a, double eta) {
  if (!(eta > 0.0 && eta <= 2.0)) throw DomainError("eta must lie in (0, 2]");
  const std::size_t n = ensemble.size();
  if (n == 0) throw DomainError("exp moment of an empty ensemble");
  std::vector<double> l(n);
  for (std::size_t i = 0; i < n; ++i) l[i] = a * std::pow(ensemble.v[i].norm(), eta);
  const double shift = *std::max_element(l.begin(), l.end());
  double s = 0.0, s2 = 0.0;
  for (double x : l) {
    const double w = std::exp(x - shift);
    s += w;
    s2 += w * w;
  }
  const double nn = static_cast<double>(n);
  const double mean = s / nn;
  const double var = n > 1 ? std::max(0.0, (s2 - nn * mean * mean) / (nn - 1.0)) / nn : 0.0;
  ScalarEstimate out;
  out.log_value = shift + std::log(mean);
  out.value = std::exp(out.log_value);
  out.standard_error = std::exp(shift) * std::sqrt(var);
  return out;
}

Concentration concentration_diagnostics(const ParticleEnsemble& ensemble, double r) {
  if (!(r > 0.0)) throw DomainError("concentration radius must be positive");
  const std::size_t n = ensemble.size();
  if (n == 0) return {};
  double mass = 0.0, e_out = 0.0, e_tot = 0.0;
  const double r2 = r * r;
  for (const auto& v : ensemble.v) {
    const double s2 = v.norm2();
    e_tot += s2;
    if (s2 > r2) {
      mass += 1.0;
      e_out += s2;
    }
  }
  return {mass / static_cast<double>(n), e_tot > 0.0 ? e_out / e_tot : 0.0};
}

PovznerCheck povzner_bound(double x, double y, double c) {
  if (x < 0.0 || y < 0.0) throw DomainError("Povzner arguments must be nonnegative");
  const double sx = std::sqrt(x), sy = std::sqrt(y);
  PovznerCheck out;
  out.lhs = (sx + sy) * (std::pow(x + y, 1.5) - x * sx - y * sy);
  out.rhs = c * (2.0 * x * y + sx * y * sy + x * sx * sy);
  out.holds = out.lhs <= out.rhs * (1.0 + 1e-12) + 1e-300;
  return out;
}

PovznerCheck povzner_bound(const Velocity& v, const Velocity& v_star, double c) {
  return povzner_bound(v.norm2(), v_star.norm2(), c);
}

double povzner_constant_minimal(int points, double span) {
  double best = 0.0;
  for (int i = 0; i < points; ++i) {
    const double s = std::pow(10.0, -span + 2.0 * span * i / (points - 1));
    const auto pc = povzner_bound(s, 1.0, 1.0);
    if (pc.rhs > 0.0) best = std::max(best, pc.lhs / pc.rhs);
  }
  return best;
}

}  // namespace granular
