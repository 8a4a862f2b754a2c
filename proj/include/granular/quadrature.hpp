#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace granular {

// Fixed-order Gauss-Legendre rule on [-1, 1], nodes by Newton iteration on
// the three-term recurrence.
class GaussLegendre {
 public:
  explicit GaussLegendre(int order);

  int order() const { return static_cast<int>(nodes_.size()); }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }

  template <class F>
  double integrate(F&& f, double a, double b) const {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double s = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * f(mid + half * nodes_[i]);
    return s * half;
  }

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

struct QuadratureResult {
  double value = 0.0;
  // |one-panel estimate - two-panel estimate|
  double residual = 0.0;
};

// Surface area of the unit sphere S^{dim-1} in R^dim.
double sphere_area(int dim);

// Integrals over S^{N-1} of functions of x = u_hat . sigma, reduced to one
// dimension in the polar angle: dsigma = |S^{N-2}| sin^{N-2}(theta) dtheta,
// x = cos(theta). The angle variable keeps the N = 2 endpoint weight smooth.
class SphereQuadrature {
 public:
  SphereQuadrature(int dim, int order = 64);

  int dim() const { return dim_; }
  int order() const { return rule_.order(); }

  // Integral of g(x) over the part of the sphere with x in [x_lo, x_hi].
  template <class G>
  QuadratureResult integrate(G&& g, double x_lo = -1.0, double x_hi = 1.0) const {
    if (x_hi <= x_lo) return {};
    const double th_lo = std::acos(std::min(1.0, x_hi));
    const double th_hi = std::acos(std::max(-1.0, x_lo));
    auto integrand = [&](double th) {
      return g(std::cos(th)) * std::pow(std::sin(th), dim_ - 2);
    };
    const double one = rule_.integrate(integrand, th_lo, th_hi);
    const double th_mid = 0.5 * (th_lo + th_hi);
    const double two =
        rule_.integrate(integrand, th_lo, th_mid) + rule_.integrate(integrand, th_mid, th_hi);
    return {ring_ * two, ring_ * std::abs(two - one)};
  }

 private:
  int dim_;
  double ring_;  // |S^{N-2}|
  GaussLegendre rule_;
};

}  // namespace granular
