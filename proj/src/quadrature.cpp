#include "granular/quadrature.hpp"

#include <numbers>
#include <string>

#include "granular/error.hpp"

namespace granular {

GaussLegendre::GaussLegendre(int order) {
  if (order < 1) throw DomainError("Gauss-Legendre order must be positive");
  const auto n = static_cast<std::size_t>(order);
  nodes_.resize(n);
  weights_.resize(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = order == 1 ? 1.0 : order * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes_[i] = -x;
    nodes_[n - 1 - i] = x;
    weights_[i] = w;
    weights_[n - 1 - i] = w;
  }
  if (order == 1) {
    nodes_[0] = 0.0;
    weights_[0] = 2.0;
  }
}

double sphere_area(int dim) {
  if (dim < 1) throw DomainError("sphere_area: dimension must be >= 1");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);
}

SphereQuadrature::SphereQuadrature(int dim, int order)
    : dim_(dim), ring_(0.0), rule_(order) {
  if (dim < 2) throw DomainError("sphere quadrature needs dimension >= 2, got " + std::to_string(dim));
  ring_ = sphere_area(dim - 1);
}

}  // namespace granular
