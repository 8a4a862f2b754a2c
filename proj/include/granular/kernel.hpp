#pragma once

#include <functional>
#include <random>
#include <string>
#include <variant>

#include "granular/velocity.hpp"

namespace granular {

using Rng = std::mt19937_64;

// alpha(E) = coefficient * E^exponent.
struct Intensity {
  double coefficient = 1.0;
  double exponent = 0.0;

  double operator()(double energy) const;
  bool bounded_near_zero() const { return coefficient == 0.0 || exponent >= 0.0; }
};

struct ConstantRestitution {
  double e = 1.0;
};

// e(g) = clamp(1 - c1 g^{1/5} + c2 g^{2/5}, 0, 1) with g the normal relative
// speed |u| |u_hat - sigma| / 2.
struct ViscoElasticRestitution {
  double c1 = 0.0;
  double c2 = 0.0;
  double e(double normal_speed) const;
};

// e(E) = clamp(1 - c E^q, 0, 1).
struct EnergyDependentRestitution {
  double c = 0.0;
  double q = 1.0;
  double e(double energy) const;
};

struct StickyRestitution {};

// Stochastic inelasticity outside the restitution family: the caller supplies
// a sampler for z and the spreading function j_E. `delta`, when set, returns
// the dissipation rate per unit intensity.
struct CustomMeasure {
  std::function<Velocity(double energy, const Velocity& u, Rng& rng)> sample_z;
  std::function<double(double energy, double eps)> spreading;
  std::function<double(double energy, const Velocity& u)> delta;
};

using RestitutionModel = std::variant<ConstantRestitution, ViscoElasticRestitution,
                                      EnergyDependentRestitution, StickyRestitution,
                                      CustomMeasure>;

std::string restitution_name(const RestitutionModel& model);

// Density of sigma on S^{N-1} as a function of x = u_hat . sigma, normalized
// so that it integrates to one over the sphere.
class AngularCrossSection {
 public:
  enum class Kind { Isotropic, Linear, Custom };

  static AngularCrossSection isotropic(int dim);
  // Shape 1 + kappa x, |kappa| <= 1.
  static AngularCrossSection linear(int dim, double kappa);
  // Arbitrary nonnegative shape with sup bound used for rejection sampling.
  static AngularCrossSection custom(int dim, std::function<double(double)> shape, double bound);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  double kappa() const { return kappa_; }
  double density(double x) const { return shape(x) / norm_; }
  double shape(double x) const;
  double normalization() const { return norm_; }

  // Draws sigma given a unit vector u_hat.
  Velocity sample_sigma(const Velocity& u_hat, Rng& rng) const;

 private:
  AngularCrossSection() = default;
  void normalize();

  Kind kind_ = Kind::Isotropic;
  int dim_ = 3;
  double kappa_ = 0.0;
  double bound_ = 1.0;
  double norm_ = 1.0;
  std::function<double(double)> custom_;
};

Velocity uniform_on_sphere(int dim, Rng& rng);

struct KernelSpec {
  int dimension = 3;
  Intensity intensity{};
  RestitutionModel restitution = ConstantRestitution{1.0};
  AngularCrossSection angular = AngularCrossSection::isotropic(3);
  int quadrature_order = 64;

  // Throws DomainError on out-of-range parameters or mismatched dimensions.
  void validate() const;

  bool is_elastic() const;
  bool is_sticky() const { return std::holds_alternative<StickyRestitution>(restitution); }
  // True when z has the form (1-e) u_hat/2 + (1+e) sigma/2.
  bool is_bcue() const;
  // Restitution at energy E and normal relative speed g; only meaningful
  // for bCue models.
  double restitution_at(double energy, double normal_speed) const;
};

}  // namespace granular
