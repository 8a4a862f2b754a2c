#include "granular/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "granular/error.hpp"
#include "granular/quadrature.hpp"

namespace granular {

namespace {
template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;
}  // namespace

double Intensity::operator()(double energy) const {
  if (coefficient == 0.0) return 0.0;
  if (exponent == 0.0) return coefficient;
  if (energy <= 0.0) return exponent > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return coefficient * std::pow(energy, exponent);
}

double ViscoElasticRestitution::e(double normal_speed) const {
  const double g = std::max(0.0, normal_speed);
  const double s = std::pow(g, 0.2);
  return std::clamp(1.0 - c1 * s + c2 * s * s, 0.0, 1.0);
}

double EnergyDependentRestitution::e(double energy) const {
  return std::clamp(1.0 - c * std::pow(std::max(0.0, energy), q), 0.0, 1.0);
}

std::string restitution_name(const RestitutionModel& model) {
  return std::visit(overloaded{
                        [](const ConstantRestitution&) { return std::string("constant"); },
                        [](const ViscoElasticRestitution&) { return std::string("visco-elastic"); },
                        [](const EnergyDependentRestitution&) { return std::string("energy"); },
                        [](const StickyRestitution&) { return std::string("sticky"); },
                        [](const CustomMeasure&) { return std::string("custom"); },
                    },
                    model);
}

AngularCrossSection AngularCrossSection::isotropic(int dim) {
  AngularCrossSection a;
  a.kind_ = Kind::Isotropic;
  a.dim_ = dim;
  a.normalize();
  return a;
}

AngularCrossSection AngularCrossSection::linear(int dim, double kappa) {
  if (!(std::abs(kappa) <= 1.0)) throw DomainError("linear cross-section needs |kappa| <= 1");
  AngularCrossSection a;
  a.kind_ = Kind::Linear;
  a.dim_ = dim;
  a.kappa_ = kappa;
  a.bound_ = 1.0 + std::abs(kappa);
  a.normalize();
  return a;
}

AngularCrossSection AngularCrossSection::custom(int dim, std::function<double(double)> shape,
                                                double bound) {
  if (!shape) throw DomainError("custom cross-section needs a shape function");
  if (!(bound > 0.0)) throw DomainError("custom cross-section needs a positive bound");
  AngularCrossSection a;
  a.kind_ = Kind::Custom;
  a.dim_ = dim;
  a.bound_ = bound;
  a.custom_ = std::move(shape);
  a.normalize();
  return a;
}

double AngularCrossSection::shape(double x) const {
  switch (kind_) {
    case Kind::Isotropic:
      return 1.0;
    case Kind::Linear:
      return 1.0 + kappa_ * x;
    case Kind::Custom:
      return custom_(x);
  }
  return 1.0;
}

void AngularCrossSection::normalize() {
  SphereQuadrature quad(dim_, 64);
  if (kind_ == Kind::Isotropic) {
    norm_ = sphere_area(dim_);
    return;
  }
  auto r = quad.integrate([this](double x) { return shape(x); });
  if (!(r.value > 0.0) || !std::isfinite(r.value)) {
    throw DomainError("angular cross-section has no positive mass");
  }
  norm_ = r.value;
}

Velocity uniform_on_sphere(int dim, Rng& rng) {
  std::normal_distribution<double> gauss;
  Velocity s(dim);
  double n2 = 0.0;
  do {
    for (int i = 0; i < dim; ++i) s[i] = gauss(rng);
    n2 = s.norm2();
  } while (n2 < 1e-300);
  return s / std::sqrt(n2);
}

Velocity AngularCrossSection::sample_sigma(const Velocity& u_hat, Rng& rng) const {
  if (kind_ == Kind::Isotropic) return uniform_on_sphere(dim_, rng);
  std::uniform_real_distribution<double> unif(0.0, bound_);
  for (int tries = 0; tries < 1000000; ++tries) {
    Velocity s = uniform_on_sphere(dim_, rng);
    if (unif(rng) < shape(dot(u_hat, s))) return s;
  }
  throw NumericError("angular rejection sampler made no progress");
}

void KernelSpec::validate() const {
  if (dimension < 2 || dimension > kMaxDim) throw DomainError("kernel dimension out of range");
  if (angular.dim() != dimension) throw DomainError("angular cross-section dimension mismatch");
  if (!(intensity.coefficient >= 0.0) || !std::isfinite(intensity.exponent)) {
    throw DomainError("intensity must be nonnegative");
  }
  if (quadrature_order < 2) throw DomainError("quadrature order must be >= 2");
  std::visit(overloaded{
                 [](const ConstantRestitution& c) {
                   if (!(c.e >= 0.0 && c.e <= 1.0)) throw DomainError("restitution e outside [0,1]");
                 },
                 [](const ViscoElasticRestitution& v) {
                   if (!(v.c1 >= 0.0) || !(v.c2 >= 0.0)) {
                     throw DomainError("visco-elastic coefficients must be nonnegative");
                   }
                 },
                 [](const EnergyDependentRestitution& d) {
                   if (!(d.c >= 0.0) || !(d.q > 0.0)) {
                     throw DomainError("energy-dependent restitution needs c >= 0, q > 0");
                   }
                 },
                 [](const StickyRestitution&) {},
                 [](const CustomMeasure& m) {
                   if (!m.sample_z || !m.spreading) {
                     throw DomainError("custom measure needs a sampler and a spreading estimator");
                   }
                 },
             },
             restitution);
}

bool KernelSpec::is_elastic() const {
  if (const auto* c = std::get_if<ConstantRestitution>(&restitution)) return c->e == 1.0;
  if (const auto* v = std::get_if<ViscoElasticRestitution>(&restitution)) {
    return v->c1 == 0.0 && v->c2 == 0.0;
  }
  if (const auto* d = std::get_if<EnergyDependentRestitution>(&restitution)) return d->c == 0.0;
  return false;
}

bool KernelSpec::is_bcue() const {
  return std::holds_alternative<ConstantRestitution>(restitution) ||
         std::holds_alternative<ViscoElasticRestitution>(restitution) ||
         std::holds_alternative<EnergyDependentRestitution>(restitution);
}

double KernelSpec::restitution_at(double energy, double normal_speed) const {
  return std::visit(overloaded{
                        [](const ConstantRestitution& c) { return c.e; },
                        [&](const ViscoElasticRestitution& v) { return v.e(normal_speed); },
                        [&](const EnergyDependentRestitution& d) { return d.e(energy); },
                        [](const StickyRestitution&) { return 0.0; },
                        [](const CustomMeasure&) -> double {
                          throw DomainError("custom measures have no restitution coefficient");
                        },
                    },
                    restitution);
}

}  // namespace granular
