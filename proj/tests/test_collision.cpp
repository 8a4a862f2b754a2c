#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "granular/collision.hpp"
#include "granular/error.hpp"
#include "granular/quadrature.hpp"

using namespace granular;

namespace {

KernelSpec constant_kernel(double e, int dim = 3) {
  KernelSpec k;
  k.dimension = dim;
  k.angular = AngularCrossSection::isotropic(dim);
  k.restitution = ConstantRestitution{e};
  return k;
}

}  // namespace

TEST_CASE("velocity arithmetic") {
  const Velocity a{1.0, 2.0, 2.0};
  CHECK(a.norm() == doctest::Approx(3.0));
  CHECK(dot(a, Velocity{1.0, 0.0, 0.0}) == 1.0);
  CHECK(unit(a).norm() == doctest::Approx(1.0));
  const Velocity r = reject_from(a, Velocity{1.0, 0.0, 0.0});
  CHECK(r[0] == 0.0);
  CHECK_THROWS_AS(unit(Velocity(3)), DomainError);
  CHECK_THROWS_AS(Velocity(kMaxDim + 1), DomainError);
}

TEST_CASE("Gauss-Legendre nodes and exactness") {
  const GaussLegendre g5(5);
  // Tabulated five-point rule.
  CHECK(g5.nodes()[4] == doctest::Approx(0.9061798459386640).epsilon(1e-15));
  CHECK(g5.weights()[4] == doctest::Approx(0.2369268850561891).epsilon(1e-15));
  CHECK(g5.weights()[2] == doctest::Approx(0.5688888888888889).epsilon(1e-15));
  // Exact for degree 9.
  const double v = g5.integrate([](double x) { return std::pow(x, 8) + x * x * x; }, -1.0, 1.0);
  CHECK(v == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
  const GaussLegendre g64(64);
  CHECK(g64.integrate([](double x) { return std::exp(x); }, 0.0, 1.0) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
}

TEST_CASE("sphere areas and quadrature") {
  CHECK(sphere_area(2) == doctest::Approx(2.0 * std::numbers::pi));
  CHECK(sphere_area(3) == doctest::Approx(4.0 * std::numbers::pi));
  CHECK(sphere_area(4) == doctest::Approx(2.0 * std::numbers::pi * std::numbers::pi));
  for (int dim : {2, 3, 4, 5}) {
    const SphereQuadrature q(dim);
    const auto r = q.integrate([](double) { return 1.0; });
    CHECK(r.value == doctest::Approx(sphere_area(dim)).epsilon(1e-13));
    CHECK(r.residual < 1e-12);
  }
  // x^2 averages to 1/N over the sphere.
  const SphereQuadrature q3(3);
  CHECK(q3.integrate([](double x) { return x * x; }).value / sphere_area(3) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("post-collisional velocities") {
  SUBCASE("equal velocities") {
    const Velocity v{0.3, -0.2, 1.0};
    const auto c = post_collisional(v, v, Velocity{0.1, 0.2, 0.3});
    CHECK((c.v_prime - v).norm() == 0.0);
    CHECK((c.v_star_prime - v).norm() == 0.0);
    CHECK(c.energy_loss == 0.0);
  }
  SUBCASE("unit z is elastic") {
    const auto c = post_collisional(Velocity{1.0, 0.5, 0.0}, Velocity{-0.3, 0.1, 2.0},
                                    Velocity{0.0, 0.6, 0.8});
    CHECK(c.energy_loss == doctest::Approx(0.0).epsilon(1e-15));
  }
  SUBCASE("head-on sticky") {
    const auto c = post_collisional(Velocity{1.0, 0.0, 0.0}, Velocity{-1.0, 0.0, 0.0}, Velocity(3));
    CHECK(c.v_prime.norm() == 0.0);
    CHECK(c.v_star_prime.norm() == 0.0);
    CHECK(c.energy_loss == 2.0);
  }
  CHECK_THROWS_AS(post_collisional(Velocity{1.0, 0.0}, Velocity{0.0, 0.0}, Velocity{1.0, 0.1}),
                  DomainError);
}

TEST_CASE("visco-elastic parametrization") {
  const Velocity v{1.0, 0.0, 0.0}, w{-1.0, 0.0, 0.0};
  SUBCASE("identity collision") {
    const auto c = visco_elastic_outcome(v, w, unit(v - w), 1.0);
    CHECK((c.v_prime - v).norm() < 1e-15);
    CHECK((c.v_star_prime - w).norm() < 1e-15);
  }
  SUBCASE("elastic conserves energy") {
    const auto c = visco_elastic_outcome(v, w, Velocity{0.0, 0.6, 0.8}, 1.0);
    CHECK(c.energy_loss == doctest::Approx(0.0).epsilon(1e-15));
  }
  SUBCASE("e = 0 reversed sigma is the sticky head-on case") {
    const auto c = visco_elastic_outcome(v, w, Velocity{-1.0, 0.0, 0.0}, 0.0);
    CHECK(c.v_prime.norm() < 1e-15);
    CHECK(c.v_star_prime.norm() < 1e-15);
  }
  SUBCASE("1 - |z|^2 = (1 - e^2)(1 - x)/2") {
    const Velocity uh = unit(Velocity{0.3, 1.0, -0.4});
    const Velocity s = unit(Velocity{-0.5, 0.2, 0.9});
    const double e = 0.37;
    const double x = dot(uh, s);
    CHECK(1.0 - bcue_z(uh, s, e).norm2() ==
          doctest::Approx((1.0 - e * e) * (1.0 - x) / 2.0).epsilon(1e-14));
  }
}

TEST_CASE("dissipation rate Delta") {
  const Velocity u{0.4, -1.1, 0.3};
  SUBCASE("elastic") { CHECK(dissipation_rate(constant_kernel(1.0), 1.0, u).value == 0.0); }
  SUBCASE("isotropic N=3") {
    for (double e : {0.0, 0.25, 0.9}) {
      CHECK(dissipation_rate(constant_kernel(e), 1.0, u).value ==
            doctest::Approx((1.0 - e * e) / 8.0).epsilon(1e-12));
    }
  }
  SUBCASE("isotropic N=2") {
    // tests/oracles/dissipation.py
    CHECK(dissipation_rate(constant_kernel(0.3, 2), 1.0, Velocity{1.0, 0.2}).value ==
          doctest::Approx(0.11375).epsilon(1e-12));
  }
  SUBCASE("sticky") {
    KernelSpec k;
    k.restitution = StickyRestitution{};
    k.intensity = {2.0, 0.0};
    CHECK(dissipation_rate(k, 1.0, u).value == doctest::Approx(0.5).epsilon(1e-14));
  }
  SUBCASE("linear angular density") {
    KernelSpec k = constant_kernel(0.5);
    k.angular = AngularCrossSection::linear(3, 0.6);
    CHECK(dissipation_rate(k, 1.0, u).value == doctest::Approx(0.075).epsilon(1e-12));
  }
  SUBCASE("visco-elastic") {
    KernelSpec k;
    k.restitution = ViscoElasticRestitution{0.3, 0.05};
    // Adaptive-quadrature oracle in tests/oracles/dissipation.py.
    CHECK(dissipation_rate(k, 1.0, unit(u) * 1.7).value ==
          doctest::Approx(0.056814781664437534).epsilon(1e-7));
    CHECK(dissipation_rate(k, 1.0, unit(u) * 0.2).value ==
          doctest::Approx(0.041597803885478075).epsilon(1e-7));
  }
}

TEST_CASE("dissipation functional") {
  ParticleEnsemble ens;
  ens.dim = 3;
  SUBCASE("all particles at one velocity") {
    ens.v.assign(10, Velocity{0.5, 0.1, 0.0});
    CHECK(dissipation_functional(ens, constant_kernel(0.5)).value == 0.0);
  }
  SUBCASE("elastic") {
    ens.v = {Velocity{1.0, 0.0, 0.0}, Velocity{-1.0, 0.0, 0.0}, Velocity{0.0, 1.0, 0.0}};
    CHECK(dissipation_functional(ens, constant_kernel(1.0)).value == 0.0);
  }
  SUBCASE("two-particle sticky pair sum") {
    KernelSpec k;
    k.restitution = StickyRestitution{};
    ens.v = {Velocity{1.0, 0.0, 0.0}, Velocity{-1.0, 0.0, 0.0}};
    // (1/4) * 2 ordered pairs * |u|^3 = 8 * Delta = 1/4
    const auto d = dissipation_functional(ens, k);
    CHECK(d.exact);
    CHECK(d.value == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("angular spreading j_E") {
  SUBCASE("whole domain") {
    CHECK(angular_spreading(constant_kernel(0.5), 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-10));
  }
  SUBCASE("elastic isotropic N=3") {
    for (double eps : {1e-3, 0.1, 0.4}) {
      CHECK(angular_spreading(constant_kernel(1.0), 1.0, eps) == doctest::Approx(eps).epsilon(1e-9));
    }
  }
  SUBCASE("sticky") {
    KernelSpec k;
    k.restitution = StickyRestitution{};
    CHECK(angular_spreading(k, 1.0, 0.99) == 0.0);
  }
  SUBCASE("e = 0.5 frozen oracle") {
    // mass of |1/4 + 3x/4| > 1 - eps with x uniform: 2 eps/3 below eps = 1/2.
    CHECK(angular_spreading(constant_kernel(0.5), 1.0, 0.1) == doctest::Approx(0.2 / 3.0).epsilon(1e-9));
    CHECK(angular_spreading(constant_kernel(0.5), 1.0, 0.6) == doctest::Approx(0.7 / 1.5).epsilon(1e-9));
  }
}

TEST_CASE("kernel validation") {
  KernelSpec k = constant_kernel(1.5);
  CHECK_THROWS_AS(k.validate(), DomainError);
  k = constant_kernel(0.5);
  k.dimension = 2;
  CHECK_THROWS_AS(k.validate(), DomainError);  // angular density built for N=3
  CHECK_THROWS_AS(AngularCrossSection::linear(3, 1.5), DomainError);
  KernelSpec ok = constant_kernel(0.5);
  CHECK_NOTHROW(ok.validate());
  CHECK(ok.is_bcue());
  CHECK_FALSE(ok.is_elastic());
}

TEST_CASE("sampling") {
  Rng rng(99);
  SUBCASE("linear angular density has mean x = kappa/3") {
    const auto a = AngularCrossSection::linear(3, 0.9);
    const Velocity uh{0.0, 0.0, 1.0};
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = dot(a.sample_sigma(uh, rng), uh);
      s += x;
      s2 += x * x;
    }
    const double m = s / n, se = std::sqrt((s2 / n - m * m) / n);
    CHECK(std::abs(m - 0.3) < 4.0 * se);
  }
  SUBCASE("sampled z stays in the unit ball") {
    KernelSpec k;
    k.restitution = ViscoElasticRestitution{0.3, 0.05};
    for (int i = 0; i < 10000; ++i) {
      const Velocity u{std::sin(i * 1.0), std::cos(i * 0.7), 0.3};
      CHECK(sample_z(k, 1.0, u, rng).norm() <= 1.0 + 1e-12);
    }
    CHECK(sample_z(k, 1.0, Velocity(3), rng).norm() == 0.0);
  }
}
