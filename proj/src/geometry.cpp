#include "granular/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "granular/error.hpp"

namespace granular {

namespace {

constexpr double kConeSlack = 1e-14;
constexpr std::uintmax_t kMaxIter = 200;

// u1 + (u1^2 + c^2)^{1/2} r - w1, evaluated without cancellation for u1 < 0.
double coordinate_gap(double u1, double c, double r, double w1) {
  const double s = std::hypot(u1, c);
  if (u1 >= 0.0) return u1 + r * s - w1;
  const double denom = r * s - u1;
  return (r * r * c * c - (1.0 - r * r) * u1 * u1) / denom - w1;
}

double solve_coordinate(double w1, double c, double r, double scale) {
  auto f = [&](double u1) { return coordinate_gap(u1, c, r, w1); };
  double a = -scale, b = scale;
  double fa = f(a), fb = f(b);
  for (int k = 0; fa > 0.0 && k < 2000; ++k) {
    a *= 2.0;
    fa = f(a);
  }
  for (int k = 0; fb < 0.0 && k < 2000; ++k) {
    b *= 2.0;
    fb = f(b);
  }
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (!(fa < 0.0 && fb > 0.0)) {
    throw NumericError("shift inverse: no bracket (w1=" + std::to_string(w1) + ", |w2|=" +
                       std::to_string(c) + ")");
  }
  std::uintmax_t iters = kMaxIter;
  auto res = boost::math::tools::toms748_solve(f, a, b, fa, fb,
                                               boost::math::tools::eps_tolerance<double>(50),
                                               iters);
  if (iters >= kMaxIter) {
    throw NumericError("shift inverse: root-finder exhausted iterations on [" +
                       std::to_string(res.first) + ", " + std::to_string(res.second) + "]");
  }
  return 0.5 * (res.first + res.second);
}

}  // namespace

Velocity shift_map(const Velocity& z, const Velocity& u) { return u + u.norm() * z; }

double shift_jacobian(const Velocity& z, const Velocity& u) {
  const double n = u.norm();
  if (!(n > 0.0)) throw DomainError("Jacobian of Phi_z is undefined at u = 0");
  return 1.0 + dot(u, z) / n;
}

double cone_delta(double gamma, double z_norm) {
  const double d2 = 1.0 + 2.0 * gamma * z_norm + z_norm * z_norm;
  if (d2 <= 0.0) return -1.0;
  return (gamma + z_norm) / std::sqrt(d2);
}

bool in_cone(const Velocity& w, const Velocity& axis, double gamma) {
  const double wn = w.norm(), an = axis.norm();
  if (!(wn > 0.0)) return false;
  if (!(an > 0.0)) return true;
  return dot(w, axis) / (wn * an) > gamma - kConeSlack;
}

Velocity shift_map_inverse(const Velocity& z, const Velocity& w, double gamma) {
  const double r = z.norm();
  if (r > 1.0 + 1e-12) throw DomainError("|z| > 1");
  if (r == 0.0) return w;
  const double wn = w.norm();
  if (wn == 0.0) return w;
  const Velocity zh = z / r;
  if (gamma > -1.0 && !in_cone(w, zh, cone_delta(gamma, r))) {
    throw DomainError("w outside the image cone of Phi_z");
  }
  const double w1 = dot(w, zh);
  const Velocity w2 = w - w1 * zh;
  const double c = w2.norm();
  if (r >= 1.0 && w1 <= 0.0) throw DomainError("w is not in the range of Phi_z with |z| = 1");
  const double u1 = solve_coordinate(w1, c, std::min(r, 1.0), wn + 1.0);
  return u1 * zh + w2;
}

double restitution_ratio(double e) { return (1.0 + e) / (3.0 - e); }

double omega_e(double e, double gamma) { return cone_delta(gamma, restitution_ratio(e)); }

double omega_star(double gamma) { return std::sqrt(0.5 * (1.0 + gamma)); }

double PrePostMap::omega(double g) const {
  return kind == MapKind::Pre ? omega_e(e, g) : omega_star(g);
}

namespace {

void check_map(const PrePostMap& m) {
  if (!(m.e >= 0.0 && m.e <= 1.0)) throw DomainError("restitution e outside [0,1]");
  if (std::abs(m.sigma.norm() - 1.0) > 1e-10) throw DomainError("sigma must be a unit vector");
  if (m.anchor.dim() != m.sigma.dim()) throw DomainError("dimension mismatch");
}

}  // namespace

Velocity pre_post_forward(const PrePostMap& map, const Velocity& x) {
  check_map(map);
  const Velocity d = x - map.anchor;
  if (map.kind == MapKind::Pre) {
    return map.anchor + (3.0 - map.e) / 4.0 * shift_map(map.r_e() * map.sigma, d);
  }
  return map.anchor + (1.0 + map.e) / 4.0 * shift_map(map.sigma, d);
}

Velocity pre_post_inverse(const PrePostMap& map, const Velocity& v_prime) {
  check_map(map);
  const Velocity d = v_prime - map.anchor;
  if (map.gamma > -1.0 && d.norm2() > 0.0 && !in_cone(d, map.sigma, map.omega())) {
    throw DomainError("v' outside the image cone of the pre/post map");
  }
  if (map.kind == MapKind::Pre) {
    const double s = 4.0 / (3.0 - map.e);
    return map.anchor + shift_map_inverse(map.r_e() * map.sigma, s * d);
  }
  if (map.e + 1.0 == 0.0) throw DomainError("degenerate map");
  return map.anchor + shift_map_inverse(map.sigma, 4.0 / (1.0 + map.e) * d);
}

double pre_post_jacobian(const PrePostMap& map, const Velocity& x) {
  check_map(map);
  const Velocity d = x - map.anchor;
  const int n = d.dim();
  if (map.kind == MapKind::Pre) {
    return std::pow((3.0 - map.e) / 4.0, n) * shift_jacobian(map.r_e() * map.sigma, d);
  }
  return std::pow((1.0 + map.e) / 4.0, n) * shift_jacobian(map.sigma, d);
}

InterpolationResult restitution_interpolation_residual(double e, double e_prime, double t,
                                                       const Velocity& v_prime,
                                                       const Velocity& v_star,
                                                       const Velocity& sigma) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("t outside [0,1]");
  auto inverse = [&](double ee) {
    return pre_post_inverse(PrePostMap{MapKind::Pre, ee, sigma, v_star, -1.0}, v_prime);
  };
  const Velocity a = inverse(e);
  const Velocity b = inverse(e_prime);
  const Velocity target = t * a + (1.0 - t) * b;
  const double target1 = dot(target - v_star, sigma);
  auto gap = [&](double ee) { return dot(inverse(ee) - v_star, sigma) - target1; };
  auto finish = [&](double ee) {
    const Velocity got = inverse(ee);
    return InterpolationResult{ee, std::abs(dot(got - v_star, sigma) - target1),
                                (got - target).norm()};
  };

  if (e == e_prime || t == 1.0) return finish(e);
  if (t == 0.0) return finish(e_prime);
  double lo = std::min(e, e_prime), hi = std::max(e, e_prime);
  double flo = gap(lo), fhi = gap(hi);
  if (flo == 0.0) return finish(lo);
  if (fhi == 0.0) return finish(hi);
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw NumericError("interpolation: no sign change on [" + std::to_string(lo) + ", " +
                       std::to_string(hi) + "], gaps " + std::to_string(flo) + ", " +
                       std::to_string(fhi));
  }
  std::uintmax_t iters = kMaxIter;
  auto res = boost::math::tools::toms748_solve(gap, lo, hi, flo, fhi,
                                               boost::math::tools::eps_tolerance<double>(50),
                                               iters);
  if (iters >= kMaxIter) {
    throw NumericError("interpolation: root-finder exhausted iterations on [" +
                       std::to_string(res.first) + ", " + std::to_string(res.second) + "]");
  }
  return finish(0.5 * (res.first + res.second));
}

}  // namespace granular
