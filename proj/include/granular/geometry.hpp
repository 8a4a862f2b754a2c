#pragma once

#include "granular/velocity.hpp"

namespace granular {

// Phi_z(u) = u + |u| z
Velocity shift_map(const Velocity& z, const Velocity& u);

// det D Phi_z(u) = 1 + u_hat . z. Rejects u = 0.
double shift_jacobian(const Velocity& z, const Velocity& u);

// Opening parameter of Phi_z(Omega_gamma).
double cone_delta(double gamma, double z_norm);

// True when w_hat . axis > gamma (with a 1e-14 slack); axis need not be unit.
bool in_cone(const Velocity& w, const Velocity& axis, double gamma);

// Inverse of Phi_z on the cone Omega_gamma around z_hat. Solves the monotone
// scalar equation w1 = u1 + (u1^2 + |w2|^2)^{1/2} |z| along z_hat.
// Throws DomainError when w lies outside Phi_z(Omega_gamma) or outside the
// range of Phi_z (|z| = 1 and w . z <= 0, w != 0).
Velocity shift_map_inverse(const Velocity& z, const Velocity& w, double gamma = -1.0);

enum class MapKind {
  Pre,      // phi_e: v -> v' at fixed v*
  PreStar,  // phi*_e: v* -> v' at fixed v
};

struct PrePostMap {
  MapKind kind = MapKind::Pre;
  double e = 1.0;
  Velocity sigma;
  Velocity anchor;  // v* for Pre, v for PreStar
  double gamma = -1.0;

  double r_e() const { return (1.0 + e) / (3.0 - e); }
  // Opening parameter of the image cone.
  double omega(double g) const;
  double omega() const { return omega(gamma); }
};

// r_e = (1+e)/(3-e) and omega_e(gamma) = (gamma + r_e)/(1 + 2 gamma r_e + r_e^2)^{1/2}
double restitution_ratio(double e);
double omega_e(double e, double gamma);
double omega_star(double gamma);

Velocity pre_post_forward(const PrePostMap& map, const Velocity& x);
// Rejects v' outside anchor + Omega_{omega(gamma)}.
Velocity pre_post_inverse(const PrePostMap& map, const Velocity& v_prime);
double pre_post_jacobian(const PrePostMap& map, const Velocity& x);

struct InterpolationResult {
  double e_doubleprime = 0.0;
  // |sigma-component of t phi_e^{-1} + (1-t) phi_{e'}^{-1} - phi_{e''}^{-1}|
  double residual = 0.0;
  // Same difference measured as a full vector.
  double vector_residual = 0.0;
};

// Finds e'' between e and e' matching the convex combination of the two
// inverse maps (Pre kind) along sigma, by bracketed root-finding.
InterpolationResult restitution_interpolation_residual(double e, double e_prime, double t,
                                                       const Velocity& v_prime,
                                                       const Velocity& v_star,
                                                       const Velocity& sigma);

}  // namespace granular
