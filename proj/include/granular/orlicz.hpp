#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "granular/ensemble.hpp"
#include "granular/kernel.hpp"
#include "granular/young.hpp"

namespace granular {

// Piecewise-constant density on velocity-space cells.
struct DensityGrid {
  enum class Layout { Generic, Radial, Tensor };

  int dim = 3;
  Layout layout = Layout::Generic;
  double radius = 0.0;         // box or ball radius for histograms
  int bins = 0;                // per axis (tensor) or radial shells
  std::vector<double> values;  // cell values, >= 0
  std::vector<double> volumes;
  std::vector<double> counts;  // histogram counts when built from samples
  std::size_t sample_size = 0;
  double outside_mass = 0.0;   // sample mass beyond the grid

  std::size_t size() const { return values.size(); }
  double integral() const;
  DensityGrid scaled(double c) const;
  // Cell value rescaled so the integral is one.
  void normalize();
  // Midpoint radius of radial shell k.
  double shell_radius(std::size_t k) const;
};

DensityGrid make_density(std::vector<double> values, std::vector<double> volumes, int dim = 3);

// Radially binned histogram on the ball of the given radius; radius <= 0 uses
// 6 times the thermal speed sqrt(E/N).
DensityGrid radial_histogram(const ParticleEnsemble& ens, int bins = 64, double radius = 0.0);
// Regular bins x bins histogram on [-radius, radius]^2; N = 2 only.
DensityGrid tensor_histogram(const ParticleEnsemble& ens, int bins = 64, double radius = 0.0);

// int Lambda(|f|) dv
double young_integral(const DensityGrid& f, const YoungFunction& lambda, double scale = 1.0);

// Luxemburg norm inf{ l > 0 : int Lambda(|f|/l) <= 1 }.
double orlicz_norm(const DensityGrid& f, const YoungFunction& lambda);
// int Lambda(|f|/l), equal to one at the norm.
double norm_certificate(const DensityGrid& f, const YoungFunction& lambda, double l);

// sup{ int |g h| : int Lambda(|h|) <= 1 }, attained at h = (Lambda')^{-1}(k|g|).
double dual_norm(const DensityGrid& g, const YoungFunction& lambda);

// d/dt of the Luxemburg norm from the derivative of f along a family.
double norm_derivative(const DensityGrid& f, const DensityGrid& dfdt, const YoungFunction& lambda);
// Central difference of orlicz_norm along family(t).
double norm_derivative_fd(const std::function<DensityGrid(double)>& family,
                          const YoungFunction& lambda, double t, double h = 1e-5);

struct NormEstimate {
  double value = 0.0;
  double standard_error = 0.0;
};
// Norm with a Poisson-bootstrap standard error over the histogram counts.
NormEstimate orlicz_norm_with_error(const DensityGrid& f, const YoungFunction& lambda,
                                    int replicates = 200, std::uint64_t seed = 17);

// Superlinear convex Lambda with int Lambda(f) finite, from the tail masses
// of f. Single-valued densities give t^2/2.
YoungFunction build_young_from_density(const DensityGrid& f, int levels = 16);

// C+ = 2(1 + 2^N / eps) + (2 + 2^{N+2}) j
double gain_constant(int dim, double eps, double j_eps);

struct GainSelection {
  double eps = 0.0;
  double j = 0.0;
  double constant = 0.0;
};
// Largest eps in (0, 1] with j_E(eps) <= 1 / ((2 + 2^{N+2}) |f|_{L^1_1}).
GainSelection select_gain_epsilon(const KernelSpec& spec, double energy, double l1_norm,
                                  double max_speed);

struct GronwallSample {
  double t = 0.0;
  double norm = 0.0;
  double norm_se = 0.0;
  double l1 = 0.0;  // int f (1 + |v|)
};

struct GronwallEnvelope {
  std::vector<double> t, measured, envelope, integral;
  std::vector<std::size_t> crossings;  // measured above envelope + 2 SE
  double c_k = 0.0;
  // Smallest C_K whose envelope stays above the measured series.
  double minimal_c_k = 0.0;
  bool crossing_free() const { return crossings.empty(); }
};

GronwallEnvelope gronwall_envelope(const std::vector<GronwallSample>& samples, double c_k);

// int f(w) |v - w| dw at |v| = r for a radial density.
double loss_convolution(const DensityGrid& f, double r, int order = 64);

}  // namespace granular
