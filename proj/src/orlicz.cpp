#include "granular/orlicz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <boost/math/tools/toms748_solve.hpp>

#include "granular/collision.hpp"
#include "granular/error.hpp"
#include "granular/quadrature.hpp"

namespace granular {

namespace {

template <class F>
double solve_bracketed(F g, double lo, double hi) {
  const double glo = g(lo), ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo > 0.0) == (ghi > 0.0)) throw NumericError("root is not bracketed");
  std::uintmax_t iters = 300;
  auto r = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi,
                                             boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (r.first + r.second);
}

double thermal_radius(const ParticleEnsemble& ens, double radius) {
  if (radius > 0.0) return radius;
  const double e = ens.energy();
  if (!(e > 0.0)) throw DomainError("histogram radius needs positive energy");
  return 6.0 * std::sqrt(e / ens.dim);
}

bool all_zero(const DensityGrid& f) {
  return std::all_of(f.values.begin(), f.values.end(), [](double x) { return x == 0.0; });
}

}  // namespace

double DensityGrid::integral() const {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += values[i] * volumes[i];
  return s;
}

DensityGrid DensityGrid::scaled(double c) const {
  DensityGrid g = *this;
  for (double& x : g.values) x *= c;
  return g;
}

void DensityGrid::normalize() {
  const double m = integral();
  if (!(m > 0.0)) throw DomainError("cannot normalize an empty density");
  for (double& x : values) x /= m;
}

double DensityGrid::shell_radius(std::size_t k) const {
  const double h = radius / bins;
  return (static_cast<double>(k) + 0.5) * h;
}

DensityGrid make_density(std::vector<double> values, std::vector<double> volumes, int dim) {
  if (values.size() != volumes.size() || values.empty()) {
    throw DomainError("density needs matching nonempty values and volumes");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(volumes[i] > 0.0)) throw DomainError("cell volumes must be positive");
    if (!std::isfinite(values[i])) throw DomainError("density values must be finite");
  }
  DensityGrid g;
  g.dim = dim;
  g.values = std::move(values);
  g.volumes = std::move(volumes);
  return g;
}

DensityGrid radial_histogram(const ParticleEnsemble& ens, int bins, double radius) {
  if (bins < 1) throw DomainError("histogram needs at least one bin");
  const double R = thermal_radius(ens, radius);
  DensityGrid g;
  g.dim = ens.dim;
  g.layout = DensityGrid::Layout::Radial;
  g.radius = R;
  g.bins = bins;
  g.counts.assign(static_cast<std::size_t>(bins), 0.0);
  g.volumes.resize(static_cast<std::size_t>(bins));
  const double h = R / bins;
  const double c = sphere_area(ens.dim) / ens.dim;
  for (int k = 0; k < bins; ++k) {
    g.volumes[static_cast<std::size_t>(k)] =
        c * (std::pow((k + 1) * h, ens.dim) - std::pow(k * h, ens.dim));
  }
  std::size_t outside = 0;
  for (const auto& v : ens.v) {
    const double r = v.norm();
    if (r >= R) {
      ++outside;
      continue;
    }
    g.counts[std::min(static_cast<std::size_t>(r / h), static_cast<std::size_t>(bins - 1))] += 1.0;
  }
  g.sample_size = ens.size();
  g.outside_mass = static_cast<double>(outside) / static_cast<double>(ens.size());
  g.values.resize(g.counts.size());
  for (std::size_t k = 0; k < g.counts.size(); ++k) {
    g.values[k] = g.counts[k] / (static_cast<double>(ens.size()) * g.volumes[k]);
  }
  return g;
}

DensityGrid tensor_histogram(const ParticleEnsemble& ens, int bins, double radius) {
  if (ens.dim != 2) throw DomainError("tensor histograms are two-dimensional");
  if (bins < 1) throw DomainError("histogram needs at least one bin");
  const double R = thermal_radius(ens, radius);
  DensityGrid g;
  g.dim = 2;
  g.layout = DensityGrid::Layout::Tensor;
  g.radius = R;
  g.bins = bins;
  const auto cells = static_cast<std::size_t>(bins) * static_cast<std::size_t>(bins);
  g.counts.assign(cells, 0.0);
  const double h = 2.0 * R / bins;
  g.volumes.assign(cells, h * h);
  std::size_t outside = 0;
  for (const auto& v : ens.v) {
    const double x = (v[0] + R) / h, y = (v[1] + R) / h;
    if (x < 0.0 || y < 0.0 || x >= bins || y >= bins) {
      ++outside;
      continue;
    }
    g.counts[static_cast<std::size_t>(x) * static_cast<std::size_t>(bins) + static_cast<std::size_t>(y)] += 1.0;
  }
  g.sample_size = ens.size();
  g.outside_mass = static_cast<double>(outside) / static_cast<double>(ens.size());
  g.values.resize(cells);
  for (std::size_t k = 0; k < cells; ++k) {
    g.values[k] = g.counts[k] / (static_cast<double>(ens.size()) * g.volumes[k]);
  }
  return g;
}

double young_integral(const DensityGrid& f, const YoungFunction& lambda, double scale) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.values.size(); ++i) {
    if (f.values[i] != 0.0) s += f.volumes[i] * lambda(std::abs(f.values[i]) / scale);
  }
  return s;
}

double norm_certificate(const DensityGrid& f, const YoungFunction& lambda, double l) {
  return young_integral(f, lambda, l);
}

double orlicz_norm(const DensityGrid& f, const YoungFunction& lambda) {
  if (all_zero(f)) return 0.0;
  // Convexity with Lambda(0) = 0 gives int Lambda(|f|/l) <= I/l for l >= 1.
  double hi = std::max(1.0, young_integral(f, lambda, 1.0));
  if (!std::isfinite(hi)) {
    hi = 1.0;
    while (!(young_integral(f, lambda, hi) <= 1.0)) {
      hi *= 2.0;
      if (hi > 1e300) throw NumericError("Orlicz norm bracket overflow");
    }
  }
  double lo = hi;
  while (young_integral(f, lambda, lo) <= 1.0) {
    lo *= 0.5;
    if (lo < std::numeric_limits<double>::min()) throw NumericError("Orlicz norm bracket underflow");
  }
  // Root in log l keeps relative accuracy at every scale.
  auto g = [&](double s) {
    const double v = young_integral(f, lambda, std::exp(s));
    return std::isfinite(v) ? v - 1.0 : std::numeric_limits<double>::max();
  };
  return std::exp(solve_bracketed(g, std::log(lo), std::log(hi)));
}

double dual_norm(const DensityGrid& g, const YoungFunction& lambda) {
  if (all_zero(g)) return 0.0;
  auto mass = [&](double k) {
    double s = 0.0;
    for (std::size_t i = 0; i < g.values.size(); ++i) {
      if (g.values[i] != 0.0) s += g.volumes[i] * lambda(lambda.inverse_derivative(k * std::abs(g.values[i])));
    }
    return s;
  };
  double lo = 1.0, hi = 1.0;
  while (!(mass(hi) >= 1.0)) {
    hi *= 2.0;
    if (hi > 1e300) throw NumericError("dual norm bracket overflow");
  }
  lo = hi;
  while (mass(lo) >= 1.0) {
    lo *= 0.5;
    if (lo < 1e-300) throw NumericError("dual norm bracket underflow");
  }
  auto eq = [&](double s) {
    const double v = mass(std::exp(s));
    return std::isfinite(v) ? v - 1.0 : std::numeric_limits<double>::max();
  };
  const double k = std::exp(solve_bracketed(eq, std::log(lo), std::log(hi)));
  double s = 0.0;
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    const double a = std::abs(g.values[i]);
    if (a != 0.0) s += g.volumes[i] * a * lambda.inverse_derivative(k * a);
  }
  return s;
}

double norm_derivative(const DensityGrid& f, const DensityGrid& dfdt, const YoungFunction& lambda) {
  if (f.size() != dfdt.size()) throw DomainError("density and derivative grids differ");
  const double n = orlicz_norm(f, lambda);
  if (!(n > 0.0)) throw DomainError("norm derivative needs a nonzero density");
  DensityGrid w = f;
  double num = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double a = std::abs(f.values[i]);
    w.values[i] = lambda.derivative(a / n);
    const double sign = f.values[i] < 0.0 ? -1.0 : 1.0;
    num += f.volumes[i] * sign * dfdt.values[i] * w.values[i];
  }
  const double den = dual_norm(w, lambda);
  if (!(den > 0.0)) throw NumericError("dual norm of Lambda'(|f|/|f|) vanishes");
  return num / den;
}

double norm_derivative_fd(const std::function<DensityGrid(double)>& family,
                          const YoungFunction& lambda, double t, double h) {
  return (orlicz_norm(family(t + h), lambda) - orlicz_norm(family(t - h), lambda)) / (2.0 * h);
}

NormEstimate orlicz_norm_with_error(const DensityGrid& f, const YoungFunction& lambda,
                                    int replicates, std::uint64_t seed) {
  NormEstimate out;
  out.value = orlicz_norm(f, lambda);
  if (f.counts.size() != f.size() || f.sample_size == 0 || replicates < 2) return out;
  std::mt19937_64 rng(seed);
  DensityGrid r = f;
  const double n = static_cast<double>(f.sample_size);
  double s1 = 0.0, s2 = 0.0;
  for (int b = 0; b < replicates; ++b) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double c = f.counts[i] > 0.0
                           ? static_cast<double>(std::poisson_distribution<long>(f.counts[i])(rng))
                           : 0.0;
      r.values[i] = c / (n * f.volumes[i]);
    }
    const double x = all_zero(r) ? 0.0 : orlicz_norm(r, lambda);
    s1 += x;
    s2 += x * x;
  }
  const double m = s1 / replicates;
  out.standard_error = std::sqrt(std::max(0.0, (s2 / replicates - m * m) * replicates / (replicates - 1)));
  return out;
}

YoungFunction build_young_from_density(const DensityGrid& f, int levels) {
  std::vector<std::pair<double, double>> cells;  // (value, mass)
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.values[i] > 0.0) cells.emplace_back(f.values[i], f.values[i] * f.volumes[i]);
  }
  const bool single = cells.empty() ||
                      std::all_of(cells.begin(), cells.end(),
                                  [&](const auto& c) { return c.first == cells.front().first; });
  if (single) return YoungFunction::power(2.0);
  std::sort(cells.begin(), cells.end());
  const double total = std::accumulate(cells.begin(), cells.end(), 0.0,
                                       [](double s, const auto& c) { return s + c.second; });
  // tail[k] = mass carried by cells with value >= cells[k].first
  std::vector<double> tail(cells.size() + 1, 0.0);
  for (std::size_t k = cells.size(); k-- > 0;) tail[k] = tail[k + 1] + cells[k].second / total;
  // Smallest level s with mass{f > s} <= q.
  auto level_for = [&](double q) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (tail[k + 1] <= q) return cells[k].first;
    }
    return cells.back().first;
  };
  std::vector<double> t{0.0}, slope{0.0};
  double s = 0.0;
  for (int k = 1; k <= levels; ++k) {
    s = std::max(2.0 * s, level_for(std::ldexp(1.0, -k)));
    if (k == 1 && !(s > 0.0)) s = cells.front().first;
    t.push_back(s);
    slope.push_back(k);
  }
  return YoungFunction::tabulated(std::move(t), std::move(slope));
}

double gain_constant(int dim, double eps, double j_eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("gain constant needs eps in (0, 1]");
  if (j_eps < 0.0) throw DomainError("angular spreading must be nonnegative");
  return 2.0 * (1.0 + std::ldexp(1.0, dim) / eps) + (2.0 + std::ldexp(1.0, dim + 2)) * j_eps;
}

GainSelection select_gain_epsilon(const KernelSpec& spec, double energy, double l1_norm,
                                  double max_speed) {
  if (!(l1_norm > 0.0)) throw DomainError("L^1_1 norm must be positive");
  const int n = spec.dimension;
  const double target = 1.0 / ((2.0 + std::ldexp(1.0, n + 2)) * l1_norm);
  auto j = [&](double eps) { return angular_spreading_sup(spec, energy, eps, max_speed); };
  GainSelection out;
  if (j(1.0) <= target) {
    out.eps = 1.0;
  } else {
    double lo = 1e-12;
    if (j(lo) > target) {
      throw DomainError("angular spreading never drops below the gain threshold; "
                        "spreading is not uniformly small near grazing directions");
    }
    double hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = std::sqrt(lo * hi);
      (j(mid) <= target ? lo : hi) = mid;
    }
    out.eps = lo;
  }
  out.j = j(out.eps);
  out.constant = gain_constant(n, out.eps, out.j);
  return out;
}

GronwallEnvelope gronwall_envelope(const std::vector<GronwallSample>& samples, double c_k) {
  GronwallEnvelope out;
  out.c_k = c_k;
  if (samples.empty()) return out;
  const double n0 = samples.front().norm;
  double acc = 0.0;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    const auto& s = samples[k];
    if (k > 0) {
      const auto& p = samples[k - 1];
      if (s.t < p.t) throw DomainError("Gronwall samples must be time ordered");
      acc += 0.5 * (s.t - p.t) * (s.l1 + p.l1);
    }
    out.t.push_back(s.t);
    out.measured.push_back(s.norm);
    out.integral.push_back(acc);
    out.envelope.push_back(n0 * std::exp(c_k * acc));
    if (s.norm - 2.0 * s.norm_se > out.envelope.back()) out.crossings.push_back(k);
    if (acc > 0.0 && s.norm > n0) {
      out.minimal_c_k = std::max(out.minimal_c_k, std::log(s.norm / n0) / acc);
    }
  }
  return out;
}

double loss_convolution(const DensityGrid& f, double r, int order) {
  if (f.layout != DensityGrid::Layout::Radial) {
    throw DomainError("loss convolution expects a radial density");
  }
  const SphereQuadrature quad(f.dim, order);
  const double area = sphere_area(f.dim);
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) {
    if (f.values[k] == 0.0) continue;
    const double rho = f.shell_radius(k);
    // Average of |r e - rho sigma| over sigma on the sphere.
    const double avg =
        quad.integrate([&](double x) { return std::sqrt(std::max(0.0, r * r + rho * rho - 2.0 * r * rho * x)); })
            .value /
        area;
    s += f.values[k] * f.volumes[k] * avg;
  }
  return s;
}

}  // namespace granular
