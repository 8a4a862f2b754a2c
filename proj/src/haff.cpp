#include "granular/haff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "granular/error.hpp"

namespace granular {

namespace {

constexpr double kRoundoff = 1e-12;

struct Linear {
  double c = 0.0, kappa = 0.0, sse = 0.0;
};

Linear fit_at(const std::vector<double>& t, const std::vector<double>& y, double tau) {
  const double n = static_cast<double>(t.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double x = std::log1p(t[i] / tau);
    sx += x;
    sy += y[i];
    sxx += x * x;
    sxy += x * y[i];
  }
  Linear out;
  const double det = n * sxx - sx * sx;
  const double slope = det > 0.0 ? (n * sxy - sx * sy) / det : 0.0;
  out.kappa = -slope;
  out.c = (sy - slope * sx) / n;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double r = y[i] - (out.c + slope * std::log1p(t[i] / tau));
    out.sse += r * r;
  }
  return out;
}

}  // namespace

HaffFit haff_fit(const std::vector<double>& t, const std::vector<double>& energy) {
  if (t.size() != energy.size() || t.size() < 3) {
    throw DomainError("Haff fit needs at least three (t, E) pairs");
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(energy[i] > 0.0) || !std::isfinite(energy[i])) {
      throw DomainError("Haff fit needs strictly positive energies (index " + std::to_string(i) + ")");
    }
    if (i > 0 && !(t[i] > t[i - 1])) throw DomainError("Haff fit needs increasing times");
    // Increases at round-off level (elastic runs) are tolerated.
    if (i > 0 && energy[i] > energy[i - 1] * (1.0 + kRoundoff)) {
      throw DomainError("energy series increases at index " + std::to_string(i));
    }
  }
  std::vector<double> y(t.size());
  std::transform(energy.begin(), energy.end(), y.begin(), [](double e) { return std::log(e); });
  const double n = static_cast<double>(t.size());

  if (y.front() - y.back() <= kRoundoff) {
    return {energy.front(), std::numeric_limits<double>::infinity(), 0.0, 0.0};
  }

  if (t.front() < 0.0) throw DomainError("Haff fit needs nonnegative times");
  const double span = std::max(t.back(), 1e-300);
  auto profile = [&](double log_tau) { return fit_at(t, y, std::exp(log_tau)).sse; };

  // Coarse scan then Brent refinement around the best cell.
  const double lo = std::log(span) - 12.0 * std::log(10.0);
  const double hi = std::log(span) + 8.0 * std::log(10.0);
  constexpr int kScan = 400;
  int best = 0;
  double best_v = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kScan; ++i) {
    const double v = profile(lo + (hi - lo) * i / kScan);
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  const double a = lo + (hi - lo) * std::max(0, best - 1) / kScan;
  const double b = lo + (hi - lo) * std::min(kScan, best + 1) / kScan;
  const auto r = boost::math::tools::brent_find_minima(profile, a, b, 52);
  const double tau = std::exp(r.first);
  const Linear lin = fit_at(t, y, tau);
  HaffFit out;
  out.tau = tau;
  out.exponent = lin.kappa;
  out.e0 = std::exp(lin.c);
  out.residual = std::sqrt(lin.sse / n);
  return out;
}

}  // namespace granular
