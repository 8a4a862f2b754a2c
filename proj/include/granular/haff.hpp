#pragma once

#include <vector>

namespace granular {

struct HaffFit {
  double e0 = 0.0;
  double tau = 0.0;       // +inf for a constant series
  double exponent = 0.0;  // kappa in E0 (1 + t/tau)^{-kappa}
  double residual = 0.0;  // RMS of log-space residuals
};

// Least-squares fit of log E(t) = log E0 - kappa log(1 + t/tau). Rejects
// nonpositive energies and series that increase anywhere.
HaffFit haff_fit(const std::vector<double>& t, const std::vector<double>& energy);

}  // namespace granular
