#include "granular/cooling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "granular/collision.hpp"
#include "granular/error.hpp"

namespace granular {

namespace {

std::vector<double> log_grid(double lo, double hi, int points) {
  std::vector<double> g;
  for (int i = 0; i < points; ++i) {
    g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1)));
  }
  return g;
}

constexpr double kSmallEnergy = 1e-8;

}  // namespace

TailClass TailClass::of(const InitialDistribution& dist) {
  if (const auto* m = std::get_if<Maxwellian>(&dist)) return {2.0, 0.25 / m->temperature, false};
  if (const auto* s = std::get_if<StretchedExponential>(&dist)) return {s->eta, 0.5 * s->a, false};
  return {2.0, 1.0, true};
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Finite: return "finite";
    case Verdict::Infinite: return "infinite";
    default: return "undetermined";
  }
}

std::string to_string(Rationale r) {
  switch (r) {
    case Rationale::AlphaJ: return "alphaj";
    case Rationale::DeltaLe0: return "deltale0";
    case Rationale::DeltaGeMinusHalf: return "deltage-1/2";
    default: return "none";
  }
}

CoolingAssumptions derive_assumptions(const KernelSpec& spec, double initial_energy) {
  spec.validate();
  if (!(initial_energy > kSmallEnergy)) throw DomainError("initial energy must exceed 1e-8");
  CoolingAssumptions out;
  out.alpha = [spec](double e) { return spec.intensity(e); };
  out.alpha_bounded_near_zero = spec.intensity.bounded_near_zero();
  const auto energies = log_grid(kSmallEnergy, initial_energy, 41);

  // j_E(eps) at a small eps, uniformly over small energies.
  {
    constexpr double eps = 1e-4;
    double worst = 0.0;
    for (double e : log_grid(kSmallEnergy, std::min(1e-2, initial_energy), 7)) {
      worst = std::max(worst, angular_spreading_sup(spec, e, eps, 1e3));
    }
    out.spreading_uniform_near_zero = worst <= 10.0 * eps;
  }

  const bool visco = std::holds_alternative<ViscoElasticRestitution>(spec.restitution);
  const bool custom = std::holds_alternative<CustomMeasure>(spec.restitution);
  const Velocity unit_u = Velocity::unit_axis(spec.dimension, 0);

  if (!visco && !custom) {
    // Delta does not depend on u.
    auto delta_of = [spec, unit_u](double e) { return dissipation_rate(spec, e, unit_u).value; };
    // Log-slope at the small end gives the exponent of the lower bound.
    const double e1 = kSmallEnergy, e2 = 10.0 * kSmallEnergy;
    const double d1 = delta_of(e1), d2 = delta_of(e2);
    if (d1 > 0.0 && d2 > 0.0) {
      const double slope = std::log(d2 / d1) / std::log(e2 / e1);
      const double delta = std::abs(slope - std::round(slope)) < 1e-6 ? std::round(slope) : slope;
      double lower = std::numeric_limits<double>::infinity();
      for (double e : energies) lower = std::min(lower, delta_of(e) / std::pow(e, delta));
      if (lower > 0.0 && std::isfinite(lower)) {
        out.delta0_lower = lower * (1.0 - 1e-9);
        out.delta = delta;
      }
    }
    bool increasing = true;
    double prev = -1.0;
    for (double e : energies) {
      const double d = delta_of(e);
      if (!std::isfinite(d) || d < prev * (1.0 - 1e-12)) increasing = false;
      prev = d;
    }
    out.upper = delta_of;
    out.upper_increasing = increasing;
  } else if (visco) {
    // sup_u Delta(E,u) = alpha(E) sup_g (...), independent of E otherwise.
    double s = 0.0;
    for (double g : log_grid(1e-6, 1e3, 91)) {
      s = std::max(s, dissipation_rate(spec, 1.0, g * unit_u).value / spec.intensity(1.0));
    }
    out.upper = [spec, s](double e) { return spec.intensity(e) * s; };
    out.upper_increasing = spec.intensity.coefficient == 0.0 || spec.intensity.exponent >= 0.0;
  }

  if (std::holds_alternative<ConstantRestitution>(spec.restitution) ||
      std::holds_alternative<EnergyDependentRestitution>(spec.restitution)) {
    const auto& ang = spec.angular;
    switch (ang.kind()) {
      case AngularCrossSection::Kind::Isotropic:
        out.h4 = true;
        break;
      case AngularCrossSection::Kind::Linear:
        out.h4 = ang.kappa() >= 0.0 && ang.kappa() < 1.0;
        break;
      case AngularCrossSection::Kind::Custom: {
        bool ok = true;
        constexpr int kPts = 401;
        std::vector<double> b(kPts);
        for (int i = 0; i < kPts; ++i) b[i] = ang.shape(-1.0 + 2.0 * i / (kPts - 1));
        for (int i = 0; i < kPts; ++i) ok = ok && b[i] > 0.0 && std::isfinite(b[i]);
        for (int i = 1; i < kPts; ++i) ok = ok && b[i] >= b[i - 1] - 1e-12;
        for (int i = 1; i + 1 < kPts; ++i) ok = ok && b[i + 1] - 2.0 * b[i] + b[i - 1] >= -1e-12;
        out.h4 = ok;
        break;
      }
    }
  }
  return out;
}

double finite_cooling_bound(double e0, double delta0, double delta) {
  if (!(e0 > 0.0) || !(delta0 > 0.0)) throw DomainError("cooling bound needs E0 > 0, Delta0 > 0");
  if (!(delta < -0.5)) throw DomainError("cooling bound needs delta < -1/2");
  const double q = delta + 1.5;
  return std::pow(e0, 1.0 - q) / ((1.0 - q) * delta0 * std::pow(2.0, 1.5));
}

CoolingVerdict classify_cooling(const CoolingAssumptions& as, const TailClass& tail,
                                double initial_energy) {
  if (!(initial_energy > 0.0)) throw DomainError("initial energy must be positive");
  const auto energies = log_grid(std::min(kSmallEnergy, initial_energy), initial_energy, 41);
  if (as.delta0_lower) {
    if (!(*as.delta0_lower > 0.0)) throw DomainError("declared lower bound Delta0 must be positive");
    for (double e : energies) {
      const double lo = *as.delta0_lower * std::pow(e, as.delta);
      if (as.alpha && lo > 0.25 * as.alpha(e) * (1.0 + 1e-9)) {
        throw DomainError("contradictory bounds: Delta0 E^delta exceeds alpha(E)/4 at E = " +
                          std::to_string(e));
      }
      if (as.upper && lo > as.upper(e) * (1.0 + 1e-9)) {
        throw DomainError("contradictory bounds: lower bound exceeds upper bound at E = " +
                          std::to_string(e));
      }
    }
  }
  if (as.upper && as.upper_increasing) {
    double prev = -1.0;
    for (double e : energies) {
      const double d = as.upper(e);
      if (d < prev * (1.0 - 1e-12)) throw DomainError("declared increasing upper bound decreases");
      prev = d;
    }
  }
  if (as.alpha_bounded_near_zero && as.alpha && !std::isfinite(as.alpha(kSmallEnergy))) {
    throw DomainError("alpha declared bounded near 0 but is not finite there");
  }

  CoolingVerdict v;
  if (as.delta0_lower && as.delta < -0.5) {
    v.verdict = Verdict::Finite;
    v.rationale = Rationale::DeltaGeMinusHalf;
    v.bound = finite_cooling_bound(initial_energy, *as.delta0_lower, as.delta);
    return v;
  }
  if (as.alpha_bounded_near_zero && as.spreading_uniform_near_zero) {
    v.verdict = Verdict::Infinite;
    v.rationale = Rationale::AlphaJ;
    return v;
  }
  const bool tail_ok = tail.compact_support || (tail.eta > 1.0 && tail.eta <= 2.0 && tail.a > 0.0);
  if (as.h4 && as.upper && as.upper_increasing && tail_ok) {
    v.verdict = Verdict::Infinite;
    v.rationale = Rationale::DeltaLe0;
  }
  return v;
}

CoolingVerdict classify_cooling(const KernelSpec& spec, const TailClass& tail,
                                double initial_energy) {
  return classify_cooling(derive_assumptions(spec, initial_energy), tail, initial_energy);
}

double povzner_c1(double energy, double c) {
  if (!(energy > 0.0)) throw DomainError("energy must be positive");
  return std::max(c * (energy + std::sqrt(energy)), 0.5 * (1.0 + 3.0 * std::pow(energy, 1.5)));
}

double local_existence_horizon(double e_in, double y3_in,
                               const std::function<double(double)>& alpha0, double c1) {
  if (!(e_in > 0.0) || !(y3_in > 0.0) || !(c1 > 0.0)) {
    throw DomainError("local horizon needs positive E_in, Y3 and C1");
  }
  const double a = alpha0(0.5 * e_in);
  if (a < 0.0) throw DomainError("alpha0 must be nonnegative");
  if (a == 0.0) return std::numeric_limits<double>::infinity();
  return std::min(y3_in / (c1 * a), e_in / (4.0 * c1 * a * y3_in));
}

CorridorCheck corridor_check(const std::vector<double>& t, const std::vector<double>& y3,
                             const std::vector<double>& energy, double t_star) {
  if (t.size() != y3.size() || t.size() != energy.size() || t.empty()) {
    throw DomainError("corridor series are empty or ragged");
  }
  CorridorCheck out{true, 0.0, std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < t.size() && t[i] <= t_star; ++i) {
    out.max_y3_ratio = std::max(out.max_y3_ratio, y3[i] / y3[0]);
    out.min_energy_ratio = std::min(out.min_energy_ratio, energy[i] / energy[0]);
  }
  out.holds = out.max_y3_ratio <= 2.0 && out.min_energy_ratio >= 0.5;
  return out;
}

}  // namespace granular
