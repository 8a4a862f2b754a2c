#include "granular/young.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

// Boost 1.74 pchip calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "granular/error.hpp"

namespace granular {

struct YoungFunction::Impl {
  virtual ~Impl() = default;
  virtual double value(double t) const = 0;
  virtual double derivative(double t) const = 0;
  virtual double inverse_derivative(double y) const = 0;
  virtual Family family() const = 0;
  virtual std::string name() const = 0;
  virtual const std::vector<double>* knots() const { return nullptr; }
};

namespace {

// (Lambda')^{-1}(y) for a continuous strictly increasing Lambda'.
double invert_increasing(const YoungFunction::Impl& f, double y) {
  if (y <= 0.0) return 0.0;
  double lo = 0.0, hi = 1.0;
  int guard = 0;
  while (f.derivative(hi) < y) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 2000) throw DomainError("Lambda' is bounded; cannot invert");
  }
  auto g = [&](double t) { return f.derivative(t) - y; };
  const double glo = g(lo), ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if (glo > 0.0) throw DomainError("Lambda' is not increasing; cannot invert");
  std::uintmax_t iters = 200;
  auto r = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi,
                                             boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (r.first + r.second);
}

struct PowerImpl final : YoungFunction::Impl {
  double p, c;
  PowerImpl(double p, double c) : p(p), c(c) {}
  double value(double t) const override { return t <= 0.0 ? 0.0 : c * std::pow(t, p); }
  double derivative(double t) const override {
    return t <= 0.0 ? 0.0 : c * p * std::pow(t, p - 1.0);
  }
  double inverse_derivative(double y) const override {
    return y <= 0.0 ? 0.0 : std::pow(y / (c * p), 1.0 / (p - 1.0));
  }
  YoungFunction::Family family() const override { return YoungFunction::Family::Power; }
  std::string name() const override {
    std::ostringstream os;
    os << "power(p=" << p << ",c=" << c << ")";
    return os.str();
  }
};

struct EntropyImpl final : YoungFunction::Impl {
  double value(double t) const override {
    if (t <= 0.0) return 0.0;
    if (t < 1e-4) return t * t / 2.0 - t * t * t / 6.0 + t * t * t * t / 12.0;
    return (1.0 + t) * std::log1p(t) - t;
  }
  double derivative(double t) const override { return t <= 0.0 ? 0.0 : std::log1p(t); }
  double inverse_derivative(double y) const override { return y <= 0.0 ? 0.0 : std::expm1(y); }
  YoungFunction::Family family() const override { return YoungFunction::Family::Entropy; }
  std::string name() const override { return "entropy"; }
};

struct TabulatedImpl final : YoungFunction::Impl {
  std::vector<double> t, s, cum;
  boost::math::interpolators::pchip<std::vector<double>> spline;
  double tail_slope;

  TabulatedImpl(std::vector<double> tk, std::vector<double> sk)
      : t(tk), s(sk), spline(std::move(tk), std::move(sk)), tail_slope(0.0) {
    const std::size_t n = t.size();
    tail_slope = std::max(spline.prime(t[n - 1]), (s[n - 1] - s[n - 2]) / (t[n - 1] - t[n - 2]));
    cum.assign(n, 0.0);
    for (std::size_t k = 1; k < n; ++k) cum[k] = cum[k - 1] + segment(t[k - 1], t[k]);
  }

  // Two-point Gauss rule, exact for the cubic pieces.
  double segment(double a, double b) const {
    const double m = 0.5 * (a + b), h = 0.5 * (b - a) / std::sqrt(3.0);
    return 0.5 * (b - a) * (spline(m - h) + spline(m + h));
  }

  double value(double x) const override {
    if (x <= 0.0) return 0.0;
    if (x >= t.back()) {
      const double d = x - t.back();
      return cum.back() + s.back() * d + 0.5 * tail_slope * d * d;
    }
    const auto k = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), x) - t.begin()) - 1;
    return cum[k] + segment(t[k], x);
  }
  double derivative(double x) const override {
    if (x <= 0.0) return 0.0;
    if (x >= t.back()) return s.back() + tail_slope * (x - t.back());
    return std::max(0.0, spline(x));
  }
  double inverse_derivative(double y) const override {
    if (y <= 0.0) return 0.0;
    if (y >= s.back()) {
      return tail_slope > 0.0 ? t.back() + (y - s.back()) / tail_slope
                              : std::numeric_limits<double>::infinity();
    }
    return invert_increasing(*this, y);
  }
  YoungFunction::Family family() const override { return YoungFunction::Family::Tabulated; }
  std::string name() const override { return "tabulated(" + std::to_string(t.size()) + " knots)"; }
  const std::vector<double>* knots() const override { return &t; }
};

struct ComplementaryImpl final : YoungFunction::Impl {
  std::shared_ptr<const YoungFunction::Impl> base;
  explicit ComplementaryImpl(std::shared_ptr<const YoungFunction::Impl> b) : base(std::move(b)) {}
  double value(double y) const override {
    if (y <= 0.0) return 0.0;
    const double h = base->inverse_derivative(y);
    return std::max(0.0, y * h - base->value(h));
  }
  double derivative(double y) const override { return base->inverse_derivative(y); }
  double inverse_derivative(double x) const override { return base->derivative(x); }
  YoungFunction::Family family() const override { return YoungFunction::Family::Complementary; }
  std::string name() const override { return "complementary(" + base->name() + ")"; }
};

}  // namespace

YoungFunction YoungFunction::power(double p, double coefficient) {
  if (!(p > 1.0)) throw DomainError("power Young function needs p > 1");
  if (coefficient == 0.0) coefficient = 1.0 / p;
  if (!(coefficient > 0.0)) throw DomainError("power Young function needs a positive coefficient");
  return YoungFunction(std::make_shared<PowerImpl>(p, coefficient));
}

YoungFunction YoungFunction::entropy() { return YoungFunction(std::make_shared<EntropyImpl>()); }

YoungFunction YoungFunction::tabulated(std::vector<double> t, std::vector<double> slope) {
  if (t.size() != slope.size() || t.size() < 4) {
    throw DomainError("tabulated Young function needs at least four (t, slope) knots");
  }
  if (t.front() != 0.0 || slope.front() != 0.0) {
    throw DomainError("tabulated Young function must start at (0, 0)");
  }
  for (std::size_t k = 1; k < t.size(); ++k) {
    if (!(t[k] > t[k - 1])) throw DomainError("tabulated knots must increase");
    if (!(slope[k] > slope[k - 1])) throw DomainError("tabulated slopes must increase strictly");
  }
  return YoungFunction(std::make_shared<TabulatedImpl>(std::move(t), std::move(slope)));
}

YoungFunction YoungFunction::complementary() const {
  if (const auto* c = dynamic_cast<const ComplementaryImpl*>(impl_.get())) return YoungFunction(c->base);
  return YoungFunction(std::make_shared<ComplementaryImpl>(impl_));
}

double YoungFunction::operator()(double t) const { return impl_->value(t); }
double YoungFunction::derivative(double t) const { return impl_->derivative(t); }
double YoungFunction::inverse_derivative(double y) const { return impl_->inverse_derivative(y); }
YoungFunction::Family YoungFunction::family() const { return impl_->family(); }
std::string YoungFunction::name() const { return impl_->name(); }

YoungChecks YoungFunction::check(double t_min, double t_max, int points) const {
  YoungChecks c;
  const double v0 = (*this)(0.0), d0 = derivative(0.0);
  c.vanishes_at_zero = std::abs(v0) <= 1e-14 && std::abs(d0) <= 1e-12;
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    g[static_cast<std::size_t>(i)] = t_min * std::pow(t_max / t_min, static_cast<double>(i) / (points - 1));
  }
  bool convex = true;
  double prev_v = 0.0, prev_d = 0.0;
  for (double t : g) {
    const double v = (*this)(t), d = derivative(t);
    if (!(v > prev_v) || !(d > prev_d) || !std::isfinite(v)) convex = false;
    prev_v = v;
    prev_d = d;
  }
  c.convex_increasing = convex;

  // Doubling: finite ratios and a growth index t Lambda'/Lambda that does
  // not grow across the top decade.
  double worst = 0.0;
  bool finite = true;
  for (double t : g) {
    const double r = (*this)(2.0 * t) / (*this)(t);
    if (!std::isfinite(r)) finite = false;
    worst = std::max(worst, r);
  }
  auto index = [&](double t) { return t * derivative(t) / (*this)(t); };
  const double q_top = index(t_max), q_dec = index(0.1 * t_max);
  c.doubling_constant = finite ? worst : std::numeric_limits<double>::infinity();
  c.doubling = finite && std::isfinite(q_top) && q_top <= 1.1 * q_dec;

  // Superlinearity: Lambda(t)/t increasing over the top three decades.
  bool grows = true;
  double prev = 0.0;
  for (double t : g) {
    if (t < 1e-3 * t_max) continue;
    const double q = (*this)(t) / t;
    if (!(q > prev)) grows = false;
    prev = q;
  }
  c.superlinear = grows && std::isfinite(prev);
  return c;
}

void YoungFunction::write_csv(std::ostream& os, double t_max, int points) const {
  os << "t,Lambda,dLambda\n";
  os << std::setprecision(17);
  std::vector<double> grid;
  if (const auto* k = impl_->knots()) {
    grid = *k;
  } else {
    grid.push_back(0.0);
    for (int i = 0; i < points; ++i) {
      grid.push_back(t_max * std::pow(1e-6, 1.0 - static_cast<double>(i) / (points - 1)));
    }
  }
  for (double t : grid) os << t << ',' << (*this)(t) << ',' << derivative(t) << '\n';
}

YoungFunction YoungFunction::read_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("empty Young function table");
  std::vector<double> t, d;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b, c;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c, ',')) {
      throw ConfigError("Young table row needs three columns", lineno);
    }
    try {
      t.push_back(std::stod(a));
      d.push_back(std::stod(c));
    } catch (const std::exception&) {
      throw ConfigError("Young table row is not numeric", lineno);
    }
  }
  return tabulated(std::move(t), std::move(d));
}

}  // namespace granular
