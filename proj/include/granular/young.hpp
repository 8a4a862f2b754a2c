#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace granular {

struct YoungChecks {
  bool vanishes_at_zero = false;  // Lambda(0) = Lambda'(0) = 0
  bool convex_increasing = false;
  bool doubling = false;          // Lambda(2t) <= c Lambda(t) on the grid
  double doubling_constant = 0.0;
  bool superlinear = false;       // Lambda(t)/t grows over the top of the grid
  bool all() const { return vanishes_at_zero && convex_increasing && doubling && superlinear; }
};

// A convex Young function with derivative and inverse derivative.
class YoungFunction {
 public:
  enum class Family { Power, Entropy, Tabulated, Complementary };

  // Lambda(t) = coefficient * t^p; coefficient defaults to 1/p.
  static YoungFunction power(double p, double coefficient = 0.0);
  // Lambda(t) = (1+t) log(1+t) - t
  static YoungFunction entropy();
  // Lambda' interpolated monotonically through (t_k, slope_k) with t_0 = 0,
  // slope_0 = 0; Lambda is its exact integral. Beyond the last knot Lambda'
  // continues linearly.
  static YoungFunction tabulated(std::vector<double> t, std::vector<double> slope);

  // Lambda*(y) = y (Lambda')^{-1}(y) - Lambda((Lambda')^{-1}(y)).
  YoungFunction complementary() const;

  double operator()(double t) const;
  double derivative(double t) const;
  double inverse_derivative(double y) const;

  Family family() const;
  std::string name() const;
  YoungChecks check(double t_min = 1e-6, double t_max = 1e6, int points = 241) const;

  // Writes rows (t, Lambda, Lambda') at the knots (tabulated) or on a log grid.
  void write_csv(std::ostream& os, double t_max = 1e3, int points = 200) const;
  // Reloads a tabulation written by write_csv as a tabulated function.
  static YoungFunction read_csv(std::istream& is);

  struct Impl;

 private:
  explicit YoungFunction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

}  // namespace granular
