#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <span>

namespace granular {

// Largest supported velocity-space dimension. Velocities live inline so that
// ensembles are a single contiguous allocation.
inline constexpr int kMaxDim = 8;

class Velocity {
 public:
  Velocity() = default;
  explicit Velocity(int dim);
  Velocity(std::initializer_list<double> components);
  static Velocity from_span(std::span<const double> components);
  static Velocity unit_axis(int dim, int axis);

  int dim() const { return dim_; }
  double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }
  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  std::span<double> components() { return {c_.data(), static_cast<std::size_t>(dim_)}; }
  std::span<const double> components() const {
    return {c_.data(), static_cast<std::size_t>(dim_)};
  }

  Velocity& operator+=(const Velocity& o);
  Velocity& operator-=(const Velocity& o);
  Velocity& operator*=(double s);
  Velocity& operator/=(double s);

  double norm2() const;
  double norm() const { return std::sqrt(norm2()); }
  bool is_finite() const;

  friend Velocity operator+(Velocity a, const Velocity& b) { return a += b; }
  friend Velocity operator-(Velocity a, const Velocity& b) { return a -= b; }
  friend Velocity operator-(Velocity a) { return a *= -1.0; }
  friend Velocity operator*(Velocity a, double s) { return a *= s; }
  friend Velocity operator*(double s, Velocity a) { return a *= s; }
  friend Velocity operator/(Velocity a, double s) { return a /= s; }
  friend bool operator==(const Velocity& a, const Velocity& b);

 private:
  std::array<double, kMaxDim> c_{};
  int dim_ = 0;
};

double dot(const Velocity& a, const Velocity& b);
inline double norm(const Velocity& v) { return v.norm(); }

// v / |v|; throws DomainError for the zero vector.
Velocity unit(const Velocity& v);

// Component of v orthogonal to the unit vector n.
Velocity reject_from(const Velocity& v, const Velocity& n);

}  // namespace granular
