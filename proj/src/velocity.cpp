#include "granular/velocity.hpp"

#include <algorithm>
#include <string>

#include "granular/error.hpp"

namespace granular {

Velocity::Velocity(int dim) : dim_(dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw DomainError("velocity dimension " + std::to_string(dim) + " outside [1, " +
                      std::to_string(kMaxDim) + "]");
  }
}

Velocity::Velocity(std::initializer_list<double> components)
    : Velocity(static_cast<int>(components.size())) {
  std::copy(components.begin(), components.end(), c_.begin());
}

Velocity Velocity::from_span(std::span<const double> components) {
  Velocity v(static_cast<int>(components.size()));
  std::copy(components.begin(), components.end(), v.c_.begin());
  return v;
}

Velocity Velocity::unit_axis(int dim, int axis) {
  Velocity v(dim);
  v[axis] = 1.0;
  return v;
}

Velocity& Velocity::operator+=(const Velocity& o) {
  for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
  return *this;
}

Velocity& Velocity::operator-=(const Velocity& o) {
  for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
  return *this;
}

Velocity& Velocity::operator*=(double s) {
  for (int i = 0; i < dim_; ++i) c_[i] *= s;
  return *this;
}

Velocity& Velocity::operator/=(double s) {
  for (int i = 0; i < dim_; ++i) c_[i] /= s;
  return *this;
}

double Velocity::norm2() const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) s += c_[i] * c_[i];
  return s;
}

bool Velocity::is_finite() const {
  for (int i = 0; i < dim_; ++i) {
    if (!std::isfinite(c_[i])) return false;
  }
  return true;
}

bool operator==(const Velocity& a, const Velocity& b) {
  if (a.dim_ != b.dim_) return false;
  for (int i = 0; i < a.dim_; ++i) {
    if (a.c_[i] != b.c_[i]) return false;
  }
  return true;
}

double dot(const Velocity& a, const Velocity& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

Velocity unit(const Velocity& v) {
  const double n = v.norm();
  if (!(n > 0.0)) throw DomainError("cannot normalize a zero vector");
  return v / n;
}

Velocity reject_from(const Velocity& v, const Velocity& n) { return v - n * dot(v, n); }

}  // namespace granular
