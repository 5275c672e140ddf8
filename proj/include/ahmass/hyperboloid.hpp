#pragma once

// Exact hyperbolic-space geometry in the hyperboloid model -t^2 + |x|^2 = -1,
// t > 0, with the unit-ball chart. Translations and the distance identity
// cosh d(x,b) = t_x t_b - x.b are the primitives every kernel evaluation uses.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ahmass/numerics.hpp"

namespace ahmass {

struct BallPoint {
  std::vector<double> x;  // |x| < 1

  explicit BallPoint(std::vector<double> coords) : x(std::move(coords)) {
    if (norm2(x) >= 1.0) throw std::invalid_argument("BallPoint: |x| must be < 1");
  }
  int dim() const { return static_cast<int>(x.size()); }
};

struct HyperboloidPoint {
  double t;
  std::vector<double> x;

  int dim() const { return static_cast<int>(x.size()); }

  // Point on the quadric with given spatial part; t recomputed from x.
  static HyperboloidPoint from_spatial(std::vector<double> spatial) {
    HyperboloidPoint p;
    p.t = std::sqrt(1.0 + norm2(spatial));
    p.x = std::move(spatial);
    return p;
  }

  static HyperboloidPoint origin(int n) {
    return from_spatial(std::vector<double>(n, 0.0));
  }

  double quadric_defect() const { return -t * t + norm2(x) + 1.0; }

  void check(double rel_tol = 1e-12) const {
    if (t < 1.0) throw std::invalid_argument("HyperboloidPoint: t < 1");
    if (std::abs(quadric_defect()) > rel_tol * (1.0 + t * t))
      throw std::invalid_argument("HyperboloidPoint: off the quadric");
  }
};

inline HyperboloidPoint lift(const BallPoint& b) {
  double n2 = norm2(b.x);
  double denom = 1.0 - n2;
  HyperboloidPoint p;
  p.x = scaled(b.x, 2.0 / denom);
  p.t = (1.0 + n2) / denom;
  return p;
}

inline BallPoint project(const HyperboloidPoint& p) {
  p.check();
  return BallPoint(scaled(p.x, 1.0 / (1.0 + p.t)));
}

// T_b(x) = x + t_x b + (x.b)/(1+t_b) b, spatial part of the hyperbolic
// translation taking the origin to b; t is renormalized from the quadric.
inline HyperboloidPoint translate(const std::vector<double>& b, const HyperboloidPoint& p) {
  if (b.size() != p.x.size()) throw std::invalid_argument("translate: dimension mismatch");
  double tb = std::sqrt(1.0 + norm2(b));
  double coeff = p.t + dot(p.x, b) / (1.0 + tb);
  std::vector<double> out = p.x;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += coeff * b[i];
  return HyperboloidPoint::from_spatial(std::move(out));
}

inline double distance(const HyperboloidPoint& a, const HyperboloidPoint& b) {
  double c = a.t * b.t - dot(a.x, b.x);
  if (c < 1.0) {
    // rounding can push cosh d slightly below 1 for nearby points
    if (c > 1.0 - 1e-12 * a.t * b.t) c = 1.0;
    else throw std::invalid_argument("distance: cosh argument below 1");
  }
  return std::acosh(c);
}

// Ball-model translation tau_b(x); agrees with lift/translate/project.
inline BallPoint ball_translate(const BallPoint& b, const BallPoint& p) {
  double x2 = norm2(p.x), b2 = norm2(b.x), xb = dot(p.x, b.x);
  double denom = x2 * b2 + 2.0 * xb + 1.0;
  std::vector<double> out(p.x.size());
  double ca = (1.0 - b2) / denom;
  double cb = (x2 + 2.0 * xb + 1.0) / denom;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = ca * p.x[i] + cb * b.x[i];
  return BallPoint(std::move(out));
}

}  // namespace ahmass
