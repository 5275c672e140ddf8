#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ahmass {

inline double sq(double x) { return x * x; }

// vol(S^{k}) for the unit k-sphere embedded in R^{k+1}.
inline double sphere_volume(int k) {
  if (k < 0) throw std::invalid_argument("sphere_volume: negative dimension");
  double kk = static_cast<double>(k) + 1.0;
  return 2.0 * std::pow(M_PI, 0.5 * kk) / std::tgamma(0.5 * kk);
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(const std::vector<double>& a) { return dot(a, a); }
inline double norm(const std::vector<double>& a) { return std::sqrt(norm2(a)); }

inline std::vector<double> scaled(const std::vector<double>& a, double c) {
  std::vector<double> r(a);
  for (double& x : r) x *= c;
  return r;
}

inline std::vector<double> added(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("added: size mismatch");
  std::vector<double> r(a);
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

// C^infty step: 0 for x<=0, 1 for x>=1, all derivatives vanish at both ends.
inline double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  double e0 = std::exp(-1.0 / x);
  double e1 = std::exp(-1.0 / (1.0 - x));
  return e0 / (e0 + e1);
}

namespace detail {

// Gauss-Legendre nodes/weights on [-1,1] by Newton iteration on P_k.
struct GaussRule {
  std::vector<double> x, w;
};

inline GaussRule build_gauss_legendre(int k) {
  GaussRule r;
  r.x.resize(k);
  r.w.resize(k);
  for (int i = 0; i < (k + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (k + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < k; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = k * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    r.x[i] = -z;
    r.x[k - 1 - i] = z;
    r.w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    r.w[k - 1 - i] = r.w[i];
  }
  return r;
}

inline const GaussRule& gauss_legendre(int k) {
  static const GaussRule g8 = build_gauss_legendre(8);
  static const GaussRule g16 = build_gauss_legendre(16);
  static const GaussRule g24 = build_gauss_legendre(24);
  static const GaussRule g32 = build_gauss_legendre(32);
  static const GaussRule g48 = build_gauss_legendre(48);
  static const GaussRule g64 = build_gauss_legendre(64);
  switch (k) {
    case 8: return g8;
    case 16: return g16;
    case 24: return g24;
    case 32: return g32;
    case 48: return g48;
    case 64: return g64;
    default: throw std::invalid_argument("gauss_legendre: unsupported order");
  }
}

}  // namespace detail

template <class F>
double integrate_gl(const F& f, double a, double b, int order = 32) {
  const auto& g = detail::gauss_legendre(order);
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * f(mid + half * g.x[i]);
  return s * half;
}

// Adaptive bisection, error estimated by GL16 vs GL32 on each panel.
template <class F>
double integrate_adaptive(const F& f, double a, double b, double tol, int depth = 0) {
  double c16 = integrate_gl(f, a, b, 16);
  double c32 = integrate_gl(f, a, b, 32);
  double err = std::abs(c32 - c16);
  if (err <= tol * std::max(1.0, std::abs(c32)) || depth > 48)
    return c32;
  double m = 0.5 * (a + b);
  return integrate_adaptive(f, a, m, 0.5 * tol, depth + 1) +
         integrate_adaptive(f, m, b, 0.5 * tol, depth + 1);
}

// Least squares min ||A c - y|| by Householder QR; A is m x k, m >= k, column-major free.
inline std::vector<double> least_squares(std::vector<std::vector<double>> cols,
                                         std::vector<double> y) {
  const std::size_t k = cols.size();
  if (k == 0) throw std::invalid_argument("least_squares: no columns");
  const std::size_t m = y.size();
  for (const auto& c : cols)
    if (c.size() != m) throw std::invalid_argument("least_squares: ragged columns");
  if (m < k) throw std::invalid_argument("least_squares: underdetermined");

  for (std::size_t j = 0; j < k; ++j) {
    double nrm = 0.0;
    for (std::size_t i = j; i < m; ++i) nrm += sq(cols[j][i]);
    nrm = std::sqrt(nrm);
    if (nrm == 0.0) throw std::runtime_error("least_squares: rank deficient");
    double alpha = cols[j][j] > 0 ? -nrm : nrm;
    std::vector<double> v(m, 0.0);
    v[j] = cols[j][j] - alpha;
    for (std::size_t i = j + 1; i < m; ++i) v[i] = cols[j][i];
    double vtv = 0.0;
    for (std::size_t i = j; i < m; ++i) vtv += sq(v[i]);
    if (vtv == 0.0) throw std::runtime_error("least_squares: rank deficient");
    auto apply = [&](std::vector<double>& u) {
      double vu = 0.0;
      for (std::size_t i = j; i < m; ++i) vu += v[i] * u[i];
      double c = 2.0 * vu / vtv;
      for (std::size_t i = j; i < m; ++i) u[i] -= c * v[i];
    };
    for (std::size_t jj = j; jj < k; ++jj) apply(cols[jj]);
    apply(y);
  }
  std::vector<double> c(k, 0.0);
  for (std::size_t j = k; j-- > 0;) {
    double s = y[j];
    for (std::size_t jj = j + 1; jj < k; ++jj) s -= cols[jj][j] * c[jj];
    c[j] = s / cols[j][j];
  }
  return c;
}

}  // namespace ahmass
