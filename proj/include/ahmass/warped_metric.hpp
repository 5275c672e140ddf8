#pragma once

// Rotationally symmetric conformally compact metrics g = ds^2 + W(s)^2 g0 in
// arclength gauge. Everything downstream (corner gluing, the radial solver,
// the gauge map) reads metrics through the jet (W, W', W'').
//
//   R  = -2(n-1) W''/W + (n-1)(n-2)(1 - W'^2)/W^2
//   H  = (n-1) W'/W
//
// Model families: hyperbolic W = sinh s and AdS-Schwarzschild
// V(r) = 1 + r^2 - 2 m r^{2-n}, dW/ds = sqrt(V(W)); both have R = -n(n-1).

#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ahmass/numerics.hpp"

namespace ahmass {

struct MetricJet {
  double W = 0.0, Wp = 0.0, Wpp = 0.0;
};

class WarpedMetric {
 public:
  WarpedMetric(int n, double s_lo, double s_hi, bool center_regular)
      : n_(n), s_lo_(s_lo), s_hi_(s_hi), center_regular_(center_regular) {
    if (n < 3) throw std::invalid_argument("WarpedMetric: n must be >= 3");
    if (!(s_hi > s_lo)) throw std::invalid_argument("WarpedMetric: empty domain");
  }
  virtual ~WarpedMetric() = default;

  int dim() const { return n_; }
  double s_lo() const { return s_lo_; }
  double s_hi() const { return s_hi_; }
  bool center_regular() const { return center_regular_; }

  virtual MetricJet eval(double s) const = 0;

  // calibration constant s* with tanh(rho/2) = e^{-(s-s*)} when known in
  // closed form; the gauge module fits it otherwise
  virtual std::optional<double> exact_gauge_constant() const { return std::nullopt; }

  double warp(double s) const { return eval(s).W; }
  double warp_prime(double s) const { return eval(s).Wp; }

 private:
  int n_;
  double s_lo_, s_hi_;
  bool center_regular_;
};

using MetricPtr = std::shared_ptr<const WarpedMetric>;

inline double scalar_curvature(const WarpedMetric& g, double s) {
  MetricJet j = g.eval(s);
  int n = g.dim();
  return -2.0 * (n - 1.0) * j.Wpp / j.W
         + (n - 1.0) * (n - 2.0) * (1.0 - j.Wp * j.Wp) / (j.W * j.W);
}

inline double mean_curvature(const WarpedMetric& g, double s) {
  MetricJet j = g.eval(s);
  return (g.dim() - 1.0) * j.Wp / j.W;
}

// Residual of R = R_Sigma - (|A|^2 + H^2) - 2 dH/dn with R_Sigma, |A|, H from
// the warp jet and dH/dn by a fourth-order difference of H; a consistency
// check across the three derivative routes.
inline double riccati_residual(const WarpedMetric& g, double s) {
  MetricJet j = g.eval(s);
  int n = g.dim();
  double h = std::min(2e-4, 0.1 * std::min(s - g.s_lo(), g.s_hi() - s));
  if (h <= 0.0) throw std::invalid_argument("riccati_residual: s at domain boundary");
  auto H = [&](double ss) { return mean_curvature(g, ss); };
  double dH = (-H(s + 2 * h) + 8.0 * H(s + h) - 8.0 * H(s - h) + H(s - 2 * h)) / (12.0 * h);
  double R_sigma = (n - 1.0) * (n - 2.0) / (j.W * j.W);
  double A2 = (n - 1.0) * sq(j.Wp / j.W);
  double H0 = (n - 1.0) * j.Wp / j.W;
  double rhs = R_sigma - (A2 + H0 * H0) - 2.0 * dH;
  return scalar_curvature(g, s) - rhs;
}

class HyperbolicMetric final : public WarpedMetric {
 public:
  HyperbolicMetric(int n, double s_hi) : WarpedMetric(n, 0.0, s_hi, true) {}
  MetricJet eval(double s) const override {
    return {std::sinh(s), std::cosh(s), std::sinh(s)};
  }
  std::optional<double> exact_gauge_constant() const override { return 0.0; }
};

inline MetricPtr make_hyperbolic(int n, double s_hi) {
  return std::make_shared<HyperbolicMetric>(n, s_hi);
}

// Round cylinder W = c; R = (n-1)(n-2)/c^2, H = 0. Test input.
class CylinderMetric final : public WarpedMetric {
 public:
  CylinderMetric(int n, double c, double s_lo, double s_hi)
      : WarpedMetric(n, s_lo, s_hi, false), c_(c) {
    if (c <= 0.0) throw std::invalid_argument("CylinderMetric: c must be > 0");
  }
  MetricJet eval(double) const override { return {c_, 0.0, 0.0}; }

 private:
  double c_;
};

inline MetricPtr make_cylinder(int n, double c, double s_lo, double s_hi) {
  return std::make_shared<CylinderMetric>(n, c, s_lo, s_hi);
}

// AdS-Schwarzschild in arclength gauge. W(s) is recovered pointwise by a
// Newton solve on the exact inverse
//
//   s(W) = s_anchor + asinh(W) - asinh(r_anchor) + int_{r_anchor}^W Delta,
//   Delta(r) = V(r)^{-1/2} - (1+r^2)^{-1/2},
//
// with the Delta integral tabulated cumulatively on a geometric grid and
// interpolated with exact endpoint derivatives. No global integration error
// accumulates, which the mass-aspect fits depend on.
class AdsSchwarzschildMetric final : public WarpedMetric {
 public:
  AdsSchwarzschildMetric(int n, double m, double r_anchor, double s_anchor,
                         double s_lo, double s_hi)
      : WarpedMetric(n, s_lo, s_hi, false), m_(m), r_anchor_(r_anchor), s_anchor_(s_anchor) {
    if (m < 0.0) throw std::invalid_argument("AdsSchwarzschildMetric: m must be >= 0");
    if (r_anchor <= 0.0) throw std::invalid_argument("AdsSchwarzschildMetric: r_anchor <= 0");
    if (V(r_anchor) <= 0.0)
      throw std::invalid_argument("AdsSchwarzschildMetric: V <= 0 at anchor (inside horizon)");
    build_tables();
    // the domain may reach below the anchor; verify V > 0 all the way down
    if (s_lo < s_anchor) {
      double w_lo = warp_of(s_lo);  // throws if the horizon is crossed
      (void)w_lo;
    }
  }

  double V(double r) const { return 1.0 + r * r - 2.0 * m_ * std::pow(r, 2 - dim()); }
  double Vp(double r) const {
    return 2.0 * r + 2.0 * (dim() - 2.0) * m_ * std::pow(r, 1 - dim());
  }

  MetricJet eval(double s) const override {
    double W = warp_of(s);
    double v = V(W);
    return {W, std::sqrt(v), 0.5 * Vp(W)};
  }

  std::optional<double> exact_gauge_constant() const override {
    return s_anchor_ - std::asinh(r_anchor_) + delta_total_;
  }

  double mass() const { return m_; }

 private:
  double delta(double r) const {
    return 1.0 / std::sqrt(V(r)) - 1.0 / std::sqrt(1.0 + r * r);
  }

  // s(W) - s_anchor
  double s_of(double W) const {
    return std::asinh(W) - std::asinh(r_anchor_) + delta_integral(W);
  }

  double warp_of(double s) const {
    double target = s - s_anchor_;
    // exact for m = 0; V > 1+r^2 never holds for m > 0 so this starts high
    double W = std::sinh(std::max(std::asinh(r_anchor_) + target, 1e-8));
    double best_W = W, best_step = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 60; ++it) {
      double v = V(W);
      if (v <= 0.0 || W <= 0.0)
        throw std::runtime_error("AdsSchwarzschildMetric: horizon reached in domain");
      double step = (s_of(W) - target) * std::sqrt(v);
      if (std::abs(step) < best_step) {
        best_step = std::abs(step);
        best_W = W - step;
      }
      W -= step;
      if (std::abs(step) <= 5e-14 * std::max(1.0, std::abs(W))) return W;
      // quadratic convergence bottomed out at the rounding floor of s(W)
      if (it > 6 && best_step <= 1e-10 * std::max(1.0, std::abs(W))) return best_W;
    }
    throw std::runtime_error("AdsSchwarzschildMetric: warp inversion failed");
  }

  // cumulative int_{r_anchor}^{W} delta on a geometric grid, Hermite in between
  double delta_integral(double W) const {
    if (W <= grid_.front()) {
      return integrate_gl([&](double r) { return delta(r); }, grid_.front(), W, 32);
    }
    auto it = std::upper_bound(grid_.begin(), grid_.end(), W);
    std::size_t k = std::min<std::size_t>(grid_.size() - 1, it - grid_.begin()) - 1;
    return cum_[k] + integrate_gl([&](double r) { return delta(r); }, grid_[k], W, 16);
  }

  void build_tables() {
    double r_big = 4.0 * std::cosh(s_hi() + 2.0 - s_anchor_) * (1.0 + r_anchor_);
    r_big = std::max(r_big, 1e4 * (1.0 + r_anchor_));
    grid_.push_back(r_anchor_);
    while (grid_.back() < r_big) grid_.push_back(grid_.back() * std::pow(2.0, 1.0 / 16.0));
    cum_.assign(grid_.size(), 0.0);
    for (std::size_t k = 1; k < grid_.size(); ++k)
      cum_[k] = cum_[k - 1] +
                integrate_gl([&](double r) { return delta(r); }, grid_[k - 1], grid_[k], 16);
    // tail of int delta to infinity via r = R/z
    double R = grid_.back();
    double tail = integrate_gl(
        [&](double z) { return delta(R / z) * R / (z * z); }, 1e-12, 1.0, 48);
    delta_total_ = cum_.back() + tail;
  }

  double m_, r_anchor_, s_anchor_;
  std::vector<double> grid_;
  std::vector<double> cum_;
  double delta_total_ = 0.0;
};

// Spec entry point: exterior family anchored at area radius r_lo, placed so
// that W(s_anchor) = r_lo. Default anchors r_lo at the hyperbolic arclength.
inline MetricPtr make_ads_schwarzschild(int n, double m, double r_lo, double s_hi,
                                        std::optional<double> s_anchor = std::nullopt,
                                        std::optional<double> s_lo = std::nullopt) {
  double sa = s_anchor.value_or(std::asinh(r_lo));
  return std::make_shared<AdsSchwarzschildMetric>(n, m, r_lo, sa, s_lo.value_or(sa), s_hi);
}

// Metric given by jets on a strictly increasing grid; quintic Hermite cells
// give a C^2 interpolant whose own derivatives supply W' and W''.
class GriddedMetric final : public WarpedMetric {
 public:
  GriddedMetric(int n, std::vector<double> s, std::vector<double> W, std::vector<double> Wp,
                std::vector<double> Wpp, bool center_regular,
                std::optional<double> gauge_constant = std::nullopt)
      : WarpedMetric(n, s.front(), s.back(), center_regular),
        s_(std::move(s)), W_(std::move(W)), Wp_(std::move(Wp)), Wpp_(std::move(Wpp)),
        gauge_constant_(gauge_constant) {
    if (s_.size() < 2 || W_.size() != s_.size() || Wp_.size() != s_.size() ||
        Wpp_.size() != s_.size())
      throw std::invalid_argument("GriddedMetric: inconsistent arrays");
    for (std::size_t i = 1; i < s_.size(); ++i)
      if (!(s_[i] > s_[i - 1])) throw std::invalid_argument("GriddedMetric: grid not increasing");
    for (double w : W_)
      if (!(w >= 0.0)) throw std::invalid_argument("GriddedMetric: W must be positive");
  }

  MetricJet eval(double s) const override {
    double slack = 1e-9 * (1.0 + std::abs(s_hi()));
    if (s < s_lo() - slack || s > s_hi() + slack)
      throw std::invalid_argument("GriddedMetric: s outside grid");
    s = std::clamp(s, s_lo(), s_hi());
    auto it = std::upper_bound(s_.begin(), s_.end(), s);
    std::size_t k = std::clamp<std::size_t>(it - s_.begin(), 1, s_.size() - 1) - 1;
    double h = s_[k + 1] - s_[k];
    double x = (s - s_[k]) / h;
    return hermite5(x, h, k);
  }

  std::optional<double> exact_gauge_constant() const override { return gauge_constant_; }

  const std::vector<double>& grid() const { return s_; }

 private:
  MetricJet hermite5(double x, double h, std::size_t k) const {
    double x2 = x * x, x3 = x2 * x, x4 = x3 * x, x5 = x4 * x;
    double H0 = 1 - 10 * x3 + 15 * x4 - 6 * x5;
    double H1 = x - 6 * x3 + 8 * x4 - 3 * x5;
    double H2 = 0.5 * x2 - 1.5 * x3 + 1.5 * x4 - 0.5 * x5;
    double H3 = 10 * x3 - 15 * x4 + 6 * x5;
    double H4 = -4 * x3 + 7 * x4 - 3 * x5;
    double H5 = 0.5 * x3 - x4 + 0.5 * x5;
    double d0 = -30 * x2 + 60 * x3 - 30 * x4;
    double d1 = 1 - 18 * x2 + 32 * x3 - 15 * x4;
    double d2 = x - 4.5 * x2 + 6 * x3 - 2.5 * x4;
    double d3 = 30 * x2 - 60 * x3 + 30 * x4;
    double d4 = -12 * x2 + 28 * x3 - 15 * x4;
    double d5 = 1.5 * x2 - 4 * x3 + 2.5 * x4;
    double e0 = -60 * x + 180 * x2 - 120 * x3;
    double e1 = -36 * x + 96 * x2 - 60 * x3;
    double e2 = 1 - 9 * x + 18 * x2 - 10 * x3;
    double e3 = 60 * x - 180 * x2 + 120 * x3;
    double e4 = -24 * x + 84 * x2 - 60 * x3;
    double e5 = 3 * x - 12 * x2 + 10 * x3;
    double a = W_[k], b = Wp_[k] * h, c = Wpp_[k] * h * h;
    double A = W_[k + 1], B = Wp_[k + 1] * h, C = Wpp_[k + 1] * h * h;
    MetricJet j;
    j.W = a * H0 + b * H1 + c * H2 + A * H3 + B * H4 + C * H5;
    j.Wp = (a * d0 + b * d1 + c * d2 + A * d3 + B * d4 + C * d5) / h;
    j.Wpp = (a * e0 + b * e1 + c * e2 + A * e3 + B * e4 + C * e5) / (h * h);
    return j;
  }

  std::vector<double> s_, W_, Wp_, Wpp_;
  std::optional<double> gauge_constant_;
};

// Build a gridded metric from warp samples alone; W' and W'' filled by
// 4th-order central differences (uniform grid required). Nodes within two
// cells of either edge keep lower-order one-sided values, so curvature
// evaluation near the edges is refused by callers that care.
inline std::shared_ptr<GriddedMetric> make_gridded_from_samples(
    int n, const std::vector<double>& s, const std::vector<double>& W, bool center_regular) {
  std::size_t N = s.size();
  if (N < 7) throw std::invalid_argument("make_gridded_from_samples: need >= 7 samples");
  double h = s[1] - s[0];
  for (std::size_t i = 1; i + 1 < N; ++i)
    if (std::abs((s[i + 1] - s[i]) - h) > 1e-9 * h)
      throw std::invalid_argument("make_gridded_from_samples: grid must be uniform");
  std::vector<double> Wp(N), Wpp(N);
  for (std::size_t i = 0; i < N; ++i) {
    if (i >= 2 && i + 2 < N) {
      Wp[i] = (-W[i + 2] + 8 * W[i + 1] - 8 * W[i - 1] + W[i - 2]) / (12 * h);
      Wpp[i] = (-W[i + 2] + 16 * W[i + 1] - 30 * W[i] + 16 * W[i - 1] - W[i - 2]) / (12 * h * h);
    } else if (i == 0) {
      Wp[i] = (-3 * W[0] + 4 * W[1] - W[2]) / (2 * h);
      Wpp[i] = (2 * W[0] - 5 * W[1] + 4 * W[2] - W[3]) / (h * h);
    } else if (i == 1) {
      Wp[i] = (W[2] - W[0]) / (2 * h);
      Wpp[i] = (W[2] - 2 * W[1] + W[0]) / (h * h);
    } else if (i + 1 == N) {
      Wp[i] = (3 * W[i] - 4 * W[i - 1] + W[i - 2]) / (2 * h);
      Wpp[i] = (2 * W[i] - 5 * W[i - 1] + 4 * W[i - 2] - W[i - 3]) / (h * h);
    } else {  // i + 2 == N
      Wp[i] = (W[i + 1] - W[i - 1]) / (2 * h);
      Wpp[i] = (W[i + 1] - 2 * W[i] + W[i - 1]) / (h * h);
    }
  }
  return std::make_shared<GriddedMetric>(n, s, W, Wp, Wpp, center_regular);
}

// Positive factor u = 1+v with derivatives on a grid matching the base metric.
struct ConformalFactor {
  std::vector<double> s, u, up, upp;
};

// Realizes (1+v)^{4/(n-2)} (ds^2 + W^2 g0) as a new warped product via
// d s_hat = u^{2/(n-2)} ds, W_hat = u^{2/(n-2)} W.
inline std::shared_ptr<GriddedMetric> conformal_reparametrize(const WarpedMetric& g,
                                                              const ConformalFactor& f) {
  std::size_t N = f.s.size();
  if (N < 2 || f.u.size() != N || f.up.size() != N || f.upp.size() != N)
    throw std::invalid_argument("conformal_reparametrize: inconsistent factor arrays");
  int n = g.dim();
  double p = 2.0 / (n - 2.0);
  std::vector<double> sh(N), Wh(N), Whp(N), Whpp(N);
  std::vector<double> q(N);  // u^p at nodes
  for (std::size_t i = 0; i < N; ++i) {
    if (!(f.u[i] > 0.0))
      throw std::invalid_argument("conformal_reparametrize: factor must be positive");
    q[i] = std::pow(f.u[i], p);
  }
  sh[0] = f.s[0];
  for (std::size_t i = 1; i < N; ++i) {
    double h = f.s[i] - f.s[i - 1];
    double q0 = q[i - 1], q1 = q[i];
    double dq0 = p * std::pow(f.u[i - 1], p - 1.0) * f.up[i - 1];
    double dq1 = p * std::pow(f.u[i], p - 1.0) * f.up[i];
    // corrected trapezoid, O(h^5) per cell
    sh[i] = sh[i - 1] + 0.5 * h * (q0 + q1) + h * h / 12.0 * (dq0 - dq1);
  }
  for (std::size_t i = 0; i < N; ++i) {
    MetricJet j = g.eval(f.s[i]);
    double lu = f.up[i] / f.u[i];
    double luu = f.upp[i] / f.u[i] - lu * lu;
    Wh[i] = q[i] * j.W;
    Whp[i] = j.Wp + p * lu * j.W;
    Whpp[i] = (j.Wpp + p * (luu * j.W + lu * j.Wp)) / q[i];
  }
  return std::make_shared<GriddedMetric>(n, sh, Wh, Whp, Whpp, g.center_regular());
}

inline void write_metric_csv(const WarpedMetric& g, const std::string& path, int samples,
                             std::optional<double> lo = std::nullopt,
                             std::optional<double> hi = std::nullopt) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw std::runtime_error("write_metric_csv: cannot open " + path);
  std::fprintf(fp, "s,W,Wprime,R,H\n");
  double a = lo.value_or(g.s_lo()), b = hi.value_or(g.s_hi());
  double margin = 1e-6 * (b - a);
  for (int i = 0; i < samples; ++i) {
    double s = a + (b - a) * i / (samples - 1.0);
    s = std::clamp(s, a + margin, b - margin);
    MetricJet j = g.eval(s);
    std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g,%.17g\n", s, j.W, j.Wp,
                 scalar_curvature(g, s), mean_curvature(g, s));
  }
  std::fclose(fp);
}

}  // namespace ahmass
