#pragma once

// Corner manifolds (two warped pieces glued with continuous W at s0) and the
// smoothing operation of the pipeline.
//
// The glued derivative U = W' jumps at s0. smooth() replaces it inside the
// collar (s0 - nu/2, s0 + nu/2) by
//
//   W'_nu = U + chi(d) (phi_sig * U - U) - eps psi(d),   sig = nu^2/100,
//
// where phi_sig is the mollifier at core scale sig, chi is a smooth cutoff
// equal to 1 on the core |d| <= sig and supported in |d| <= nu/2, and psi is
// a fixed unit-integral bump on the collar whose coefficient eps cancels the
// integral of the modification, so that integrating from the matched left
// collar edge returns exactly the outside values at the right edge. W is then
// C^2, untouched outside the collar, and its scalar curvature carries the
// mean-curvature-jump spike
//
//   R_nu = O(1) + 2 (H_- - H_+) (100/nu^2) phi(100 d / nu^2)   on the core,
//
// with the O(1) remainder uniform in nu.

#include <cmath>
#include <cstdio>
#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include "ahmass/numerics.hpp"
#include "ahmass/warped_metric.hpp"

namespace ahmass {

struct CornerManifold {
  MetricPtr inside;   // center-regular on [0, s0]
  MetricPtr outside;  // [s0, s_hi]
  double s0 = 0.0;
  double H_minus = 0.0, H_plus = 0.0;
  bool curvature_hypothesis_ok = true;  // R >= -n(n-1) - 1e-8 on both pieces
  bool mean_curvature_ok = true;        // H_- >= H_+
  int n = 3;

  // one-sided evaluation of the glued (unsmoothed) metric
  MetricJet eval_side(double s) const {
    return s <= s0 ? inside->eval(s) : outside->eval(s);
  }
};

// Standard mollifier: phi(t) = K exp(-1/(1-t^2)) on (-1,1), K fixed so that
// the integral is exactly 1.
namespace detail {
// With u = tanh w the bump exp(-1/(1-u^2)) du becomes exp(-cosh^2 w) sech^2 w dw,
// genuinely double-exponentially decaying; composite Gauss panels in w reach
// machine precision where plain Gauss rules in u stall near 1e-8 on the flat
// endpoints.
template <class G>
inline double bump_quadrature_raw(const G& g, double a, double b) {
  if (!(b > a)) return 0.0;
  int panels = std::max(1, static_cast<int>((b - a) / 0.45) + 1);
  double h = (b - a) / panels;
  double acc = 0.0;
  for (int k = 0; k < panels; ++k) {
    acc += integrate_gl(
        [&](double w) {
          double ch = std::cosh(w);
          return std::exp(-ch * ch) / (ch * ch) * g(std::tanh(w));
        },
        a + k * h, a + (k + 1) * h, 24);
  }
  return acc;
}

inline double mollifier_norm() {
  static const double K = [] {
    double I = bump_quadrature_raw([](double) { return 1.0; }, -3.6, 3.6);
    return 1.0 / I;
  }();
  return K;
}

// integral of phi(u) g(u) du over (-1,1); g may have a kink at u = kink
template <class G>
inline double mollifier_integral(const G& g, double kink = 2.0) {
  const double W = 3.6;
  double raw;
  if (kink <= -1.0 || kink >= 1.0) {
    raw = bump_quadrature_raw(g, -W, W);
  } else {
    double ws = std::clamp(std::atanh(kink), -W, W);
    raw = bump_quadrature_raw(g, -W, ws) + bump_quadrature_raw(g, ws, W);
  }
  return mollifier_norm() * raw;
}
}  // namespace detail

inline double mollifier(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  return detail::mollifier_norm() * std::exp(-1.0 / (1.0 - t * t));
}

inline double mollifier_prime(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  double one = 1.0 - t * t;
  return mollifier(t) * (-2.0 * t / (one * one));
}

inline CornerManifold make_corner(MetricPtr inside, MetricPtr outside, double s0,
                                  bool allow_curvature_violation = false) {
  if (!inside || !outside) throw std::invalid_argument("make_corner: null metric");
  if (inside->dim() != outside->dim())
    throw std::invalid_argument("make_corner: dimension mismatch");
  if (!inside->center_regular())
    throw std::invalid_argument("make_corner: inside piece must be center-regular");
  if (std::abs(inside->s_hi() - s0) > 1e-9 || std::abs(outside->s_lo() - s0) > 1e-9)
    throw std::invalid_argument("make_corner: pieces do not meet at s0");

  CornerManifold c;
  c.inside = std::move(inside);
  c.outside = std::move(outside);
  c.s0 = s0;
  c.n = c.inside->dim();

  double w_in = c.inside->warp(s0), w_out = c.outside->warp(s0);
  if (std::abs(w_in - w_out) > 1e-10 * std::max(1.0, std::abs(w_in)))
    throw std::invalid_argument("make_corner: warping functions disagree at the corner");

  c.H_minus = mean_curvature(*c.inside, s0);
  c.H_plus = mean_curvature(*c.outside, s0);
  c.mean_curvature_ok = c.H_minus >= c.H_plus - 1e-12;

  int n = c.n;
  double floor = -n * (n - 1.0) - 1e-8;
  auto scan = [&](const WarpedMetric& g) {
    const int samples = 400;
    double lo = g.s_lo() + 1e-6 * (g.s_hi() - g.s_lo());
    double hi = g.s_hi() - 1e-6 * (g.s_hi() - g.s_lo());
    for (int i = 0; i <= samples; ++i) {
      double s = lo + (hi - lo) * i / samples;
      if (scalar_curvature(g, s) < floor) return false;
    }
    return true;
  };
  c.curvature_hypothesis_ok = scan(*c.inside) && scan(*c.outside);
  if (!c.curvature_hypothesis_ok && !allow_curvature_violation)
    throw std::invalid_argument("make_corner: scalar curvature below -n(n-1) on a piece");
  return c;
}

// C^2 metric produced by smooth(); the collar is tabulated on a core-refined
// grid and interpolated, everything outside delegates to the glued sides.
class SmoothedCornerMetric final : public WarpedMetric {
 public:
  SmoothedCornerMetric(const CornerManifold& corner, double nu)
      : WarpedMetric(corner.n, corner.inside->s_lo(), corner.outside->s_hi(), true),
        corner_(corner), nu_(nu), sigma_(nu * nu / 100.0),
        collar_lo_(corner.s0 - 0.5 * nu), collar_hi_(corner.s0 + 0.5 * nu) {
    build();
  }

  MetricJet eval(double s) const override {
    if (s <= collar_lo_) return corner_.inside->eval(s);
    if (s >= collar_hi_) return corner_.outside->eval(s);
    // W from the tabulated cumulative; derivatives from the closed-form
    // mollification fields (no interpolation noise against the 1/sigma spike)
    MetricJet j;
    j.W = band_->eval(s).W;
    double d = s - corner_.s0;
    double u = side_wp(s), u1 = side_wpp(s);
    double cu = conv_u(s), cu1 = conv_up(s);
    double c = chi(d), c1 = chi_d1(d);
    j.Wp = u + c * (cu - u) - eps_ * psi(d);
    j.Wpp = u1 + c1 * (cu - u) + c * (cu1 - u1) - eps_ * psi_d1(d);
    return j;
  }

  std::optional<double> exact_gauge_constant() const override {
    return corner_.outside->exact_gauge_constant();
  }

  double nu() const { return nu_; }
  double sigma() const { return sigma_; }
  double corner_s0() const { return corner_.s0; }
  double collar_lo() const { return collar_lo_; }
  double collar_hi() const { return collar_hi_; }
  const CornerManifold& corner() const { return corner_; }

 public:
  friend struct ProbeAccess;
 private:
  double side_wp(double s) const { return corner_.eval_side(s).Wp; }
  double side_wpp(double s) const { return corner_.eval_side(s).Wpp; }

  // phi_sig * W' and its derivative; the window is split at the kink
  // u* = (s-s0)/sig, and the delta in the distributional U' enters the
  // derivative through dWp phi(u*)/sig.
  double conv_u(double s) const {
    double ustar = (s - corner_.s0) / sigma_;
    return detail::mollifier_integral(
        [&](double u) { return side_wp(s - sigma_ * u); }, ustar);
  }
  double conv_up(double s) const {
    double ustar = (s - corner_.s0) / sigma_;
    double base = detail::mollifier_integral(
        [&](double u) { return side_wpp(s - sigma_ * u); }, ustar);
    return base + dWp_ * mollifier(ustar) / sigma_;
  }

  // cutoff: 1 on |d| <= sig, 0 at |d| >= nu/2
  double chi(double d) const {
    return smooth_step((0.5 * nu_ - std::abs(d)) / (0.5 * nu_ - sigma_));
  }
  double chi_d1(double d) const {
    double L = 0.5 * nu_ - sigma_;
    double x = (0.5 * nu_ - std::abs(d)) / L;
    if (x <= 0.0 || x >= 1.0) return 0.0;
    double e0 = std::exp(-1.0 / x), e1 = std::exp(-1.0 / (1.0 - x));
    double e0p = e0 / (x * x), e1p = -e1 / sq(1.0 - x);
    double Sp = (e0p * e1 - e0 * e1p) / sq(e0 + e1);
    return Sp * (d >= 0.0 ? -1.0 : 1.0) / L;
  }

  // unit-integral counter-term on the collar
  double psi(double d) const { return mollifier(2.0 * d / nu_) * 2.0 / nu_; }
  double psi_d1(double d) const { return mollifier_prime(2.0 * d / nu_) * 4.0 / (nu_ * nu_); }

  void build() {
    const double s0 = corner_.s0;
    if (!(nu_ > 0.0)) throw std::invalid_argument("smooth: nu must be > 0");
    double nu0 = 2.0 * std::min(s0 - corner_.inside->s_lo(), corner_.outside->s_hi() - s0);
    if (nu_ >= nu0) throw std::invalid_argument("smooth: nu too large for the domains");

    dWp_ = corner_.outside->eval(s0).Wp - corner_.inside->eval(s0).Wp;

    // collar grid: s0 is a node, core zone |d| <= 4 sig at spacing sig/128,
    // then geometrically growing cells capped at nu/128 out to the edges
    std::vector<double> offs;  // nonnegative offsets, mirrored later
    for (int i = 0; i <= 512; ++i) offs.push_back(4.0 * sigma_ * i / 512.0);
    {
      double d = offs.back(), h = sigma_ / 32.0;
      while (d < 0.5 * nu_) {
        d = std::min(d + h, 0.5 * nu_);
        offs.push_back(d);
        h = std::min(1.3 * h, nu_ / 128.0);
      }
    }
    std::vector<double> s;
    for (std::size_t i = offs.size(); i-- > 1;) s.push_back(s0 - offs[i]);
    for (std::size_t i = 0; i < offs.size(); ++i) s.push_back(s0 + offs[i]);
    const std::size_t N = s.size();

    std::vector<double> wp(N), wpp(N);
    auto fill = [&](double epsilon) {
      for (std::size_t i = 0; i < N; ++i) {
        double si = s[i], d = si - s0;
        double u = side_wp(si), u1 = side_wpp(si);
        double cu = conv_u(si), cu1 = conv_up(si);
        double c = chi(d), c1 = chi_d1(d);
        wp[i] = u + c * (cu - u) - epsilon * psi(d);
        wpp[i] = u1 + c1 * (cu - u) + c * (cu1 - u1) - epsilon * psi_d1(d);
      }
    };
    // modification integral, side-aware at the s0 node (U jumps there)
    auto defect = [&]() {
      double acc = 0.0;
      for (std::size_t i = 0; i + 1 < N; ++i) {
        double mid = 0.5 * (s[i] + s[i + 1]);
        const WarpedMetric& side = mid <= s0 ? *corner_.inside : *corner_.outside;
        double f0 = wp[i] - side.eval(s[i]).Wp;
        double f1 = wp[i + 1] - side.eval(s[i + 1]).Wp;
        double g0 = wpp[i] - side.eval(s[i]).Wpp;
        double g1 = wpp[i + 1] - side.eval(s[i + 1]).Wpp;
        double hc = s[i + 1] - s[i];
        acc += 0.5 * hc * (f0 + f1) + hc * hc / 12.0 * (g0 - g1);
      }
      return acc;
    };

    fill(0.0);
    eps_ = defect();
    fill(eps_);
    eps_ += defect();
    fill(eps_);

    std::vector<double> w(N);
    w[0] = corner_.inside->eval(s[0]).W;
    for (std::size_t i = 0; i + 1 < N; ++i) {
      double hc = s[i + 1] - s[i];
      w[i + 1] = w[i] + 0.5 * hc * (wp[i] + wp[i + 1]) + hc * hc / 12.0 * (wpp[i] - wpp[i + 1]);
    }
    double w_end = corner_.outside->eval(s[N - 1]).W;
    double seam = w[N - 1] - w_end;
    if (std::abs(seam) > 1e-11 * std::max(1.0, std::abs(w_end)))
      throw std::runtime_error("smooth: seam defect after counter-term passes");

    band_ = std::make_shared<GriddedMetric>(dim(), s, w, wp, wpp, false);
  }

  CornerManifold corner_;
  double nu_, sigma_;
  double collar_lo_, collar_hi_;
  double dWp_ = 0.0;
  double eps_ = 0.0;
  std::shared_ptr<GriddedMetric> band_;
};

struct SmoothedMetric {
  std::shared_ptr<const SmoothedCornerMetric> base;
  double nu = 0.0;
  double collar_lo = 0.0, collar_hi = 0.0;  // s0 -+ nu/2
  double core_lo = 0.0, core_hi = 0.0;      // s0 -+ nu^2/100
};

inline SmoothedMetric smooth(const CornerManifold& corner, double nu) {
  SmoothedMetric sm;
  sm.base = std::make_shared<SmoothedCornerMetric>(corner, nu);
  sm.nu = nu;
  sm.collar_lo = corner.s0 - 0.5 * nu;
  sm.collar_hi = corner.s0 + 0.5 * nu;
  sm.core_lo = corner.s0 - nu * nu / 100.0;
  sm.core_hi = corner.s0 + nu * nu / 100.0;
  return sm;
}

struct CurvatureSample {
  double s = 0.0;
  double R = 0.0;
  double H = 0.0;
  double normA2 = 0.0;
  double R_Sigma = 0.0;
};

inline std::vector<CurvatureSample> smoothed_scalar_profile(const SmoothedMetric& sm,
                                                            int samples = 2001) {
  std::vector<CurvatureSample> out;
  out.reserve(samples);
  const WarpedMetric& g = *sm.base;
  int n = g.dim();
  for (int i = 0; i < samples; ++i) {
    double s = sm.collar_lo + (sm.collar_hi - sm.collar_lo) * i / (samples - 1.0);
    MetricJet j = g.eval(s);
    CurvatureSample c;
    c.s = s;
    c.R = scalar_curvature(g, s);
    c.H = (n - 1.0) * j.Wp / j.W;
    c.normA2 = (n - 1.0) * sq(j.Wp / j.W);
    c.R_Sigma = (n - 1.0) * (n - 2.0) / (j.W * j.W);
    out.push_back(c);
  }
  return out;
}

// Spike term of the smoothing: 2 (H_- - H_+) (100/nu^2) phi(100 d / nu^2).
inline double smoothing_spike(const SmoothedMetric& sm, double d) {
  const CornerManifold& c = sm.base->corner();
  double inv = 100.0 / (sm.nu * sm.nu);
  return 2.0 * (c.H_minus - c.H_plus) * inv * mollifier(inv * d);
}

// f = -(n-2)/(4(n-1)) (R + n(n-1))^-, the Yamabe-linearization source; <= 0.
inline double f_source_value(const WarpedMetric& g, double s) {
  int n = g.dim();
  double excess = scalar_curvature(g, s) + n * (n - 1.0);
  double neg = excess < 0.0 ? -excess : 0.0;
  return -(n - 2.0) / (4.0 * (n - 1.0)) * neg;
}

inline std::function<double(double)> f_source(const SmoothedMetric& sm) {
  auto base = sm.base;
  double lo = sm.collar_lo, hi = sm.collar_hi;
  return [base, lo, hi](double s) {
    if (s <= lo || s >= hi) return 0.0;  // smoothing is exact outside the collar
    return f_source_value(*base, s);
  };
}

// integral of ((R + n(n-1))^-)^{n/2} dvol with dvol = vol(S^{n-1}) W^{n-1} ds.
// Panels refine around the collar and core when the metric is a smoothed corner.
inline double negative_part_norm(const WarpedMetric& g, int base_panels = 512) {
  int n = g.dim();
  auto integrand = [&](double s) {
    double excess = scalar_curvature(g, s) + n * (n - 1.0);
    double neg = excess < 0.0 ? -excess : 0.0;
    return std::pow(neg, 0.5 * n) * std::pow(g.eval(s).W, n - 1);
  };
  std::vector<double> edges;
  double lo = g.s_lo() + 1e-12, hi = g.s_hi();
  const auto* sc = dynamic_cast<const SmoothedCornerMetric*>(&g);
  if (sc) {
    double s0 = sc->corner_s0(), sg = sc->sigma();
    auto push_range = [&edges](double a, double b, int k) {
      for (int i = 1; i <= k; ++i) edges.push_back(a + (b - a) * i / k);
    };
    edges.push_back(lo);
    push_range(lo, sc->collar_lo(), 64);
    push_range(sc->collar_lo(), s0 - 4.0 * sg, 96);
    push_range(s0 - 4.0 * sg, s0 + 4.0 * sg, 512);
    push_range(s0 + 4.0 * sg, sc->collar_hi(), 96);
    push_range(sc->collar_hi(), hi, 64);
  } else {
    edges.push_back(lo);
    for (int i = 1; i <= base_panels; ++i) edges.push_back(lo + (hi - lo) * i / base_panels);
  }
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    total += integrate_gl(integrand, edges[i], edges[i + 1], 16);
  return sphere_volume(n - 1) * total;
}

inline void write_profile_csv(const SmoothedMetric& sm, const std::string& path,
                              int samples = 2001) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw std::runtime_error("write_profile_csv: cannot open " + path);
  std::fprintf(fp, "d,R,spike,f\n");
  double s0 = sm.base->corner_s0();
  for (int i = 0; i < samples; ++i) {
    double s = sm.collar_lo + (sm.collar_hi - sm.collar_lo) * i / (samples - 1.0);
    double d = s - s0;
    std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g\n", d, scalar_curvature(*sm.base, s),
                 smoothing_spike(sm, d), f_source_value(*sm.base, s));
  }
  std::fclose(fp);
}

}  // namespace ahmass
