#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ahmass/warped_metric.hpp"

using namespace ahmass;

TEST_CASE("hyperbolic model curvature and mean curvature") {
  auto g = make_hyperbolic(3, 10.0);
  for (double s : {0.3, 1.0, 2.5, 7.0}) {
    CHECK(scalar_curvature(*g, s) == Catch::Approx(-6.0).margin(1e-12));
  }
  double s0 = std::asinh(1.0);
  CHECK(mean_curvature(*g, s0) == Catch::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-14));
  for (double s : {0.5, 1.0, 3.0}) {
    CHECK(std::abs(riccati_residual(*g, s)) <= 1e-9);
  }
  auto g5 = make_hyperbolic(5, 8.0);
  CHECK(scalar_curvature(*g5, 2.0) == Catch::Approx(-20.0).margin(1e-11));
}

TEST_CASE("AdS-Schwarzschild closed-form checks") {
  auto g = make_ads_schwarzschild(3, 0.1, 1.0, 10.0);
  double s0 = std::asinh(1.0);

  SECTION("anchor value and derivative") {
    CHECK(g->warp(s0) == Catch::Approx(1.0).epsilon(1e-13));
    CHECK(g->warp_prime(s0) == Catch::Approx(std::sqrt(1.8)).epsilon(1e-13));
    CHECK(mean_curvature(*g, s0) == Catch::Approx(2.0 * std::sqrt(1.8)).epsilon(1e-13));
  }

  SECTION("scalar curvature is -n(n-1) on a grid") {
    for (int i = 0; i <= 50; ++i) {
      double s = s0 + (10.0 - s0) * i / 50.0;
      CHECK(scalar_curvature(*g, s) == Catch::Approx(-6.0).margin(1e-8));
    }
  }

  SECTION("n = 4 family and riccati") {
    auto g4 = make_ads_schwarzschild(4, 0.2, 1.0, 8.0);
    for (double s : {1.0, 2.0, 5.0}) {
      CHECK(scalar_curvature(*g4, s) == Catch::Approx(-12.0).margin(1e-8));
      CHECK(std::abs(riccati_residual(*g4, s)) <= 1e-8 * (12.0 + 12.0 + 1.0));
    }
  }

  SECTION("m = 0 reduces to hyperbolic up to arclength shift") {
    auto g0 = make_ads_schwarzschild(3, 0.0, 2.0, 9.0);
    // anchored so that W(asinh 2) = 2 = sinh(asinh 2): no shift at all
    auto gh = make_hyperbolic(3, 9.0);
    for (double s : {1.7, 3.0, 6.0, 8.5}) {
      CHECK(g0->warp(s) == Catch::Approx(gh->warp(s)).epsilon(1e-12));
      CHECK(g0->warp_prime(s) == Catch::Approx(gh->warp_prime(s)).epsilon(1e-12));
    }
  }

  SECTION("horizon parameters rejected") {
    // n = 3, m = 1: V(1) = 0
    CHECK_THROWS(make_ads_schwarzschild(3, 1.0, 1.0, 8.0));
  }
}

TEST_CASE("cylinder curvature") {
  auto g = make_cylinder(4, 2.0, 0.5, 3.0);
  CHECK(scalar_curvature(*g, 1.0) == Catch::Approx(3.0 * 2.0 / 4.0).epsilon(1e-14));
  CHECK(mean_curvature(*g, 1.0) == 0.0);
  CHECK(std::abs(riccati_residual(*g, 1.5)) <= 1e-10);
}

TEST_CASE("gridded metric H converges under refinement") {
  // sample the hyperbolic warp only; derivatives are filled by differences
  double s_eval = 1.7;
  auto H_true = [&](double s) { return 2.0 * std::cosh(s) / std::sinh(s); };
  double err_prev = 0.0;
  std::vector<double> errs;
  for (int N : {200, 400, 800}) {
    std::vector<double> s(N), W(N);
    for (int i = 0; i < N; ++i) {
      s[i] = 0.5 + (3.0 - 0.5) * i / (N - 1.0);
      W[i] = std::sinh(s[i]);
    }
    auto g = make_gridded_from_samples(3, s, W, false);
    errs.push_back(std::abs(mean_curvature(*g, s_eval) - H_true(s_eval)));
  }
  // at least second-order convergence
  CHECK(errs[0] / errs[1] >= 3.5);
  CHECK(errs[1] / errs[2] >= 3.5);
  (void)err_prev;
}

TEST_CASE("conformal reparametrization") {
  int n = 3;
  auto g = make_hyperbolic(n, 6.0);
  int N = 2001;
  double a = 0.0, b = 6.0;

  SECTION("identity factor") {
    ConformalFactor f;
    for (int i = 0; i < N; ++i) {
      double s = a + (b - a) * i / (N - 1.0);
      f.s.push_back(s);
      f.u.push_back(1.0);
      f.up.push_back(0.0);
      f.upp.push_back(0.0);
    }
    auto gh = conformal_reparametrize(*g, f);
    for (double s : {0.7, 2.0, 5.0}) {
      CHECK(gh->warp(s) == Catch::Approx(std::sinh(s)).epsilon(1e-12));
      CHECK(scalar_curvature(*gh, s) == Catch::Approx(-6.0).margin(1e-7));
    }
  }

  SECTION("constant factor rescales curvature by the conformal law") {
    double v = 0.35;
    ConformalFactor f;
    for (int i = 0; i < N; ++i) {
      double s = a + (b - a) * i / (N - 1.0);
      f.s.push_back(s);
      f.u.push_back(1.0 + v);
      f.up.push_back(0.0);
      f.upp.push_back(0.0);
    }
    auto gc = conformal_reparametrize(*g, f);
    double scale = std::pow(1.0 + v, -4.0 / (n - 2.0));
    for (double s : {1.0, 2.5}) {
      // constant conformal factor: R_hat = u^{-4/(n-2)} R evaluated at the
      // mapped arclength
      double sh = f.s[0] + (s - f.s[0]) * std::pow(1.0 + v, 2.0 / (n - 2.0));
      CHECK(scalar_curvature(*gc, sh) == Catch::Approx(-6.0 * scale).margin(1e-7));
    }
  }

  SECTION("smooth factor agrees with the conformal transformation law") {
    // u = 1 + 0.2 e^{-(s-2)^2}; law checked with an independent FD Laplacian
    ConformalFactor f;
    std::vector<double> s_nodes;
    for (int i = 0; i < N; ++i) {
      double s = a + (b - a) * i / (N - 1.0);
      double e = 0.2 * std::exp(-sq(s - 2.0));
      s_nodes.push_back(s);
      f.s.push_back(s);
      f.u.push_back(1.0 + e);
      f.up.push_back(-2.0 * (s - 2.0) * e);
      f.upp.push_back((-2.0 + 4.0 * sq(s - 2.0)) * e);
    }
    auto gc = conformal_reparametrize(*g, f);
    // map a test arclength into the new gauge by the same cumulative rule
    auto s_hat_of = [&](double s_target) {
      double acc = f.s[0];
      double prev_s = f.s[0], prev_q = std::pow(f.u[0], 2.0 / (n - 2.0));
      for (int i = 1; i < N; ++i) {
        double q = std::pow(f.u[i], 2.0 / (n - 2.0));
        if (f.s[i] >= s_target) {
          double frac = (s_target - prev_s) / (f.s[i] - prev_s);
          double qm = prev_q + frac * (q - prev_q);
          return acc + (s_target - prev_s) * 0.5 * (prev_q + qm);
        }
        acc += (f.s[i] - prev_s) * 0.5 * (prev_q + q);
        prev_s = f.s[i];
        prev_q = q;
      }
      return acc;
    };
    double h = 1e-3;
    for (double s : {1.2, 2.0, 3.1}) {
      double u0 = 1.0 + 0.2 * std::exp(-sq(s - 2.0));
      auto uf = [&](double ss) { return 1.0 + 0.2 * std::exp(-sq(ss - 2.0)); };
      double lap = (uf(s + h) - 2.0 * u0 + uf(s - h)) / (h * h)
                   + 2.0 * (std::cosh(s) / std::sinh(s)) * (uf(s + h) - uf(s - h)) / (2.0 * h);
      double R_law = std::pow(u0, -(n + 2.0) / (n - 2.0))
                     * (-6.0 * u0 - 4.0 * (n - 1.0) / (n - 2.0) * lap);
      double R_geom = scalar_curvature(*gc, s_hat_of(s));
      CHECK(R_geom == Catch::Approx(R_law).epsilon(1e-6));
    }
  }

  SECTION("nonpositive factor rejected") {
    ConformalFactor f;
    f.s = {0.0, 1.0};
    f.u = {1.0, -0.5};
    f.up = {0.0, 0.0};
    f.upp = {0.0, 0.0};
    CHECK_THROWS_AS(conformal_reparametrize(*g, f), std::invalid_argument);
  }
}
