#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "oracles.hpp"
#include "orlicz/errors.hpp"
#include "orlicz/young.hpp"

using namespace orlicz;

namespace {
YoungFunction power(double p) { return make_young("power", std::vector<double>{p}); }
YoungFunction power_log(double p) { return make_young("power_log", std::vector<double>{p}); }
}  // namespace

TEST_CASE("make_young evaluates the named families") {
  const auto p2 = power(2.0);
  CHECK(p2.G(2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(p2.g(2.0) == doctest::Approx(2.0).epsilon(1e-15));
  const auto sp = make_young("sum_of_powers", std::vector<double>{2.0, 4.0});
  CHECK(sp.G(1.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(sp.g(1.0) == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(p2.G(0.0) == 0.0);
  CHECK(p2.g(0.0) == 0.0);
}

TEST_CASE("make_young rejects exponents at or below one") {
  CHECK_THROWS_AS(power(0.9), InvalidParams);
  CHECK_THROWS_AS(power(1.0), InvalidParams);
  CHECK_THROWS_AS(make_young("sum_of_powers", std::vector<double>{2.0, 0.5}), InvalidParams);
  CHECK_THROWS_AS(make_young("nonexistent", std::vector<double>{2.0}), InvalidParams);
}

TEST_CASE("G is the integral of g") {
  for (const auto& y : {power(3.0), power_log(2.0), make_young("sum_of_powers", std::vector<double>{1.5, 3.0}),
                        make_young("piecewise_power", std::vector<double>{1.5, 3.0}),
                        make_young("tabulated", std::vector<double>{1.0, 1.0, 2.0, 3.0})}) {
    for (double t : {0.3, 1.0, 2.5, 7.0}) {
      const double integral = oracle::simpson([&](double x) { return y.g(x); }, 0.0, t, 4000);
      CHECK(y.G(t) == doctest::Approx(integral).epsilon(1e-6));
    }
  }
}

TEST_CASE("compute_indices") {
  const auto p3 = compute_indices(power(3.0));
  CHECK(p3.p_minus == 3.0);
  CHECK(p3.p_plus == 3.0);

  const auto sp = compute_indices(make_young("sum_of_powers", std::vector<double>{2.0, 4.0}));
  CHECK(sp.p_minus == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(sp.p_plus == doctest::Approx(4.0).epsilon(1e-6));

  // Dense sampling of t g / G from closed-form G = t^2 log(1+t) and g.
  const auto pl = compute_indices(power_log(2.0));
  double lo = 1e300, hi = 0.0;
  for (double t : log_grid(1e-6, 1e6, 20000)) {
    const double G = t * t * std::log1p(t);
    const double g = 2.0 * t * std::log1p(t) + t * t / (1.0 + t);
    lo = std::min(lo, t * g / G);
    hi = std::max(hi, t * g / G);
  }
  CHECK(pl.p_minus == doctest::Approx(lo).epsilon(1e-4));
  CHECK(pl.p_plus == doctest::Approx(hi).epsilon(1e-4));
  CHECK(pl.p_minus >= 2.0 - 1e-9);
  CHECK(pl.p_plus <= 3.0 + 1e-9);
}

TEST_CASE("complementary function") {
  CHECK(complementary(power(2.0)).G(3.0) == doctest::Approx(4.5).epsilon(1e-12));
  CHECK(complementary(power(3.0)).G(1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  // Closed form t^{p'} / p' for a non-integer exponent.
  const double p = 2.7, q = p / (p - 1.0);
  const auto c = complementary(power(p));
  for (double t : {1e-3, 0.5, 4.0, 1e3}) {
    CHECK(c.G(t) == doctest::Approx(std::pow(t, q) / q).epsilon(1e-10));
  }

  // Young's inequality on a grid of [0, 10]^2 for power_log.
  const auto y = power_log(2.0);
  const auto yc = complementary(y);
  int bad = 0;
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      const double a = 0.1 * i, b = 0.1 * j;
      if (a * b > y.G(a) + yc.G(b) + 1e-12 * (1.0 + a * b)) ++bad;
    }
  }
  CHECK(bad == 0);
}

TEST_CASE("complementary rejects a flat derivative") {
  const auto flat = make_young("tabulated", std::vector<double>{1.0, 1.0, 2.0, 1.0, 3.0, 2.0});
  CHECK_THROWS_AS(complementary(flat), NonInvertible);
}

TEST_CASE("inverse_G and inverse_g") {
  CHECK(inverse_G(power(2.0), 2.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(inverse_G(power(2.0), 0.0) == 0.0);
  const auto y = power_log(2.0);
  const double t = inverse_G(y, 5.0);
  CHECK(std::abs(y.G(t) - 5.0) <= 1e-10 * 5.0);
  CHECK(std::abs(y.g(inverse_g(y, 3.0)) - 3.0) <= 1e-10 * 3.0);
  double prev = 0.0;
  for (double v : log_grid(1e-6, 1e6, 50)) {
    const double x = inverse_G(y, v);
    CHECK(x > prev);
    prev = x;
  }
}

TEST_CASE("critical function of a power") {
  // G = t^2/2, n = 1, s = 1/4: G*^{-1}(t) = sqrt(2) t^{1/4} / (1/4), so
  // G*(x) = (x / (4 sqrt 2))^4 with slope 4.
  const auto gs = critical_sobolev(power(2.0), 1, 0.25);
  std::vector<double> x, y;
  for (double t : log_grid(1e2, 1e4, 30)) {
    x.push_back(t);
    y.push_back(gs.G(t));
  }
  CHECK(oracle::loglog_slope(x, y) == doctest::Approx(4.0).epsilon(1e-3));
  for (double t : {1.0, 10.0, 300.0}) {
    CHECK(gs.G(t) == doctest::Approx(std::pow(t / (4.0 * std::sqrt(2.0)), 4.0)).epsilon(1e-4));
  }
  CHECK_THROWS_AS(critical_sobolev(power(2.0), 1, 0.5), NotSubcritical);

  const auto g1 = critical_sobolev(power(2.0), 1, 0.1);
  const auto grid = log_grid(1e-3, 1e3, 200);
  for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
    CHECK(g1.G(grid[k]) > g1.G(grid[k - 1]));
  }
  // Convexity by second differences on a uniform grid.
  for (double t = 0.1; t < 50.0; t += 0.7) {
    const double d = 0.05;
    CHECK(g1.G(t + d) - 2.0 * g1.G(t) + g1.G(t - d) >= -1e-12 * g1.G(t));
  }
}

TEST_CASE("check_structure") {
  const auto r2 = check_structure(power(2.0), 1, 0.3);
  CHECK(r2.g1_holds);
  CHECK(r2.g2_holds);
  CHECK(r2.g3_holds);
  CHECK(r2.delta2_constant == std::pow(2.0, 2.0));

  const auto r15 = check_structure(power(1.5), 1, 0.3);
  CHECK_FALSE(r15.g2_holds);
  CHECK_FALSE(r15.witnesses.empty());

  // Second-difference oracle for G(sqrt t) with closed-form G, refined twice.
  const double p = 2.5;
  auto convex_on_grid = [&](int n) {
    const auto t = log_grid(1e-6, 1e6, n);
    for (std::size_t k = 1; k + 1 < t.size(); ++k) {
      auto G = [&](double x) { return std::pow(std::sqrt(x), p) * std::log1p(std::sqrt(x)); };
      const double h0 = t[k] - t[k - 1], h1 = t[k + 1] - t[k];
      const double dd = (G(t[k + 1]) - G(t[k])) / h1 - (G(t[k]) - G(t[k - 1])) / h0;
      if (dd < -1e-12 * G(t[k]) / t[k]) return false;
    }
    return true;
  };
  const bool oracle_convex = convex_on_grid(500) && convex_on_grid(1000);
  CHECK(check_structure(power_log(p), 1, 0.3).g2_holds == oracle_convex);

  CHECK_FALSE(check_structure(power(2.0), 1, 0.5).g3_holds);
  CHECK(r2.to_json().find("\"g1_holds\"") != std::string::npos);
  CHECK(r2.to_key_value().find("delta2_constant=") != std::string::npos);
}

TEST_CASE("essentially_stronger") {
  CHECK(essentially_stronger(power(2.0), power(3.0)).verdict == Dominance::stronger);
  CHECK(essentially_stronger(power(3.0), power(2.0)).verdict == Dominance::not_stronger);
  const auto two = make_young("power", std::vector<double>{2.0});
  // 2 t^2 is t^2/2 scaled; compare t^2 (sum_of_powers {2}) with 2 t^2 via
  // sum_of_powers {2, 2}.
  const auto t2 = make_young("sum_of_powers", std::vector<double>{2.0});
  const auto two_t2 = make_young("sum_of_powers", std::vector<double>{2.0, 2.0});
  CHECK(essentially_stronger(t2, two_t2).verdict == Dominance::not_stronger);
  CHECK(essentially_stronger(two, two).scales.size() == 4);
}

TEST_CASE("calculus inequalities on random samples") {
  for (const auto& y : {power(2.0), power(3.0), power_log(2.0), power(1.5),
                        make_young("sum_of_powers", std::vector<double>{2.0, 4.0})}) {
    for (const auto& b : run_young_battery(y, 2000, 99)) {
      INFO(y.describe(), " ", b.name);
      CHECK(b.violations == 0);
    }
  }
  // The midpoint inequality is skipped when G(sqrt t) is not convex.
  const auto b15 = run_young_battery(power(1.5), 100, 1);
  CHECK(b15[4].samples == 0);
}

TEST_CASE("predicates detect violations") {
  const auto y = power(2.0);
  const auto c = complementary(y);
  CHECK(holds_young_inequality(y, c, 1.0, 1.0, 0.0));
  // Equality case b = g(a) holds with rounding slack only.
  CHECK(holds_young_inequality(y, c, 3.0, y.g(3.0), 1e-14));
  CHECK(holds_power_bounds(y, 0.3, 5.0, 1e-12));
  CHECK(holds_conjugate_bound(y, c, 2.0, 0.0));
  // Pairing G = t^4/4 with itself instead of its conjugate: 1 > 1/4 + 1/4.
  const auto p4 = power(4.0);
  CHECK_FALSE(holds_young_inequality(p4, p4, 1.0, 1.0, 1e-10));
  CHECK(xi_minus(2.0, 2.0, 4.0) == 4.0);
  CHECK(xi_plus(0.5, 2.0, 4.0) == 0.25);
}
