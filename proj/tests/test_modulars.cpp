#include <cmath>
#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "orlicz/errors.hpp"
#include "orlicz/modulars.hpp"

using namespace orlicz;

namespace {
Box unit() { return Box{}; }
YoungFunction power(double p) { return make_young("power", std::vector<double>{p}); }

// Pair sum over an explicit pair set rebuilt from coordinates.
double brute_seminorm(const YoungFunction& y, const GridFunction& u, PairRegion region) {
  const auto& d = u.domain();
  const double w = d.cell_weight();
  const double s = d.s();
  double sum = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = 0; j < d.size(); ++j) {
      if (i == j) continue;
      const bool ii = d.is_interior(i), jj = d.is_interior(j);
      if (region == PairRegion::regional && !(ii && jj)) continue;
      if (region == PairRegion::star && !(ii || jj)) continue;
      const double r = oracle::dist(d.coord(i), d.coord(j));
      sum += y.G(std::abs(u[i] - u[j]) / std::pow(r, s)) * w * w / std::pow(r, d.dim());
    }
  }
  return sum;
}
}  // namespace

TEST_CASE("interior modular") {
  const auto y = power(2.0);
  const auto d = build_grid(unit(), 1.0 / 64, 0.5, 0.3);
  const auto one = GridFunction::sample(d, [](double, double) { return 1.0; });
  CHECK(modular_G(y, one, Region::interior) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(modular_G(y, GridFunction(d), Region::interior) == 0.0);

  // int_0^1 x^2/2 = 1/6; the midpoint error is -h^2/24, so the h-errors
  // shrink with slope 2.
  std::vector<double> hs, errs;
  for (double h : {1.0 / 16, 1.0 / 32, 1.0 / 64}) {
    const auto dh = build_grid(unit(), h, 0.5, 0.3);
    const auto x = GridFunction::sample(dh, [](double t, double) { return t; });
    hs.push_back(h);
    errs.push_back(std::abs(modular_G(y, x, Region::interior) - 1.0 / 6.0));
  }
  CHECK(errs[0] < 1e-3);
  CHECK(oracle::loglog_slope(hs, errs) == doctest::Approx(2.0).epsilon(0.02));
}

TEST_CASE("weighted exterior modular") {
  const auto y = power(2.0);
  const auto d = build_grid(unit(), 0.1, 0.5, 0.3);
  const auto one = GridFunction::sample(d, [](double, double) { return 1.0; });
  Eigen::VectorXd beta = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(d->exterior_count()), 2.0);
  CHECK(modular_G(y, one, Region::exterior, &beta) == doctest::Approx(2.0 * 0.5 * 1.0).epsilon(1e-14));
  beta[3] = 0.0;
  CHECK_THROWS_AS(modular_G(y, one, Region::exterior, &beta), NonPositiveBeta);
}

TEST_CASE("seminorm modulars match a brute-force pair sum") {
  std::mt19937_64 rng(3);
  for (const auto& y : {power(2.0), power(3.0), make_young("power_log", std::vector<double>{2.0})}) {
    const auto d = build_grid(unit(), 1.0 / 16, 0.25, 0.4);
    const auto u = random_smooth_field(d, rng);
    for (auto r : {PairRegion::full, PairRegion::regional, PairRegion::star}) {
      CHECK(modular_sG(y, u, r) == doctest::Approx(brute_seminorm(y, u, r)).epsilon(1e-12));
    }
    const double reg = modular_sG(y, u, PairRegion::regional);
    const double star = modular_sG(y, u, PairRegion::star);
    const double full = modular_sG(y, u, PairRegion::full);
    CHECK(reg <= star);
    CHECK(star <= full);
    const auto c = GridFunction::sample(d, [](double, double) { return 3.0; });
    CHECK(modular_sG(y, c, PairRegion::full) == 0.0);
  }
}

TEST_CASE("seminorm modular against a refined reference") {
  // Bump supported inside Omega; its star modular converges under refinement.
  const auto y = power(2.0);
  auto bump = [](double x, double) {
    return (x > 0.0 && x < 1.0) ? std::pow(std::sin(M_PI * x), 2) : 0.0;
  };
  auto value = [&](double h) {
    const auto d = build_grid(unit(), h, 0.5, 0.3);
    return modular_sG(y, GridFunction::sample(d, bump), PairRegion::star);
  };
  const double ref = value(1.0 / 256);
  CHECK(std::abs(value(1.0 / 64) - ref) <= 0.02 * ref);
}

TEST_CASE("enlarging the collar does not decrease the star modular") {
  const auto y = power(2.0);
  auto bump = [](double x, double) { return (x > 0.0 && x < 1.0) ? x * (1.0 - x) : 0.0; };
  double prev = 0.0;
  for (double R : {0.25, 0.5, 1.0, 2.0}) {
    const auto d = build_grid(unit(), 1.0 / 32, R, 0.3);
    const double v = modular_sG(y, GridFunction::sample(d, bump), PairRegion::star);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("gradients match central differences") {
  std::mt19937_64 rng(17);
  const auto d = build_grid(unit(), 1.0 / 16, 0.25, 0.3);
  Eigen::VectorXd beta = Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(d->exterior_count()), 0.5, 2.0);
  for (const auto& y : {power(2.0), power(3.5), make_young("power_log", std::vector<double>{2.0})}) {
    for (int k = 0; k < 5; ++k) {
      const auto u = random_smooth_field(d, rng);
      const auto v = random_smooth_field(d, rng);
      auto fd = [&](auto&& f) {
        return oracle::directional_fd(
            [&](const Eigen::VectorXd& x) { return f(GridFunction(d, x)); }, u.values(), v.values(), 1e-5);
      };
      const double g1 = gradient_modular_sG(y, u, PairRegion::star).dot(v.values());
      CHECK(g1 == doctest::Approx(fd([&](const GridFunction& z) { return modular_sG(y, z, PairRegion::star); })).epsilon(1e-6));
      const double g2 = gradient_modular_G(y, u, Region::exterior, &beta).dot(v.values());
      CHECK(g2 == doctest::Approx(fd([&](const GridFunction& z) { return modular_G(y, z, Region::exterior, &beta); })).epsilon(1e-6));
      const double g3 = gradient_x_norm(y, u, beta).dot(v.values());
      CHECK(g3 == doctest::Approx(fd([&](const GridFunction& z) { return x_norm(y, z, beta); })).epsilon(1e-5));
    }
  }
}

TEST_CASE("Luxemburg norm") {
  const auto y = power(2.0);
  const auto d = build_grid(unit(), 1.0 / 32, 0.5, 0.3);
  auto interior = [&](const GridFunction& z) { return modular_G(y, z, Region::interior); };
  const auto c = GridFunction::sample(d, [](double, double) { return std::sqrt(2.0); });
  CHECK(luxemburg_norm(interior, c) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(luxemburg_norm(interior, GridFunction(d)) == 0.0);

  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> amp(-3.0, 3.0);
  for (const auto& yy : {power(2.0), power(3.0), make_young("power_log", std::vector<double>{2.0})}) {
    auto phi = [&](const GridFunction& z) { return modular_sG(yy, z, PairRegion::star); };
    for (int k = 0; k < 30; ++k) {
      GridFunction u = random_smooth_field(d, rng);
      u *= std::pow(10.0, amp(rng));
      const double n = luxemburg_norm(phi, u);
      CHECK(phi((1.0 / n) * u) == doctest::Approx(1.0).epsilon(1e-8));
      CHECK(xi_minus(n, yy.p_minus(), yy.p_plus()) <= phi(u) * (1.0 + 1e-8));
      CHECK(phi(u) <= xi_plus(n, yy.p_minus(), yy.p_plus()) * (1.0 + 1e-8));
      // Homogeneity and triangle inequality.
      CHECK(luxemburg_norm(phi, -2.5 * u) == doctest::Approx(2.5 * n).epsilon(1e-9));
      const GridFunction v = random_smooth_field(d, rng);
      CHECK(luxemburg_norm(phi, u + v) <= (n + luxemburg_norm(phi, v)) * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("x_norm") {
  const auto y = power(2.0);
  const auto d = build_grid(unit(), 1.0 / 32, 0.5, 0.3);
  const Eigen::VectorXd beta = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(d->exterior_count()));
  CHECK(x_norm(y, GridFunction(d), beta) == 0.0);
  const auto inside = GridFunction::sample(d, [](double x, double) { return (x > 0 && x < 1) ? x : 0.0; });
  CHECK(x_norm_parts(y, inside, beta).exterior == 0.0);
  std::mt19937_64 rng(8);
  const auto u = random_smooth_field(d, rng);
  CHECK(x_norm(y, -3.0 * u, beta) == doctest::Approx(3.0 * x_norm(y, u, beta)).epsilon(1e-9));
  const auto p = x_norm_parts(y, u, beta);
  CHECK(p.total() == doctest::Approx(x_norm(y, u, beta)).epsilon(1e-14));
  // Regional seminorm is dominated by the star seminorm.
  auto reg = [&](const GridFunction& z) { return modular_sG(y, z, PairRegion::regional); };
  CHECK(luxemburg_norm(reg, u) <= p.seminorm * (1.0 + 1e-10));
  auto star = [&](const GridFunction& z) { return modular_sG(y, z, PairRegion::star); };
  CHECK(luxemburg_norm(star, u) == doctest::Approx(p.seminorm).epsilon(1e-9));
  Eigen::VectorXd bad = beta;
  bad[0] = -1.0;
  CHECK_THROWS_AS(x_norm(y, u, bad), NonPositiveBeta);
}
