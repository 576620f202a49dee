#include <algorithm>
#include <cmath>
#include <random>

#include <doctest.h>

#include "oracles.hpp"
#include "orlicz/errors.hpp"
#include "orlicz/grid.hpp"

using namespace orlicz;

namespace {
Box unit(int dim = 1) {
  Box b;
  b.dim = dim;
  return b;
}
}  // namespace

TEST_CASE("node layout") {
  const auto d = build_grid(unit(), 0.1, 1.0, 0.3);
  CHECK(d->interior_count() == 10);
  CHECK(d->exterior_count() == 20);
  CHECK(d->cell_weight() == doctest::Approx(0.1).epsilon(1e-15));
  for (std::size_t i = 0; i < d->size(); ++i) {
    const double x = d->coord(i)[0];
    CHECK(d->is_interior(i) == (x > 0.0 && x < 1.0));
    CHECK(x > -1.0);
    CHECK(x < 2.0);
  }
  const auto fine = build_grid(unit(), 0.05, 1.0, 0.3);
  CHECK(fine->interior_count() == 20);
  CHECK(fine->exterior_count() == 40);
}

TEST_CASE("lattice matches an independent rebuild") {
  for (int dim : {1, 2}) {
    Box b;
    b.dim = dim;
    b.lo = {-0.5, 1.0};
    b.hi = {0.5, 1.75};
    const double h = 0.125, R = 0.3;
    const auto d = build_grid(b, h, R, 0.4);
    const auto L = oracle::lattice(dim, b.lo, b.hi, h, R);
    REQUIRE(d->interior_count() == L.interior.size());
    REQUIRE(d->exterior_count() == L.exterior.size());
    CHECK(d->cell_weight() == doctest::Approx(L.w).epsilon(1e-15));
    auto sorted = [](std::vector<std::array<double, 2>> v) {
      std::sort(v.begin(), v.end());
      return v;
    };
    std::vector<std::array<double, 2>> in, ex;
    for (std::size_t i = 0; i < d->size(); ++i) {
      auto c = d->coord(i);
      if (dim == 1) c[1] = 0.0;
      (d->is_interior(i) ? in : ex).push_back(c);
    }
    const auto a = sorted(in), e = sorted(L.interior);
    for (std::size_t k = 0; k < a.size(); ++k) {
      CHECK(a[k][0] == doctest::Approx(e[k][0]).epsilon(1e-13));
      CHECK(a[k][1] == doctest::Approx(e[k][1]).epsilon(1e-13));
    }
    const auto ax = sorted(ex), exx = sorted(L.exterior);
    for (std::size_t k = 0; k < ax.size(); ++k) {
      CHECK(ax[k][0] == doctest::Approx(exx[k][0]).epsilon(1e-13));
      CHECK(ax[k][1] == doctest::Approx(exx[k][1]).epsilon(1e-13));
    }
  }
}

TEST_CASE("kernels agree with direct formulas and are exactly symmetric") {
  for (int dim : {1, 2}) {
    const double s = 0.35;
    const auto d = build_grid(unit(dim), 0.125, 0.25, s);
    const double w = d->cell_weight();
    for (std::size_t i = 0; i < d->size(); i += 3) {
      for (std::size_t j = 0; j < d->size(); j += 5) {
        if (i == j) continue;
        const double r = oracle::dist(d->coord(i), d->coord(j));
        CHECK(d->kernel_s(i, j) == doctest::Approx(std::pow(r, -s)).epsilon(1e-12));
        CHECK(d->kernel_mu(i, j) == doctest::Approx(w * w / std::pow(r, dim)).epsilon(1e-12));
        CHECK(d->kernel_op(i, j) == doctest::Approx(w / std::pow(r, dim + s)).epsilon(1e-12));
        CHECK(d->kernel_s(i, j) == d->kernel_s(j, i));
        CHECK(d->kernel_mu(i, j) == d->kernel_mu(j, i));
        CHECK(d->kernel_op(i, j) == d->kernel_op(j, i));
      }
    }
  }
}

TEST_CASE("invalid geometry") {
  CHECK_THROWS_AS(build_grid(unit(), 0.1, 0.0, 0.3), BadGeometry);
  CHECK_THROWS_AS(build_grid(unit(), 0.1, -1.0, 0.3), BadGeometry);
  CHECK_THROWS_AS(build_grid(unit(), 1.0, 0.5, 0.3), BadGeometry);
  CHECK_THROWS_AS(build_grid(unit(), 0.1, 0.5, 1.0), InvalidParams);
  CHECK_THROWS_AS(build_grid(unit(3), 0.1, 0.5, 0.3), InvalidParams);
}

TEST_CASE("tail estimate") {
  // 1D: 2 * int_R^inf r^{-1-s} dr over |Omega| = 1 gives 2 R^{-s} / s.
  const double s = 0.3, R = 0.5;
  const auto d = build_grid(unit(), 0.1, R, s);
  CHECK(d->tail_estimate() == doctest::Approx(2.0 * std::pow(d->collar_covered(), -s) / s).epsilon(1e-12));
}

TEST_CASE("holder quotient") {
  const auto d = build_grid(unit(), 0.1, 0.5, 0.3);
  const auto u = GridFunction::sample(d, [](double x, double) { return x; });
  const auto c = GridFunction::sample(d, [](double, double) { return 4.0; });
  for (std::size_t i = 0; i < d->size(); ++i) {
    for (std::size_t j = 0; j < d->size(); ++j) {
      if (i == j) continue;
      const double dx = d->coord(i)[0] - d->coord(j)[0];
      CHECK(holder_quotient(u, i, j) ==
            doctest::Approx(std::copysign(std::pow(std::abs(dx), 0.7), dx)).epsilon(1e-12));
      CHECK(holder_quotient(u, i, j) == -holder_quotient(u, j, i));
      CHECK(holder_quotient(c, i, j) == 0.0);
    }
  }
  CHECK_THROWS_AS(holder_quotient(u, 2, 2), DiagonalPair);
}

TEST_CASE("grid function arithmetic") {
  const auto d = build_grid(unit(), 0.1, 0.5, 0.3);
  const auto e = build_grid(unit(), 0.1, 0.5, 0.3);
  GridFunction a = GridFunction::sample(d, [](double x, double) { return x; });
  GridFunction b = GridFunction::sample(d, [](double x, double) { return 2.0 * x; });
  const GridFunction c = 3.0 * a - b;
  for (std::size_t i = 0; i < d->size(); ++i) CHECK(c[i] == doctest::Approx(d->coord(i)[0]));
  const GridFunction other(e);
  CHECK_THROWS_AS(a += other, DomainMismatch);
  CHECK_THROWS_AS(a - other, DomainMismatch);

  std::mt19937_64 r1(5), r2(5);
  const auto f1 = random_smooth_field(d, r1);
  const auto f2 = random_smooth_field(d, r2);
  CHECK(f1.values() == f2.values());
}
