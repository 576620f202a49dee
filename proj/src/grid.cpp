#include "orlicz/grid.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "orlicz/errors.hpp"

namespace orlicz {

double Box::measure() const {
  double m = 1.0;
  for (int a = 0; a < dim; ++a) m *= hi[a] - lo[a];
  return m;
}

double Box::diameter() const {
  double d2 = 0.0;
  for (int a = 0; a < dim; ++a) d2 += (hi[a] - lo[a]) * (hi[a] - lo[a]);
  return std::sqrt(d2);
}

DiscreteDomain::DiscreteDomain(const Box& omega, double h, double collar_R, double s)
    : omega_(omega), s_(s), collar_(collar_R) {
  if (omega.dim != 1 && omega.dim != 2) throw InvalidParams("dimension must be 1 or 2");
  if (!(s > 0.0 && s < 1.0)) throw InvalidParams("s must lie in (0,1)");
  if (!(collar_R > 0.0)) throw BadGeometry(fmt::format("collar_R must be positive, got {}", collar_R));
  if (!(h > 0.0)) throw BadGeometry(fmt::format("h must be positive, got {}", h));

  const int n = omega.dim;
  std::array<std::int64_t, 2> cells{1, 1};
  std::array<std::int64_t, 2> collar_cells{0, 0};
  collar_covered_ = std::numeric_limits<double>::infinity();
  for (int a = 0; a < n; ++a) {
    const double width = omega.hi[a] - omega.lo[a];
    if (!(width > 0.0)) throw BadGeometry("box must have positive width");
    if (h >= width) throw BadGeometry(fmt::format("h={} is not smaller than the width {}", h, width));
    cells[a] = static_cast<std::int64_t>(std::ceil(width / h - 1e-9));
    h_[a] = width / static_cast<double>(cells[a]);
    collar_cells[a] = static_cast<std::int64_t>(std::ceil(collar_R / h_[a] - 1e-9));
    collar_covered_ = std::min(collar_covered_, static_cast<double>(collar_cells[a]) * h_[a]);
    extent_[a] = static_cast<std::size_t>(cells[a] + 2 * collar_cells[a]);
  }
  weight_ = n == 1 ? h_[0] : h_[0] * h_[1];

  std::vector<std::array<std::int64_t, 2>> interior, exterior;
  for (std::int64_t ky = 0; ky < static_cast<std::int64_t>(extent_[1]); ++ky) {
    for (std::int64_t kx = 0; kx < static_cast<std::int64_t>(extent_[0]); ++kx) {
      const bool in_x = kx >= collar_cells[0] && kx < collar_cells[0] + cells[0];
      const bool in_y = n == 1 || (ky >= collar_cells[1] && ky < collar_cells[1] + cells[1]);
      (in_x && in_y ? interior : exterior).push_back({kx, ky});
    }
  }
  n_interior_ = interior.size();
  lattice_ = std::move(interior);
  lattice_.insert(lattice_.end(), exterior.begin(), exterior.end());
  coords_.resize(lattice_.size());
  for (std::size_t i = 0; i < lattice_.size(); ++i) {
    for (int a = 0; a < n; ++a) {
      coords_[i][a] = omega.lo[a] + (static_cast<double>(lattice_[i][a] - collar_cells[a]) + 0.5) * h_[a];
    }
    if (n == 1) coords_[i][1] = 0.0;
  }

  const std::size_t table = extent_[0] * extent_[1];
  ks_.assign(table, 0.0);
  kmu_.assign(table, 0.0);
  kop_.assign(table, 0.0);
  for (std::size_t dy = 0; dy < extent_[1]; ++dy) {
    for (std::size_t dx = 0; dx < extent_[0]; ++dx) {
      if (dx == 0 && dy == 0) continue;
      const double ex = static_cast<double>(dx) * h_[0];
      const double ey = n == 2 ? static_cast<double>(dy) * h_[1] : 0.0;
      const double d = std::hypot(ex, ey);
      const double dn = n == 1 ? d : d * d;
      const std::size_t k = dx + extent_[0] * dy;
      ks_[k] = std::pow(d, -s);
      kmu_[k] = weight_ * weight_ / dn;
      kop_[k] = weight_ / dn * ks_[k];
    }
  }
}

double DiscreteDomain::distance(std::size_t i, std::size_t j) const {
  return std::hypot(coords_[i][0] - coords_[j][0], coords_[i][1] - coords_[j][1]);
}

double DiscreteDomain::tail_estimate() const {
  const double sigma = dim() == 1 ? 2.0 : 2.0 * std::numbers::pi;
  return omega_.measure() * sigma * std::pow(collar_covered_, -s_) / s_;
}

DomainPtr build_grid(const Box& omega, double h, double collar_R, double s) {
  return std::make_shared<const DiscreteDomain>(omega, h, collar_R, s);
}

GridFunction::GridFunction(DomainPtr domain)
    : domain_(std::move(domain)),
      values_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(domain_->size()))) {}

GridFunction::GridFunction(DomainPtr domain, Eigen::VectorXd values)
    : domain_(std::move(domain)), values_(std::move(values)) {
  if (static_cast<std::size_t>(values_.size()) != domain_->size()) {
    throw DomainMismatch(fmt::format("{} values for {} nodes", values_.size(), domain_->size()));
  }
}

void GridFunction::require_same_domain(const GridFunction& o) const {
  if (domain_ != o.domain_) throw DomainMismatch("grid functions live on different domains");
}

GridFunction& GridFunction::operator+=(const GridFunction& o) {
  require_same_domain(o);
  values_ += o.values_;
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& o) {
  require_same_domain(o);
  values_ -= o.values_;
  return *this;
}

GridFunction& GridFunction::operator*=(double c) {
  values_ *= c;
  return *this;
}

GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
GridFunction operator*(double c, GridFunction a) { return a *= c; }
GridFunction operator*(GridFunction a, double c) { return a *= c; }
GridFunction operator-(GridFunction a) { return a *= -1.0; }

GridFunction random_smooth_field(const DomainPtr& domain, std::mt19937_64& rng) {
  const Box& box = domain->omega();
  const double R = domain->collar_covered();
  std::normal_distribution<double> normal(0.0, 1.0);
  std::array<std::array<double, 4>, 2> coef{};
  for (auto& axis : coef) {
    for (std::size_t m = 0; m < axis.size(); ++m) axis[m] = normal(rng) / static_cast<double>(m + 1);
  }
  const double shift = normal(rng);
  auto series = [&](int axis, double t) {
    const double lo = box.lo[axis] - R;
    const double width = box.hi[axis] - box.lo[axis] + 2.0 * R;
    double s = 0.0;
    for (std::size_t m = 0; m < 4; ++m) {
      s += coef[axis][m] * std::sin(static_cast<double>(m + 1) * std::numbers::pi * (t - lo) / width);
    }
    return s;
  };
  return GridFunction::sample(domain, [&](double x, double y) {
    const double v = series(0, x) + shift;
    return box.dim == 1 ? v : v * (1.0 + 0.5 * series(1, y));
  });
}

double holder_quotient(const GridFunction& u, std::size_t i, std::size_t j) {
  if (i == j) throw DiagonalPair(fmt::format("pair ({}, {}) lies on the diagonal", i, j));
  return (u[i] - u[j]) * u.domain().kernel_s(i, j);
}

}  // namespace orlicz
