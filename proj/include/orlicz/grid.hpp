#ifndef ORLICZ_GRID_HPP
#define ORLICZ_GRID_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace orlicz {

enum class Region { interior, exterior };

/// Axis-aligned box (an interval when dim == 1).
struct Box {
  int dim = 1;
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{1.0, 1.0};

  double measure() const;
  double diameter() const;
};

/// Cell-centered lattice covering a box and a rectangular collar of width
/// collar_R around it. Interior nodes come first, then exterior nodes.
///
/// Kernels depend only on the lattice offset between two nodes, so they are
/// stored once per offset. Lookups are therefore exactly symmetric.
class DiscreteDomain {
 public:
  DiscreteDomain(const Box& omega, double h, double collar_R, double s);

  int dim() const { return omega_.dim; }
  double s() const { return s_; }
  const Box& omega() const { return omega_; }
  /// Requested collar width and the width actually covered by whole cells.
  double collar() const { return collar_; }
  double collar_covered() const { return collar_covered_; }
  const std::array<double, 2>& spacing() const { return h_; }
  double cell_weight() const { return weight_; }

  std::size_t size() const { return coords_.size(); }
  std::size_t interior_count() const { return n_interior_; }
  std::size_t exterior_count() const { return size() - n_interior_; }
  bool is_interior(std::size_t i) const { return i < n_interior_; }
  const std::array<double, 2>& coord(std::size_t i) const { return coords_[i]; }
  double distance(std::size_t i, std::size_t j) const;

  /// |x_i - x_j|^{-s}
  double kernel_s(std::size_t i, std::size_t j) const { return ks_[offset(i, j)]; }
  /// w^2 / |x_i - x_j|^n (the pair measure d mu of one cell pair)
  double kernel_mu(std::size_t i, std::size_t j) const { return kmu_[offset(i, j)]; }
  /// w / |x_i - x_j|^{n+s} (one cell of the operator kernel)
  double kernel_op(std::size_t i, std::size_t j) const { return kop_[offset(i, j)]; }

  /// Upper bound for the kernel mass |x-y|^{-(n+s)} over pairs
  /// (x in Omega, y beyond the collar): |Omega| sigma_n R^{-s} / s.
  double tail_estimate() const;

  std::size_t offset(std::size_t i, std::size_t j) const {
    const auto& a = lattice_[i];
    const auto& b = lattice_[j];
    const std::size_t dx = static_cast<std::size_t>(a[0] > b[0] ? a[0] - b[0] : b[0] - a[0]);
    const std::size_t dy = static_cast<std::size_t>(a[1] > b[1] ? a[1] - b[1] : b[1] - a[1]);
    return dx + extent_[0] * dy;
  }

 private:
  Box omega_;
  double s_;
  double collar_;
  double collar_covered_ = 0.0;
  std::array<double, 2> h_{1.0, 1.0};
  double weight_ = 1.0;
  std::size_t n_interior_ = 0;
  std::array<std::size_t, 2> extent_{1, 1};
  std::vector<std::array<double, 2>> coords_;
  std::vector<std::array<std::int64_t, 2>> lattice_;
  std::vector<double> ks_;
  std::vector<double> kmu_;
  std::vector<double> kop_;
};

using DomainPtr = std::shared_ptr<const DiscreteDomain>;

/// Throws BadGeometry when collar_R <= 0 or h is not smaller than the
/// box width, InvalidParams for s outside (0,1) or dim outside {1,2}.
DomainPtr build_grid(const Box& omega, double h, double collar_R, double s);

/// Node values on a fixed domain. Arithmetic requires identical domains.
class GridFunction {
 public:
  /// Empty placeholder without a domain; assign before use.
  GridFunction() = default;
  explicit GridFunction(DomainPtr domain);
  GridFunction(DomainPtr domain, Eigen::VectorXd values);

  template <class F>
  static GridFunction sample(DomainPtr domain, F&& f) {
    GridFunction u(domain);
    for (std::size_t i = 0; i < domain->size(); ++i) {
      const auto& x = domain->coord(i);
      u.values_[static_cast<Eigen::Index>(i)] = f(x[0], x[1]);
    }
    return u;
  }

  const DiscreteDomain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }
  Eigen::VectorXd& values() { return values_; }
  const Eigen::VectorXd& values() const { return values_; }
  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }
  double operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)]; }
  double& operator[](std::size_t i) { return values_[static_cast<Eigen::Index>(i)]; }

  GridFunction& operator+=(const GridFunction& o);
  GridFunction& operator-=(const GridFunction& o);
  GridFunction& operator*=(double c);

  void require_same_domain(const GridFunction& o) const;

 private:
  DomainPtr domain_;
  Eigen::VectorXd values_;
};

GridFunction operator+(GridFunction a, const GridFunction& b);
GridFunction operator-(GridFunction a, const GridFunction& b);
GridFunction operator*(double c, GridFunction a);
GridFunction operator*(GridFunction a, double c);
GridFunction operator-(GridFunction a);

/// Short random sine series over the lattice bounding box (product form
/// in 2D), used as starting points and test directions.
GridFunction random_smooth_field(const DomainPtr& domain, std::mt19937_64& rng);

/// (u_i - u_j) |x_i - x_j|^{-s}; throws DiagonalPair when i == j.
double holder_quotient(const GridFunction& u, std::size_t i, std::size_t j);

}  // namespace orlicz

#endif  // ORLICZ_GRID_HPP
