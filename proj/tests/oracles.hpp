// Independent reference computations used by the tests. None of these call
// into the library's numerics; they rebuild what they need from scratch.
#ifndef ORLICZ_TESTS_ORACLES_HPP
#define ORLICZ_TESTS_ORACLES_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

/// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 2000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

/// Central difference of a scalar function of a vector along `dir`.
inline double directional_fd(const std::function<double(const Eigen::VectorXd&)>& f,
                             const Eigen::VectorXd& x, const Eigen::VectorXd& dir, double step) {
  return (f(x + step * dir) - f(x - step * dir)) / (2.0 * step);
}

/// Cell-centred points of a 1D or 2D lattice rebuilt from the box, spacing
/// and collar width alone.
struct Lattice {
  int dim = 1;
  double w = 0.0;
  std::vector<std::array<double, 2>> interior;
  std::vector<std::array<double, 2>> exterior;
};

inline Lattice lattice(int dim, std::array<double, 2> lo, std::array<double, 2> hi, double h,
                       double collar) {
  Lattice L;
  L.dim = dim;
  std::array<int, 2> n{1, 1};
  std::array<int, 2> m{0, 0};
  std::array<double, 2> step{1.0, 1.0};
  L.w = 1.0;
  for (int a = 0; a < dim; ++a) {
    const double width = hi[a] - lo[a];
    n[a] = static_cast<int>(std::ceil(width / h - 1e-9));
    step[a] = width / n[a];
    m[a] = static_cast<int>(std::ceil(collar / step[a] - 1e-9));
    L.w *= step[a];
  }
  for (int j = -m[1]; j < n[1] + m[1]; ++j) {
    for (int i = -m[0]; i < n[0] + m[0]; ++i) {
      const std::array<double, 2> x{lo[0] + (i + 0.5) * step[0],
                                    dim == 2 ? lo[1] + (j + 0.5) * step[1] : 0.0};
      const bool inside = i >= 0 && i < n[0] && j >= 0 && j < n[1];
      (inside ? L.interior : L.exterior).push_back(x);
    }
  }
  return L;
}

inline double dist(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

/// Sum over interior x exterior of g(r^{-s}) w^2 / r^{n+s} for g(t) = t.
inline double perimeter_power2(const Lattice& L, double s) {
  double sum = 0.0;
  for (const auto& x : L.interior) {
    for (const auto& y : L.exterior) {
      const double r = dist(x, y);
      sum += std::pow(r, -s) * L.w * L.w / std::pow(r, L.dim + s);
    }
  }
  return sum;
}

/// Symmetric matrix K with u^T K u = sum over unordered interior pairs of
/// k (u_i - u_j)^2 + sum_i u_i^2 sum_{exterior j} k, where
/// k = w^2 / r^{n+2s}. This is the full-pair seminorm of G = t^2/2 with
/// zero exterior values.
inline Eigen::MatrixXd dirichlet_form(const Lattice& L, double s) {
  const auto ni = static_cast<Eigen::Index>(L.interior.size());
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(ni, ni);
  auto k = [&](double r) { return L.w * L.w / std::pow(r, L.dim + 2.0 * s); };
  for (Eigen::Index i = 0; i < ni; ++i) {
    for (Eigen::Index j = 0; j < ni; ++j) {
      if (i == j) continue;
      const double kij = k(dist(L.interior[i], L.interior[j]));
      K(i, j) -= kij;
      K(i, i) += kij;
    }
    for (const auto& y : L.exterior) K(i, i) += k(dist(L.interior[i], y));
  }
  return K;
}

/// Smallest value of E/C with E = u^T K u + (w/2)|u|^2, C = (w/2)|u|^2.
inline double smallest_dirichlet_quotient(const Lattice& L, double s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dirichlet_form(L, s), Eigen::EigenvaluesOnly);
  return 1.0 + 2.0 * es.eigenvalues().minCoeff() / L.w;
}

/// Matrix of the operator u -> sum_j (u_i - u_j) w / r^{n+2s} over the
/// given point list (rows: interior points, columns: all points).
inline Eigen::MatrixXd operator_matrix_power2(const std::vector<std::array<double, 2>>& pts,
                                              std::size_t n_interior, int dim, double w,
                                              double s, bool regional) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n_interior); ++i) {
    const Eigen::Index jend = regional ? static_cast<Eigen::Index>(n_interior) : n;
    for (Eigen::Index j = 0; j < jend; ++j) {
      if (i == j) continue;
      const double c = w / std::pow(dist(pts[i], pts[j]), dim + 2.0 * s);
      L(i, i) += c;
      L(i, j) -= c;
    }
  }
  return L;
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double lx = std::log(x[k]), ly = std::log(y[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle

#endif  // ORLICZ_TESTS_ORACLES_HPP
