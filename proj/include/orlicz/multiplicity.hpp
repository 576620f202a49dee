#ifndef ORLICZ_MULTIPLICITY_HPP
#define ORLICZ_MULTIPLICITY_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Dense>

#include "orlicz/grid.hpp"
#include "orlicz/nonlinearity.hpp"
#include "orlicz/young.hpp"

namespace orlicz {

/// Psi(u) = J(u) - lambda F(u) - mu H(u) with
///   J = star seminorm modular + Phi_G(Omega) + beta-weighted exterior modular,
///   F = sum_Omega F(u_i) w,  H = sum_Omega H(u_i) w.
/// Every node value is a variable.
class EnergyPsi {
 public:
  /// Throws NonPositiveBeta unless beta has one positive entry per exterior node.
  EnergyPsi(YoungFunction young, Nonlinearity f, Nonlinearity h, Eigen::VectorXd beta,
            DomainPtr domain);

  const YoungFunction& young() const { return young_; }
  const Nonlinearity& f() const { return f_; }
  const Nonlinearity& h() const { return h_; }
  const Eigen::VectorXd& beta() const { return beta_; }
  const DomainPtr& domain() const { return domain_; }

  double J(const GridFunction& u) const;
  double F(const GridFunction& u) const;
  double H(const GridFunction& u) const;
  double psi(const GridFunction& u, double lambda, double mu) const;

  Eigen::VectorXd grad_J(const GridFunction& u) const;
  Eigen::VectorXd grad_F(const GridFunction& u) const;
  Eigen::VectorXd grad_H(const GridFunction& u) const;
  Eigen::VectorXd grad_psi(const GridFunction& u, double lambda, double mu) const;
  Eigen::MatrixXd hessian_psi(const GridFunction& u, double lambda, double mu) const;

  /// |grad Psi| / (|grad J| + lambda |grad F| + mu |grad H|), 0 when both vanish.
  double relative_residual(const GridFunction& u, double lambda, double mu) const;

  double x_norm(const GridFunction& u) const;

 private:
  YoungFunction young_;
  Nonlinearity f_;
  Nonlinearity h_;
  Eigen::VectorXd beta_;
  DomainPtr domain_;
};

double energy_psi(const YoungFunction& young, const GridFunction& u, double lambda, double mu,
                  const Nonlinearity& f, const Nonlinearity& h, const Eigen::VectorXd& beta);
Eigen::VectorXd gradient_psi(const YoungFunction& young, const GridFunction& u, double lambda,
                             double mu, const Nonlinearity& f, const Nonlinearity& h,
                             const Eigen::VectorXd& beta);

struct ClassAReport {
  bool bound_holds = false;
  /// min over the grid of w (1 + m(|t|)) - |f(t)| (negative on failure).
  double worst_margin = 0.0;
  double witness_t = 0.0;
  Dominance envelope_vs_critical = Dominance::inconclusive;
  bool certified = false;
  std::string note;
};

/// Growth bound on t in +-[1e-6, 1e6] and M << G* for the critical function.
ClassAReport check_class_A(const Nonlinearity& nl, const YoungFunction& young, int n, double s);

enum class Theorem { three_solution, growth_envelope };

struct HypothesisReport {
  Theorem theorem = Theorem::three_solution;
  bool passed = false;

  // three_solution: estimated limsups of F/G near 0 and at infinity, and the
  // plateau witness value int F(v) for v = tau on the middle half of [0,1].
  double f1_zero = 0.0;
  double f1_infinity = 0.0;
  bool f1_holds = false;
  double plateau_tau = 0.0;
  double plateau_value = 0.0;
  bool f2_holds = false;

  // growth_envelope: exponents of F, the chosen power envelopes B and D,
  // their constants, and the sign witness tau2.
  double exponent_zero = 0.0;
  double exponent_infinity = 0.0;
  double b_exponent = 0.0;
  double d_exponent = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double tau2 = 0.0;
  bool condition_i = false;
  bool condition_ii = false;
  bool condition_iii = false;
};

/// Sampled estimates; never exact limits. Tolerance for the limsups is 1e-3.
HypothesisReport check_hypotheses(const Nonlinearity& nl, const YoungFunction& young,
                                  Theorem theorem);

struct RicceriOptions {
  int directions = 32;
  int refine_steps = 300;
  std::uint64_t seed = 7;
};

/// Heuristic estimates of the limsup quantity alpha, the supremum beta of
/// F / J and delta = 1 / beta.
struct RicceriEstimate {
  double alpha_hat = 0.0;
  double ratio_small = 0.0;
  double ratio_large = 0.0;
  double beta_hat = 0.0;
  double delta_hat = 0.0;
  GridFunction best;
};

/// Throws NoPositiveF when no sampled u has F(u) > 0.
RicceriEstimate estimate_ricceri(const EnergyPsi& energy, const RicceriOptions& options = {});

/// Function equal to tau on the central `fraction` of each axis of Omega,
/// linear down to 0 at the boundary, zero outside.
GridFunction plateau_function(const DomainPtr& domain, double tau, double fraction);

struct CriticalPoint {
  GridFunction u;
  double psi = 0.0;
  double gradient_residual = 0.0;
  double x_norm = 0.0;
  bool is_zero = false;
};

struct CriticalSearchOptions {
  int starts = 16;
  double separation = 1e-3;
  double tol = 1e-8;
  int descent_iters = 500;
  double descent_tol = 1e-4;
  int newton_iters = 50;
  int batch = 4;
  std::uint64_t seed = 11;
};

struct CriticalSearchResult {
  std::vector<CriticalPoint> points;
  int starts_tried = 0;
  int rejected = 0;
  std::size_t count_total() const { return points.size(); }
  std::size_t count_nonzero() const;
  double max_x_norm() const;
};

/// Multistart search. Zero is accepted first when f(0) = h(0) = 0. Each start
/// runs an Armijo descent on Psi, then a deflated Newton iteration against
/// the points accepted before its batch began. Accepted points have relative
/// residual below tol and X-distance above separation from each other.
CriticalSearchResult find_critical_points(const EnergyPsi& energy, double lambda, double mu,
                                          const CriticalSearchOptions& options = {});

struct SweepRow {
  double lambda = 0.0;
  CriticalSearchResult search;
};

std::vector<SweepRow> multiplicity_sweep(const EnergyPsi& energy,
                                         const std::vector<double>& lambdas, double mu,
                                         const CriticalSearchOptions& options = {});

/// Generic deflated Newton iteration for residual R(x) = 0.
struct DeflationSystem {
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> residual;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;
  /// Scale for the convergence test |R(x)| <= tol * scale(x).
  std::function<double(const Eigen::VectorXd&)> scale;
  /// Distance d(x, y) and its gradient in x.
  std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)> distance;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&, const Eigen::VectorXd&)> distance_gradient;
  /// Exponent of the deflation factor m = prod (1 + d^{-power}).
  double power = 2.0;
};

/// Newton steps delta = -J^{-1} R rescaled to delta / (1 - <grad log m, delta>),
/// which is the Newton step of m R. Damped by halving on |m R|. Returns the
/// root when |R| <= tol * scale, nothing on failure.
std::optional<Eigen::VectorXd> deflated_newton(const DeflationSystem& system,
                                               Eigen::VectorXd x0,
                                               const std::vector<Eigen::VectorXd>& known,
                                               double tol, int max_iter);

}  // namespace orlicz

#endif  // ORLICZ_MULTIPLICITY_HPP
