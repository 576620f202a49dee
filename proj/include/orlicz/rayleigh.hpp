#ifndef ORLICZ_RAYLEIGH_HPP
#define ORLICZ_RAYLEIGH_HPP

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "orlicz/errors.hpp"
#include "orlicz/grid.hpp"
#include "orlicz/modulars.hpp"
#include "orlicz/young.hpp"

namespace orlicz {

enum class BcKind { dirichlet, neumann, regional_neumann, robin };

std::string_view to_string(BcKind kind);
BcKind parse_bc(std::string_view name);

struct BoundaryCondition {
  BcKind kind = BcKind::dirichlet;
  /// One strictly positive weight per exterior node; used by robin only.
  Eigen::VectorXd beta;

  static BoundaryCondition make(BcKind kind, const DiscreteDomain& domain, double beta = 1.0);
};

/// The constrained quotient of one boundary condition:
///   E(u) = seminorm modular + Phi_G(Omega) (+ beta-weighted exterior modular for robin)
///   C(u) = Phi_G(Omega)
/// Seminorms: full (dirichlet, where exterior values are pinned to 0),
/// star (neumann, robin), regional (regional_neumann). Exterior values are
/// free variables for neumann and robin only.
class RayleighProblem {
 public:
  RayleighProblem(YoungFunction young, BoundaryCondition bc, DomainPtr domain);

  const YoungFunction& young() const { return young_; }
  const BoundaryCondition& bc() const { return bc_; }
  const DomainPtr& domain() const { return domain_; }
  bool exterior_free() const;

  double energy(const GridFunction& u) const;
  /// Gradient of E, zero at pinned nodes.
  Eigen::VectorXd energy_gradient(const GridFunction& u) const;
  double constraint(const GridFunction& u) const;
  Eigen::VectorXd constraint_gradient(const GridFunction& u) const;
  /// Zeroes the values the boundary condition pins.
  void pin(GridFunction& u) const;

 private:
  YoungFunction young_;
  BoundaryCondition bc_;
  DomainPtr domain_;
};

/// t u with Phi_G(Omega)(t u) = mu to 1e-10 relative. Throws ZeroFunction
/// when u vanishes on the interior.
GridFunction project_to_level(const YoungFunction& young, const GridFunction& u, double mu);

struct SolverOptions {
  double tol = 1e-6;
  int max_iter = 50000;
  int seeds = 8;
  std::uint64_t seed = 20240601;
  /// Extra starting points tried in addition to the generated seeds.
  std::vector<GridFunction> initial_guesses;
  bool record_history = false;
};

struct EigenResult {
  BcKind bc = BcKind::dirichlet;
  double capital_lambda = 0.0;
  /// Least-squares multiplier <grad E, grad C> / |grad C|^2.
  double lambda = 0.0;
  /// <grad E, u> / <grad C, u>, reported for cross-checking.
  double lambda_pairing = 0.0;
  double mu = 0.0;
  GridFunction u;
  double stationarity_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::size_t positive_nodes = 0;
  std::size_t negative_nodes = 0;
  std::size_t zero_nodes = 0;
  /// Objective E(u) after each accepted step (when requested).
  std::vector<double> history;
};

/// Projected gradient descent from one start: tangent direction
/// grad E - lambda grad C, Armijo backtracking (c1 = 1e-4, factor 1/2) from a
/// Barzilai-Borwein trial step, retraction by project_to_level.
/// Throws DegenerateGradient if grad C vanishes.
EigenResult solve_from(const RayleighProblem& problem, const GridFunction& start, double mu,
                       const SolverOptions& options);

/// Multistart minimization; returns the result with the smallest Lambda.
EigenResult solve_min(const YoungFunction& young, const BoundaryCondition& bc, double mu,
                      const DomainPtr& domain, const SolverOptions& options = {});

/// Seeds used by solve_min: a constant and random smooth fields.
std::vector<GridFunction> default_seeds(const RayleighProblem& problem, int count,
                                        std::uint64_t seed);

/// Defect of the discrete weak formulation against a direction v, computed
/// from the operator-module pairings:
///   <u, v>_class - (lambda - 1) sum_Omega g(|u|) sgn(u) v w + robin term.
double weak_form_defect(const RayleighProblem& problem, const EigenResult& result,
                        const GridFunction& v);

struct OrderReport {
  bool ok = true;
  std::vector<std::string> violations;
  /// Relative margin of each chain link (positive when satisfied).
  std::vector<double> chain_margins;
};

class OrderingViolation : public Error {
 public:
  explicit OrderingViolation(OrderReport report);
  const OrderReport& report() const { return report_; }

 private:
  OrderReport report_;
};

/// Checks the chain Lambda_regional <= Lambda_neumann <= Lambda_robin <=
/// Lambda_dirichlet (relative slack 1e-4), the sandwich
/// (p-/p+) Lambda <= lambda <= (p+/p-) Lambda for every result, and
/// |lambda - Lambda| <= 1e-6 Lambda when p- == p+.
OrderReport check_order(const std::vector<EigenResult>& results, const YoungFunction& young,
                        double chain_slack = 1e-4);
/// As check_order, but throws OrderingViolation on failure.
OrderReport verify_order(const std::vector<EigenResult>& results, const YoungFunction& young,
                         double chain_slack = 1e-4);

struct MuSweepRow {
  double mu = 0.0;
  double capital_lambda = 0.0;
  double lambda = 0.0;
  double residual = 0.0;
  bool converged = false;
};

struct MuSweepResult {
  std::vector<MuSweepRow> rows;
  double min_capital_lambda = 0.0;
  /// 1 / c with c = 2^{p+} max(1, xi+(diam^s) diam^n / |Omega|).
  double lower_bound = 0.0;
};

/// One solve_min per mu; mu_list must span at least four decades.
MuSweepResult mu_sweep(const YoungFunction& young, const BoundaryCondition& bc,
                       const std::vector<double>& mu_list, const DomainPtr& domain,
                       const SolverOptions& options = {});

}  // namespace orlicz

#endif  // ORLICZ_RAYLEIGH_HPP
