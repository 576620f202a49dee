#include "orlicz/rayleigh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "orlicz/nonlocal_operator.hpp"
#include "pairs.hpp"

namespace orlicz {

std::string_view to_string(BcKind kind) {
  switch (kind) {
    case BcKind::dirichlet: return "dirichlet";
    case BcKind::neumann: return "neumann";
    case BcKind::regional_neumann: return "regional_neumann";
    case BcKind::robin: return "robin";
  }
  return "unknown";
}

BcKind parse_bc(std::string_view name) {
  for (auto k : {BcKind::dirichlet, BcKind::neumann, BcKind::regional_neumann, BcKind::robin}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidParams(fmt::format("unknown boundary condition '{}'", name));
}

BoundaryCondition BoundaryCondition::make(BcKind kind, const DiscreteDomain& domain, double beta) {
  BoundaryCondition bc;
  bc.kind = kind;
  bc.beta = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(domain.exterior_count()), beta);
  if (kind == BcKind::robin) require_positive_beta(domain, bc.beta);
  return bc;
}

RayleighProblem::RayleighProblem(YoungFunction young, BoundaryCondition bc, DomainPtr domain)
    : young_(std::move(young)), bc_(std::move(bc)), domain_(std::move(domain)) {
  if (bc_.kind == BcKind::robin) require_positive_beta(*domain_, bc_.beta);
}

bool RayleighProblem::exterior_free() const {
  return bc_.kind == BcKind::neumann || bc_.kind == BcKind::robin;
}

void RayleighProblem::pin(GridFunction& u) const {
  if (exterior_free()) return;
  const auto ni = static_cast<Eigen::Index>(domain_->interior_count());
  u.values().tail(u.values().size() - ni).setZero();
}

namespace {

// With pinned exterior values the exterior x exterior pairs vanish, so the
// full seminorm equals the star sum there.
PairRegion seminorm_region(BcKind kind) {
  return kind == BcKind::regional_neumann ? PairRegion::regional : PairRegion::star;
}

}  // namespace

double RayleighProblem::energy(const GridFunction& u) const {
  double e = modular_sG(young_, u, seminorm_region(bc_.kind)) +
             modular_G(young_, u, Region::interior);
  if (bc_.kind == BcKind::robin) e += modular_G(young_, u, Region::exterior, &bc_.beta);
  return e;
}

Eigen::VectorXd RayleighProblem::energy_gradient(const GridFunction& u) const {
  Eigen::VectorXd grad = gradient_modular_sG(young_, u, seminorm_region(bc_.kind)) +
                         gradient_modular_G(young_, u, Region::interior);
  if (bc_.kind == BcKind::robin) grad += gradient_modular_G(young_, u, Region::exterior, &bc_.beta);
  if (!exterior_free()) {
    const auto ni = static_cast<Eigen::Index>(domain_->interior_count());
    grad.tail(grad.size() - ni).setZero();
  }
  return grad;
}

double RayleighProblem::constraint(const GridFunction& u) const {
  return modular_G(young_, u, Region::interior);
}

Eigen::VectorXd RayleighProblem::constraint_gradient(const GridFunction& u) const {
  return gradient_modular_G(young_, u, Region::interior);
}

GridFunction project_to_level(const YoungFunction& young, const GridFunction& u, double mu) {
  if (!(mu > 0.0)) throw InvalidParams(fmt::format("mu must be positive, got {}", mu));
  const auto& d = u.domain();
  std::vector<double> a;
  for (std::size_t i = 0; i < d.interior_count(); ++i) {
    if (u[i] != 0.0) a.push_back(std::abs(u[i]));
  }
  if (a.empty()) throw ZeroFunction("u vanishes on the interior");
  const double w = d.cell_weight();
  auto phi = [&](double t) {
    double s = 0.0;
    for (double x : a) s += young.G(t * x);
    return s * w;
  };
  // Phi(t u) lies between xi-(t) Phi(u) and xi+(t) Phi(u).
  const double r = mu / phi(1.0);
  const double pm = young.p_minus(), pp = young.p_plus();
  double lo = std::min(std::pow(r, 1.0 / pm), std::pow(r, 1.0 / pp)) * (1.0 - 1e-12);
  double hi = std::max(std::pow(r, 1.0 / pm), std::pow(r, 1.0 / pp)) * (1.0 + 1e-12);
  while (phi(lo) > mu) lo *= 0.5;
  while (phi(hi) < mu) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (phi(mid) < mu) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double t = std::abs(phi(lo) - mu) <= std::abs(phi(hi) - mu) ? lo : hi;
  return t * u;
}

namespace {

struct Stationarity {
  Eigen::VectorXd gE;
  Eigen::VectorXd gC;
  Eigen::VectorXd r;
  double lambda;
  double residual;
};

Stationarity stationarity(const RayleighProblem& p, const GridFunction& u) {
  Stationarity st;
  st.gE = p.energy_gradient(u);
  st.gC = p.constraint_gradient(u);
  const double nc = st.gC.squaredNorm();
  if (!(nc > 0.0)) throw DegenerateGradient("gradient of the constraint vanishes");
  st.lambda = st.gE.dot(st.gC) / nc;
  st.r = st.gE - st.lambda * st.gC;
  const double ne = st.gE.norm();
  st.residual = ne > 0.0 ? st.r.norm() / ne : 0.0;
  return st;
}

void fill_sign_stats(EigenResult& res, const DiscreteDomain& d) {
  for (std::size_t i = 0; i < d.interior_count(); ++i) {
    if (res.u[i] > 0.0) {
      ++res.positive_nodes;
    } else if (res.u[i] < 0.0) {
      ++res.negative_nodes;
    } else {
      ++res.zero_nodes;
    }
  }
}

}  // namespace

EigenResult solve_from(const RayleighProblem& problem, const GridFunction& start, double mu,
                       const SolverOptions& options) {
  GridFunction u0 = start;
  problem.pin(u0);
  GridFunction u = project_to_level(problem.young(), u0, mu);
  double E = problem.energy(u);
  Stationarity st = stationarity(problem, u);

  EigenResult res;
  res.bc = problem.bc().kind;
  res.mu = mu;
  if (options.record_history) res.history.push_back(E);

  constexpr double c1 = 1e-4;
  double alpha = u.values().norm() / std::max(st.r.norm(), 1e-300) * 1e-3;
  Eigen::VectorXd prev_u, prev_r;
  int it = 0;
  for (; it < options.max_iter && st.residual >= options.tol; ++it) {
    if (prev_u.size() > 0) {
      const Eigen::VectorXd s = u.values() - prev_u;
      const Eigen::VectorXd y = st.r - prev_r;
      const double sy = s.dot(y);
      if (sy > 0.0) alpha = s.squaredNorm() / sy;
    }
    const double rr = st.r.squaredNorm();
    // Rounding allowance: near convergence the Armijo decrease falls below
    // the precision of E itself.
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(E);
    bool accepted = false;
    for (int bt = 0; bt < 80; ++bt) {
      GridFunction trial(u.domain_ptr(), u.values() - alpha * st.r);
      problem.pin(trial);
      trial = project_to_level(problem.young(), trial, mu);
      const double Et = problem.energy(trial);
      if (Et <= E - c1 * alpha * rr + slack) {
        prev_u = u.values();
        prev_r = st.r;
        u = std::move(trial);
        E = Et;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    if (options.record_history) res.history.push_back(E);
    st = stationarity(problem, u);
  }

  res.u = u;
  // The level set is met to 1e-10; dividing by the attained level keeps the
  // quotient exact for the point actually returned.
  res.capital_lambda = E / problem.constraint(u);
  res.lambda = st.lambda;
  res.lambda_pairing = st.gE.dot(u.values()) / st.gC.dot(u.values());
  res.stationarity_residual = st.residual;
  res.iterations = it;
  res.converged = st.residual < options.tol;
  fill_sign_stats(res, u.domain());
  return res;
}

std::vector<GridFunction> default_seeds(const RayleighProblem& problem, int count,
                                        std::uint64_t seed) {
  const auto& dom = problem.domain();
  std::vector<GridFunction> seeds;
  if (count <= 0) return seeds;
  seeds.push_back(GridFunction::sample(dom, [](double, double) { return 1.0; }));

  std::mt19937_64 rng(seed);
  for (int k = 1; k < count; ++k) seeds.push_back(random_smooth_field(dom, rng));
  return seeds;
}

EigenResult solve_min(const YoungFunction& young, const BoundaryCondition& bc, double mu,
                      const DomainPtr& domain, const SolverOptions& options) {
  const RayleighProblem problem(young, bc, domain);
  auto starts = default_seeds(problem, options.seeds, options.seed);
  for (const auto& g : options.initial_guesses) starts.push_back(g);
  if (starts.empty()) throw InvalidParams("no starting points");

  std::optional<EigenResult> best;
  for (const auto& s : starts) {
    GridFunction pinned = s;
    problem.pin(pinned);
    if (pinned.values().head(static_cast<Eigen::Index>(domain->interior_count())).isZero(0.0)) continue;
    EigenResult r = solve_from(problem, pinned, mu, options);
    const bool better = !best || (r.converged && !best->converged) ||
                        (r.converged == best->converged && r.capital_lambda < best->capital_lambda);
    if (better) best = std::move(r);
  }
  if (!best) throw ZeroFunction("every starting point vanishes on the interior");
  return *best;
}

double weak_form_defect(const RayleighProblem& problem, const EigenResult& result,
                        const GridFunction& v) {
  const auto& Y = problem.young();
  const auto& u = result.u;
  const auto& d = u.domain();
  GridFunction vv = v;
  problem.pin(vv);
  double op = 0.0;
  switch (problem.bc().kind) {
    case BcKind::dirichlet: op = pairing(Y, u, vv, OperatorKind::full); break;
    case BcKind::regional_neumann: op = pairing(Y, u, vv, OperatorKind::regional); break;
    case BcKind::neumann:
    case BcKind::robin: op = 2.0 * pairing(Y, u, vv, OperatorKind::star_pairing); break;
  }
  double interior = 0.0;
  for (std::size_t i = 0; i < d.interior_count(); ++i) {
    interior += detail::odd_g(Y, u[i]) * vv[i];
  }
  interior *= d.cell_weight();
  double robin = 0.0;
  if (problem.bc().kind == BcKind::robin) {
    for (std::size_t i = d.interior_count(); i < d.size(); ++i) {
      robin += problem.bc().beta[static_cast<Eigen::Index>(i - d.interior_count())] *
               detail::odd_g(Y, u[i]) * vv[i];
    }
    robin *= d.cell_weight();
  }
  return op - (result.lambda - 1.0) * interior + robin;
}

OrderingViolation::OrderingViolation(OrderReport report)
    : Error([&] {
        std::string msg = "OrderingViolation:";
        for (const auto& v : report.violations) msg += " " + v + ";";
        return msg;
      }()),
      report_(std::move(report)) {}

OrderReport check_order(const std::vector<EigenResult>& results, const YoungFunction& young,
                        double chain_slack) {
  OrderReport rep;
  auto find = [&](BcKind k) -> const EigenResult* {
    for (const auto& r : results) {
      if (r.bc == k) return &r;
    }
    return nullptr;
  };
  const BcKind chain[] = {BcKind::regional_neumann, BcKind::neumann, BcKind::robin,
                          BcKind::dirichlet};
  for (int k = 0; k + 1 < 4; ++k) {
    const EigenResult* a = find(chain[k]);
    const EigenResult* b = find(chain[k + 1]);
    if (a == nullptr || b == nullptr) {
      rep.ok = false;
      rep.violations.push_back(
          fmt::format("missing result for {} or {}", to_string(chain[k]), to_string(chain[k + 1])));
      continue;
    }
    const double margin = (b->capital_lambda - a->capital_lambda) / b->capital_lambda;
    rep.chain_margins.push_back(margin);
    if (margin < -chain_slack) {
      rep.ok = false;
      rep.violations.push_back(fmt::format("Lambda_{} = {:.10g} exceeds Lambda_{} = {:.10g}",
                                           to_string(chain[k]), a->capital_lambda,
                                           to_string(chain[k + 1]), b->capital_lambda));
    }
  }
  const double ratio = young.p_plus() / young.p_minus();
  const bool power = young.p_plus() == young.p_minus();
  for (const auto& r : results) {
    const double L = r.capital_lambda;
    if (r.lambda < L / ratio * (1.0 - 1e-9) || r.lambda > L * ratio * (1.0 + 1e-9)) {
      rep.ok = false;
      rep.violations.push_back(fmt::format("{}: lambda = {:.10g} outside [{:.10g}, {:.10g}]",
                                           to_string(r.bc), r.lambda, L / ratio, L * ratio));
    }
    if (power && std::abs(r.lambda - L) > 1e-6 * L) {
      rep.ok = false;
      rep.violations.push_back(fmt::format("{}: |lambda - Lambda| = {:.3g} for a power",
                                           to_string(r.bc), std::abs(r.lambda - L)));
    }
  }
  return rep;
}

OrderReport verify_order(const std::vector<EigenResult>& results, const YoungFunction& young,
                         double chain_slack) {
  OrderReport rep = check_order(results, young, chain_slack);
  if (!rep.ok) throw OrderingViolation(rep);
  return rep;
}

MuSweepResult mu_sweep(const YoungFunction& young, const BoundaryCondition& bc,
                       const std::vector<double>& mu_list, const DomainPtr& domain,
                       const SolverOptions& options) {
  if (mu_list.empty()) throw InvalidParams("empty mu list");
  const auto [lo, hi] = std::minmax_element(mu_list.begin(), mu_list.end());
  if (!(*lo > 0.0)) throw InvalidParams("mu values must be positive");
  if (std::log10(*hi / *lo) < 4.0 - 1e-9) {
    throw InvalidParams("mu list must span at least four orders of magnitude");
  }
  MuSweepResult out;
  out.min_capital_lambda = std::numeric_limits<double>::infinity();
  for (double mu : mu_list) {
    const EigenResult r = solve_min(young, bc, mu, domain, options);
    out.rows.push_back({mu, r.capital_lambda, r.lambda, r.stationarity_residual, r.converged});
    out.min_capital_lambda = std::min(out.min_capital_lambda, r.capital_lambda);
  }
  const Box& box = domain->omega();
  const double diam = box.diameter();
  const double c = std::pow(2.0, young.p_plus()) *
                   std::max(1.0, xi_plus(std::pow(diam, domain->s()), young.p_minus(), young.p_plus()) *
                                     std::pow(diam, box.dim) / box.measure());
  out.lower_bound = 1.0 / c;
  return out;
}

}  // namespace orlicz
