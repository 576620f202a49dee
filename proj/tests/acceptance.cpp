// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "oracles.hpp"
#include "orlicz/modulars.hpp"
#include "orlicz/multiplicity.hpp"
#include "orlicz/nonlinearity.hpp"
#include "orlicz/nonlocal_operator.hpp"
#include "orlicz/rayleigh.hpp"
#include "orlicz/young.hpp"

using namespace orlicz;

namespace {

YoungFunction power(double p) { return make_young("power", std::vector<double>{p}); }
YoungFunction power_log(double p) { return make_young("power_log", std::vector<double>{p}); }

Box unit(int dim = 1) {
  Box b;
  b.dim = dim;
  return b;
}

Eigen::VectorXd ones(const DomainPtr& d) {
  return Eigen::VectorXd::Ones(static_cast<Eigen::Index>(d->exterior_count()));
}

struct Verdict {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, fmt::format("exception: {}", e.what())};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!v.pass) ++failures;
  fmt::print("{} {:>2} {}: {} [{:.1f}s]\n", v.pass ? "PASS" : "FAIL", id, name, v.detail, secs);
  std::fflush(stdout);
}

SolverOptions solver(double tol = 1e-9) {
  SolverOptions o;
  o.tol = tol;
  return o;
}

std::vector<EigenResult> all_four(const YoungFunction& y, const DomainPtr& d, double mu) {
  std::vector<EigenResult> out;
  for (BcKind k : {BcKind::regional_neumann, BcKind::neumann, BcKind::robin, BcKind::dirichlet}) {
    out.push_back(solve_min(y, BoundaryCondition::make(k, *d), mu, d, solver()));
  }
  return out;
}

// Results shared between criteria 5 and 6.
std::vector<std::pair<YoungFunction, EigenResult>> eigen_results;

// 1 ---------------------------------------------------------------------------
Verdict young_battery() {
  std::size_t total = 0, bad = 0, checks = 0;
  for (const auto& y : {power(2.0), power(3.0), power_log(2.0)}) {
    for (const auto& b : run_young_battery(y, 10000, 20240601, 1e-10)) {
      total += b.samples;
      bad += b.violations;
      if (b.samples > 0) ++checks;
    }
  }
  // 3 families x 4 inequalities, plus the midpoint check where it applies.
  return {bad == 0 && checks >= 12,
          fmt::format("{} violations in {} evaluations over {} inequality/family pairs", bad, total, checks)};
}

// 2 ---------------------------------------------------------------------------
Verdict modular_sandwich() {
  const auto d = build_grid(unit(), 1.0 / 32, 0.5, 0.3);
  const Eigen::VectorXd beta = ones(d);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> amp(-3.0, 3.0);
  long sandwich_bad = 0, roundtrip_bad = 0, samples = 0;
  double worst_roundtrip = 0.0;
  for (const auto& y : {power(2.0), power(3.0), power_log(2.0)}) {
    const std::vector<std::function<double(const GridFunction&)>> modulars{
        [&](const GridFunction& z) { return modular_G(y, z, Region::interior); },
        [&](const GridFunction& z) { return modular_G(y, z, Region::exterior, &beta); },
        [&](const GridFunction& z) { return modular_sG(y, z, PairRegion::star); }};
    for (int k = 0; k < 1000; ++k) {
      GridFunction u = random_smooth_field(d, rng);
      u *= std::pow(10.0, amp(rng));
      for (const auto& phi : modulars) {
        ++samples;
        const double n = luxemburg_norm(phi, u);
        const double m = phi(u);
        if (m < xi_minus(n, y.p_minus(), y.p_plus()) * (1.0 - 1e-8) ||
            m > xi_plus(n, y.p_minus(), y.p_plus()) * (1.0 + 1e-8)) {
          ++sandwich_bad;
        }
        const double rt = std::abs(phi((1.0 / n) * u) - 1.0);
        worst_roundtrip = std::max(worst_roundtrip, rt);
        if (rt > 1e-8) ++roundtrip_bad;
      }
    }
  }
  return {sandwich_bad == 0 && roundtrip_bad == 0,
          fmt::format("{} sandwich and {} roundtrip violations over {} (function, modular) samples; "
                      "worst |Phi(u/|u|) - 1| = {:.2e}",
                      sandwich_bad, roundtrip_bad, samples, worst_roundtrip)};
}

// 3 ---------------------------------------------------------------------------
Verdict identities() {
  double worst_div = 0, worst_star = 0, worst_reg = 0, cancel = 0;
  int grids = 0, pairs = 0;
  std::mt19937_64 rng(3);
  struct G {
    int dim;
    double h;
  };
  for (const auto& y : {power(2.0), power(3.0), power_log(2.0)}) {
    for (const G g : {G{1, 1.0 / 32}, G{1, 1.0 / 128}, G{2, 1.0 / 8}}) {
      ++grids;
      const auto d = build_grid(unit(g.dim), g.h, 0.25, 0.3);
      const double w = d->cell_weight();
      for (int k = 0; k < 100; ++k, ++pairs) {
        const auto u = random_smooth_field(d, rng);
        const auto v = random_smooth_field(d, rng);
        const auto au = apply_operator(y, u, OperatorKind::full);
        const auto ar = apply_operator(y, u, OperatorKind::regional);
        const auto nu = normal_derivative(y, u);
        double div = 0, div_abs = 0, rhs = 0, rhs_abs = 0, reg = 0, reg_abs = 0;
        for (std::size_t i = 0; i < d->size(); ++i) {
          const double f = (d->is_interior(i) ? au[i] : nu[i]) * w;
          div += f;
          div_abs += std::abs(f);
          rhs += v[i] * f;
          rhs_abs += std::abs(v[i] * f);
          if (d->is_interior(i)) {
            reg += 2.0 * v[i] * ar[i] * w;
            reg_abs += std::abs(2.0 * v[i] * ar[i] * w);
          }
        }
        worst_div = std::max(worst_div, std::abs(div) / div_abs);
        worst_star = std::max(worst_star, std::abs(pairing(y, u, v, OperatorKind::star_pairing) - rhs) / rhs_abs);
        worst_reg = std::max(worst_reg, std::abs(pairing(y, u, v, OperatorKind::regional) - reg) / reg_abs);
        for (std::size_t i = 0; i < d->interior_count(); ++i) {
          for (std::size_t j = i + 1; j < d->interior_count(); ++j) {
            auto psi = [&](double t) { return t == 0 ? 0.0 : std::copysign(y.g(std::abs(t)), t); };
            const double kk = d->kernel_op(i, j);
            cancel = std::max(cancel, std::abs(psi(holder_quotient(u, i, j)) * kk + psi(holder_quotient(u, j, i)) * kk));
          }
        }
      }
    }
  }
  const bool ok = worst_div <= 1e-12 && worst_star <= 1e-12 && worst_reg <= 1e-12 && cancel == 0.0;
  return {ok, fmt::format("{} pairs on {} (family, grid) cases; max relative error divergence {:.1e}, "
                          "star IBP {:.1e}, regional IBP {:.1e}; pairwise cancellation residue {}",
                          pairs, grids, worst_div, worst_star, worst_reg, cancel)};
}

// 4 ---------------------------------------------------------------------------
Verdict oracle_equivalence() {
  const double s = 0.3, h = 1.0 / 128, R = 0.5;
  const auto d = build_grid(unit(), h, R, s);
  std::vector<std::array<double, 2>> pts;
  for (std::size_t i = 0; i < d->size(); ++i) pts.push_back(d->coord(i));
  std::mt19937_64 rng(4);
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const auto u = random_smooth_field(d, rng);
    for (bool regional : {false, true}) {
      const Eigen::VectorXd ref =
          oracle::operator_matrix_power2(pts, d->interior_count(), 1, d->cell_weight(), s, regional) * u.values();
      const auto au = apply_operator(power(2.0), u, regional ? OperatorKind::regional : OperatorKind::full);
      worst = std::max(worst, (au.values() - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff());
    }
  }
  const double dense = oracle::smallest_dirichlet_quotient(oracle::lattice(1, {0, 0}, {1, 1}, h, R), s);
  const auto r = solve_min(power(2.0), BoundaryCondition::make(BcKind::dirichlet, *d), 1.0, d, solver(1e-6));
  const double rel = std::abs(r.capital_lambda - dense) / dense;
  return {worst <= 1e-12 && rel <= 0.01,
          fmt::format("N={} interior nodes; operator vs dense matrix max relative error {:.1e}; "
                      "Lambda_D = {:.10g} vs dense {:.10g} (relative gap {:.1e}, {} seeds)",
                      d->interior_count(), worst, r.capital_lambda, dense, rel, solver().seeds)};
}

// 5 ---------------------------------------------------------------------------
Verdict ordering_chain() {
  int instances = 0, ok_count = 0;
  std::string margins;
  for (const auto& y : {power(2.0), power_log(2.0)}) {
    for (double s : {0.3, 0.6}) {
      const auto d = build_grid(unit(), 1.0 / 32, 0.5, s);
      const auto results = all_four(y, d, 1.0);
      for (const auto& r : results) eigen_results.emplace_back(y, r);
      ++instances;
      bool ok = true;
      for (std::size_t k = 0; k + 1 < results.size(); ++k) {
        const double a = results[k].capital_lambda, b = results[k + 1].capital_lambda;
        if ((b - a) / b < -1e-4) ok = false;
      }
      if (ok) ++ok_count;
      margins += fmt::format(" [{} s={}: {:.6g} <= {:.6g} <= {:.6g} <= {:.6g}]", y.describe(), s,
                             results[0].capital_lambda, results[1].capital_lambda,
                             results[2].capital_lambda, results[3].capital_lambda);
    }
  }
  return {instances >= 3 && ok_count == instances,
          fmt::format("{}/{} instances ordered (regional N, N, R, D):{}", ok_count, instances, margins)};
}

// 6 ---------------------------------------------------------------------------
Verdict sandwich() {
  // Add a few more instances beyond those of criterion 5.
  const auto d = build_grid(unit(), 1.0 / 32, 0.5, 0.3);
  for (const auto& y : {power(3.0), make_young("sum_of_powers", std::vector<double>{2.0, 3.0})}) {
    for (const auto& r : all_four(y, d, 2.0)) eigen_results.emplace_back(y, r);
  }
  int converged = 0, bad_sandwich = 0, bad_power = 0, power_count = 0;
  double worst_power = 0.0;
  for (const auto& [y, r] : eigen_results) {
    if (!r.converged) continue;
    ++converged;
    const double q = y.p_plus() / y.p_minus();
    // Rounding slack only; for powers the two bounds coincide and the
    // equality check below carries the pinned tolerance.
    if (r.lambda < r.capital_lambda / q * (1.0 - 1e-9) || r.lambda > r.capital_lambda * q * (1.0 + 1e-9)) {
      ++bad_sandwich;
    }
    if (y.p_minus() == y.p_plus()) {
      ++power_count;
      const double gap = std::abs(r.lambda - r.capital_lambda) / r.capital_lambda;
      worst_power = std::max(worst_power, gap);
      if (gap > 1e-6) ++bad_power;
    }
  }
  const int total = static_cast<int>(eigen_results.size());
  return {converged == total && bad_sandwich == 0 && bad_power == 0,
          fmt::format("{}/{} results converged; {} outside the sandwich; power results: {} with "
                      "max |lambda - Lambda|/Lambda = {:.1e}",
                      converged, total, bad_sandwich, power_count, worst_power)};
}

// 7 ---------------------------------------------------------------------------
Verdict mu_sweep_check() {
  const auto d = build_grid(unit(), 1.0 / 32, 0.5, 0.3);
  const std::vector<double> mus{1e-2, 1e-1, 1.0, 1e1, 1e2};
  double min_lambda = 1e300, worst_spread = 0.0;
  int rows = 0, below = 0, unconverged = 0;
  for (const auto& y : {power(2.0), power(3.0), power_log(2.0)}) {
    for (BcKind k : {BcKind::dirichlet, BcKind::neumann, BcKind::regional_neumann, BcKind::robin}) {
      const auto res = mu_sweep(y, BoundaryCondition::make(k, *d), mus, d, solver());
      double lo = 1e300, hi = 0.0;
      for (const auto& r : res.rows) {
        ++rows;
        if (r.capital_lambda < 1.0) ++below;
        if (!r.converged) ++unconverged;
        lo = std::min(lo, r.capital_lambda);
        hi = std::max(hi, r.capital_lambda);
      }
      min_lambda = std::min(min_lambda, lo);
      if (y.p_minus() == y.p_plus()) worst_spread = std::max(worst_spread, (hi - lo) / hi);
    }
  }
  return {below == 0 && unconverged == 0 && worst_spread <= 1e-4,
          fmt::format("{} rows; {} with Lambda < 1 (min {:.17g}); {} unconverged; power families: max "
                      "relative spread across mu {:.1e}",
                      rows, below, min_lambda, unconverged, worst_spread)};
}

// 8 ---------------------------------------------------------------------------
Verdict gradient_checks() {
  const auto d = build_grid(unit(), 1.0 / 32, 0.5, 0.3);
  const auto y = power(2.0);
  const std::vector<Nonlinearity> nls{
      make_nonlinearity("sine_power", std::vector<double>{3.0}),
      make_nonlinearity("sine_young", std::vector<double>{3.0}),
      make_nonlinearity("concave_convex", std::vector<double>{3.0, 4.0}),
      make_nonlinearity("piecewise_power", std::vector<double>{1.5, 4.0})};
  const auto zero = make_nonlinearity("zero", std::vector<double>{});
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  double worst = 0.0;
  int checks = 0, bad = 0;
  for (const auto& f : nls) {
    const EnergyPsi e(y, f, zero, ones(d), d);
    for (int k = 0; k < 50; ++k) {
      GridFunction u = random_smooth_field(d, rng);
      u *= std::pow(10.0, amp(rng));
      const GridFunction v = random_smooth_field(d, rng);
      const double eps = 1e-5 * std::max(1.0, u.values().cwiseAbs().maxCoeff());
      auto check = [&](const Eigen::VectorXd& grad, const std::function<double(const GridFunction&)>& fun) {
        const double fd = oracle::directional_fd([&](const Eigen::VectorXd& x) { return fun(GridFunction(d, x)); },
                                                 u.values(), v.values(), eps);
        const double an = grad.dot(v.values());
        const double rel = std::abs(an - fd) / std::max({std::abs(an), std::abs(fd), 1e-300});
        worst = std::max(worst, rel);
        ++checks;
        if (rel >= 1e-5) ++bad;
      };
      check(e.grad_J(u), [&](const GridFunction& z) { return e.J(z); });
      check(e.grad_F(u), [&](const GridFunction& z) { return e.F(z); });
      check(e.grad_psi(u, 2.5, 0.0), [&](const GridFunction& z) { return e.psi(z, 2.5, 0.0); });
    }
  }
  const EnergyPsi j(y, zero, zero, ones(d), d);
  int mono_bad = 0;
  for (int k = 0; k < 1000; ++k) {
    GridFunction u = random_smooth_field(d, rng);
    GridFunction v = random_smooth_field(d, rng);
    u *= std::pow(10.0, amp(rng));
    v *= std::pow(10.0, amp(rng));
    const double lhs = (j.grad_J(u) - j.grad_J(v)).dot(u.values() - v.values());
    if (lhs < 4.0 * j.J(0.5 * (u - v))) ++mono_bad;
  }
  return {bad == 0 && mono_bad == 0,
          fmt::format("{} finite-difference checks (4 nonlinearities x 50 pairs x 3 gradients), {} above "
                      "1e-5, worst {:.1e}; monotonicity violations {} of 1000",
                      checks, bad, worst, mono_bad)};
}

// 9 ---------------------------------------------------------------------------
Verdict hypothesis_harness() {
  const auto y = power(2.0);
  const auto d = build_grid(unit(), 1.0 / 64, 0.5, 0.3);
  const auto zero = make_nonlinearity("zero", std::vector<double>{});
  std::string detail;
  bool ok = true;
  for (const auto& [label, f] : {std::pair{"(i) sine_power p=3", make_nonlinearity("sine_power", std::vector<double>{3.0})},
                                 std::pair{"(iii) concave_convex p=3 q=4",
                                           make_nonlinearity("concave_convex", std::vector<double>{3.0, 4.0})}}) {
    const auto a = check_class_A(f, y, 1, 0.3);
    const auto h = check_hypotheses(f, y, Theorem::three_solution);
    const auto r = estimate_ricceri(EnergyPsi(y, f, zero, ones(d), d));
    const bool pass = a.certified && h.f1_holds && h.f2_holds && r.alpha_hat <= 1e-3 && r.beta_hat > 0.0;
    ok = ok && pass;
    detail += fmt::format("{}: class A {}, F1 {} ({:.1e}, {:.1e}), F2 {}, alpha_hat {:.1e}, beta_hat {:.4g}; ",
                          label, a.certified, h.f1_holds, h.f1_zero, h.f1_infinity, h.f2_holds, r.alpha_hat,
                          r.beta_hat);
  }
  const auto pw = check_hypotheses(make_nonlinearity("piecewise_power", std::vector<double>{1.5, 4.0}), y,
                                   Theorem::growth_envelope);
  const bool pass4 = pw.condition_i && pw.condition_ii && pw.condition_iii;
  ok = ok && pass4;
  detail += fmt::format("(iv) piecewise_power: conditions (i) {} (ii) {} (iii) {}", pw.condition_i,
                        pw.condition_ii, pw.condition_iii);
  return {ok, detail};
}

// 10 --------------------------------------------------------------------------
Verdict multiplicity() {
  const auto y = power(2.0);
  const auto d = build_grid(unit(), 1.0 / 64, 0.5, 0.3);
  const EnergyPsi e(y, make_nonlinearity("piecewise_power", std::vector<double>{1.5, 4.0}),
                    make_nonlinearity("zero", std::vector<double>{}), ones(d), d);
  const auto ric = estimate_ricceri(e);
  std::vector<double> lambdas;
  const double lo = 1.1 * ric.delta_hat, hi = 10.0 * ric.delta_hat;
  for (int k = 0; k < 8; ++k) lambdas.push_back(lo * std::pow(hi / lo, k / 7.0));
  CriticalSearchOptions o;
  o.starts = 16;
  o.separation = 1e-3;
  o.tol = 1e-8;
  const auto sweep = multiplicity_sweep(e, lambdas, 0.0, o);
  int best = 0;
  double worst_residual = 0.0;
  std::string counts;
  for (const auto& row : sweep) {
    best = std::max(best, static_cast<int>(row.search.count_total()));
    for (const auto& p : row.search.points) worst_residual = std::max(worst_residual, p.gradient_residual);
    counts += fmt::format(" {:.4g}:{}", row.lambda, row.search.count_total());
  }
  return {best >= 3 && worst_residual < 1e-8,
          fmt::format("N={}, delta_hat={:.5g}; points per lambda:{}; max residual {:.1e}", d->interior_count(),
                      ric.delta_hat, counts, worst_residual)};
}

// 11 --------------------------------------------------------------------------
std::pair<double, double> orders(const std::vector<double>& err) {
  return {std::log2(err[0] / err[1]), std::log2(err[1] / err[2])};
}

Verdict refinement() {
  const std::vector<double> hs{1.0 / 16, 1.0 / 32, 1.0 / 64};
  const double R = 0.5;
  std::string detail;
  bool ok = true;
  auto record = [&](const char* name, const std::vector<double>& err) {
    const auto [a, b] = orders(err);
    ok = ok && a > 0.5 && b > 0.5;
    detail += fmt::format("{}{} orders {:.2f}, {:.2f}", detail.empty() ? "" : "; ", name, a, b);
  };
  const auto y = power(2.0);
  auto smooth = [](double x, double) { return (x > 0.0 && x < 1.0) ? std::pow(std::sin(M_PI * x), 2) : 0.0; };

  {  // interior modular of u = e^x: exact value (e^2 - 1) / 4
    std::vector<double> err;
    for (double h : hs) {
      const auto d = build_grid(unit(), h, R, 0.3);
      const auto u = GridFunction::sample(d, [](double x, double) { return std::exp(x); });
      err.push_back(std::abs(modular_G(y, u, Region::interior) - (std::exp(2.0) - 1.0) / 4.0));
    }
    record("interior modular", err);
  }
  {  // star seminorm modular against a grid eight times finer than the finest
    auto value = [&](double h) {
      const auto d = build_grid(unit(), h, R, 0.3);
      return modular_sG(y, GridFunction::sample(d, smooth), PairRegion::star);
    };
    const double ref = value(hs.back() / 8);
    std::vector<double> err;
    for (double h : hs) err.push_back(std::abs(value(h) - ref));
    record("star seminorm modular", err);
  }
  {  // perimeter, g(t) = t, s = 0.1: exact truncated integral
    const double s = 0.1;
    const double exact = (1.0 - std::pow(1.0 + R, 1.0 - 2 * s) + std::pow(R, 1.0 - 2 * s)) / (s * (1.0 - 2 * s));
    std::vector<double> err;
    for (double h : hs) err.push_back(std::abs(perimeter(y, *build_grid(unit(), h, R, s)).value - exact));
    record("perimeter", err);
  }
  {  // Dirichlet quotient against the dense eigenproblem on a grid eight times finer
    const double s = 0.3;
    const double ref = oracle::smallest_dirichlet_quotient(oracle::lattice(1, {0, 0}, {1, 1}, hs.back() / 8, R), s);
    std::vector<double> err;
    for (double h : hs) {
      const auto d = build_grid(unit(), h, R, s);
      err.push_back(std::abs(solve_min(y, BoundaryCondition::make(BcKind::dirichlet, *d), 1.0, d, solver()).capital_lambda - ref));
    }
    record("Lambda_D", err);
  }
  return {ok, detail};
}

}  // namespace

int main() {
  report(1, "Young-inequality battery", young_battery);
  report(2, "Modular-norm sandwich", modular_sandwich);
  report(3, "Divergence and integration-by-parts identities", identities);
  report(4, "Oracle equivalence, power case", oracle_equivalence);
  report(5, "Ordering chain", ordering_chain);
  report(6, "Eigenvalue sandwich", sandwich);
  report(7, "mu-sweep", mu_sweep_check);
  report(8, "Gradient checks", gradient_checks);
  report(9, "Hypothesis harness", hypothesis_harness);
  report(10, "Multiplicity at desk scale", multiplicity);
  report(11, "Refinement sanity", refinement);
  fmt::print("{} of 11 criteria passed\n", 11 - failures);
  return failures == 0 ? 0 : 1;
}
