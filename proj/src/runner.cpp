#include "orlicz/runner.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <random>
#include <variant>

#include <fmt/format.h>
#include <json.hpp>

#include "orlicz/errors.hpp"
#include "orlicz/grid.hpp"
#include "orlicz/modulars.hpp"
#include "orlicz/multiplicity.hpp"
#include "orlicz/nonlinearity.hpp"
#include "orlicz/nonlocal_operator.hpp"
#include "orlicz/rayleigh.hpp"
#include "orlicz/young.hpp"
#include "pairs.hpp"

namespace orlicz {

namespace fs = std::filesystem;

namespace {

constexpr std::array<std::pair<Subcommand, std::string_view>, 7> kNames{{
    {Subcommand::check_young, "check-young"},
    {Subcommand::verify_calculus, "verify-calculus"},
    {Subcommand::verify_operator, "verify-operator"},
    {Subcommand::eigen, "eigen"},
    {Subcommand::sweep_mu, "sweep-mu"},
    {Subcommand::multiplicity, "multiplicity"},
    {Subcommand::perimeter, "perimeter"},
}};

using Cell = std::variant<std::string, double, long long>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

std::string cell_text(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* d = std::get_if<double>(&c)) return fmt::format("{:.17g}", *d);
  return fmt::format("{}", std::get<long long>(c));
}

nlohmann::ordered_json cell_json(const Cell& c) {
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return nullptr;
    return *d;
  }
  return std::get<long long>(c);
}

/// Output directory, format and bookkeeping shared by the subcommands.
class Writer {
 public:
  Writer(const RunConfig& config, RunOutcome& outcome)
      : dir_(config.output.dir),
        jsonl_(config.output.format == "jsonl"),
        hash_(fmt::format("{:016x}", config_hash(config))),
        outcome_(outcome) {
    fs::create_directories(dir_);
  }

  const std::string& hash() const { return hash_; }

  void table(const std::string& stem, const Table& t) {
    const fs::path path = dir_ / (stem + (jsonl_ ? ".jsonl" : ".csv"));
    std::ofstream out(path, std::ios::binary);
    if (jsonl_) {
      out << nlohmann::ordered_json{{"config_hash", hash_}, {"columns", t.columns}}.dump() << '\n';
      for (const auto& row : t.rows) {
        nlohmann::ordered_json obj;
        for (std::size_t k = 0; k < row.size(); ++k) obj[t.columns[k]] = cell_json(row[k]);
        out << obj.dump() << '\n';
      }
    } else {
      out << "# config_hash=" << hash_ << '\n';
      for (std::size_t k = 0; k < t.columns.size(); ++k) out << (k ? "," : "") << t.columns[k];
      out << '\n';
      for (const auto& row : t.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << cell_text(row[k]);
        out << '\n';
      }
    }
    finish(out, path);
  }

  void text(const std::string& name, const std::string& body) {
    const fs::path path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    out << body;
    finish(out, path);
  }

  fs::path path(const std::string& name) const { return dir_ / name; }

 private:
  void finish(std::ofstream& out, const fs::path& path) {
    out.close();
    if (!out) throw Error(fmt::format("cannot write '{}'", path.string()));
    outcome_.artifacts.push_back(path.string());
  }

  fs::path dir_;
  bool jsonl_;
  std::string hash_;
  RunOutcome& outcome_;
};

void fail(RunOutcome& outcome, std::string check, std::string detail) {
  outcome.failures.push_back({std::move(check), std::move(detail)});
}

YoungFunction young_of(const RunConfig& c) { return make_young(c.young.family, c.young.params); }

Box box_of(const RunConfig& c) {
  Box b;
  b.dim = c.domain.dim;
  b.lo = c.domain.lower;
  b.hi = c.domain.upper;
  return b;
}

DomainPtr domain_of(const RunConfig& c, double h_scale = 1.0) {
  return build_grid(box_of(c), c.domain.h * h_scale, c.domain.collar, c.s);
}

Eigen::VectorXd exterior_beta(const RunConfig& c, const DiscreteDomain& d) {
  const auto& b = c.problem.beta;
  const auto m = static_cast<Eigen::Index>(d.exterior_count());
  if (b.size() == 1) return Eigen::VectorXd::Constant(m, b[0]);
  if (static_cast<Eigen::Index>(b.size()) != m) {
    throw ValidationError(fmt::format("beta has {} entries but the grid has {} exterior nodes",
                                      b.size(), m));
  }
  return Eigen::Map<const Eigen::VectorXd>(b.data(), m);
}

SolverOptions solver_options(const RunConfig& c) {
  SolverOptions o;
  o.tol = c.solver.tol;
  o.max_iter = c.solver.max_iter;
  o.seeds = c.solver.seeds;
  o.seed = c.solver.seed;
  return o;
}

std::vector<Cell> node_prefix(const DiscreteDomain& d, std::size_t i) {
  std::vector<Cell> row{static_cast<long long>(i), d.coord(i)[0]};
  if (d.dim() == 2) row.emplace_back(d.coord(i)[1]);
  row.emplace_back(std::string(d.is_interior(i) ? "interior" : "exterior"));
  return row;
}

std::vector<std::string> node_columns(const DiscreteDomain& d) {
  if (d.dim() == 2) return {"node", "x", "y", "region"};
  return {"node", "x", "region"};
}

// check-young ---------------------------------------------------------------

void run_check_young(const RunConfig& c, Writer& w, RunOutcome& outcome) {
  const YoungFunction y = young_of(c);
  const StructureReport rep = check_structure(y, c.domain.dim, c.s);
  w.text("structure.txt", fmt::format("# config_hash={}\n{}", w.hash(), rep.to_key_value()));
  w.text("structure.json", rep.to_json() + "\n");
  if (!rep.g1_holds) {
    fail(outcome, "g1", fmt::format("sampled indices [{}, {}] do not satisfy 1 < p- <= p+",
                                    rep.p_minus, rep.p_plus));
  }
}

// verify-calculus -----------------------------------------------------------

void run_verify_calculus(const RunConfig& c, Writer& w, RunOutcome& outcome) {
  const YoungFunction y = young_of(c);
  Table t{{"check", "samples", "violations"}, {}};
  for (const auto& b : run_young_battery(y, static_cast<std::size_t>(c.solver.samples), c.solver.seed)) {
    t.add({b.name, static_cast<long long>(b.samples), static_cast<long long>(b.violations)});
    if (b.violations > 0) fail(outcome, b.name, fmt::format("{} of {} samples violated", b.violations, b.samples));
  }

  // Modular / norm sandwich on random grid functions of varying amplitude.
  const DomainPtr d = domain_of(c);
  std::mt19937_64 rng(c.solver.seed);
  std::uniform_real_distribution<double> log_amp(-3.0, 3.0);
  const long long n = std::min(c.solver.samples, 1000);
  long long sandwich_bad = 0;
  long long roundtrip_bad = 0;
  const double pm = y.p_minus();
  const double pp = y.p_plus();
  for (long long k = 0; k < n; ++k) {
    GridFunction u = random_smooth_field(d, rng);
    u *= std::pow(10.0, log_amp(rng));
    const auto modular = [&](const GridFunction& v) { return modular_G(y, v, Region::interior); };
    const double norm = luxemburg_norm(modular, u);
    const double phi = modular(u);
    if (phi < xi_minus(norm, pm, pp) * (1.0 - 1e-8) || phi > xi_plus(norm, pm, pp) * (1.0 + 1e-8)) {
      ++sandwich_bad;
    }
    if (norm > 0.0 && std::abs(modular((1.0 / norm) * u) - 1.0) > 1e-8) ++roundtrip_bad;
  }
  t.add({std::string("modular_sandwich"), n, sandwich_bad});
  t.add({std::string("luxemburg_roundtrip"), n, roundtrip_bad});
  if (sandwich_bad > 0) fail(outcome, "modular_sandwich", fmt::format("{} of {} samples violated", sandwich_bad, n));
  if (roundtrip_bad > 0) fail(outcome, "luxemburg_roundtrip", fmt::format("{} of {} samples violated", roundtrip_bad, n));
  w.table("calculus", t);
}

// verify-operator -----------------------------------------------------------

struct IdentityErrors {
  double divergence = 0.0;
  double ibp_star = 0.0;
  double ibp_regional = 0.0;
  double cancellation = 0.0;
};

double relative_gap(double lhs, double rhs, double scale) {
  const double denom = std::max({std::abs(lhs), std::abs(rhs), scale});
  return denom > 0.0 ? std::abs(lhs - rhs) / denom : 0.0;
}

IdentityErrors identity_errors(const YoungFunction& y, const GridFunction& u, const GridFunction& v) {
  const DiscreteDomain& d = u.domain();
  const double wt = d.cell_weight();
  const GridFunction au = apply_operator(y, u, OperatorKind::full);
  const GridFunction ar = apply_operator(y, u, OperatorKind::regional);
  const GridFunction nu = normal_derivative(y, u);
  IdentityErrors e;

  double div = 0.0, div_abs = 0.0, rhs = 0.0, rhs_abs = 0.0, reg = 0.0, reg_abs = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double flux = d.is_interior(i) ? au[i] : nu[i];
    div += flux * wt;
    div_abs += std::abs(flux * wt);
    rhs += v[i] * flux * wt;
    rhs_abs += std::abs(v[i] * flux * wt);
    if (d.is_interior(i)) {
      reg += 2.0 * v[i] * ar[i] * wt;
      reg_abs += std::abs(2.0 * v[i] * ar[i] * wt);
    }
  }
  e.divergence = div_abs > 0.0 ? std::abs(div) / div_abs : 0.0;
  e.ibp_star = relative_gap(pairing(y, u, v, OperatorKind::star_pairing), rhs, rhs_abs);
  e.ibp_regional = relative_gap(pairing(y, u, v, OperatorKind::regional), reg, reg_abs);

  // Interior pairs summed together with their mirror image.
  double cancel = 0.0;
  detail::for_each_pair(d, PairRegion::regional, [&](std::size_t i, std::size_t j) {
    const double ks = d.kernel_s(i, j);
    const double k = d.kernel_op(i, j);
    cancel += detail::odd_g(y, (u[i] - u[j]) * ks) * k + detail::odd_g(y, (u[j] - u[i]) * ks) * k;
  });
  e.cancellation = std::abs(cancel);
  return e;
}

void run_verify_operator(const RunConfig& c, Writer& w, RunOutcome& outcome) {
  const YoungFunction y = young_of(c);
  const DomainPtr d = domain_of(c);
  std::mt19937_64 rng(c.solver.seed);
  constexpr int kPairs = 100;
  IdentityErrors worst;
  for (int k = 0; k < kPairs; ++k) {
    const GridFunction u = random_smooth_field(d, rng);
    const GridFunction v = random_smooth_field(d, rng);
    const IdentityErrors e = identity_errors(y, u, v);
    worst.divergence = std::max(worst.divergence, e.divergence);
    worst.ibp_star = std::max(worst.ibp_star, e.ibp_star);
    worst.ibp_regional = std::max(worst.ibp_regional, e.ibp_regional);
    worst.cancellation = std::max(worst.cancellation, e.cancellation);
  }
  Table t{{"identity", "pairs", "max_error", "tolerance", "passed"}, {}};
  const auto row = [&](const std::string& name, double err, double tol) {
    const bool ok = err <= tol;
    t.add({name, static_cast<long long>(kPairs), err, tol, static_cast<long long>(ok)});
    if (!ok) fail(outcome, name, fmt::format("max error {:.3g} exceeds {:.3g}", err, tol));
  };
  row("divergence", worst.divergence, 1e-12);
  row("ibp_star", worst.ibp_star, 1e-12);
  row("ibp_regional", worst.ibp_regional, 1e-12);
  row("pairwise_cancellation", worst.cancellation, 0.0);
  w.table("operator", t);
}

// eigen ---------------------------------------------------------------------

std::vector<EigenResult> solve_all(const RunConfig& c, const YoungFunction& y, const DomainPtr& d,
                                   double mu) {
  const Eigen::VectorXd beta = exterior_beta(c, *d);
  const SolverOptions opts = solver_options(c);
  std::vector<std::future<EigenResult>> jobs;
  for (const auto& name : c.problem.bc) {
    BoundaryCondition bc = BoundaryCondition::make(parse_bc(name), *d);
    bc.beta = beta;
    jobs.push_back(std::async(std::launch::async, [=] { return solve_min(y, bc, mu, d, opts); }));
  }
  std::vector<EigenResult> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

void run_eigen(const RunConfig& c, Writer& w, RunOutcome& outcome) {
  const YoungFunction y = young_of(c);
  const DomainPtr d = domain_of(c);
  const std::vector<EigenResult> results = solve_all(c, y, d, c.problem.mu);

  Table t{{"bc", "mu", "Lambda", "lambda", "lambda_pairing", "residual", "iters", "converged",
           "positive", "negative", "zero"},
          {}};
  for (const auto& r : results) {
    const std::string bc(to_string(r.bc));
    t.add({bc, r.mu, r.capital_lambda, r.lambda, r.lambda_pairing, r.stationarity_residual,
           static_cast<long long>(r.iterations), static_cast<long long>(r.converged),
           static_cast<long long>(r.positive_nodes), static_cast<long long>(r.negative_nodes),
           static_cast<long long>(r.zero_nodes)});
    if (!r.converged) {
      fail(outcome, "converged", fmt::format("{}: residual {:.3g} after {} iterations", bc,
                                             r.stationarity_residual, r.iterations));
    }
    Table u{node_columns(*d), {}};
    u.columns.push_back("u");
    for (std::size_t i = 0; i < d->size(); ++i) {
      auto row = node_prefix(*d, i);
      row.emplace_back(r.u[i]);
      u.add(std::move(row));
    }
    w.table("eigen_u_" + bc, u);
  }
  w.table("eigen", t);

  bool all_four = true;
  for (BcKind k : {BcKind::dirichlet, BcKind::neumann, BcKind::regional_neumann, BcKind::robin}) {
    all_four = all_four && std::any_of(results.begin(), results.end(),
                                       [k](const EigenResult& r) { return r.bc == k; });
  }
  OrderReport rep = check_order(results, y);
  if (!all_four) {
    // Only the per-result sandwich applies without the full chain.
    std::erase_if(rep.violations, [](const std::string& v) { return v.starts_with("missing"); });
    rep.ok = rep.violations.empty();
  }
  std::string body = fmt::format("# config_hash={}\nchain_checked={}\nok={}\n", w.hash(),
                                 all_four, rep.ok);
  for (std::size_t k = 0; k < rep.chain_margins.size(); ++k) {
    body += fmt::format("chain_margin_{}={:.17g}\n", k, rep.chain_margins[k]);
  }
  for (const auto& v : rep.violations) {
    body += fmt::format("violation={}\n", v);
    fail(outcome, "ordering", v);
  }
  w.text("ordering.txt", body);
}

// sweep-mu ------------------------------------------------------------------

void run_sweep_mu(const RunConfig& c, Writer& w, RunOutcome& outcome) {
  const YoungFunction y = young_of(c);
  const DomainPtr d = domain_of(c);
  const Eigen::VectorXd beta = exterior_beta(c, *d);
  const SolverOptions opts = solver_options(c);
  const bool power = y.p_minus() == y.p_plus();

  std::vector<std::future<MuSweepResult>> jobs;
  for (const auto& name : c.problem.bc) {
    BoundaryCondition bc = BoundaryCondition::make(parse_bc(name), *d);
    bc.beta = beta;
    const auto mus = c.problem.mu_list;
    jobs.push_back(std::async(std::launch::async, [=] { return mu_sweep(y, bc, mus, d, opts); }));
  }

  Table rows{{"bc", "mu", "Lambda", "lambda", "residual", "converged"}, {}};
  Table summary{{"bc", "min_Lambda", "max_Lambda", "relative_spread", "lower_bound"}, {}};
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const MuSweepResult res = jobs[k].get();
    const std::string& bc = c.problem.bc[k];
    double hi = 0.0;
    for (const auto& r : res.rows) {
      rows.add({bc, r.mu, r.capital_lambda, r.lambda, r.residual, static_cast<long long>(r.converged)});
      hi = std::max(hi, r.capital_lambda);
      if (!r.converged) fail(outcome, "converged", fmt::format("{} at mu={}: residual {:.3g}", bc, r.mu, r.residual));
      if (r.capital_lambda < 1.0) {
        fail(outcome, "lambda_at_least_one", fmt::format("{} at mu={}: Lambda={:.17g}", bc, r.mu, r.capital_lambda));
      }
    }
    const double spread = (hi - res.min_capital_lambda) / hi;
    summary.add({bc, res.min_capital_lambda, hi, spread, res.lower_bound});
    if (power && spread > 1e-4) {
      fail(outcome, "mu_invariance", fmt::format("{}: relative spread {:.3g} exceeds 1e-4", bc, spread));
    }
  }
  w.table("sweep_mu", rows);
  w.table("sweep_mu_summary", summary);
}

// multiplicity --------------------------------------------------------------

std::string hypotheses_text(const ClassAReport& a, const HypothesisReport& t1,
                            const HypothesisReport& t2, const std::optional<RicceriEstimate>& r,
                            const std::string& ricceri_note) {
  std::string s;
  s += fmt::format("class_A.bound_holds={}\nclass_A.worst_margin={:.17g}\nclass_A.witness_t={:.17g}\n",
                   a.bound_holds, a.worst_margin, a.witness_t);
  s += fmt::format("class_A.envelope_vs_critical={}\nclass_A.certified={}\n",
                   to_string(a.envelope_vs_critical), a.certified);
  if (!a.note.empty()) s += fmt::format("class_A.note={}\n", a.note);
  s += fmt::format(
      "three_solution.passed={}\nthree_solution.f1_zero={:.17g}\nthree_solution.f1_infinity={:.17g}\n"
      "three_solution.f1_holds={}\nthree_solution.plateau_tau={:.17g}\n"
      "three_solution.plateau_value={:.17g}\nthree_solution.f2_holds={}\n",
      t1.passed, t1.f1_zero, t1.f1_infinity, t1.f1_holds, t1.plateau_tau, t1.plateau_value,
      t1.f2_holds);
  s += fmt::format(
      "growth_envelope.passed={}\ngrowth_envelope.exponent_zero={:.17g}\n"
      "growth_envelope.exponent_infinity={:.17g}\ngrowth_envelope.b_exponent={:.17g}\n"
      "growth_envelope.d_exponent={:.17g}\ngrowth_envelope.c1={:.17g}\ngrowth_envelope.c2={:.17g}\n"
      "growth_envelope.tau2={:.17g}\ngrowth_envelope.condition_i={}\n"
      "growth_envelope.condition_ii={}\ngrowth_envelope.condition_iii={}\n",
      t2.passed, t2.exponent_zero, t2.exponent_infinity, t2.b_exponent, t2.d_exponent, t2.c1, t2.c2,
      t2.tau2, t2.condition_i, t2.condition_ii, t2.condition_iii);
  if (r) {
    s += fmt::format("ricceri.alpha_hat={:.17g}\nricceri.beta_hat={:.17g}\nricceri.delta_hat={:.17g}\n",
                     r->alpha_hat, r->beta_hat, r->delta_hat);
  } else {
    s += fmt::format("ricceri.note={}\n", ricceri_note);
  }
  return s;
}

void run_multiplicity(const RunConfig& c, Writer& w, RunOutcome& outcome) {
  const YoungFunction y = young_of(c);
  const DomainPtr d = domain_of(c);
  const auto& nl = c.nonlinearities;
  const Nonlinearity f = make_nonlinearity(nl.f, nl.f_params);
  const Nonlinearity h = make_nonlinearity(nl.h, nl.h_params);
  const EnergyPsi energy(y, f, h, exterior_beta(c, *d), d);

  ClassAReport class_a;
  try {
    class_a = check_class_A(f, y, c.domain.dim, c.s);
  } catch (const NotSubcritical& e) {
    class_a.note = e.what();
  }
  const HypothesisReport t1 = check_hypotheses(f, y, Theorem::three_solution);
  const HypothesisReport t2 = check_hypotheses(f, y, Theorem::growth_envelope);

  std::optional<RicceriEstimate> ricceri;
  std::string ricceri_note;
  try {
    RicceriOptions ro;
    ro.seed = c.solver.seed;
    ricceri = estimate_ricceri(energy, ro);
  } catch (const NoPositiveF& e) {
    ricceri_note = e.what();
  }
  w.text("hypotheses.txt", fmt::format("# config_hash={}\n{}", w.hash(),
                                       hypotheses_text(class_a, t1, t2, ricceri, ricceri_note)));

  std::vector<double> lambdas;
  if (nl.lambda > 0.0) {
    lambdas.push_back(nl.lambda);
  } else {
    const bool need_delta = nl.lambda_min <= 0.0 || nl.lambda_max <= 0.0;
    if (need_delta && !(ricceri && std::isfinite(ricceri->delta_hat) && ricceri->delta_hat > 0.0)) {
      throw ValidationError("lambda range needs lambda_min and lambda_max when delta cannot be estimated");
    }
    const double lo = nl.lambda_min > 0.0 ? nl.lambda_min : 1.1 * ricceri->delta_hat;
    const double hi = nl.lambda_max > 0.0 ? nl.lambda_max : 10.0 * ricceri->delta_hat;
    if (!(hi >= lo)) throw ValidationError("lambda_max must not be below lambda_min");
    const int m = nl.lambda_count;
    for (int k = 0; k < m; ++k) {
      lambdas.push_back(m == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(k) / (m - 1)));
    }
  }

  CriticalSearchOptions so;
  so.starts = c.solver.starts;
  so.separation = c.solver.separation;
  so.tol = c.solver.crit_tol;
  so.seed = c.solver.seed;
  const auto sweep = multiplicity_sweep(energy, lambdas, nl.mu_coef, so);

  Table points{{"lambda", "mu", "index", "psi", "residual", "x_norm", "is_zero"}, {}};
  Table summary{{"lambda", "mu", "total", "nonzero", "max_x_norm", "starts", "rejected"}, {}};
  Table fields{{"lambda", "index"}, {}};
  for (const auto& col : node_columns(*d)) fields.columns.push_back(col);
  fields.columns.push_back("u");
  for (const auto& row : sweep) {
    const auto& pts = row.search.points;
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const auto& p = pts[k];
      points.add({row.lambda, nl.mu_coef, static_cast<long long>(k), p.psi, p.gradient_residual,
                  p.x_norm, static_cast<long long>(p.is_zero)});
      if (!(p.gradient_residual < so.tol)) {
        fail(outcome, "critical_residual", fmt::format("lambda={}: point {} residual {:.3g}",
                                                       row.lambda, k, p.gradient_residual));
      }
      for (std::size_t i = 0; i < d->size(); ++i) {
        std::vector<Cell> cells{row.lambda, static_cast<long long>(k)};
        for (auto& cell : node_prefix(*d, i)) cells.push_back(std::move(cell));
        cells.emplace_back(p.u[i]);
        fields.add(std::move(cells));
      }
    }
    summary.add({row.lambda, nl.mu_coef, static_cast<long long>(row.search.count_total()),
                 static_cast<long long>(row.search.count_nonzero()), row.search.max_x_norm(),
                 static_cast<long long>(row.search.starts_tried),
                 static_cast<long long>(row.search.rejected)});
  }
  w.table("multiplicity", points);
  w.table("multiplicity_summary", summary);
  w.table("multiplicity_u", fields);
}

// perimeter -----------------------------------------------------------------

void run_perimeter(const RunConfig& c, Writer& w, RunOutcome& outcome) {
  const YoungFunction y = young_of(c);
  const int levels = c.domain.dim == 1 ? 3 : 1;
  Table t{{"h", "value", "tail", "total", "order"}, {}};
  std::vector<double> values;
  for (int k = 0; k < levels; ++k) {
    const DomainPtr d = domain_of(c, std::ldexp(1.0, -k));
    const PerimeterResult p = perimeter(y, *d);
    values.push_back(p.value);
    double order = std::nan("");
    if (k >= 2) {
      order = std::log2(std::abs(values[k - 2] - values[k - 1]) / std::abs(values[k - 1] - values[k]));
    }
    t.add({d->spacing()[0], p.value, p.tail, p.value + p.tail, order});
    if (!(std::isfinite(p.value) && p.value > 0.0)) {
      fail(outcome, "perimeter_positive", fmt::format("value {} at h={}", p.value, d->spacing()[0]));
    }
  }
  w.table("perimeter", t);
}

}  // namespace

std::string_view to_string(Subcommand command) {
  for (const auto& [k, name] : kNames) {
    if (k == command) return name;
  }
  return "unknown";
}

Subcommand parse_subcommand(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  throw ValidationError(fmt::format("unknown subcommand '{}'", name));
}

std::vector<std::string_view> subcommand_names() {
  std::vector<std::string_view> out;
  for (const auto& [k, n] : kNames) out.push_back(n);
  return out;
}

void apply_overrides(RunConfig& config, const Overrides& o) {
  if (o.seed) config.solver.seed = *o.seed;
  if (o.out) config.output.dir = *o.out;
  if (o.h) config.domain.h = *o.h;
  if (o.collar) config.domain.collar = *o.collar;
  if (o.tol) config.solver.tol = *o.tol;
  validate_config(config);
}

std::vector<std::string_view> required_sections(Subcommand command) {
  switch (command) {
    case Subcommand::check_young:
    case Subcommand::verify_calculus:
      return {"young"};
    case Subcommand::verify_operator:
    case Subcommand::perimeter:
      return {"young", "domain", "fractional"};
    case Subcommand::eigen:
    case Subcommand::sweep_mu:
      return {"young", "domain", "fractional", "problem"};
    case Subcommand::multiplicity:
      return {"young", "domain", "fractional", "nonlinearities"};
  }
  return {};
}

RunOutcome dispatch(const RunConfig& config, Subcommand command) {
  for (auto section : required_sections(command)) {
    if (!config.has_section(section)) {
      throw MissingSection(fmt::format("{} needs a [{}] section", to_string(command), section));
    }
  }
  validate_config(config);

  RunOutcome outcome;
  Writer w(config, outcome);
  w.text("config.resolved.ini", fmt::format("# config_hash={}\n{}", w.hash(), echo_config(config)));
  std::error_code ec;
  fs::remove(w.path("failures.json"), ec);

  switch (command) {
    case Subcommand::check_young: run_check_young(config, w, outcome); break;
    case Subcommand::verify_calculus: run_verify_calculus(config, w, outcome); break;
    case Subcommand::verify_operator: run_verify_operator(config, w, outcome); break;
    case Subcommand::eigen: run_eigen(config, w, outcome); break;
    case Subcommand::sweep_mu: run_sweep_mu(config, w, outcome); break;
    case Subcommand::multiplicity: run_multiplicity(config, w, outcome); break;
    case Subcommand::perimeter: run_perimeter(config, w, outcome); break;
  }

  if (!outcome.failures.empty()) {
    outcome.exit_code = 1;
    nlohmann::ordered_json j;
    j["subcommand"] = std::string(to_string(command));
    j["config_hash"] = w.hash();
    j["failures"] = nlohmann::ordered_json::array();
    for (const auto& f : outcome.failures) j["failures"].push_back({{"check", f.check}, {"detail", f.detail}});
    w.text("failures.json", j.dump(2) + "\n");
  }
  return outcome;
}

}  // namespace orlicz
