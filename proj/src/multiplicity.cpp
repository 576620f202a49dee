#include "orlicz/multiplicity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "orlicz/errors.hpp"
#include "orlicz/modulars.hpp"
#include "pairs.hpp"

namespace orlicz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double safe_dg(const YoungFunction& y, double t) {
  const double v = y.dg(t);
  return std::isfinite(v) ? v : y.dg(std::max(t, 1e-8));
}

}  // namespace

// ---------------------------------------------------------------- energy

EnergyPsi::EnergyPsi(YoungFunction young, Nonlinearity f, Nonlinearity h, Eigen::VectorXd beta,
                     DomainPtr domain)
    : young_(std::move(young)),
      f_(std::move(f)),
      h_(std::move(h)),
      beta_(std::move(beta)),
      domain_(std::move(domain)) {
  require_positive_beta(*domain_, beta_);
}

double EnergyPsi::J(const GridFunction& u) const {
  return modular_sG(young_, u, PairRegion::star) + modular_G(young_, u, Region::interior) +
         modular_G(young_, u, Region::exterior, &beta_);
}

double EnergyPsi::F(const GridFunction& u) const {
  double s = 0.0;
  for (std::size_t i = 0; i < domain_->interior_count(); ++i) s += f_.F(u[i]);
  return s * domain_->cell_weight();
}

double EnergyPsi::H(const GridFunction& u) const {
  double s = 0.0;
  for (std::size_t i = 0; i < domain_->interior_count(); ++i) s += h_.F(u[i]);
  return s * domain_->cell_weight();
}

double EnergyPsi::psi(const GridFunction& u, double lambda, double mu) const {
  return J(u) - lambda * F(u) - mu * H(u);
}

Eigen::VectorXd EnergyPsi::grad_J(const GridFunction& u) const {
  return gradient_modular_sG(young_, u, PairRegion::star) +
         gradient_modular_G(young_, u, Region::interior) +
         gradient_modular_G(young_, u, Region::exterior, &beta_);
}

Eigen::VectorXd EnergyPsi::grad_F(const GridFunction& u) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(u.values().size());
  for (std::size_t i = 0; i < domain_->interior_count(); ++i) {
    g[static_cast<Eigen::Index>(i)] = f_.f(u[i]) * domain_->cell_weight();
  }
  return g;
}

Eigen::VectorXd EnergyPsi::grad_H(const GridFunction& u) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(u.values().size());
  for (std::size_t i = 0; i < domain_->interior_count(); ++i) {
    g[static_cast<Eigen::Index>(i)] = h_.f(u[i]) * domain_->cell_weight();
  }
  return g;
}

Eigen::VectorXd EnergyPsi::grad_psi(const GridFunction& u, double lambda, double mu) const {
  Eigen::VectorXd g = grad_J(u);
  if (lambda != 0.0) g -= lambda * grad_F(u);
  if (mu != 0.0) g -= mu * grad_H(u);
  return g;
}

Eigen::MatrixXd EnergyPsi::hessian_psi(const GridFunction& u, double lambda, double mu) const {
  const auto& d = *domain_;
  const auto n = static_cast<Eigen::Index>(d.size());
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
  detail::for_each_pair(d, PairRegion::star, [&](std::size_t i, std::size_t j) {
    const double ks = d.kernel_s(i, j);
    const double c = 2.0 * safe_dg(young_, std::abs(u[i] - u[j]) * ks) * ks * ks * d.kernel_mu(i, j);
    const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
    H(a, a) += c;
    H(b, b) += c;
    H(a, b) -= c;
    H(b, a) -= c;
  });
  const double w = d.cell_weight();
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto a = static_cast<Eigen::Index>(i);
    const double gg = safe_dg(young_, std::abs(u[i])) * w;
    if (d.is_interior(i)) {
      H(a, a) += gg - lambda * f_.df(u[i]) * w - mu * h_.df(u[i]) * w;
    } else {
      H(a, a) += beta_[a - static_cast<Eigen::Index>(d.interior_count())] * gg;
    }
  }
  return H;
}

double EnergyPsi::relative_residual(const GridFunction& u, double lambda, double mu) const {
  const Eigen::VectorXd gJ = grad_J(u), gF = grad_F(u), gH = grad_H(u);
  const double num = (gJ - lambda * gF - mu * gH).norm();
  const double den = gJ.norm() + std::abs(lambda) * gF.norm() + std::abs(mu) * gH.norm();
  if (num == 0.0) return 0.0;
  return num / den;
}

double EnergyPsi::x_norm(const GridFunction& u) const { return orlicz::x_norm(young_, u, beta_); }

double energy_psi(const YoungFunction& young, const GridFunction& u, double lambda, double mu,
                  const Nonlinearity& f, const Nonlinearity& h, const Eigen::VectorXd& beta) {
  return EnergyPsi(young, f, h, beta, u.domain_ptr()).psi(u, lambda, mu);
}

Eigen::VectorXd gradient_psi(const YoungFunction& young, const GridFunction& u, double lambda,
                             double mu, const Nonlinearity& f, const Nonlinearity& h,
                             const Eigen::VectorXd& beta) {
  return EnergyPsi(young, f, h, beta, u.domain_ptr()).grad_psi(u, lambda, mu);
}

// ---------------------------------------------------------------- hypotheses

ClassAReport check_class_A(const Nonlinearity& nl, const YoungFunction& young, int n, double s) {
  ClassAReport rep;
  const auto& M = nl.envelope();
  rep.worst_margin = kInf;
  std::vector<double> ts{0.0};
  for (double t : log_grid(1e-6, 1e6, 2000)) {
    ts.push_back(t);
    ts.push_back(-t);
  }
  bool ok = true;
  for (double t : ts) {
    const double bound = nl.weight() * (1.0 + M.g(std::abs(t)));
    const double v = std::abs(nl.f(t));
    const double margin = std::isfinite(v) ? bound - v : -kInf;
    if (margin < rep.worst_margin) {
      rep.worst_margin = margin;
      rep.witness_t = t;
    }
    if (!(margin >= -1e-12 * bound)) ok = false;
  }
  rep.bound_holds = ok;
  try {
    const YoungFunction Gstar = critical_sobolev(young, n, s);
    rep.envelope_vs_critical = essentially_stronger(M, Gstar).verdict;
  } catch (const NotSubcritical& e) {
    rep.envelope_vs_critical = Dominance::inconclusive;
    rep.note = e.what();
  }
  rep.certified = rep.bound_holds && rep.envelope_vs_critical == Dominance::stronger;
  if (!rep.bound_holds) {
    rep.note = fmt::format("growth bound fails at t={:g}", rep.witness_t);
  } else if (!rep.certified && rep.note.empty()) {
    rep.note = fmt::format("envelope versus critical function: {}",
                           to_string(rep.envelope_vs_critical));
  }
  return rep;
}

namespace {

/// Largest F over +-t for t in a log window.
double window_sup(const Nonlinearity& nl, double lo, double hi) {
  double m = -kInf;
  for (double t : log_grid(lo, hi, 60)) m = std::max({m, nl.F(t), nl.F(-t)});
  return m;
}

/// Growth exponent of F between two decades, or nullopt when F <= 0 there.
std::optional<double> growth_exponent(const Nonlinearity& nl, double a, double b) {
  const double s1 = window_sup(nl, a, 10.0 * a);
  const double s2 = window_sup(nl, b, 10.0 * b);
  if (!(s1 > 0.0) || !(s2 > 0.0)) return std::nullopt;
  return std::log(s2 / s1) / std::log(b / a);
}

/// tau with F(tau) > 0 and F >= 0 on [0, tau] (sampled), maximizing F(tau).
std::optional<double> sign_witness(const Nonlinearity& nl) {
  std::vector<double> cands = log_grid(1e-3, 1e3, 121);
  cands.push_back(std::numbers::pi / 2.0);
  std::optional<double> best;
  double best_val = 0.0;
  for (double sign : {1.0, -1.0}) {
    for (double c : cands) {
      const double tau = sign * c;
      const double v = nl.F(tau);
      if (!(v > best_val)) continue;
      bool nonneg = true;
      for (int k = 1; k <= 200 && nonneg; ++k) nonneg = nl.F(tau * k / 200.0) >= 0.0;
      if (nonneg) {
        best = tau;
        best_val = v;
      }
    }
    if (best) break;
  }
  return best;
}

YoungFunction power_young(double p) {
  const double q[] = {p};
  return make_young(YoungFamily::power, q);
}

}  // namespace

HypothesisReport check_hypotheses(const Nonlinearity& nl, const YoungFunction& young,
                                  Theorem theorem) {
  HypothesisReport rep;
  rep.theorem = theorem;
  if (theorem == Theorem::three_solution) {
    auto sup_ratio = [&](double lo, double hi) {
      double m = -kInf;
      for (double t : log_grid(lo, hi, 200)) {
        m = std::max({m, nl.F(t) / young.G(t), nl.F(-t) / young.G(t)});
      }
      return m;
    };
    rep.f1_zero = sup_ratio(1e-8, 1e-4);
    rep.f1_infinity = sup_ratio(1e4, 1e8);
    rep.f1_holds = rep.f1_zero <= 1e-3 && rep.f1_infinity <= 1e-3;
    if (const auto tau = sign_witness(nl)) {
      rep.plateau_tau = *tau;
      // v = tau on [1/4, 3/4], linear to 0 at the ends of [0, 1].
      const int cells = 400;
      double sum = 0.0;
      for (int k = 0; k < cells; ++k) {
        const double x = (k + 0.5) / cells;
        const double ramp = std::min(1.0, std::min(x, 1.0 - x) / 0.25);
        sum += nl.F(*tau * ramp);
      }
      rep.plateau_value = sum / cells;
    }
    rep.f2_holds = rep.plateau_value > 0.0;
    rep.passed = rep.f1_holds && rep.f2_holds;
    return rep;
  }

  const double pm = young.p_minus(), pp = young.p_plus();
  // (i) F <= c1 (1 + B) with B a power below p-.
  const auto e_inf = growth_exponent(nl, 1e5, 1e7);
  rep.exponent_infinity = e_inf ? *e_inf : -kInf;
  // Stay close to the growth of F so that B << G is visible on the sampled range.
  const double e_eff = std::max(rep.exponent_infinity, 1.0);
  rep.b_exponent = e_eff + 0.1 * (pm - e_eff);
  {
    const YoungFunction B = power_young(rep.b_exponent);
    rep.c1 = nl.F(0.0);
    for (double t : log_grid(1e-8, 1e8, 1601)) {
      rep.c1 = std::max({rep.c1, nl.F(t) / (1.0 + B.G(t)), nl.F(-t) / (1.0 + B.G(t))});
    }
    rep.condition_i = rep.exponent_infinity < pm && std::isfinite(rep.c1) &&
                      essentially_stronger(B, young).verdict == Dominance::stronger;
  }
  // (ii) F <= c2 D on [-1, 1] with D a power above p+.
  const auto e_zero = growth_exponent(nl, 1e-8, 1e-6);
  rep.exponent_zero = e_zero ? *e_zero : kInf;
  rep.d_exponent = std::isfinite(rep.exponent_zero) ? (pp + rep.exponent_zero) / 2.0 : pp + 1.0;
  {
    const YoungFunction D = power_young(rep.d_exponent);
    rep.c2 = 0.0;
    for (double t : log_grid(1e-8, 1.0, 801)) {
      rep.c2 = std::max({rep.c2, nl.F(t) / D.G(t), nl.F(-t) / D.G(t)});
    }
    rep.condition_ii = rep.exponent_zero > pp && std::isfinite(rep.c2) &&
                       essentially_stronger(young, D).verdict == Dominance::stronger;
  }
  // (iii) sign condition.
  if (const auto tau = sign_witness(nl)) {
    rep.tau2 = *tau;
    rep.condition_iii = true;
  }
  rep.passed = rep.condition_i && rep.condition_ii && rep.condition_iii;
  return rep;
}

// ---------------------------------------------------------------- Ricceri

GridFunction plateau_function(const DomainPtr& domain, double tau, double fraction) {
  const Box& box = domain->omega();
  return GridFunction::sample(domain, [&](double x, double y) {
    double v = tau;
    const double c[2] = {x, y};
    for (int a = 0; a < box.dim; ++a) {
      const double width = box.hi[a] - box.lo[a];
      const double ramp = 0.5 * (1.0 - fraction) * width;
      const double dist = std::min(c[a] - box.lo[a], box.hi[a] - c[a]);
      if (dist <= 0.0) return 0.0;
      v *= ramp > 0.0 ? std::min(1.0, dist / ramp) : 1.0;
    }
    return v;
  });
}

RicceriEstimate estimate_ricceri(const EnergyPsi& energy, const RicceriOptions& options) {
  const auto& dom = energy.domain();
  std::mt19937_64 rng(options.seed);
  RicceriEstimate est;
  est.ratio_small = -kInf;
  est.ratio_large = -kInf;
  bool found = false;
  double best = -kInf;

  auto consider = [&](const GridFunction& u) {
    const double Fu = energy.F(u);
    const double Ju = energy.J(u);
    if (!(Ju > 0.0)) return -kInf;
    const double r = Fu / Ju;
    if (Fu > 0.0 && r > best) {
      best = r;
      est.best = u;
      found = true;
    }
    return r;
  };

  std::vector<GridFunction> dirs;
  for (int k = 0; k < options.directions; ++k) {
    GridFunction v = random_smooth_field(dom, rng);
    const double nv = energy.x_norm(v);
    if (nv > 0.0) dirs.push_back((1.0 / nv) * v);
  }
  for (const auto& v : dirs) {
    for (double r : {1e-4, 1e-3, 1e-2}) {
      const double q = consider(r * v);
      if (r == 1e-4) est.ratio_small = std::max(est.ratio_small, q);
    }
    for (double r : {1e2, 1e3, 1e4}) {
      const double q = consider(r * v);
      if (r == 1e4) est.ratio_large = std::max(est.ratio_large, q);
    }
    for (double r : log_grid(1e-3, 1e3, 25)) consider(r * v);
  }
  est.alpha_hat = std::max({0.0, est.ratio_small, est.ratio_large});

  std::vector<double> taus = log_grid(1e-2, 1e2, 41);
  taus.push_back(std::numbers::pi / 2.0);
  for (double tau : taus) {
    for (double frac : {0.25, 0.5, 0.75, 0.9}) {
      consider(plateau_function(dom, tau, frac));
      consider(plateau_function(dom, -tau, frac));
    }
  }
  if (!found) throw NoPositiveF("no sampled function has F(u) > 0");

  std::normal_distribution<double> normal(0.0, 1.0);
  double sigma = 0.1;
  for (int step = 0; step < options.refine_steps; ++step) {
    const GridFunction base = est.best;
    const double amp = std::max(base.values().cwiseAbs().maxCoeff(), 1e-12);
    GridFunction cand = (step % 2 == 0)
                            ? base + (sigma * amp) * random_smooth_field(dom, rng)
                            : (1.0 + sigma * normal(rng)) * base;
    const double before = best;
    consider(cand);
    sigma = best > before ? std::min(1.0, sigma * 1.5) : std::max(1e-4, sigma * 0.9);
  }
  est.beta_hat = best;
  est.delta_hat = 1.0 / best;
  return est;
}

// ---------------------------------------------------------------- deflation

std::optional<Eigen::VectorXd> deflated_newton(const DeflationSystem& sys, Eigen::VectorXd x,
                                               const std::vector<Eigen::VectorXd>& known,
                                               double tol, int max_iter) {
  // log m(x) and grad log m(x) for m = prod_k (1 + d_k^{-p}).
  auto deflation = [&](const Eigen::VectorXd& y, Eigen::VectorXd* grad) -> std::optional<double> {
    double logm = 0.0;
    if (grad != nullptr) grad->setZero(y.size());
    for (const auto& r : known) {
      const double d = sys.distance(y, r);
      if (!(d > 0.0)) return std::nullopt;
      const double dm = std::pow(d, -sys.power);
      logm += std::log1p(dm);
      if (grad != nullptr) {
        *grad -= (sys.power * dm / d / (1.0 + dm)) * sys.distance_gradient(y, r);
      }
    }
    return logm;
  };

  int stalls = 0;
  for (int it = 0; it < max_iter; ++it) {
    const Eigen::VectorXd R = sys.residual(x);
    const double rn = R.norm();
    if (!std::isfinite(rn)) return std::nullopt;
    if (rn <= tol * sys.scale(x)) return x;

    const Eigen::VectorXd delta = -sys.jacobian(x).partialPivLu().solve(R);
    if (!delta.allFinite()) return std::nullopt;
    Eigen::VectorXd glogm;
    const auto logm = deflation(x, &glogm);
    if (!logm) return std::nullopt;
    const double den = 1.0 - glogm.dot(delta);
    const Eigen::VectorXd step = std::abs(den) > 1e-12 ? Eigen::VectorXd(delta / den) : delta;

    const double merit = std::log(rn) + *logm;
    double alpha = 1.0;
    bool accepted = false;
    Eigen::VectorXd trial;
    for (int k = 0; k < 12; ++k, alpha *= 0.5) {
      trial = x + alpha * step;
      const double rt = sys.residual(trial).norm();
      const auto lm = deflation(trial, nullptr);
      if (!lm || !std::isfinite(rt)) continue;
      if (rt == 0.0 || std::log(rt) + *lm < merit) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (++stalls >= 5) return std::nullopt;
    } else {
      stalls = 0;
    }
    x = trial;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- search

std::size_t CriticalSearchResult::count_nonzero() const {
  return static_cast<std::size_t>(
      std::count_if(points.begin(), points.end(), [](const CriticalPoint& p) { return !p.is_zero; }));
}

double CriticalSearchResult::max_x_norm() const {
  double m = 0.0;
  for (const auto& p : points) m = std::max(m, p.x_norm);
  return m;
}

namespace {

/// Armijo descent on Psi with Barzilai-Borwein trial steps. Returns nothing
/// when the iterate blows up.
std::optional<GridFunction> descend(const EnergyPsi& E, GridFunction u, double lambda, double mu,
                                    int max_iter, double tol) {
  double psi = E.psi(u, lambda, mu);
  Eigen::VectorXd g = E.grad_psi(u, lambda, mu);
  double alpha = 1e-2 * std::max(1.0, u.values().norm()) / std::max(g.norm(), 1e-300);
  Eigen::VectorXd prev_u, prev_g;
  for (int it = 0; it < max_iter; ++it) {
    if (E.relative_residual(u, lambda, mu) < tol) break;
    if (prev_u.size() > 0) {
      const Eigen::VectorXd s = u.values() - prev_u;
      const Eigen::VectorXd y = g - prev_g;
      const double sy = s.dot(y);
      if (sy > 0.0) alpha = s.squaredNorm() / sy;
    }
    const double gg = g.squaredNorm();
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(psi);
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt, alpha *= 0.5) {
      GridFunction trial(u.domain_ptr(), u.values() - alpha * g);
      const double pt = E.psi(trial, lambda, mu);
      if (std::isfinite(pt) && pt <= psi - 1e-4 * alpha * gg + slack) {
        prev_u = u.values();
        prev_g = g;
        u = std::move(trial);
        psi = pt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    if (!(u.values().cwiseAbs().maxCoeff() < 1e8)) return std::nullopt;
    g = E.grad_psi(u, lambda, mu);
  }
  return u;
}

}  // namespace

CriticalSearchResult find_critical_points(const EnergyPsi& E, double lambda, double mu,
                                          const CriticalSearchOptions& opt) {
  if (!(lambda > 0.0)) throw InvalidParams("lambda must be positive");
  if (mu < 0.0) throw InvalidParams("mu must be nonnegative");
  const auto& dom = E.domain();
  CriticalSearchResult out;

  auto make_point = [&](const GridFunction& u) {
    CriticalPoint p;
    p.u = u;
    p.psi = E.psi(u, lambda, mu);
    p.gradient_residual = E.relative_residual(u, lambda, mu);
    p.x_norm = E.x_norm(u);
    p.is_zero = u.values().isZero(0.0);
    return p;
  };
  auto try_accept = [&](const GridFunction& u) {
    if (!u.values().allFinite()) return false;
    if (!(E.relative_residual(u, lambda, mu) < opt.tol)) return false;
    for (const auto& p : out.points) {
      if (!(E.x_norm(u - p.u) > opt.separation)) return false;
    }
    out.points.push_back(make_point(u));
    return true;
  };

  if (E.f().f(0.0) == 0.0 && E.h().f(0.0) == 0.0) try_accept(GridFunction(dom));

  DeflationSystem sys;
  auto as_grid = [&](const Eigen::VectorXd& x) { return GridFunction(dom, x); };
  sys.residual = [&](const Eigen::VectorXd& x) { return E.grad_psi(as_grid(x), lambda, mu); };
  sys.jacobian = [&](const Eigen::VectorXd& x) { return E.hessian_psi(as_grid(x), lambda, mu); };
  sys.scale = [&](const Eigen::VectorXd& x) {
    const GridFunction u = as_grid(x);
    const double s = E.grad_J(u).norm() + lambda * E.grad_F(u).norm() + mu * E.grad_H(u).norm();
    return s > 0.0 ? s : 1.0;
  };
  sys.distance = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return E.x_norm(as_grid(x - y));
  };
  sys.distance_gradient = [&](const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
    return gradient_x_norm(E.young(), as_grid(x - y), E.beta());
  };
  sys.power = E.young().p_minus();

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> decade(-1.0, 1.0);
  std::vector<GridFunction> starts;
  for (int k = 0; k < opt.starts; ++k) {
    GridFunction v = random_smooth_field(dom, rng);
    const double amp = std::pow(10.0, decade(rng));
    starts.push_back((amp / std::max(v.values().cwiseAbs().maxCoeff(), 1e-300)) * v);
  }

  const int batch = std::max(1, opt.batch);
  for (std::size_t b0 = 0; b0 < starts.size(); b0 += static_cast<std::size_t>(batch)) {
    std::vector<Eigen::VectorXd> snapshot;
    for (const auto& p : out.points) snapshot.push_back(p.u.values());
    const std::size_t b1 = std::min(starts.size(), b0 + static_cast<std::size_t>(batch));
    for (std::size_t k = b0; k < b1; ++k) {
      ++out.starts_tried;
      bool accepted = false;
      if (auto u = descend(E, starts[k], lambda, mu, opt.descent_iters, opt.descent_tol)) {
        if (auto root = deflated_newton(sys, u->values(), snapshot, opt.tol, opt.newton_iters)) {
          accepted = try_accept(as_grid(*root));
        }
      }
      if (!accepted) {
        if (auto root = deflated_newton(sys, starts[k].values(), snapshot, opt.tol, opt.newton_iters)) {
          accepted = try_accept(as_grid(*root));
        }
      }
      if (!accepted) ++out.rejected;
    }
  }
  return out;
}

std::vector<SweepRow> multiplicity_sweep(const EnergyPsi& energy,
                                         const std::vector<double>& lambdas, double mu,
                                         const CriticalSearchOptions& options) {
  std::vector<SweepRow> rows;
  for (double lambda : lambdas) rows.push_back({lambda, find_critical_points(energy, lambda, mu, options)});
  return rows;
}

}  // namespace orlicz
