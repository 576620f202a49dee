#include "orlicz/young.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "orlicz/errors.hpp"
#include "numerics.hpp"

namespace orlicz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class PowerModel final : public YoungModel {
 public:
  explicit PowerModel(double p) : p_(p), quadratic_(p == 2.0) {}
  double G(double t) const override { return quadratic_ ? 0.5 * t * t : std::pow(t, p_) / p_; }
  double g(double t) const override { return quadratic_ ? t : std::pow(t, p_ - 1.0); }
  double dg(double t) const override {
    if (t == 0.0) return p_ > 2.0 ? 0.0 : (p_ == 2.0 ? 1.0 : kInf);
    return (p_ - 1.0) * std::pow(t, p_ - 2.0);
  }
  double ratio(double) const override { return p_; }

 private:
  double p_;
  bool quadratic_;
};

class PowerLogModel final : public YoungModel {
 public:
  explicit PowerLogModel(double p) : p_(p) {}
  double G(double t) const override { return std::pow(t, p_) * std::log1p(t); }
  double g(double t) const override {
    return p_ * std::pow(t, p_ - 1.0) * std::log1p(t) + std::pow(t, p_) / (1.0 + t);
  }
  double dg(double t) const override {
    if (t == 0.0) return 0.0;
    const double l = std::log1p(t);
    return p_ * (p_ - 1.0) * std::pow(t, p_ - 2.0) * l +
           2.0 * p_ * std::pow(t, p_ - 1.0) / (1.0 + t) - std::pow(t, p_) / ((1.0 + t) * (1.0 + t));
  }
  double ratio(double t) const override {
    // t / log1p(t) -> 1 as t -> 0
    const double q = t < 1e-12 ? 1.0 - 0.5 * t : t / std::log1p(t);
    return p_ + q / (1.0 + t);
  }

 private:
  double p_;
};

class SumOfPowersModel final : public YoungModel {
 public:
  explicit SumOfPowersModel(std::vector<double> p) : p_(std::move(p)) {}
  double G(double t) const override {
    double s = 0.0;
    for (double p : p_) s += std::pow(t, p);
    return s;
  }
  double g(double t) const override {
    double s = 0.0;
    for (double p : p_) s += p * std::pow(t, p - 1.0);
    return s;
  }
  double dg(double t) const override {
    double s = 0.0;
    for (double p : p_) {
      if (t == 0.0) {
        s += p > 2.0 ? 0.0 : (p == 2.0 ? 2.0 : kInf);
      } else {
        s += p * (p - 1.0) * std::pow(t, p - 2.0);
      }
    }
    return s;
  }
  double ratio(double t) const override {
    double num = 0.0, den = 0.0;
    for (double p : p_) {
      const double v = std::pow(t, p);
      num += p * v;
      den += v;
    }
    return num / den;
  }

 private:
  std::vector<double> p_;
};

class PiecewisePowerModel final : public YoungModel {
 public:
  PiecewisePowerModel(double a, double b) : a_(a), b_(b) {}
  double G(double t) const override {
    if (t <= 1.0) return std::pow(t, a_) / a_;
    return std::pow(t, b_) / b_ + 1.0 / a_ - 1.0 / b_;
  }
  double g(double t) const override { return std::pow(t, (t <= 1.0 ? a_ : b_) - 1.0); }
  double dg(double t) const override {
    const double e = t <= 1.0 ? a_ : b_;
    if (t == 0.0) return e > 2.0 ? 0.0 : (e == 2.0 ? 1.0 : kInf);
    return (e - 1.0) * std::pow(t, e - 2.0);
  }
  double ratio(double t) const override {
    if (t <= 1.0) return a_;
    return std::pow(t, b_) / G(t);
  }
  std::vector<double> breakpoints() const override { return {1.0}; }

 private:
  double a_;
  double b_;
};

/// g piecewise linear through (0,0) and the knots, continued with the last slope.
class PiecewiseLinearDerivativeModel final : public YoungModel {
 public:
  PiecewiseLinearDerivativeModel(std::vector<double> t, std::vector<double> g)
      : t_(std::move(t)), g_(std::move(g)), G_(t_.size(), 0.0) {
    for (std::size_t k = 1; k < t_.size(); ++k) {
      G_[k] = G_[k - 1] + 0.5 * (g_[k] + g_[k - 1]) * (t_[k] - t_[k - 1]);
    }
    const std::size_t last = t_.size() - 1;
    tail_slope_ = (g_[last] - g_[last - 1]) / (t_[last] - t_[last - 1]);
  }
  double G(double t) const override {
    const std::size_t k = segment(t);
    const double dt = t - t_[k];
    return G_[k] + g_[k] * dt + 0.5 * slope(k) * dt * dt;
  }
  double g(double t) const override {
    const std::size_t k = segment(t);
    return g_[k] + slope(k) * (t - t_[k]);
  }
  double dg(double t) const override { return slope(segment(t)); }
  std::vector<double> breakpoints() const override {
    return {t_.begin() + 1, t_.end()};
  }
  double tail_slope() const { return tail_slope_; }

 private:
  std::size_t segment(double t) const {
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    if (it == t_.begin()) return 0;
    return static_cast<std::size_t>(it - t_.begin()) - 1;
  }
  double slope(std::size_t k) const {
    if (k + 1 >= t_.size()) return tail_slope_;
    return (g_[k + 1] - g_[k]) / (t_[k + 1] - t_[k]);
  }

  std::vector<double> t_;
  std::vector<double> g_;
  std::vector<double> G_;
  double tail_slope_ = 0.0;
};

class ComplementaryModel final : public YoungModel {
 public:
  explicit ComplementaryModel(YoungFunction parent) : parent_(std::move(parent)) {}
  double G(double b) const override {
    if (b <= 0.0) return 0.0;
    const double w = inverse_g(parent_, b);
    // Legendre identity: b w - G(w) = G(w) (r(w) - 1) with r = t g / G.
    return parent_.G(w) * (parent_.ratio(w) - 1.0);
  }
  double g(double b) const override { return b <= 0.0 ? 0.0 : inverse_g(parent_, b); }
  double dg(double b) const override {
    const double w = g(b);
    const double d = parent_.dg(w);
    return d == 0.0 ? kInf : 1.0 / d;
  }
  double ratio(double b) const override {
    const double r = parent_.ratio(inverse_g(parent_, b));
    return r / (r - 1.0);
  }

 private:
  YoungFunction parent_;
};

/// Monotone cubic Hermite interpolant of Y(X) in log-log coordinates,
/// extrapolated linearly (power law) past both ends.
class LogLogTableModel final : public YoungModel {
 public:
  LogLogTableModel(std::vector<double> X, std::vector<double> Y, std::vector<double> m)
      : X_(std::move(X)), Y_(std::move(Y)), m_(std::move(m)) {
    // Fritsch-Carlson limiter.
    for (std::size_t k = 0; k + 1 < X_.size(); ++k) {
      const double delta = (Y_[k + 1] - Y_[k]) / (X_[k + 1] - X_[k]);
      if (delta <= 0.0) {
        m_[k] = m_[k + 1] = 0.0;
        continue;
      }
      const double a = m_[k] / delta;
      const double b = m_[k + 1] / delta;
      const double r = a * a + b * b;
      if (r > 9.0) {
        const double tau = 3.0 / std::sqrt(r);
        m_[k] = tau * a * delta;
        m_[k + 1] = tau * b * delta;
      }
    }
  }
  double G(double t) const override {
    if (t <= 0.0) return 0.0;
    return std::exp(eval(std::log(t)).first);
  }
  double g(double t) const override {
    if (t <= 0.0) return 0.0;
    const auto [y, dy] = eval(std::log(t));
    return std::exp(y) / t * dy;
  }
  double ratio(double t) const override { return eval(std::log(t)).second; }

  std::pair<double, double> slope_range() const {
    const auto [lo, hi] = std::minmax_element(m_.begin(), m_.end());
    return {*lo, *hi};
  }

 private:
  std::pair<double, double> eval(double x) const {
    const std::size_t n = X_.size();
    if (x <= X_.front()) return {Y_.front() + m_.front() * (x - X_.front()), m_.front()};
    if (x >= X_.back()) return {Y_.back() + m_.back() * (x - X_.back()), m_.back()};
    const auto it = std::upper_bound(X_.begin(), X_.end(), x);
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(it - X_.begin()) - 1, n - 2);
    const double h = X_[k + 1] - X_[k];
    const double u = (x - X_[k]) / h;
    const double u2 = u * u, u3 = u2 * u;
    const double h00 = 2 * u3 - 3 * u2 + 1, h10 = u3 - 2 * u2 + u;
    const double h01 = -2 * u3 + 3 * u2, h11 = u3 - u2;
    const double y = h00 * Y_[k] + h10 * h * m_[k] + h01 * Y_[k + 1] + h11 * h * m_[k + 1];
    const double d00 = 6 * u2 - 6 * u, d10 = 3 * u2 - 4 * u + 1;
    const double d01 = -6 * u2 + 6 * u, d11 = 3 * u2 - 2 * u;
    const double dy = (d00 * Y_[k] + d01 * Y_[k + 1]) / h + d10 * m_[k] + d11 * m_[k + 1];
    return {y, dy};
  }

  std::vector<double> X_;
  std::vector<double> Y_;
  std::vector<double> m_;
};

std::vector<double> validation_grid(const YoungModel& model) {
  std::vector<double> grid = log_grid(1e-6, 1e6, 1000);
  for (double b : model.breakpoints()) {
    grid.push_back(b);
    grid.push_back(b * (1.0 - 1e-9));
    grid.push_back(b * (1.0 + 1e-9));
  }
  std::sort(grid.begin(), grid.end());
  return grid;
}

void validate_monotone_g(const YoungModel& model) {
  const auto grid = validation_grid(model);
  double prev = 0.0;
  for (double t : grid) {
    const double G = model.G(t);
    const double g = model.g(t);
    if (!(G > 0.0) || !(g > 0.0) || !std::isfinite(G) || !std::isfinite(g)) {
      throw InvalidParams(fmt::format("G or g not positive and finite at t={:g}", t));
    }
    if (g < prev * (1.0 - 1e-12)) {
      throw InvalidParams(fmt::format("g decreases at t={:g}", t));
    }
    prev = g;
  }
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParams(what);
}

/// Local log-log slope of f over one decade centred at x.
template <class F>
double local_exponent(F&& f, double x) {
  const double lo = x / std::sqrt(10.0);
  const double hi = x * std::sqrt(10.0);
  return (std::log(f(hi)) - std::log(f(lo))) / std::log(hi / lo);
}

/// int_{x0}^{x1} f over log-spaced panels with 5-point Gauss-Legendre in log x.
template <class F>
double log_quadrature(F&& f, double x0, double x1, std::size_t panels) {
  const double u0 = std::log(x0), u1 = std::log(x1);
  const double du = (u1 - u0) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t k = 0; k < panels; ++k) {
    const double a = u0 + du * static_cast<double>(k);
    total += detail::gauss_legendre5([&](double u) { const double x = std::exp(u); return f(x) * x; },
                                     a, a + du);
  }
  return total;
}

bool sqrt_convexity_holds(const YoungFunction& y, std::vector<Witness>* witnesses) {
  const auto t = log_grid(1e-12, 1e12, 2000);
  std::vector<double> phi(t.size());
  for (std::size_t k = 0; k < t.size(); ++k) phi[k] = y.G(std::sqrt(t[k]));
  bool ok = true;
  double worst = 0.0, worst_t = 0.0;
  double prev_slope = (phi[1] - phi[0]) / (t[1] - t[0]);
  for (std::size_t k = 1; k + 1 < t.size(); ++k) {
    const double slope = (phi[k + 1] - phi[k]) / (t[k + 1] - t[k]);
    const double drop = (prev_slope - slope) / std::max(std::abs(prev_slope), 1e-300);
    if (drop > 1e-9) {
      ok = false;
      if (drop > worst) {
        worst = drop;
        worst_t = t[k];
      }
    }
    prev_slope = slope;
  }
  if (!ok && witnesses != nullptr) {
    witnesses->push_back({"g2", worst_t, -worst});
  }
  return ok;
}

}  // namespace

double YoungModel::dg(double t) const {
  const double h = std::max(std::abs(t), 1e-8) * 1e-6;
  const double lo = std::max(0.0, t - h);
  return (g(t + h) - g(lo)) / (t + h - lo);
}

std::string_view to_string(YoungFamily family) {
  switch (family) {
    case YoungFamily::power: return "power";
    case YoungFamily::power_log: return "power_log";
    case YoungFamily::sum_of_powers: return "sum_of_powers";
    case YoungFamily::piecewise_power: return "piecewise_power";
    case YoungFamily::tabulated: return "tabulated";
  }
  return "unknown";
}

YoungFamily parse_young_family(std::string_view name) {
  for (auto f : {YoungFamily::power, YoungFamily::power_log, YoungFamily::sum_of_powers,
                 YoungFamily::piecewise_power, YoungFamily::tabulated}) {
    if (to_string(f) == name) return f;
  }
  throw InvalidParams(fmt::format("unknown Young family '{}'", name));
}

YoungFunction::YoungFunction(std::shared_ptr<const YoungModel> model, YoungFamily family,
                             std::vector<double> params, double p_minus, double p_plus)
    : model_(std::move(model)),
      family_(family),
      params_(std::move(params)),
      p_minus_(p_minus),
      p_plus_(p_plus) {
  if (!model_) throw InvalidParams("null model");
  if (!(p_minus_ > 1.0) || !(p_plus_ >= p_minus_) || !std::isfinite(p_plus_)) {
    throw InvalidParams(fmt::format("indices must satisfy 1 < p- <= p+ < inf, got ({}, {})",
                                    p_minus_, p_plus_));
  }
}

std::string YoungFunction::describe() const {
  std::string s(to_string(family_));
  s += "(";
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (i > 0) s += ",";
    s += fmt::format("{:g}", params_[i]);
  }
  s += ")";
  return s;
}

std::vector<double> log_grid(double lo, double hi, std::size_t count) {
  std::vector<double> grid(count);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t k = 0; k < count; ++k) {
    grid[k] = std::exp(a + (b - a) * static_cast<double>(k) / static_cast<double>(count - 1));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

YoungFunction make_young(YoungFamily family, std::span<const double> params) {
  std::vector<double> p(params.begin(), params.end());
  switch (family) {
    case YoungFamily::power: {
      require(p.size() == 1, "power takes one exponent");
      require(p[0] > 1.0, fmt::format("power exponent must exceed 1, got {}", p[0]));
      auto model = std::make_shared<PowerModel>(p[0]);
      return {model, family, p, p[0], p[0]};
    }
    case YoungFamily::power_log: {
      require(p.size() == 1, "power_log takes one exponent");
      require(p[0] > 1.0, fmt::format("power_log exponent must exceed 1, got {}", p[0]));
      auto model = std::make_shared<PowerLogModel>(p[0]);
      validate_monotone_g(*model);
      return {model, family, p, p[0], p[0] + 1.0};
    }
    case YoungFamily::sum_of_powers: {
      require(!p.empty(), "sum_of_powers needs at least one exponent");
      for (double e : p) require(e > 1.0, fmt::format("exponent must exceed 1, got {}", e));
      const auto [lo, hi] = std::minmax_element(p.begin(), p.end());
      const double pm = *lo, pp = *hi;
      auto model = std::make_shared<SumOfPowersModel>(p);
      return {model, family, p, pm, pp};
    }
    case YoungFamily::piecewise_power: {
      require(p.size() == 2, "piecewise_power takes two exponents");
      require(p[0] > 1.0 && p[1] > 1.0, "piecewise exponents must exceed 1");
      auto model = std::make_shared<PiecewisePowerModel>(p[0], p[1]);
      return {model, family, p, std::min(p[0], p[1]), std::max(p[0], p[1])};
    }
    case YoungFamily::tabulated: {
      require(p.size() >= 4 && p.size() % 2 == 0, "tabulated takes (t, g) pairs, at least two");
      std::vector<double> t{0.0}, g{0.0};
      for (std::size_t k = 0; k < p.size(); k += 2) {
        require(p[k] > t.back(), "tabulated abscissae must increase from 0");
        require(p[k + 1] >= g.back(), "tabulated g must be nondecreasing");
        t.push_back(p[k]);
        g.push_back(p[k + 1]);
      }
      require(g[1] > 0.0, "tabulated g must be positive for t > 0");
      auto model = std::make_shared<PiecewiseLinearDerivativeModel>(t, g);
      require(model->tail_slope() > 0.0, "tabulated g must grow without bound");
      validate_monotone_g(*model);
      double pm = kInf, pp = 0.0;
      for (double x : validation_grid(*model)) {
        const double r = model->ratio(x);
        pm = std::min(pm, r);
        pp = std::max(pp, r);
      }
      require(pm > 1.0, fmt::format("tabulated lower index {} must exceed 1", pm));
      return {model, family, p, pm, pp};
    }
  }
  throw InvalidParams("unknown family");
}

YoungFunction make_young(std::string_view family, std::span<const double> params) {
  return make_young(parse_young_family(family), params);
}

IndexEstimate compute_indices(const YoungFunction& young, std::span<const double> t_grid) {
  if (t_grid.size() < 1000 || t_grid.front() > 1e-6 * (1 + 1e-9) ||
      t_grid.back() < 1e6 * (1 - 1e-9)) {
    throw InvalidParams("index grid must span [1e-6, 1e6] with at least 1000 points");
  }
  IndexEstimate est{kInf, -kInf, 0.0};
  double prev = std::numeric_limits<double>::quiet_NaN();
  for (double t : t_grid) {
    if (t <= 0.0) continue;
    if (!(young.G(t) > 0.0)) throw DegenerateRatio(fmt::format("G({:g}) = 0", t));
    const double r = young.ratio(t);
    est.p_minus = std::min(est.p_minus, r);
    est.p_plus = std::max(est.p_plus, r);
    if (!std::isnan(prev)) est.slack = std::max(est.slack, std::abs(r - prev));
    prev = r;
  }
  return est;
}

IndexEstimate compute_indices(const YoungFunction& young) {
  return compute_indices(young, log_grid(1e-6, 1e6, 1000));
}

double inverse_G(const YoungFunction& young, double v) {
  return detail::invert_increasing([&](double t) { return young.G(t); }, v);
}

double inverse_g(const YoungFunction& young, double v) {
  return detail::invert_increasing([&](double t) { return young.g(t); }, v);
}

YoungFunction complementary(const YoungFunction& young) {
  std::vector<double> grid = log_grid(1e-8, 1e8, 4000);
  const auto bps = young.model().breakpoints();
  for (std::size_t k = 0; k < bps.size(); ++k) {
    grid.push_back(bps[k]);
    if (k + 1 < bps.size()) grid.push_back(0.5 * (bps[k] + bps[k + 1]));
  }
  std::sort(grid.begin(), grid.end());
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    if (grid[k + 1] - grid[k] > 1e-12 && !(young.g(grid[k + 1]) > young.g(grid[k]))) {
      throw NonInvertible(
          fmt::format("g is flat on [{:g}, {:g}]", grid[k], grid[k + 1]));
    }
  }
  const double pm = young.p_plus() / (young.p_plus() - 1.0);
  const double pp = young.p_minus() / (young.p_minus() - 1.0);
  return {std::make_shared<ComplementaryModel>(young), young.family(),
          {young.params().begin(), young.params().end()}, pm, pp};
}

YoungFunction critical_sobolev(const YoungFunction& young, int n, double s) {
  if (n < 1 || !(s > 0.0 && s < 1.0)) throw InvalidParams("need n >= 1 and s in (0,1)");
  const double a = (static_cast<double>(n) + s) / static_cast<double>(n);
  auto integrand = [&](double tau) { return inverse_G(young, tau) * std::pow(tau, -a); };

  constexpr double tau_min = 1e-40, tau_max = 1e40;
  constexpr std::size_t table = 4096;
  const double e0 = local_exponent(integrand, tau_min);
  if (!(e0 > -1.0 + 1e-6)) {
    throw NotSubcritical(fmt::format(
        "integral near 0 diverges: integrand exponent {:.6f} <= -1", e0));
  }
  const double einf = local_exponent(integrand, tau_max);
  if (einf < -1.0 - 1e-6) {
    throw NotSubcritical(fmt::format(
        "integral at infinity converges: integrand exponent {:.6f} < -1", einf));
  }

  const auto tau = log_grid(tau_min, tau_max, table);
  std::vector<double> H(table);
  H[0] = tau_min * integrand(tau_min) / (e0 + 1.0);
  for (std::size_t k = 0; k + 1 < table; ++k) {
    H[k + 1] = H[k] + log_quadrature(integrand, tau[k], tau[k + 1], 1);
  }
  std::vector<double> X(table), Y(table), m(table);
  for (std::size_t k = 0; k < table; ++k) {
    X[k] = std::log(H[k]);
    Y[k] = std::log(tau[k]);
    m[k] = H[k] / (tau[k] * integrand(tau[k]));
  }
  auto model = std::make_shared<LogLogTableModel>(std::move(X), std::move(Y), std::move(m));
  const auto [pm, pp] = model->slope_range();
  if (!(pm > 1.0)) throw InvalidParams(fmt::format("critical function index {} <= 1", pm));
  return {model, YoungFamily::tabulated, {}, pm, pp};
}

double xi_minus(double t, double p_minus, double p_plus) {
  return std::min(std::pow(t, p_minus), std::pow(t, p_plus));
}

double xi_plus(double t, double p_minus, double p_plus) {
  return std::max(std::pow(t, p_minus), std::pow(t, p_plus));
}

StructureReport check_structure(const YoungFunction& young, int n, double s) {
  StructureReport rep;
  rep.p_minus = young.p_minus();
  rep.p_plus = young.p_plus();
  rep.delta2_constant = std::pow(2.0, young.p_plus());

  // (G1)
  rep.g1_holds = young.p_minus() > 1.0;
  double worst_lo = 0.0, worst_hi = 0.0;
  std::optional<Witness> lo_w, hi_w;
  for (double t : validation_grid(young.model())) {
    const double r = young.ratio(t);
    const double below = young.p_minus() * (1.0 - 1e-9) - r;
    const double above = r - young.p_plus() * (1.0 + 1e-9);
    if (below > worst_lo) {
      worst_lo = below;
      lo_w = Witness{"g1", t, r};
    }
    if (above > worst_hi) {
      worst_hi = above;
      hi_w = Witness{"g1", t, r};
    }
  }
  if (lo_w) rep.witnesses.push_back(*lo_w);
  if (hi_w) rep.witnesses.push_back(*hi_w);
  if (lo_w || hi_w) rep.g1_holds = false;

  // (G2)
  rep.g2_holds = sqrt_convexity_holds(young, &rep.witnesses);

  // (G3)
  const double a = (static_cast<double>(n) + s) / static_cast<double>(n);
  auto integrand = [&](double tau) { return inverse_G(young, tau) * std::pow(tau, -a); };
  rep.g3_exponent_zero = local_exponent(integrand, 1e-30);
  rep.g3_exponent_infinity = local_exponent(integrand, 1e30);
  const bool converges_at_zero = rep.g3_exponent_zero > -1.0 + 1e-6;
  const bool diverges_at_infinity = rep.g3_exponent_infinity >= -1.0 - 1e-6;
  rep.g3_holds = converges_at_zero && diverges_at_infinity;
  if (converges_at_zero) {
    const double head = 1e-30 * integrand(1e-30) / (rep.g3_exponent_zero + 1.0);
    rep.g3_integral_zero = head + log_quadrature(integrand, 1e-30, 1.0, 690);
  }
  if (!converges_at_zero) rep.witnesses.push_back({"g3_zero", 1e-30, rep.g3_exponent_zero});
  if (!diverges_at_infinity) {
    rep.witnesses.push_back({"g3_infinity", 1e30, rep.g3_exponent_infinity});
  }
  return rep;
}

std::string StructureReport::to_key_value() const {
  std::ostringstream os;
  os << "g1_holds=" << (g1_holds ? "true" : "false") << '\n'
     << "g2_holds=" << (g2_holds ? "true" : "false") << '\n'
     << "g3_holds=" << (g3_holds ? "true" : "false") << '\n'
     << fmt::format("p_minus={:.17g}\n", p_minus) << fmt::format("p_plus={:.17g}\n", p_plus)
     << fmt::format("delta2_constant={:.17g}\n", delta2_constant)
     << fmt::format("g3_exponent_zero={:.17g}\n", g3_exponent_zero)
     << fmt::format("g3_exponent_infinity={:.17g}\n", g3_exponent_infinity);
  if (g3_integral_zero) os << fmt::format("g3_integral_zero={:.17g}\n", *g3_integral_zero);
  for (std::size_t i = 0; i < witnesses.size(); ++i) {
    os << fmt::format("witness.{}={} t={:.17g} value={:.17g}\n", i, witnesses[i].check,
                      witnesses[i].t, witnesses[i].value);
  }
  return os.str();
}

std::string StructureReport::to_json() const {
  nlohmann::ordered_json j;
  j["g1_holds"] = g1_holds;
  j["g2_holds"] = g2_holds;
  j["g3_holds"] = g3_holds;
  j["p_minus"] = p_minus;
  j["p_plus"] = p_plus;
  j["delta2_constant"] = delta2_constant;
  j["g3_exponent_zero"] = g3_exponent_zero;
  j["g3_exponent_infinity"] = g3_exponent_infinity;
  j["g3_integral_zero"] = g3_integral_zero ? nlohmann::ordered_json(*g3_integral_zero)
                                           : nlohmann::ordered_json(nullptr);
  auto& w = j["witnesses"] = nlohmann::ordered_json::array();
  for (const auto& x : witnesses) w.push_back({{"check", x.check}, {"t", x.t}, {"value", x.value}});
  return j.dump();
}

std::string_view to_string(Dominance verdict) {
  switch (verdict) {
    case Dominance::stronger: return "stronger";
    case Dominance::not_stronger: return "not_stronger";
    case Dominance::inconclusive: return "inconclusive";
  }
  return "unknown";
}

DominanceReport essentially_stronger(const YoungFunction& a, const YoungFunction& b) {
  const auto x = log_grid(1.0, 1e15, 3000);
  const std::size_t tail_begin = x.size() - x.size() / 20;
  DominanceReport rep;
  bool any_false = false, any_inconclusive = false;
  for (double scale : {1.0, 0.5, 0.1, 0.01}) {
    rep.scales.push_back(scale);
    std::optional<std::size_t> last_fail;
    std::size_t tail_holds = 0;
    for (std::size_t k = 0; k < x.size(); ++k) {
      const double lhs = a.G(x[k]);
      const double rhs = b.G(scale * x[k]);
      const bool ok = lhs <= rhs * (1.0 + 1e-12);
      if (!ok) last_fail = k;
      if (k >= tail_begin && ok) ++tail_holds;
    }
    const std::size_t tail = x.size() - tail_begin;
    if (tail_holds == tail) {
      const std::size_t first = last_fail ? *last_fail + 1 : 0;
      rep.thresholds.emplace_back(x[first]);
    } else {
      rep.thresholds.emplace_back(std::nullopt);
      if (tail_holds == 0) {
        any_false = true;
      } else {
        any_inconclusive = true;
      }
    }
  }
  rep.verdict = any_false ? Dominance::not_stronger
                          : (any_inconclusive ? Dominance::inconclusive : Dominance::stronger);
  return rep;
}

namespace {
bool le(double lhs, double rhs, double rel_slack) {
  return lhs <= rhs + rel_slack * std::max(std::abs(lhs), std::abs(rhs));
}
}  // namespace

bool holds_power_bounds(const YoungFunction& y, double a, double b, double rel_slack) {
  const double Gab = y.G(a * b);
  const double Gb = y.G(b);
  return le(xi_minus(a, y.p_minus(), y.p_plus()) * Gb, Gab, rel_slack) &&
         le(Gab, xi_plus(a, y.p_minus(), y.p_plus()) * Gb, rel_slack);
}

bool holds_doubling(const YoungFunction& y, double a, double b, double rel_slack) {
  return le(y.G(a + b), std::pow(2.0, y.p_plus()) * (y.G(a) + y.G(b)), rel_slack);
}

bool holds_young_inequality(const YoungFunction& y, const YoungFunction& conj, double a,
                            double b, double rel_slack) {
  return le(a * b, y.G(a) + conj.G(b), rel_slack);
}

bool holds_conjugate_bound(const YoungFunction& y, const YoungFunction& conj, double t,
                           double rel_slack) {
  return le(conj.G(y.g(t)), (y.p_plus() + 1.0) * y.G(t), rel_slack);
}

bool holds_midpoint_convexity(const YoungFunction& y, double a, double b, double rel_slack) {
  const double lhs = 0.5 * (y.G(std::abs(a)) + y.G(std::abs(b)));
  const double rhs = y.G(std::abs(0.5 * (a + b))) + y.G(std::abs(0.5 * (a - b)));
  return le(rhs, lhs, rel_slack);
}

std::vector<BatteryCount> run_young_battery(const YoungFunction& y, std::size_t samples,
                                            unsigned long long seed, double rel_slack) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> expo(-4.0, 4.0);
  std::bernoulli_distribution coin(0.5);
  auto draw = [&] { return std::pow(10.0, expo(rng)); };
  const YoungFunction conj = complementary(y);
  const bool g2 = sqrt_convexity_holds(y, nullptr);

  std::vector<BatteryCount> out{{"power_bounds"}, {"doubling"}, {"young_inequality"},
                                {"conjugate_bound"}, {"midpoint_convexity"}};
  for (std::size_t i = 0; i < samples; ++i) {
    const double a = draw(), b = draw(), t = draw();
    auto tally = [](BatteryCount& c, bool ok) {
      ++c.samples;
      if (!ok) ++c.violations;
    };
    tally(out[0], holds_power_bounds(y, a, b, rel_slack));
    tally(out[1], holds_doubling(y, a, b, rel_slack));
    // Half of the Young samples sit on the equality set b = g(a).
    const double bb = coin(rng) ? y.g(a) : b;
    tally(out[2], holds_young_inequality(y, conj, a, bb, rel_slack));
    tally(out[3], holds_conjugate_bound(y, conj, t, rel_slack));
    if (g2) {
      const double sa = coin(rng) ? a : -a;
      const double sb = coin(rng) ? b : -b;
      tally(out[4], holds_midpoint_convexity(y, sa, sb, rel_slack));
    }
  }
  return out;
}

}  // namespace orlicz
