#ifndef ORLICZ_YOUNG_HPP
#define ORLICZ_YOUNG_HPP

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace orlicz {

enum class YoungFamily { power, power_log, sum_of_powers, piecewise_power, tabulated };

std::string_view to_string(YoungFamily family);
YoungFamily parse_young_family(std::string_view name);

/// Evaluators backing a Young function. Implementations must be immutable.
///
/// `ratio(t)` is the elasticity t g(t) / G(t); families with a closed form
/// override it so that powers report their exponent exactly.
class YoungModel {
 public:
  virtual ~YoungModel() = default;
  virtual double G(double t) const = 0;
  virtual double g(double t) const = 0;
  /// Derivative of g. Defaults to a central difference.
  virtual double dg(double t) const;
  virtual double ratio(double t) const { return t * g(t) / G(t); }
  /// Abscissae where g is only piecewise smooth (used when sampling).
  virtual std::vector<double> breakpoints() const { return {}; }
};

/// A Young function G(t) = int_0^t g, together with its Simonenko indices
///   p_minus <= t g(t) / G(t) <= p_plus.
/// Cheap to copy; the evaluators are shared and thread safe.
class YoungFunction {
 public:
  YoungFunction(std::shared_ptr<const YoungModel> model, YoungFamily family,
                std::vector<double> params, double p_minus, double p_plus);

  double G(double t) const { return model_->G(t); }
  double g(double t) const { return model_->g(t); }
  double dg(double t) const { return model_->dg(t); }
  double ratio(double t) const { return model_->ratio(t); }

  double p_minus() const { return p_minus_; }
  double p_plus() const { return p_plus_; }
  YoungFamily family() const { return family_; }
  std::span<const double> params() const { return params_; }
  const YoungModel& model() const { return *model_; }
  std::string describe() const;

 private:
  std::shared_ptr<const YoungModel> model_;
  YoungFamily family_;
  std::vector<double> params_;
  double p_minus_;
  double p_plus_;
};

/// Builds a Young function of a named family.
///
///   power           {p}        G = t^p / p
///   power_log       {p}        G = t^p log(1 + t), indices (p, p + 1)
///   sum_of_powers   {p1, ...}  G = sum t^{p_i}
///   piecewise_power {a, b}     G = t^a / a on [0,1], t^b / b + 1/a - 1/b beyond
///   tabulated       {t1, g1, t2, g2, ...}  g piecewise linear through (0,0)
///                   and the knots, extended with the last slope
///
/// Throws InvalidParams when the result has p_minus <= 1 or g is not
/// nondecreasing on the validation grid.
YoungFunction make_young(YoungFamily family, std::span<const double> params);
YoungFunction make_young(std::string_view family, std::span<const double> params);

std::vector<double> log_grid(double lo, double hi, std::size_t count);

struct IndexEstimate {
  double p_minus;
  double p_plus;
  /// Largest jump of the ratio between neighbouring samples; the true
  /// extrema may lie outside [p_minus, p_plus] by about this much.
  double slack;
};

/// Sampled inf / sup of t g(t) / G(t). The grid must cover [1e-6, 1e6]
/// with at least 1000 points.
IndexEstimate compute_indices(const YoungFunction& young, std::span<const double> t_grid);
IndexEstimate compute_indices(const YoungFunction& young);

/// G^{-1}(v) by bisection to full double precision.
double inverse_G(const YoungFunction& young, double v);
/// g^{-1}(v) by bisection to full double precision.
double inverse_g(const YoungFunction& young, double v);

/// Complementary function G~(t) = sup_w (t w - G(w)) = int_0^t g^{-1}.
/// Throws NonInvertible when g has a flat stretch.
YoungFunction complementary(const YoungFunction& young);

/// Critical Sobolev function: G*^{-1}(t) = int_0^t G^{-1}(tau) / tau^{(n+s)/n}.
/// Tabulated on 4096 log-spaced points with monotone Hermite interpolation
/// in log-log coordinates. Throws NotSubcritical outside the subcritical range.
YoungFunction critical_sobolev(const YoungFunction& young, int n, double s);

/// min / max of t^{p_minus}, t^{p_plus}.
double xi_minus(double t, double p_minus, double p_plus);
double xi_plus(double t, double p_minus, double p_plus);

struct Witness {
  std::string check;
  double t;
  double value;
};

struct StructureReport {
  bool g1_holds = false;
  bool g2_holds = false;
  bool g3_holds = false;
  double p_minus = 0.0;
  double p_plus = 0.0;
  double delta2_constant = 0.0;
  /// Local log-log exponent of G^{-1}(tau) / tau^{(n+s)/n} near 0 and at infinity.
  double g3_exponent_zero = 0.0;
  double g3_exponent_infinity = 0.0;
  /// Value of the integral over (0, 1] when it converges.
  std::optional<double> g3_integral_zero;
  std::vector<Witness> witnesses;

  std::string to_key_value() const;
  std::string to_json() const;
};

StructureReport check_structure(const YoungFunction& young, int n, double s);

enum class Dominance { stronger, not_stronger, inconclusive };

std::string_view to_string(Dominance verdict);

struct DominanceReport {
  Dominance verdict = Dominance::inconclusive;
  /// One entry per sampled a in {1, 0.5, 0.1, 0.01}: threshold x_a beyond
  /// which A(x) <= B(a x) on every sample, or empty when it never settles.
  std::vector<double> scales;
  std::vector<std::optional<double>> thresholds;
};

/// Decides A << B (A(x) <= B(a x) for large x, every a > 0) by sampling.
DominanceReport essentially_stronger(const YoungFunction& a, const YoungFunction& b);

// Inequality predicates used by the calculus battery. Each returns true
// when the inequality holds up to `rel_slack` relative to its larger side.
bool holds_power_bounds(const YoungFunction& y, double a, double b, double rel_slack);
bool holds_doubling(const YoungFunction& y, double a, double b, double rel_slack);
bool holds_young_inequality(const YoungFunction& y, const YoungFunction& conj, double a,
                            double b, double rel_slack);
bool holds_conjugate_bound(const YoungFunction& y, const YoungFunction& conj, double t,
                           double rel_slack);
bool holds_midpoint_convexity(const YoungFunction& y, double a, double b, double rel_slack);

struct BatteryCount {
  std::string name;
  std::size_t samples = 0;
  std::size_t violations = 0;
};

/// Runs every inequality predicate on `samples` random (a, b, t) triples.
/// The midpoint-convexity check is skipped (zero samples) unless the
/// structure condition on G(sqrt t) holds.
std::vector<BatteryCount> run_young_battery(const YoungFunction& y, std::size_t samples,
                                            unsigned long long seed, double rel_slack = 1e-10);

}  // namespace orlicz

#endif  // ORLICZ_YOUNG_HPP
