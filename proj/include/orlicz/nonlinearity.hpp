#ifndef ORLICZ_NONLINEARITY_HPP
#define ORLICZ_NONLINEARITY_HPP

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "orlicz/young.hpp"

namespace orlicz {

enum class NonlinearityId { sine_power, sine_young, concave_convex, piecewise_power, custom, zero };

std::string_view to_string(NonlinearityId id);
NonlinearityId parse_nonlinearity(std::string_view name);

/// A nonlinearity f(t) with primitive F(t) = int_0^t f, independent of x,
/// together with the weight w and envelope M of the growth bound
/// |f(t)| <= w (1 + m(|t|)), m = M'.
class Nonlinearity {
 public:
  using Fn = std::function<double(double)>;

  Nonlinearity(NonlinearityId id, std::vector<double> params, Fn f, Fn F, Fn df, double weight,
               YoungFunction envelope);

  NonlinearityId id() const { return id_; }
  std::span<const double> params() const { return params_; }
  double f(double t) const { return f_(t); }
  double F(double t) const { return F_(t); }
  double df(double t) const { return df_(t); }
  double weight() const { return weight_; }
  const YoungFunction& envelope() const { return envelope_; }
  std::string describe() const;

 private:
  NonlinearityId id_;
  std::vector<double> params_;
  Fn f_;
  Fn F_;
  Fn df_;
  double weight_;
  YoungFunction envelope_;
};

/// Named nonlinearities:
///   sine_power      {p [, q]}   F = |sin t|^p
///   sine_young      {q}         F = M(|sin t|) with M = t^q / q
///   concave_convex  {p, q}      F = |t|^p/p - |t|^q/q
///   piecewise_power {a, b}      F = |t|^b/b on |t| <= 1, 1/b - 1/a + |t|^a/a beyond
///   custom          {t1, f1, t2, f2, ...}  f piecewise linear through (0,0)
///                   and the knots for t >= 0, extended oddly and flat
///   zero            {}
/// The optional trailing q of sine_power sets the envelope exponent.
/// Throws InvalidParams on malformed parameters.
Nonlinearity make_nonlinearity(NonlinearityId id, std::span<const double> params);
Nonlinearity make_nonlinearity(std::string_view id, std::span<const double> params);

/// User supplied f, F, f' with weight and envelope; reported as custom.
Nonlinearity make_custom_nonlinearity(Nonlinearity::Fn f, Nonlinearity::Fn F, Nonlinearity::Fn df,
                                      double weight, YoungFunction envelope);

}  // namespace orlicz

#endif  // ORLICZ_NONLINEARITY_HPP
