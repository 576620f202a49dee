#include "orlicz/nonlinearity.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "orlicz/errors.hpp"

namespace orlicz {

namespace {

double sgn(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }

YoungFunction power_envelope(double q) {
  const double p[] = {q};
  return make_young(YoungFamily::power, p);
}

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParams(what);
}

}  // namespace

std::string_view to_string(NonlinearityId id) {
  switch (id) {
    case NonlinearityId::sine_power: return "sine_power";
    case NonlinearityId::sine_young: return "sine_young";
    case NonlinearityId::concave_convex: return "concave_convex";
    case NonlinearityId::piecewise_power: return "piecewise_power";
    case NonlinearityId::custom: return "custom";
    case NonlinearityId::zero: return "zero";
  }
  return "unknown";
}

NonlinearityId parse_nonlinearity(std::string_view name) {
  for (auto id : {NonlinearityId::sine_power, NonlinearityId::sine_young,
                  NonlinearityId::concave_convex, NonlinearityId::piecewise_power,
                  NonlinearityId::custom, NonlinearityId::zero}) {
    if (to_string(id) == name) return id;
  }
  throw InvalidParams(fmt::format("unknown nonlinearity '{}'", name));
}

Nonlinearity::Nonlinearity(NonlinearityId id, std::vector<double> params, Fn f, Fn F, Fn df,
                           double weight, YoungFunction envelope)
    : id_(id),
      params_(std::move(params)),
      f_(std::move(f)),
      F_(std::move(F)),
      df_(std::move(df)),
      weight_(weight),
      envelope_(std::move(envelope)) {
  if (!(weight_ > 0.0)) throw InvalidParams("nonlinearity weight must be positive");
}

std::string Nonlinearity::describe() const {
  std::string s(to_string(id_));
  s += "(";
  for (std::size_t i = 0; i < params_.size(); ++i) {
    if (i > 0) s += ",";
    s += fmt::format("{:g}", params_[i]);
  }
  return s + ")";
}

Nonlinearity make_nonlinearity(NonlinearityId id, std::span<const double> params) {
  std::vector<double> pv(params.begin(), params.end());
  switch (id) {
    case NonlinearityId::sine_power: {
      require(pv.size() == 1 || pv.size() == 2, "sine_power takes {p} or {p, q}");
      const double p = pv[0];
      require(p > 1.0, "sine_power exponent must exceed 1");
      const double q = pv.size() == 2 ? pv[1] : 2.0;
      return {id, pv,
              [p](double t) {
                const double s = std::sin(t);
                return p * sgn(s) * std::pow(std::abs(s), p - 1.0) * std::cos(t);
              },
              [p](double t) { return std::pow(std::abs(std::sin(t)), p); },
              [p](double t) {
                const double s = std::sin(t), c = std::cos(t);
                return p * std::pow(std::abs(s), p - 2.0) * ((p - 1.0) * c * c - s * s);
              },
              p, power_envelope(q)};
    }
    case NonlinearityId::sine_young: {
      require(pv.size() == 1 && pv[0] > 1.0, "sine_young takes one exponent q > 1");
      const double q = pv[0];
      return {id, pv,
              [q](double t) {
                const double s = std::sin(t);
                return sgn(s) * std::pow(std::abs(s), q - 1.0) * std::cos(t);
              },
              [q](double t) { return std::pow(std::abs(std::sin(t)), q) / q; },
              [q](double t) {
                const double s = std::sin(t), c = std::cos(t);
                return std::pow(std::abs(s), q - 2.0) * ((q - 1.0) * c * c - s * s);
              },
              1.0, power_envelope(2.0)};
    }
    case NonlinearityId::concave_convex: {
      require(pv.size() == 2, "concave_convex takes {p, q}");
      const double p = pv[0], q = pv[1];
      require(1.0 < p && p < q, "concave_convex needs 1 < p < q");
      return {id, pv,
              [p, q](double t) {
                const double a = std::abs(t);
                return sgn(t) * (std::pow(a, p - 1.0) - std::pow(a, q - 1.0));
              },
              [p, q](double t) {
                const double a = std::abs(t);
                return std::pow(a, p) / p - std::pow(a, q) / q;
              },
              [p, q](double t) {
                const double a = std::abs(t);
                return (p - 1.0) * std::pow(a, p - 2.0) - (q - 1.0) * std::pow(a, q - 2.0);
              },
              2.0, power_envelope(q)};
    }
    case NonlinearityId::piecewise_power: {
      require(pv.size() == 2, "piecewise_power takes {a, b}");
      const double a = pv[0], b = pv[1];
      require(a > 0.0 && b > 0.0, "piecewise_power exponents must be positive");
      return {id, pv,
              [a, b](double t) {
                const double x = std::abs(t);
                return sgn(t) * std::pow(x, (x <= 1.0 ? b : a) - 1.0);
              },
              [a, b](double t) {
                const double x = std::abs(t);
                if (x <= 1.0) return std::pow(x, b) / b;
                return 1.0 / b - 1.0 / a + std::pow(x, a) / a;
              },
              [a, b](double t) {
                const double x = std::abs(t);
                const double e = x <= 1.0 ? b : a;
                return (e - 1.0) * std::pow(x, e - 2.0);
              },
              1.0, power_envelope(a > 1.0 ? a : 2.0)};
    }
    case NonlinearityId::custom: {
      require(pv.size() >= 2 && pv.size() % 2 == 0, "custom takes (t, f) knot pairs");
      auto t = std::make_shared<std::vector<double>>(1, 0.0);
      auto f = std::make_shared<std::vector<double>>(1, 0.0);
      for (std::size_t k = 0; k < pv.size(); k += 2) {
        require(pv[k] > t->back(), "custom knots must increase from 0");
        t->push_back(pv[k]);
        f->push_back(pv[k + 1]);
      }
      // Primitive at the knots.
      auto Fk = std::make_shared<std::vector<double>>(t->size(), 0.0);
      for (std::size_t k = 1; k < t->size(); ++k) {
        (*Fk)[k] = (*Fk)[k - 1] + 0.5 * ((*f)[k] + (*f)[k - 1]) * ((*t)[k] - (*t)[k - 1]);
      }
      auto locate = [t](double x) {
        const auto it = std::upper_bound(t->begin(), t->end(), x);
        return static_cast<std::size_t>(it - t->begin()) - 1;
      };
      auto slope = [t, f](std::size_t k) {
        if (k + 1 >= t->size()) return 0.0;
        return ((*f)[k + 1] - (*f)[k]) / ((*t)[k + 1] - (*t)[k]);
      };
      double w = 1.0;
      for (double v : *f) w = std::max(w, std::abs(v));
      return {id, pv,
              [f, t, locate, slope](double x) {
                const double a = std::abs(x);
                const std::size_t k = locate(a);
                return sgn(x) * ((*f)[k] + slope(k) * (a - (*t)[k]));
              },
              [f, t, Fk, locate, slope](double x) {
                const double a = std::abs(x);
                const std::size_t k = locate(a);
                const double d = a - (*t)[k];
                return (*Fk)[k] + (*f)[k] * d + 0.5 * slope(k) * d * d;
              },
              [locate, slope](double x) { return slope(locate(std::abs(x))); }, w,
              power_envelope(2.0)};
    }
    case NonlinearityId::zero:
      require(pv.empty(), "zero takes no parameters");
      return {id, pv, [](double) { return 0.0; }, [](double) { return 0.0; },
              [](double) { return 0.0; }, 1.0, power_envelope(2.0)};
  }
  throw InvalidParams("unknown nonlinearity");
}

Nonlinearity make_nonlinearity(std::string_view id, std::span<const double> params) {
  return make_nonlinearity(parse_nonlinearity(id), params);
}

Nonlinearity make_custom_nonlinearity(Nonlinearity::Fn f, Nonlinearity::Fn F, Nonlinearity::Fn df,
                                      double weight, YoungFunction envelope) {
  return {NonlinearityId::custom, {}, std::move(f), std::move(F), std::move(df), weight,
          std::move(envelope)};
}

}  // namespace orlicz
