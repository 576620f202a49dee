#include "orlicz/nonlocal_operator.hpp"

#include <cmath>
#include <numbers>

#include "numerics.hpp"
#include "orlicz/errors.hpp"
#include "pairs.hpp"

namespace orlicz {

std::string_view to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::full: return "full";
    case OperatorKind::regional: return "regional";
    case OperatorKind::star_pairing: return "star";
  }
  return "unknown";
}

GridFunction apply_operator(const YoungFunction& young, const GridFunction& u, OperatorKind kind) {
  if (kind == OperatorKind::star_pairing) {
    throw InvalidParams("apply_operator takes the full or regional kind");
  }
  const auto& d = u.domain();
  const std::size_t ni = d.interior_count();
  const std::size_t j_end = kind == OperatorKind::full ? d.size() : ni;
  GridFunction out(u.domain_ptr());
  for (std::size_t i = 0; i < ni; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < j_end; ++j) {
      if (j == i) continue;
      const double diff = u[i] - u[j];
      if (diff == 0.0) continue;
      acc += detail::odd_g(young, diff * d.kernel_s(i, j)) * d.kernel_op(i, j);
    }
    out[i] = acc;
  }
  return out;
}

GridFunction normal_derivative(const YoungFunction& young, const GridFunction& u) {
  const auto& d = u.domain();
  const std::size_t ni = d.interior_count();
  GridFunction out(u.domain_ptr());
  for (std::size_t i = ni; i < d.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < ni; ++j) {
      const double diff = u[i] - u[j];
      if (diff == 0.0) continue;
      acc += detail::odd_g(young, diff * d.kernel_s(i, j)) * d.kernel_op(i, j);
    }
    out[i] = acc;
  }
  return out;
}

double pairing(const YoungFunction& young, const GridFunction& u, const GridFunction& v,
               OperatorKind kind) {
  u.require_same_domain(v);
  const auto& d = u.domain();
  const PairRegion region = kind == OperatorKind::full       ? PairRegion::full
                            : kind == OperatorKind::regional ? PairRegion::regional
                                                             : PairRegion::star;
  double sum = 0.0;
  detail::for_each_pair(d, region, [&](std::size_t i, std::size_t j) {
    const double diff = u[i] - u[j];
    if (diff == 0.0) return;
    const double ks = d.kernel_s(i, j);
    sum += detail::odd_g(young, diff * ks) * (v[i] - v[j]) * ks * d.kernel_mu(i, j);
  });
  // Ordered pairs contribute twice; the star pairing carries a factor 1/2.
  return kind == OperatorKind::star_pairing ? sum : 2.0 * sum;
}

PerimeterResult perimeter(const YoungFunction& young, const DiscreteDomain& d) {
  const double s = d.s();
  const std::size_t ni = d.interior_count();
  PerimeterResult out;
  for (std::size_t i = 0; i < ni; ++i) {
    for (std::size_t j = ni; j < d.size(); ++j) {
      const double ks = d.kernel_s(i, j);
      out.value += young.g(ks) * ks * d.kernel_mu(i, j);
    }
  }
  // int_R^inf g(r^{-s}) r^{-1-s} dr in the variable u = log r, truncated
  // once the integrand has decayed by 40 decades.
  const double R = d.collar_covered();
  const double sigma = d.dim() == 1 ? 2.0 : 2.0 * std::numbers::pi;
  auto integrand = [&](double logr) {
    const double r = std::exp(logr);
    return young.g(std::pow(r, -s)) * std::pow(r, -s);
  };
  const double u0 = std::log(R);
  const double span = 40.0 * std::log(10.0) / s;
  const int panels = 2000;
  double tail = 0.0;
  for (int k = 0; k < panels; ++k) {
    const double a = u0 + span * k / panels;
    tail += detail::gauss_legendre5(integrand, a, a + span / panels);
  }
  out.tail = d.omega().measure() * sigma * tail;
  return out;
}

}  // namespace orlicz
