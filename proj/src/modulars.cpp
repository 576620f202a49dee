#include "orlicz/modulars.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "orlicz/errors.hpp"
#include "pairs.hpp"

namespace orlicz {

namespace {

struct RegionRange {
  std::size_t begin;
  std::size_t end;
};

RegionRange range_of(const DiscreteDomain& d, Region region) {
  if (region == Region::interior) return {0, d.interior_count()};
  return {d.interior_count(), d.size()};
}

void check_beta(const Eigen::VectorXd& beta, std::size_t expected) {
  if (static_cast<std::size_t>(beta.size()) != expected) {
    throw NonPositiveBeta(fmt::format("beta has {} entries, expected {}", beta.size(), expected));
  }
  for (Eigen::Index k = 0; k < beta.size(); ++k) {
    if (!(beta[k] > 0.0) || !std::isfinite(beta[k])) {
      throw NonPositiveBeta(fmt::format("beta[{}] = {} is not strictly positive", k, beta[k]));
    }
  }
}

/// Luxemburg norm of the modular lambda -> sum_k c_k G(a_k / lambda), by a
/// safeguarded Newton iteration on log Phi as a function of log lambda. The
/// slope of that map is minus the weighted elasticity t g / G, so the
/// iteration finishes in one step for powers.
double weighted_luxemburg(const YoungFunction& young, const std::vector<double>& a,
                          const std::vector<double>& c) {
  if (a.empty()) return 0.0;
  auto eval = [&](double ell, double* slope) {
    const double inv = std::exp(-ell);
    double phi = 0.0, tg = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double z = a[k] * inv;
      phi += c[k] * young.G(z);
      if (slope != nullptr) tg += c[k] * z * young.g(z);
    }
    if (slope != nullptr) *slope = phi > 0.0 ? tg / phi : young.p_minus();
    return phi;
  };
  const double P = eval(0.0, nullptr);
  if (!(P > 0.0)) return 0.0;
  const double logP = std::log(P);
  double lo = std::min(logP / young.p_minus(), logP / young.p_plus());
  double hi = std::max(logP / young.p_minus(), logP / young.p_plus());
  lo -= 1e-9 * std::max(1.0, std::abs(lo));
  hi += 1e-9 * std::max(1.0, std::abs(hi));
  double ell = 0.5 * (lo + hi);
  for (int it = 0; it < 100; ++it) {
    double slope = 0.0;
    const double phi = eval(ell, &slope);
    const double f = std::log(phi);
    if (f > 0.0) {
      lo = ell;
    } else {
      hi = ell;
    }
    if (std::abs(f) < 1e-15 || hi - lo < 1e-15 * std::max(1.0, std::abs(ell))) break;
    double next = ell + f / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    ell = next;
  }
  // Return a value with Phi(u / lambda) <= 1.
  double lambda = std::exp(ell);
  for (int k = 0; k < 64 && eval(std::log(lambda), nullptr) > 1.0; ++k) {
    lambda *= 1.0 + 4.0 * std::numeric_limits<double>::epsilon() * (1 << std::min(k, 20));
  }
  return lambda;
}

}  // namespace

std::string_view to_string(PairRegion region) {
  switch (region) {
    case PairRegion::full: return "full";
    case PairRegion::regional: return "regional";
    case PairRegion::star: return "star";
  }
  return "unknown";
}

void require_positive_beta(const DiscreteDomain& domain, const Eigen::VectorXd& beta) {
  check_beta(beta, domain.exterior_count());
}

double modular_G(const YoungFunction& young, const GridFunction& u, Region region,
                 const Eigen::VectorXd* beta) {
  const auto& d = u.domain();
  const auto r = range_of(d, region);
  if (beta != nullptr) check_beta(*beta, r.end - r.begin);
  double sum = 0.0;
  for (std::size_t i = r.begin; i < r.end; ++i) {
    const double v = young.G(std::abs(u[i]));
    sum += beta != nullptr ? (*beta)[static_cast<Eigen::Index>(i - r.begin)] * v : v;
  }
  return sum * d.cell_weight();
}

double modular_sG(const YoungFunction& young, const GridFunction& u, PairRegion region) {
  const auto& d = u.domain();
  double sum = 0.0;
  detail::for_each_pair(d, region, [&](std::size_t i, std::size_t j) {
    const double diff = u[i] - u[j];
    if (diff != 0.0) sum += young.G(std::abs(diff) * d.kernel_s(i, j)) * d.kernel_mu(i, j);
  });
  return 2.0 * sum;
}

Eigen::VectorXd gradient_modular_G(const YoungFunction& young, const GridFunction& u,
                                   Region region, const Eigen::VectorXd* beta) {
  const auto& d = u.domain();
  const auto r = range_of(d, region);
  if (beta != nullptr) check_beta(*beta, r.end - r.begin);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = r.begin; i < r.end; ++i) {
    double v = detail::odd_g(young, u[i]) * d.cell_weight();
    if (beta != nullptr) v *= (*beta)[static_cast<Eigen::Index>(i - r.begin)];
    grad[static_cast<Eigen::Index>(i)] = v;
  }
  return grad;
}

Eigen::VectorXd gradient_modular_sG(const YoungFunction& young, const GridFunction& u,
                                    PairRegion region) {
  const auto& d = u.domain();
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(d.size()));
  const double w = d.cell_weight();
  detail::for_each_pair(d, region, [&](std::size_t i, std::size_t j) {
    const double diff = u[i] - u[j];
    if (diff == 0.0) return;
    // d/du_i of 2 G(|D|) mu = 2 psi(D) k_s mu, and k_s mu = w k_op.
    const double t = 2.0 * detail::odd_g(young, diff * d.kernel_s(i, j)) * w * d.kernel_op(i, j);
    grad[static_cast<Eigen::Index>(i)] += t;
    grad[static_cast<Eigen::Index>(j)] -= t;
  });
  return grad;
}

double luxemburg_norm(const std::function<double(double)>& modular_at) {
  const double m1 = modular_at(1.0);
  if (!(m1 > 0.0)) return 0.0;
  double lo = 1.0, hi = 1.0;
  if (m1 > 1.0) {
    hi = 2.0;
    while (modular_at(hi) > 1.0) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e300) return hi;
    }
  } else {
    lo = 0.5;
    while (modular_at(lo) <= 1.0) {
      hi = lo;
      lo *= 0.5;
      if (lo < 1e-300) return hi;
    }
  }
  for (int it = 0; it < 200 && hi / lo > 1.0 + 1e-14; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (modular_at(mid) <= 1.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double luxemburg_norm(const std::function<double(const GridFunction&)>& modular,
                      const GridFunction& u) {
  if (u.values().isZero(0.0)) return 0.0;
  return luxemburg_norm([&](double lambda) { return modular((1.0 / lambda) * u); });
}

XNormParts x_norm_parts(const YoungFunction& young, const GridFunction& u,
                        const Eigen::VectorXd& beta) {
  const auto& d = u.domain();
  require_positive_beta(d, beta);
  const double w = d.cell_weight();
  XNormParts parts;

  std::vector<double> a, c;
  a.reserve(d.size() * d.interior_count());
  c.reserve(d.size() * d.interior_count());
  detail::for_each_pair(d, PairRegion::star, [&](std::size_t i, std::size_t j) {
    const double diff = std::abs(u[i] - u[j]);
    if (diff == 0.0) return;
    a.push_back(diff * d.kernel_s(i, j));
    c.push_back(2.0 * d.kernel_mu(i, j));
  });
  parts.seminorm = weighted_luxemburg(young, a, c);

  a.clear();
  c.clear();
  for (std::size_t i = 0; i < d.interior_count(); ++i) {
    if (u[i] == 0.0) continue;
    a.push_back(std::abs(u[i]));
    c.push_back(w);
  }
  parts.interior = weighted_luxemburg(young, a, c);

  a.clear();
  c.clear();
  for (std::size_t i = d.interior_count(); i < d.size(); ++i) {
    if (u[i] == 0.0) continue;
    a.push_back(std::abs(u[i]));
    c.push_back(w * beta[static_cast<Eigen::Index>(i - d.interior_count())]);
  }
  parts.exterior = weighted_luxemburg(young, a, c);
  return parts;
}

double x_norm(const YoungFunction& young, const GridFunction& u, const Eigen::VectorXd& beta) {
  return x_norm_parts(young, u, beta).total();
}

Eigen::VectorXd gradient_x_norm(const YoungFunction& young, const GridFunction& u,
                                const Eigen::VectorXd& beta) {
  const auto parts = x_norm_parts(young, u, beta);
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(u.values().size());
  auto add = [&](double norm, auto&& gradient_at) {
    if (!(norm > 0.0)) return;
    const GridFunction z = (1.0 / norm) * u;
    const Eigen::VectorXd gz = gradient_at(z);
    const double den = gz.dot(z.values());
    if (den > 0.0) grad += gz / den;
  };
  add(parts.seminorm,
      [&](const GridFunction& z) { return gradient_modular_sG(young, z, PairRegion::star); });
  add(parts.interior,
      [&](const GridFunction& z) { return gradient_modular_G(young, z, Region::interior); });
  add(parts.exterior, [&](const GridFunction& z) {
    return gradient_modular_G(young, z, Region::exterior, &beta);
  });
  return grad;
}

}  // namespace orlicz
