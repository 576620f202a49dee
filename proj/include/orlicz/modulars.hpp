#ifndef ORLICZ_MODULARS_HPP
#define ORLICZ_MODULARS_HPP

#include <functional>

#include <Eigen/Core>

#include "orlicz/grid.hpp"
#include "orlicz/young.hpp"

namespace orlicz {

/// Pair sets for the seminorm modulars:
///   full      every pair of the truncated lattice
///   regional  interior x interior
///   star      every pair with at least one interior node
enum class PairRegion { full, regional, star };

std::string_view to_string(PairRegion region);

/// sum over the region of G(|u_i|) w, times beta_i when a weight is given.
/// `beta` is indexed like the region's nodes (interior nodes first, so for
/// the exterior region beta[k] belongs to node interior_count() + k).
/// Throws NonPositiveBeta if any weight is <= 0.
double modular_G(const YoungFunction& young, const GridFunction& u, Region region,
                 const Eigen::VectorXd* beta = nullptr);

/// Sum over ordered pairs (i, j), i != j, of G(|D_s u(i,j)|) kernel_mu(i,j).
double modular_sG(const YoungFunction& young, const GridFunction& u, PairRegion region);

/// Gradients with respect to the node values (zero outside the region).
Eigen::VectorXd gradient_modular_G(const YoungFunction& young, const GridFunction& u,
                                   Region region, const Eigen::VectorXd* beta = nullptr);
Eigen::VectorXd gradient_modular_sG(const YoungFunction& young, const GridFunction& u,
                                    PairRegion region);

/// inf { lambda > 0 : modular_at(lambda) <= 1 } where modular_at(lambda)
/// evaluates the modular of u / lambda. Returns 0 when modular_at(1) == 0.
/// Relative tolerance below 1e-12.
double luxemburg_norm(const std::function<double(double)>& modular_at);

/// Luxemburg norm of u for a modular given as a function of grid functions.
double luxemburg_norm(const std::function<double(const GridFunction&)>& modular,
                      const GridFunction& u);

/// Star seminorm + L^G(Omega) norm + beta-weighted L^G norm on the exterior.
double x_norm(const YoungFunction& young, const GridFunction& u, const Eigen::VectorXd& beta);

/// The three terms of x_norm separately.
struct XNormParts {
  double seminorm = 0.0;
  double interior = 0.0;
  double exterior = 0.0;
  double total() const { return seminorm + interior + exterior; }
};
XNormParts x_norm_parts(const YoungFunction& young, const GridFunction& u,
                        const Eigen::VectorXd& beta);

/// Gradient of x_norm; each term contributes grad Phi(z) / <grad Phi(z), z>
/// at z = u / norm, and nothing when that norm vanishes.
Eigen::VectorXd gradient_x_norm(const YoungFunction& young, const GridFunction& u,
                                const Eigen::VectorXd& beta);

/// Checks that beta has one strictly positive entry per exterior node.
void require_positive_beta(const DiscreteDomain& domain, const Eigen::VectorXd& beta);

}  // namespace orlicz

#endif  // ORLICZ_MODULARS_HPP
