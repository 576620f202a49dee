#ifndef ORLICZ_NONLOCAL_OPERATOR_HPP
#define ORLICZ_NONLOCAL_OPERATOR_HPP

#include "orlicz/grid.hpp"
#include "orlicz/modulars.hpp"
#include "orlicz/young.hpp"

namespace orlicz {

enum class OperatorKind { full, regional, star_pairing };

std::string_view to_string(OperatorKind kind);

/// Discrete fractional g-Laplacian at the interior nodes:
///   (A u)_i = sum_{j != i} g(|D_s u(i,j)|) sgn(D_s u(i,j)) w / |x_i - x_j|^{n+s}
/// with j over all nodes (full) or interior nodes (regional). Exterior
/// entries of the result are zero. `kind` must be full or regional.
GridFunction apply_operator(const YoungFunction& young, const GridFunction& u, OperatorKind kind);

/// Nonlocal normal derivative at the exterior nodes (sum over interior j);
/// interior entries of the result are zero.
GridFunction normal_derivative(const YoungFunction& young, const GridFunction& u);

/// Pair sums of g(|D_s u|) sgn(D_s u) D_s v d mu over ordered pairs:
/// all pairs (full), interior pairs (regional), or half the sum over pairs
/// with an interior node (star_pairing).
double pairing(const YoungFunction& young, const GridFunction& u, const GridFunction& v,
               OperatorKind kind);

struct PerimeterResult {
  /// Interior x exterior double sum on the truncated lattice.
  double value = 0.0;
  /// |Omega| sigma_n int_R^inf g(r^{-s}) r^{-1-s} dr, the mass beyond the collar.
  double tail = 0.0;
};

PerimeterResult perimeter(const YoungFunction& young, const DiscreteDomain& domain);

}  // namespace orlicz

#endif  // ORLICZ_NONLOCAL_OPERATOR_HPP
