#pragma once

#include <vector>

#include "subrad/geometry.hpp"
#include "subrad/spectral.hpp"
#include "subrad/types.hpp"

namespace subrad {

/// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int order, VecX& nodes, VecX& weights);

/// Product quadrature on the unit sphere: Gauss-Legendre in cos(theta)
/// (order points) x uniform trapezoid in phi (2*order points). Weights sum
/// to 4 pi.
struct SphereQuadrature {
  std::vector<Vec3> directions;
  VecX weights;
  int order = 0;
};

SphereQuadrature make_sphere_quadrature(int order);

/// Dimensionless angular radiation pattern of a mode and its solid-angle
/// integral P_bar.
struct RadiationPattern {
  SphereQuadrature quadrature;
  VecX intensities;   // I_l(rhat) >= 0 per direction
  Real integrated = 0;  // P_bar = sum_k w_k I_l(rhat_k)
};

/// I(rhat) = | sum_j (I - rhat rhat) d c_j e^{-i k0 rhat . r_j} |^2 for a
/// mode vector with sum_j |c_j|^2 = 1 (tolerance 1e-10).
Real mode_intensity(const AtomArray& array, const CVecX& mode_vec,
                    const Vec3& rhat);

RadiationPattern integrated_pattern(const AtomArray& array,
                                    const CVecX& mode_vec, int order);

/// Per-mode error of Gamma_l/gamma0 against (3/8pi) P_bar_l, with right
/// eigenvectors renormalized to unit Euclidean norm. Relative error;
/// absolute when Gamma_l/gamma0 < 1e-8.
VecX gamma_pattern_check(const AtomArray& array, const SpectralData& s,
                         int order);

}  // namespace subrad
