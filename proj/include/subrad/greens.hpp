#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "subrad/types.hpp"

namespace subrad {

/// Free-space dyadic Green's tensor G0(r, omega) at separation r != 0,
/// with k = omega (c = 1):
///
///   G0 = e^{ikr}/(4 pi r) [ (1 + i/(kr) - 1/(kr)^2) I
///                         + (-1 - 3i/(kr) + 3/(kr)^2) rhat rhat ]
///
/// Complex symmetric; Im G0 -> (omega/6pi) I as r -> 0.
template <typename Scalar>
Eigen::Matrix<std::complex<Scalar>, 3, 3> green_tensor(
    const Eigen::Matrix<Scalar, 3, 1>& r, Scalar omega0) {
  using C = std::complex<Scalar>;
  const Scalar rn = r.norm();
  if (!(rn > Scalar(0))) {
    throw Error("green_tensor: zero separation");
  }
  const Scalar kr = omega0 * rn;
  const Eigen::Matrix<Scalar, 3, 1> rh = r / rn;
  const C pre = std::exp(C(0, kr)) / (Scalar(4 * EIGEN_PI) * rn);
  const C a = C(1) + C(0, 1) / kr - C(1) / (kr * kr);
  const C b = C(-1) - C(0, 3) / kr + C(3) / (kr * kr);
  Eigen::Matrix<std::complex<Scalar>, 3, 3> g =
      (a * Eigen::Matrix<Scalar, 3, 3>::Identity() + b * (rh * rh.transpose()))
          .template cast<C>();
  return pre * g;
}

/// Transverse projector I - rhat rhat for a unit direction.
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> far_field_projector(
    const Eigen::Matrix<Scalar, 3, 1>& rhat) {
  if (std::abs(rhat.norm() - Scalar(1)) > Scalar(1e-12)) {
    throw Error("far_field_projector: direction must be a unit vector");
  }
  return Eigen::Matrix<Scalar, 3, 3>::Identity() - rhat * rhat.transpose();
}

}  // namespace subrad
