#include "subrad/farfield.hpp"

#include <cmath>

namespace subrad {

void gauss_legendre(int order, VecX& nodes, VecX& weights) {
  if (order < 1) throw Error("gauss_legendre: order must be >= 1");
  nodes.resize(order);
  weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Newton iteration from the Chebyshev-based initial guess
    Real x = std::cos(EIGEN_PI * (i + 0.75) / (order + 0.5));
    Real dp = 0;
    for (int it = 0; it < 100; ++it) {
      Real p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const Real dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes(i) = -x;
    nodes(order - 1 - i) = x;
    const Real w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights(i) = w;
    weights(order - 1 - i) = w;
  }
}

SphereQuadrature make_sphere_quadrature(int order) {
  VecX mu, wmu;
  gauss_legendre(order, mu, wmu);
  const int n_phi = 2 * order;
  const Real wphi = 2.0 * EIGEN_PI / n_phi;
  SphereQuadrature q;
  q.order = order;
  q.directions.reserve(order * n_phi);
  q.weights.resize(order * n_phi);
  int idx = 0;
  for (int i = 0; i < order; ++i) {
    const Real ct = mu(i);
    const Real st = std::sqrt(std::max<Real>(0.0, 1.0 - ct * ct));
    for (int k = 0; k < n_phi; ++k) {
      const Real phi = wphi * k;
      q.directions.emplace_back(st * std::cos(phi), st * std::sin(phi), ct);
      q.weights(idx++) = wmu(i) * wphi;
    }
  }
  return q;
}

namespace {

Real intensity_unchecked(const AtomArray& array, const CVecX& c,
                         const Vec3& rhat) {
  const Real k0 = array.omega0;  // k0 = omega0 with c = 1
  const CVec3 proj = array.dipole - rhat.cast<Complex>() *
                                        (rhat.cast<Complex>().dot(array.dipole));
  CVec3 sum = CVec3::Zero();
  for (int j = 0; j < array.size(); ++j) {
    const Complex phase =
        std::exp(Complex(0, -k0 * rhat.dot(array.positions[j])));
    sum += proj * (c(j) * phase);
  }
  return sum.squaredNorm();
}

}  // namespace

Real mode_intensity(const AtomArray& array, const CVecX& mode_vec,
                    const Vec3& rhat) {
  if (std::abs(rhat.norm() - 1.0) > 1e-12)
    throw Error("mode_intensity: direction must be a unit vector");
  if (std::abs(mode_vec.norm() - 1.0) > 1e-10)
    throw Error("mode_intensity: mode vector must satisfy sum |c_j|^2 = 1");
  return intensity_unchecked(array, mode_vec, rhat);
}

RadiationPattern integrated_pattern(const AtomArray& array,
                                    const CVecX& mode_vec, int order) {
  if (std::abs(mode_vec.norm() - 1.0) > 1e-10)
    throw Error("integrated_pattern: mode vector must satisfy sum |c_j|^2 = 1");
  RadiationPattern out;
  out.quadrature = make_sphere_quadrature(order);
  const int nd = static_cast<int>(out.quadrature.directions.size());
  out.intensities.resize(nd);
  Real acc = 0;
  for (int k = 0; k < nd; ++k) {
    out.intensities(k) =
        intensity_unchecked(array, mode_vec, out.quadrature.directions[k]);
    acc += out.quadrature.weights(k) * out.intensities(k);
  }
  out.integrated = acc;
  return out;
}

VecX gamma_pattern_check(const AtomArray& array, const SpectralData& s,
                         int order) {
  const SphereQuadrature q = make_sphere_quadrature(order);
  VecX out(s.n_modes());
  for (int l = 0; l < s.n_modes(); ++l) {
    CVecX c = s.right_vecs.col(l);
    c /= c.norm();  // fix the excitation amount: sum |c_j|^2 = 1
    Real pbar = 0;
    for (size_t k = 0; k < q.directions.size(); ++k) {
      pbar += q.weights(k) * intensity_unchecked(array, c, q.directions[k]);
    }
    const Real lhs = s.decay_rates(l) / array.gamma0;
    const Real rhs = 3.0 / (8.0 * EIGEN_PI) * pbar;
    const Real err = std::abs(lhs - rhs);
    out(l) = (lhs < 1e-8) ? err : err / lhs;
  }
  return out;
}

}  // namespace subrad
