#include "subrad/spectral.hpp"

#include <algorithm>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace subrad {

namespace {

struct RawEig {
  CVecX values;
  CMatX vectors;
};

RawEig eig(const CMatX& m) {
  Eigen::ComplexEigenSolver<CMatX> solver(m, true);
  if (solver.info() != Eigen::Success)
    throw NumericalFailure("eigendecomposition failed to converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace

SpectralData decompose(const EffectiveHamiltonian& ham, LeftVectorMode mode) {
  const int n = ham.n_atoms;
  RawEig right = eig(ham.H);

  CMatX left(n, n);
  if (mode == LeftVectorMode::ConjugateShortcut) {
    left = right.vectors.conjugate();
  } else {
    // H^dag |psiL> = kappa* |psiL>; pair by nearest eigenvalue.
    RawEig adj = eig(ham.H.adjoint());
    const Real tol = 1e-8 * ham.H.norm();
    std::vector<bool> used(n, false);
    for (int l = 0; l < n; ++l) {
      int best = -1;
      Real best_d = std::numeric_limits<Real>::infinity();
      for (int m2 = 0; m2 < n; ++m2) {
        if (used[m2]) continue;
        const Real d = std::abs(std::conj(adj.values(m2)) - right.values(l));
        if (d < best_d) {
          best_d = d;
          best = m2;
        }
      }
      if (best < 0 || best_d > tol)
        throw PairingFailure("left/right eigenvalue matching exceeds tolerance");
      used[best] = true;
      left.col(l) = adj.vectors.col(best);
    }
  }

  CVecX norms(n);
  for (int l = 0; l < n; ++l) {
    norms(l) = left.col(l).dot(right.vectors.col(l));
    const Real scale = left.col(l).norm() * right.vectors.col(l).norm();
    if (std::abs(norms(l)) < 1e-12 * scale)
      throw DefectiveMatrix("biorthogonal norm below defectiveness threshold");
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Real ga = -2.0 * right.values(a).imag();
    const Real gb = -2.0 * right.values(b).imag();
    if (ga != gb) return ga < gb;
    return right.values(a).real() < right.values(b).real();
  });

  SpectralData out;
  out.eigenvalues.resize(n);
  out.right_vecs.resize(n, n);
  out.left_vecs.resize(n, n);
  out.norms.resize(n);
  out.decay_rates.resize(n);
  for (int l = 0; l < n; ++l) {
    const int src = order[l];
    out.eigenvalues(l) = right.values(src);
    out.right_vecs.col(l) = right.vectors.col(src);
    out.left_vecs.col(l) = left.col(src);
    out.norms(l) = norms(src);
    out.decay_rates(l) = -2.0 * right.values(src).imag();
  }
  return out;
}

ModeResiduals residuals(const EffectiveHamiltonian& ham,
                        const SpectralData& s) {
  const int n = s.n_modes();
  const Real hnorm = ham.H.norm();  // Frobenius
  ModeResiduals out;
  out.right.resize(n);
  out.left.resize(n);
  const CMatX hdag = ham.H.adjoint();
  for (int l = 0; l < n; ++l) {
    const CVecX vr = s.right_vecs.col(l);
    const CVecX vl = s.left_vecs.col(l);
    out.right(l) =
        (ham.H * vr - s.eigenvalues(l) * vr).norm() / (hnorm * vr.norm());
    out.left(l) = (hdag * vl - std::conj(s.eigenvalues(l)) * vl).norm() /
                  (hnorm * vl.norm());
  }
  return out;
}

ModeWeights mode_weights(const SpectralData& s, const CVecX& initial_state) {
  if (std::abs(initial_state.norm() - 1.0) > 1e-12)
    throw Error("mode_weights: initial state must have unit norm");
  const int n = s.n_modes();
  if (initial_state.size() != n)
    throw Error("mode_weights: dimension mismatch");
  ModeWeights out;
  out.initial_state = initial_state;
  out.weights.resize(n);
  for (int l = 0; l < n; ++l) {
    const Complex a = initial_state.dot(s.right_vecs.col(l));
    const Complex b = s.left_vecs.col(l).dot(initial_state);
    out.weights(l) = a * b / s.norms(l);
  }
  const VecX mags = out.weights.cwiseAbs();
  out.normalized_magnitudes = mags / mags.sum();
  return out;
}

CVecX storage_state(const AtomArray& array) {
  CVecX v = CVecX::Zero(array.size());
  v(array.storage_index) = Complex(1, 0);
  return v;
}

Real completeness_error(const SpectralData& s) {
  const int n = s.n_modes();
  CMatX acc = CMatX::Zero(n, n);
  for (int l = 0; l < n; ++l) {
    acc += (s.right_vecs.col(l) * s.left_vecs.col(l).adjoint()) / s.norms(l);
  }
  return (acc - CMatX::Identity(n, n)).cwiseAbs().maxCoeff();
}

}  // namespace subrad
