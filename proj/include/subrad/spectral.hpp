#pragma once

#include <vector>

#include "subrad/hamiltonian.hpp"
#include "subrad/types.hpp"

namespace subrad {

/// How the left eigenvectors are obtained.
enum class LeftVectorMode {
  /// H is complex symmetric, so left vectors are the conjugated right
  /// vectors (up to per-mode scale). Default; half the cost.
  ConjugateShortcut,
  /// Independent decomposition of H^dagger, paired to the right problem by
  /// nearest-eigenvalue matching. Verification path; throws PairingFailure
  /// on ambiguous matches.
  AdjointPairing,
};

/// Biorthogonal eigendecomposition of H. Modes are sorted by ascending decay
/// rate Gamma_l = -2 Im kappa_l, ties broken by ascending Re kappa_l.
struct SpectralData {
  CVecX eigenvalues;        // kappa_l
  CMatX right_vecs;         // columns |psi_l^R>, unit Euclidean norm
  CMatX left_vecs;          // columns |psi_l^L>
  CVecX norms;              // <psi_l^L | psi_l^R>
  VecX decay_rates;         // Gamma_l = -2 Im kappa_l

  int n_modes() const { return static_cast<int>(eigenvalues.size()); }
};

struct ModeResiduals {
  VecX right;  // ||H psiR - kappa psiR|| / (||H||_F ||psiR||)
  VecX left;   // ||H^dag psiL - kappa* psiL|| / (||H||_F ||psiL||)
};

/// Complex overlap weights of an initial state with each mode:
///   w_l = <psi0|psiR_l> <psiL_l|psi0> / <psiL_l|psiR_l>,  sum_l w_l = 1.
struct ModeWeights {
  CVecX weights;                // w_l
  CVecX initial_state;          // unit norm
  VecX normalized_magnitudes;   // p_l = |w_l| / sum |w_l'|
};

/// Throws DefectiveMatrix when any biorthogonal norm is below
/// 1e-12 * ||psiL|| * ||psiR||.
SpectralData decompose(const EffectiveHamiltonian& ham,
                       LeftVectorMode mode = LeftVectorMode::ConjugateShortcut);

ModeResiduals residuals(const EffectiveHamiltonian& ham,
                        const SpectralData& s);

ModeWeights mode_weights(const SpectralData& s, const CVecX& initial_state);

/// Unit basis vector on the storage atom.
CVecX storage_state(const AtomArray& array);

/// Entrywise error of sum_l |psiR><psiL|/norm against the identity.
Real completeness_error(const SpectralData& s);

}  // namespace subrad
