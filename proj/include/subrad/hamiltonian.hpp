#pragma once

#include "subrad/geometry.hpp"
#include "subrad/types.hpp"

namespace subrad {

/// Effective non-Hermitian Hamiltonian H = J - (i/2) Gamma in the
/// single-excitation basis, with J and Gamma in units of gamma0's scale.
/// Diagonals: Gamma_jj = gamma0 exactly, J_jj = 0 (shift absorbed into
/// omega0). H is complex symmetric.
struct EffectiveHamiltonian {
  MatX J;
  MatX Gamma;
  CMatX H;
  int n_atoms = 0;
  Real gamma0 = kDefaultGamma0;
};

/// Cooperative coefficients from the vacuum Green's tensor:
///   J_jj'     = -(3 pi gamma0 / omega0) Re[ d* . G0(r_j - r_j') . d ]
///   Gamma_jj' =  (6 pi gamma0 / omega0) Im[ d* . G0(r_j - r_j') . d ]
EffectiveHamiltonian build_hamiltonian(const AtomArray& array);

}  // namespace subrad
