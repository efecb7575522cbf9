#include "subrad/hamiltonian.hpp"

#include "subrad/greens.hpp"

namespace subrad {

EffectiveHamiltonian build_hamiltonian(const AtomArray& array) {
  array.validate();
  const int n = array.size();
  EffectiveHamiltonian out;
  out.n_atoms = n;
  out.gamma0 = array.gamma0;
  out.J = MatX::Zero(n, n);
  out.Gamma = MatX::Zero(n, n);
  const Real pref_j = -3.0 * EIGEN_PI * array.gamma0 / array.omega0;
  const Real pref_g = 6.0 * EIGEN_PI * array.gamma0 / array.omega0;
  for (int i = 0; i < n; ++i) {
    out.Gamma(i, i) = array.gamma0;
    for (int j = i + 1; j < n; ++j) {
      const CMat3 g =
          green_tensor<Real>(array.positions[i] - array.positions[j],
                             array.omega0);
      const Complex s = array.dipole.adjoint() * g * array.dipole;
      out.J(i, j) = out.J(j, i) = pref_j * s.real();
      out.Gamma(i, j) = out.Gamma(j, i) = pref_g * s.imag();
    }
  }
  out.H = out.J.cast<Complex>() - Complex(0, 0.5) * out.Gamma.cast<Complex>();
  return out;
}

}  // namespace subrad
