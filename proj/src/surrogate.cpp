#include "subrad/surrogate.hpp"

#include <cmath>

namespace subrad {

SurrogateScore surrogate_cost(const SpectralData& s, const ModeWeights& w,
                              const SurrogateParams& params, Real gamma0) {
  if (params.alpha < 0 || params.beta < 0)
    throw Error("surrogate_cost: alpha, beta must be non-negative");
  if (params.alpha == 0 && params.beta == 0)
    throw Error("surrogate_cost: alpha and beta cannot both be zero");
  SurrogateScore out;
  for (int l = 0; l < s.n_modes(); ++l) {
    const Real p = w.normalized_magnitudes(l);
    if (p <= 0) continue;  // 0 log 0 = 0
    const Real rate = std::max(s.decay_rates(l), 1e-300 * gamma0);
    out.log_rate_term += p * std::log(rate / gamma0);
    out.entropy_term -= p * std::log(p);
  }
  out.F = params.alpha * out.log_rate_term - params.beta * (-out.entropy_term);
  return out;
}

SurrogateScore surrogate_of_array(const AtomArray& array,
                                  const SurrogateParams& params) {
  const EffectiveHamiltonian ham = build_hamiltonian(array);
  const SpectralData s = decompose(ham);
  const ModeWeights w = mode_weights(s, storage_state(array));
  return surrogate_cost(s, w, params, array.gamma0);
}

}  // namespace subrad
