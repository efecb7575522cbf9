#pragma once

#include "subrad/spectral.hpp"
#include "subrad/types.hpp"

namespace subrad {

struct SurrogateParams {
  Real alpha = 1.0;
  Real beta = 3.0;
};

/// F = alpha * sum_l p_l log(Gamma_l/gamma0) - beta * sum_l p_l log p_l,
/// with p_l = |w_l| / sum |w_l'|. Smaller is better: the first term favors
/// long-lived weighted modes, the second concentrates weight on few modes.
struct SurrogateScore {
  Real F = 0;
  Real log_rate_term = 0;  // sum_l p_l log(Gamma_l/gamma0)
  Real entropy_term = 0;   // -sum_l p_l log p_l, in [0, log N]
};

/// Decay rates are floored at 1e-300*gamma0 before the log; 0 log 0 = 0.
SurrogateScore surrogate_cost(const SpectralData& s, const ModeWeights& w,
                              const SurrogateParams& params, Real gamma0);

/// Convenience: geometry -> H -> decomposition -> storage-state weights -> F.
SurrogateScore surrogate_of_array(const AtomArray& array,
                                  const SurrogateParams& params);

}  // namespace subrad
