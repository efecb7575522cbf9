#pragma once

#include <optional>

#include "subrad/spectral.hpp"
#include "subrad/types.hpp"

namespace subrad {

/// Survival probability p_e(t) = |<psi(0)|psi(t)>|^2 on a time grid
/// (times in 1/gamma0), plus its trapezoidal average over [0, t_star].
struct SurvivalTrace {
  VecX times;
  VecX p_e;
  Real p_bar = 0;
  Real t_star = 0;
};

/// Cross-term analysis of the two dominant modes, Eq.-(12)-style:
///   p_e ~ |w1|^2 e^{-G1 t} + |w2|^2 e^{-G2 t}
///       + 2|w1||w2| cos(D12 t + phi) e^{-(G1+G2)t/2}
struct TwoModeModel {
  Real delta12 = 0;   // Re kappa_1 - Re kappa_2
  Real phase = 0;     // arg(w1* w2)
  Real amp1 = 0, amp2 = 0;
  Real rate1 = 0, rate2 = 0;
  Real period = 0;    // 2 pi / |delta12|
};

/// Uniform grid of n samples on [0, t_end] (default 3001 on [0, 30]).
VecX uniform_times(Real t_end = 30.0, int n = 3001);

/// p_e(t) = |sum_l w_l e^{-i kappa_l t}|^2; p_bar by trapezoidal rule over
/// the full grid.
SurvivalTrace survival_modesum(const SpectralData& s, const ModeWeights& w,
                               const VecX& times);

struct OdeOptions {
  /// Integrator substep; must satisfy
  /// step <= min(0.01/gamma0, 0.1/||H||_F), else StepTooLarge.
  /// By default each grid interval is subdivided to meet that bound.
  std::optional<Real> step;
};

/// Independent oracle: classical fixed-step RK4 on dc/dt = -i H c.
/// Returns |<c(0)|c(t)>|^2 on the grid. The state norm is verified to be
/// non-increasing (dissipative H); violations raise NumericalFailure.
SurvivalTrace survival_ode(const EffectiveHamiltonian& ham,
                           const CVecX& initial_state, const VecX& times,
                           const OdeOptions& opts = {});

/// Picks the two modes with the largest p_l. Throws DegenerateSplit when
/// |delta12| < 1e-12.
TwoModeModel two_mode_analysis(const SpectralData& s, const ModeWeights& w);

/// Closed-form two-mode trace from the model (exact when only two modes
/// carry weight).
Real two_mode_pe(const TwoModeModel& m, Real t);

}  // namespace subrad
