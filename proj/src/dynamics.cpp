#include "subrad/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace subrad {

VecX uniform_times(Real t_end, int n) {
  if (n < 2 || !(t_end > 0)) throw Error("uniform_times: bad grid");
  return VecX::LinSpaced(n, 0.0, t_end);
}

namespace {

Real trapezoid_average(const VecX& t, const VecX& y) {
  Real acc = 0;
  for (int i = 0; i + 1 < t.size(); ++i) {
    acc += 0.5 * (y(i) + y(i + 1)) * (t(i + 1) - t(i));
  }
  const Real span = t(t.size() - 1) - t(0);
  return span > 0 ? acc / span : y(0);
}

void check_grid(const VecX& times) {
  if (times.size() < 1) throw Error("empty time grid");
  for (int i = 0; i + 1 < times.size(); ++i) {
    if (!(times(i + 1) > times(i))) throw Error("time grid must be increasing");
  }
}

}  // namespace

SurvivalTrace survival_modesum(const SpectralData& s, const ModeWeights& w,
                               const VecX& times) {
  check_grid(times);
  SurvivalTrace out;
  out.times = times;
  out.p_e.resize(times.size());
  for (int i = 0; i < times.size(); ++i) {
    Complex amp = 0;
    for (int l = 0; l < s.n_modes(); ++l) {
      amp += w.weights(l) * std::exp(Complex(0, -1) * s.eigenvalues(l) *
                                     Complex(times(i), 0));
    }
    out.p_e(i) = std::norm(amp);
  }
  out.t_star = times(times.size() - 1);
  out.p_bar = trapezoid_average(times, out.p_e);
  return out;
}

SurvivalTrace survival_ode(const EffectiveHamiltonian& ham,
                           const CVecX& initial_state, const VecX& times,
                           const OdeOptions& opts) {
  check_grid(times);
  if (std::abs(initial_state.norm() - 1.0) > 1e-12)
    throw Error("survival_ode: initial state must have unit norm");
  const Real h_max =
      std::min(0.01 / ham.gamma0, 0.1 / ham.H.norm());
  if (opts.step && *opts.step > h_max)
    throw StepTooLarge("survival_ode: step exceeds min(0.01/gamma0, 0.1/||H||)");

  const CMatX rhs = Complex(0, -1) * ham.H;
  auto deriv = [&](const CVecX& c) -> CVecX { return rhs * c; };

  SurvivalTrace out;
  out.times = times;
  out.p_e.resize(times.size());

  CVecX c = initial_state;
  Real norm_prev = c.norm();
  Real t_now = times(0);
  // t = 0 is implied for index 0 only if times starts at 0; integrate from
  // times(0) assuming c(times(0)) = initial_state.
  out.p_e(0) = std::norm(initial_state.dot(c));
  for (int i = 1; i < times.size(); ++i) {
    const Real dt = times(i) - t_now;
    const Real h_req = opts.step ? *opts.step : h_max;
    const int nsub = std::max<int>(1, static_cast<int>(std::ceil(dt / h_req)));
    const Real h = dt / nsub;
    for (int k = 0; k < nsub; ++k) {
      const CVecX k1 = deriv(c);
      const CVecX k2 = deriv(c + 0.5 * h * k1);
      const CVecX k3 = deriv(c + 0.5 * h * k2);
      const CVecX k4 = deriv(c + h * k3);
      c += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      const Real norm_now = c.norm();
      if (norm_now > norm_prev * (1.0 + 1e-10))
        throw NumericalFailure("survival_ode: state norm increased");
      norm_prev = norm_now;
    }
    t_now = times(i);
    out.p_e(i) = std::norm(initial_state.dot(c));
  }
  out.t_star = times(times.size() - 1);
  out.p_bar = trapezoid_average(times, out.p_e);
  return out;
}

TwoModeModel two_mode_analysis(const SpectralData& s, const ModeWeights& w) {
  const int n = s.n_modes();
  if (n < 2) throw Error("two_mode_analysis: need at least two modes");
  int i1 = 0, i2 = 1;
  if (w.normalized_magnitudes(i2) > w.normalized_magnitudes(i1))
    std::swap(i1, i2);
  for (int l = 2; l < n; ++l) {
    if (w.normalized_magnitudes(l) > w.normalized_magnitudes(i1)) {
      i2 = i1;
      i1 = l;
    } else if (w.normalized_magnitudes(l) > w.normalized_magnitudes(i2)) {
      i2 = l;
    }
  }
  TwoModeModel out;
  out.delta12 = s.eigenvalues(i1).real() - s.eigenvalues(i2).real();
  out.phase = std::arg(std::conj(w.weights(i1)) * w.weights(i2));
  out.amp1 = std::abs(w.weights(i1));
  out.amp2 = std::abs(w.weights(i2));
  out.rate1 = s.decay_rates(i1);
  out.rate2 = s.decay_rates(i2);
  if (std::abs(out.delta12) < 1e-12)
    throw DegenerateSplit("two_mode_analysis: Re-eigenvalue split below 1e-12");
  out.period = 2.0 * EIGEN_PI / std::abs(out.delta12);
  return out;
}

Real two_mode_pe(const TwoModeModel& m, Real t) {
  return m.amp1 * m.amp1 * std::exp(-m.rate1 * t) +
         m.amp2 * m.amp2 * std::exp(-m.rate2 * t) +
         2.0 * m.amp1 * m.amp2 * std::cos(m.delta12 * t + m.phase) *
             std::exp(-0.5 * (m.rate1 + m.rate2) * t);
}

}  // namespace subrad
