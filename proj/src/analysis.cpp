#include "subrad/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

namespace subrad {

Real pearson(const VecX& x, const VecX& y) {
  if (x.size() != y.size() || x.size() < 3)
    throw Error("pearson: need equal-length samples, n >= 3");
  const VecX xc = x.array() - x.mean();
  const VecX yc = y.array() - y.mean();
  const Real den = std::sqrt(xc.squaredNorm() * yc.squaredNorm());
  if (den == 0) throw Error("pearson: zero variance");
  return xc.dot(yc) / den;
}

Real quantile(std::vector<Real> values, Real q) {
  if (values.empty()) throw Error("quantile: empty sample");
  if (q < 0 || q > 1) throw Error("quantile: q out of range");
  std::sort(values.begin(), values.end());
  const Real pos = q * (values.size() - 1);
  const size_t lo = static_cast<size_t>(pos);
  if (lo + 1 >= values.size()) return values.back();
  const Real frac = pos - lo;
  return values[lo] * (1 - frac) + values[lo + 1] * frac;
}

namespace {

// index-chunked parallel map; results land at their own index
template <typename Fn>
void parallel_runs(int n, int threads, Fn&& fn) {
  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
  };
  const int n_threads = std::max(1, std::min(threads, n));
  if (n_threads == 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

}  // namespace

EnsembleSummary robustness_ensemble(const AtomArray& base, Real sigma_xy,
                                    Real sigma_z, int n_trials,
                                    const VecX& times,
                                    std::uint64_t master_seed, int threads) {
  if (n_trials < 2) throw Error("robustness_ensemble: need n_trials >= 2");
  base.validate();
  EnsembleSummary out;
  out.times = times;
  out.n_trials = n_trials;
  out.sigma_xy = sigma_xy;
  out.sigma_z = sigma_z;
  out.master_seed = master_seed;

  std::vector<VecX> traces(n_trials);
  std::vector<char> ok(n_trials, 0);
  parallel_runs(n_trials, threads, [&](int trial) {
    GaussianSampler rng(derive_seed(master_seed, trial));
    const AtomArray a =
        perturb(base, sigma_xy, sigma_z, rng, PerturbScope::AllAtoms);
    try {
      const EffectiveHamiltonian ham = build_hamiltonian(a);
      const SpectralData s = decompose(ham);
      const ModeWeights w = mode_weights(s, storage_state(a));
      traces[trial] = survival_modesum(s, w, times).p_e;
      ok[trial] = 1;
    } catch (const Error&) {
      ok[trial] = 0;
    }
  });

  std::vector<Real> sample;
  out.p10.resize(times.size());
  out.p50.resize(times.size());
  out.p90.resize(times.size());
  int n_ok = 0;
  for (int trial = 0; trial < n_trials; ++trial) n_ok += ok[trial];
  out.n_failed = n_trials - n_ok;
  if (n_ok == 0) throw NumericalFailure("robustness_ensemble: all trials failed");
  for (int i = 0; i < times.size(); ++i) {
    sample.clear();
    for (int trial = 0; trial < n_trials; ++trial) {
      if (ok[trial]) sample.push_back(traces[trial](i));
    }
    out.p10(i) = quantile(sample, 0.10);
    out.p50(i) = quantile(sample, 0.50);
    out.p90(i) = quantile(sample, 0.90);
  }
  return out;
}

CorrelationReport correlation_study(const AtomArray& base, Real sigma,
                                    int n_structures, Real t_star,
                                    const SurrogateParams& params,
                                    std::uint64_t master_seed, int threads) {
  if (n_structures < 3) throw Error("correlation_study: need n >= 3");
  base.validate();
  const VecX times = uniform_times(t_star, 3001);

  CorrelationReport out;
  out.master_seed = master_seed;
  std::vector<CorrelationReport::Row> rows(n_structures);
  std::vector<char> ok(n_structures, 0);
  parallel_runs(n_structures, threads, [&](int k) {
    GaussianSampler rng(derive_seed(master_seed, k));
    const AtomArray a = perturb(base, sigma, sigma, rng, PerturbScope::AllAtoms);
    try {
      const EffectiveHamiltonian ham = build_hamiltonian(a);
      const SpectralData s = decompose(ham);
      const ModeWeights w = mode_weights(s, storage_state(a));
      const SurvivalTrace trace = survival_modesum(s, w, times);
      rows[k].F = surrogate_cost(s, w, params, a.gamma0).F;
      rows[k].min_rate = s.decay_rates.minCoeff() / a.gamma0;
      rows[k].p_e_tstar = trace.p_e(times.size() - 1);
      rows[k].p_bar = trace.p_bar;
      ok[k] = 1;
    } catch (const Error&) {
      ok[k] = 0;
    }
  });
  for (int k = 0; k < n_structures; ++k) {
    if (ok[k])
      out.structures.push_back(rows[k]);
    else
      ++out.n_failed;
  }
  const int n = static_cast<int>(out.structures.size());
  if (n < 3) throw NumericalFailure("correlation_study: too many failed trials");
  VecX F(n), mg(n), pe(n), pb(n);
  for (int k = 0; k < n; ++k) {
    F(k) = out.structures[k].F;
    mg(k) = out.structures[k].min_rate;
    pe(k) = out.structures[k].p_e_tstar;
    pb(k) = out.structures[k].p_bar;
  }
  out.r_F_pe = pearson(F, pe);
  out.r_F_pbar = pearson(F, pb);
  out.r_minrate_pe = pearson(mg, pe);
  out.r_minrate_pbar = pearson(mg, pb);
  return out;
}

namespace {

Real matched_mean_distance(const std::vector<Vec3>& a,
                           const std::vector<Vec3>& b, Real angle) {
  const Real c = std::cos(angle), s = std::sin(angle);
  std::vector<char> used(b.size(), 0);
  Real acc = 0;
  for (const Vec3& pa : a) {
    Real best = std::numeric_limits<Real>::infinity();
    int best_j = -1;
    for (size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const Vec3 rb(c * b[j](0) - s * b[j](1), s * b[j](0) + c * b[j](1),
                    b[j](2));
      const Real d = (pa - rb).norm();
      if (d < best) {
        best = d;
        best_j = static_cast<int>(j);
      }
    }
    used[best_j] = 1;
    acc += best;
  }
  return acc / a.size();
}

}  // namespace

Real structure_distance(const AtomArray& a, const AtomArray& b) {
  if (a.size() != b.size())
    throw Error("structure_distance: size mismatch");
  // coarse scan over z-rotations, then local refinement
  const int coarse = 360;
  Real best_angle = 0;
  Real best = std::numeric_limits<Real>::infinity();
  for (int k = 0; k < coarse; ++k) {
    const Real angle = 2.0 * EIGEN_PI * k / coarse;
    const Real d = matched_mean_distance(a.positions, b.positions, angle);
    if (d < best) {
      best = d;
      best_angle = angle;
    }
  }
  Real step = 2.0 * EIGEN_PI / coarse;
  for (int it = 0; it < 20; ++it) {
    step *= 0.5;
    for (const Real angle : {best_angle - step, best_angle + step}) {
      const Real d = matched_mean_distance(a.positions, b.positions, angle);
      if (d < best) {
        best = d;
        best_angle = angle;
      }
    }
  }
  return best;
}

SeedDependence seed_dependence_study(const OptimizationProblem& problem,
                                     int n_runs, Real sigma,
                                     std::uint64_t master_seed, int threads) {
  if (n_runs < 1) throw Error("seed_dependence_study: n_runs must be >= 1");
  SeedDependence out;
  out.optimization = multi_start(problem, n_runs, sigma, master_seed, threads);

  for (int run = 0; run < n_runs; ++run) {
    const OptimizationResult& r = out.optimization.runs[run];
    SeedDependence::Row row{run, 0, 0, r.F_final, r.feasible};
    if (r.feasible) {
      const EffectiveHamiltonian ham = build_hamiltonian(r.final);
      const SpectralData s = decompose(ham);
      const ModeWeights w = mode_weights(s, storage_state(r.final));
      int lmax = 0;
      for (int l = 1; l < s.n_modes(); ++l) {
        if (std::abs(w.weights(l)) > std::abs(w.weights(lmax))) lmax = l;
      }
      row.w_max_abs = std::abs(w.weights(lmax));
      row.rate_of_max = s.decay_rates(lmax) / r.final.gamma0;
    }
    out.rows.push_back(row);
  }

  // greedy clustering of feasible structures
  const Real threshold = 0.02;
  out.cluster_of_run.assign(n_runs, -1);
  std::vector<int> cluster_rep;  // run index of each cluster's founder
  for (int run = 0; run < n_runs; ++run) {
    if (!out.optimization.runs[run].feasible) continue;
    int assigned = -1;
    for (size_t c = 0; c < cluster_rep.size(); ++c) {
      const Real d = structure_distance(
          out.optimization.runs[cluster_rep[c]].final,
          out.optimization.runs[run].final);
      if (d <= threshold) {
        assigned = static_cast<int>(c);
        break;
      }
    }
    if (assigned < 0) {
      assigned = static_cast<int>(cluster_rep.size());
      cluster_rep.push_back(run);
    }
    out.cluster_of_run[run] = assigned;
  }
  std::vector<int> counts(cluster_rep.size(), 0);
  for (int run = 0; run < n_runs; ++run) {
    if (out.cluster_of_run[run] >= 0) ++counts[out.cluster_of_run[run]];
  }
  for (size_t c = 0; c < counts.size(); ++c) {
    if (out.modal_cluster < 0 || counts[c] > counts[out.modal_cluster])
      out.modal_cluster = static_cast<int>(c);
  }
  if (out.modal_cluster >= 0) {
    for (int run = 0; run < n_runs; ++run) {
      if (out.cluster_of_run[run] != out.modal_cluster) continue;
      if (out.representative_run < 0 ||
          out.optimization.runs[run].F_final <
              out.optimization.runs[out.representative_run].F_final)
        out.representative_run = run;
    }
  }
  return out;
}

}  // namespace subrad
