#pragma once

#include <cstdint>
#include <vector>

#include "subrad/dynamics.hpp"
#include "subrad/optimizer.hpp"
#include "subrad/types.hpp"

namespace subrad {

/// Pointwise median and 10-90 percentile band of p_e(t) over an ensemble of
/// position-fluctuated copies of a structure.
struct EnsembleSummary {
  VecX times;
  VecX p10, p50, p90;
  int n_trials = 0;
  int n_failed = 0;  // excluded trials (decomposition failures)
  Real sigma_xy = 0, sigma_z = 0;
  std::uint64_t master_seed = 0;
};

/// Per-structure metrics and Pearson correlations of (objective, metric)
/// pairs: objectives {F, min Gamma/gamma0}, metrics {p_e(t*), p_bar(t*)}.
struct CorrelationReport {
  struct Row {
    Real F, min_rate, p_e_tstar, p_bar;
  };
  std::vector<Row> structures;
  Real r_F_pe = 0, r_F_pbar = 0, r_minrate_pe = 0, r_minrate_pbar = 0;
  int n_failed = 0;
  std::uint64_t master_seed = 0;
};

/// Distribution of (|w_lmax|, Gamma_lmax, F) over multi-start runs plus the
/// modal structure cluster.
struct SeedDependence {
  struct Row {
    int run;
    Real w_max_abs;      // |w| of the largest-weight mode
    Real rate_of_max;    // its Gamma/gamma0
    Real F_final;
    bool feasible;
  };
  std::vector<Row> rows;
  std::vector<int> cluster_of_run;    // -1 for failed runs
  int modal_cluster = -1;
  int representative_run = -1;        // best-F member of the modal cluster
  MultiStartResult optimization;
};

Real pearson(const VecX& x, const VecX& y);

/// Linear-interpolation quantile of an unsorted sample, q in [0, 1].
Real quantile(std::vector<Real> values, Real q);

/// Perturbs all atoms per trial (per-axis sigma_xy / sigma_z), evaluates
/// p_e(t) via the mode-sum, reports pointwise percentiles. Failed trials are
/// excluded and counted.
EnsembleSummary robustness_ensemble(const AtomArray& base, Real sigma_xy,
                                    Real sigma_z, int n_trials,
                                    const VecX& times,
                                    std::uint64_t master_seed,
                                    int threads = 1);

/// Candidate structures from Gaussian xyz perturbation (amplitude sigma per
/// axis, all atoms); per-candidate F, min Gamma/gamma0, p_e(t*), p_bar(t*).
CorrelationReport correlation_study(const AtomArray& base, Real sigma,
                                    int n_structures, Real t_star,
                                    const SurrogateParams& params,
                                    std::uint64_t master_seed,
                                    int threads = 1);

/// Multi-start statistics plus greedy structure clustering: mean per-atom
/// distance after the best rotation about z and nearest-neighbor index
/// matching, threshold 0.02 lambda0.
SeedDependence seed_dependence_study(const OptimizationProblem& problem,
                                     int n_runs, Real sigma,
                                     std::uint64_t master_seed,
                                     int threads = 1);

/// Mean per-atom distance between two equal-size structures after optimal
/// rotation about z (grid search + refinement) and greedy nearest-neighbor
/// atom matching.
Real structure_distance(const AtomArray& a, const AtomArray& b);

}  // namespace subrad
