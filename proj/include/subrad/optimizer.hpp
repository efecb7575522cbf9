#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subrad/geometry.hpp"
#include "subrad/surrogate.hpp"
#include "subrad/types.hpp"

namespace subrad {

enum class OptimizerMethod {
  /// Damped-BFGS SQP: convex QP subproblems over linearized pair-distance
  /// constraints, L1 merit line search, central finite-difference gradients.
  SqpBfgsL1,
};

const char* to_string(OptimizerMethod m);

/// Minimum-distance-constrained minimization of the surrogate F over the
/// in-plane coordinates of the movable atoms. The storage atom and all z
/// coordinates stay fixed. Constraints are the squared form
/// |r_j - r_j'|^2 >= r_min^2 for every pair touching a movable atom.
struct OptimizationProblem {
  AtomArray seed;
  Real r_min = 0.1;
  SurrogateParams params;
  std::vector<int> movable;  // empty = all non-storage atoms
  OptimizerMethod method = OptimizerMethod::SqpBfgsL1;
  int max_iterations = 500;
  Real objective_tol = 1e-8;
  Real constraint_tol = 1e-9;
  Real fd_step = 1e-6;

  std::vector<int> movable_or_default() const;
};

struct OptimizationResult {
  AtomArray final;
  Real F_initial = 0;
  Real F_final = 0;
  std::vector<Real> cost_trace;  // F at accepted iterates
  bool feasible = false;         // min_pair_distance >= r_min - 1e-9
  bool converged = false;
  std::uint64_t seed_id = 0;     // RNG seed of the perturbation that made the seed
  int iterations_used = 0;
  int cost_evaluations = 0;
  std::string message;
};

struct MultiStartResult {
  std::vector<OptimizationResult> runs;
  int best_index = -1;  // argmin F_final over feasible runs
  std::uint64_t master_seed = 0;

  const OptimizationResult& best() const { return runs.at(best_index); }
};

/// Throws InfeasibleSeed when the seed violates the distance constraints
/// beyond restoration (min distance < r_min/2). Cost evaluations that fail
/// numerically count as +inf and the step is rejected.
OptimizationResult optimize(const OptimizationProblem& problem);

/// n_runs independent optimizations from xy-Gaussian-perturbed copies of the
/// seed (deviation sigma on the movable atoms); per-run seeds derived from
/// master_seed, results merged by run index. Fails only if every run fails.
MultiStartResult multi_start(const OptimizationProblem& problem, int n_runs,
                             Real sigma, std::uint64_t master_seed,
                             int threads = 1);

}  // namespace subrad
