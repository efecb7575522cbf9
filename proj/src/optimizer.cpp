#include "subrad/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "subrad/qp.hpp"

namespace subrad {

const char* to_string(OptimizerMethod m) {
  switch (m) {
    case OptimizerMethod::SqpBfgsL1: return "sqp-bfgs-l1";
  }
  return "?";
}

std::vector<int> OptimizationProblem::movable_or_default() const {
  if (!movable.empty()) {
    for (int i : movable) {
      if (i < 0 || i >= seed.size() || i == seed.storage_index)
        throw Error("OptimizationProblem: bad movable index");
    }
    return movable;
  }
  std::vector<int> out;
  for (int i = 0; i < seed.size(); ++i) {
    if (i != seed.storage_index) out.push_back(i);
  }
  return out;
}

namespace {

constexpr Real kInf = std::numeric_limits<Real>::infinity();

// Design-vector plumbing: x stacks (x, y) of each movable atom.
struct DesignSpace {
  const AtomArray* base;
  std::vector<int> movable;
  std::vector<std::pair<int, int>> pairs;  // pairs touching a movable atom

  explicit DesignSpace(const OptimizationProblem& p)
      : base(&p.seed), movable(p.movable_or_default()) {
    std::vector<bool> is_mov(base->size(), false);
    for (int i : movable) is_mov[i] = true;
    for (int i = 0; i < base->size(); ++i) {
      for (int j = i + 1; j < base->size(); ++j) {
        if (is_mov[i] || is_mov[j]) pairs.emplace_back(i, j);
      }
    }
  }

  int dims() const { return 2 * static_cast<int>(movable.size()); }
  int n_constraints() const { return static_cast<int>(pairs.size()); }

  VecX pack(const AtomArray& a) const {
    VecX x(dims());
    for (size_t k = 0; k < movable.size(); ++k) {
      x(2 * k) = a.positions[movable[k]](0);
      x(2 * k + 1) = a.positions[movable[k]](1);
    }
    return x;
  }

  AtomArray unpack(const VecX& x) const {
    AtomArray a = *base;
    for (size_t k = 0; k < movable.size(); ++k) {
      a.positions[movable[k]](0) = x(2 * k);
      a.positions[movable[k]](1) = x(2 * k + 1);
    }
    return a;
  }

  // g_k(x) = |r_i - r_j|^2 - r_min^2 >= 0
  VecX constraints(const VecX& x, Real r_min) const {
    const AtomArray a = unpack(x);
    VecX g(n_constraints());
    for (size_t k = 0; k < pairs.size(); ++k) {
      const Vec3 d = a.positions[pairs[k].first] - a.positions[pairs[k].second];
      g(k) = d.squaredNorm() - r_min * r_min;
    }
    return g;
  }

  MatX constraint_jacobian(const VecX& x) const {
    const AtomArray a = unpack(x);
    std::vector<int> col(base->size(), -1);
    for (size_t k = 0; k < movable.size(); ++k) col[movable[k]] = 2 * k;
    MatX jac = MatX::Zero(n_constraints(), dims());
    for (size_t k = 0; k < pairs.size(); ++k) {
      const auto [i, j] = pairs[k];
      const Vec3 d = a.positions[i] - a.positions[j];
      if (col[i] >= 0) {
        jac(k, col[i]) = 2 * d(0);
        jac(k, col[i] + 1) = 2 * d(1);
      }
      if (col[j] >= 0) {
        jac(k, col[j]) = -2 * d(0);
        jac(k, col[j] + 1) = -2 * d(1);
      }
    }
    return jac;
  }
};

struct Objective {
  const DesignSpace* space;
  SurrogateParams params;
  int evaluations = 0;

  Real operator()(const VecX& x) {
    ++evaluations;
    try {
      return surrogate_of_array(space->unpack(x), params).F;
    } catch (const Error&) {
      return kInf;  // rejected by the line search
    }
  }
};

VecX central_difference_gradient(Objective& f, const VecX& x, Real h) {
  VecX g(x.size());
  VecX xp = x;
  for (int i = 0; i < x.size(); ++i) {
    const Real xi = x(i);
    xp(i) = xi + h;
    const Real fp = f(xp);
    xp(i) = xi - h;
    const Real fm = f(xp);
    xp(i) = xi;
    if (!std::isfinite(fp) || !std::isfinite(fm))
      throw NumericalFailure("gradient evaluation failed");
    g(i) = (fp - fm) / (2 * h);
  }
  return g;
}

}  // namespace

OptimizationResult optimize(const OptimizationProblem& problem) {
  problem.seed.validate();
  if (!(problem.r_min > 0)) throw Error("optimize: r_min must be positive");
  const DesignSpace space(problem);
  if (space.dims() == 0) throw Error("optimize: no movable atoms");

  OptimizationResult res;
  res.F_initial = kInf;
  res.final = problem.seed;

  const Real seed_min = min_pair_distance(problem.seed);
  if (seed_min < 0.5 * problem.r_min)
    throw InfeasibleSeed("optimize: seed min distance below r_min/2");

  Objective f{&space, problem.params};
  VecX x = space.pack(problem.seed);
  const int n = space.dims();
  const int m = space.n_constraints();

  Real fx = f(x);
  if (!std::isfinite(fx))
    throw NumericalFailure("optimize: seed evaluation failed");
  res.F_initial = fx;
  res.cost_trace.push_back(fx);

  VecX gv = space.constraints(x, problem.r_min);
  VecX gf = central_difference_gradient(f, x, problem.fd_step);
  MatX B = MatX::Identity(n, n);
  const Real g_feas_tol = 2.0 * problem.constraint_tol * problem.r_min;

  // best feasible iterate seen (squared-form feasibility)
  Real best_f = (gv.minCoeff() >= -g_feas_tol) ? fx : kInf;
  VecX best_x = x;

  Real rho = 1.0;
  int stall = 0;
  int it = 0;
  for (it = 1; it <= problem.max_iterations; ++it) {
    const MatX jac = space.constraint_jacobian(x);
    VecX d;
    VecX lam = VecX::Zero(m);
    try {
      QpResult qp = solve_qp(B, gf, jac.transpose(), -gv);
      d = qp.x;
      lam = qp.lambda;
    } catch (const QpInfeasible&) {
      // relax incompatible linearizations and retry once
      VecX b_relaxed = -gv;
      for (int k = 0; k < m; ++k) b_relaxed(k) = std::min(b_relaxed(k), 0.0);
      try {
        QpResult qp = solve_qp(B, gf, jac.transpose(), b_relaxed);
        d = qp.x;
        lam = qp.lambda;
      } catch (const QpInfeasible&) {
        res.message = "qp subproblem infeasible";
        break;
      }
    }
    if (d.lpNorm<Eigen::Infinity>() < 1e-12) {
      res.converged = true;
      break;
    }

    if (lam.size() > 0)
      rho = std::max(rho, 2.0 * lam.lpNorm<Eigen::Infinity>());
    const Real viol0 = (-gv.cwiseMin(0.0)).sum();
    const Real merit0 = fx + rho * viol0;
    const Real slope = gf.dot(d) - rho * viol0;

    Real alpha = 1.0;
    bool accepted = false;
    Real fn = fx;
    VecX xn, gn;
    for (int ls = 0; ls < 30; ++ls) {
      xn = x + alpha * d;
      fn = f(xn);
      if (std::isfinite(fn)) {
        gn = space.constraints(xn, problem.r_min);
        const Real meritn = fn + rho * (-gn.cwiseMin(0.0)).sum();
        if (meritn <= merit0 + 1e-4 * alpha * slope) {
          accepted = true;
          break;
        }
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      res.message = "line search failed";
      break;
    }

    VecX gf_n;
    try {
      gf_n = central_difference_gradient(f, xn, problem.fd_step);
    } catch (const NumericalFailure&) {
      res.message = "gradient failed after step";
      break;
    }

    // Powell-damped BFGS on the Lagrangian gradient difference
    const MatX jac_n = space.constraint_jacobian(xn);
    const VecX s = xn - x;
    VecX y = (gf_n - jac_n.transpose() * lam) - (gf - jac.transpose() * lam);
    const Real sBs = s.dot(B * s);
    Real sy = s.dot(y);
    if (sy < 0.2 * sBs) {
      const Real theta = 0.8 * sBs / (sBs - sy);
      y = theta * y + (1 - theta) * (B * s);
      sy = s.dot(y);
    }
    if (sy > 1e-14) {
      const VecX Bs = B * s;
      B += (y * y.transpose()) / sy - (Bs * Bs.transpose()) / sBs;
    }

    const bool tiny =
        std::abs(fn - fx) <
            problem.objective_tol * std::max<Real>(1.0, std::abs(fx)) &&
        (-gn.cwiseMin(0.0)).maxCoeff() < g_feas_tol;
    stall = tiny ? stall + 1 : 0;

    x = xn;
    fx = fn;
    gv = gn;
    gf = gf_n;
    res.cost_trace.push_back(fx);
    if (gv.minCoeff() >= -g_feas_tol && fx < best_f) {
      best_f = fx;
      best_x = x;
    }
    if (stall >= 3 && (alpha * d).lpNorm<Eigen::Infinity>() < 1e-7) {
      res.converged = true;
      break;
    }
  }
  res.iterations_used = std::min(it, problem.max_iterations);
  res.cost_evaluations = f.evaluations;

  // Return the best feasible iterate; fall back to the terminal one.
  if (std::isfinite(best_f)) {
    res.final = space.unpack(best_x);
    res.F_final = best_f;
    res.feasible =
        min_pair_distance(res.final) >= problem.r_min - problem.constraint_tol;
  } else {
    res.final = space.unpack(x);
    res.F_final = fx;
    res.feasible = false;
    if (res.message.empty()) res.message = "no feasible iterate found";
  }
  if (!res.converged && res.message.empty()) res.message = "iteration cap";
  return res;
}

MultiStartResult multi_start(const OptimizationProblem& problem, int n_runs,
                             Real sigma, std::uint64_t master_seed,
                             int threads) {
  if (n_runs < 1) throw Error("multi_start: n_runs must be >= 1");
  if (sigma < 0) throw Error("multi_start: sigma must be non-negative");
  problem.seed.validate();

  MultiStartResult out;
  out.master_seed = master_seed;
  out.runs.resize(n_runs);
  std::vector<std::string> errors(n_runs);

  std::atomic<int> next{0};
  auto worker = [&]() {
    for (int run = next.fetch_add(1); run < n_runs; run = next.fetch_add(1)) {
      const std::uint64_t run_seed = derive_seed(master_seed, run);
      GaussianSampler rng(run_seed);
      OptimizationProblem local = problem;
      local.seed = perturb(problem.seed, sigma, 0.0, rng,
                           PerturbScope::SurroundingOnly);
      try {
        out.runs[run] = optimize(local);
      } catch (const Error& e) {
        errors[run] = e.what();
        out.runs[run].message = e.what();
        out.runs[run].feasible = false;
        out.runs[run].final = local.seed;
        out.runs[run].F_final = kInf;
        out.runs[run].F_initial = kInf;
      }
      out.runs[run].seed_id = run_seed;
    }
  };
  const int n_threads = std::max(1, std::min(threads, n_runs));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (int run = 0; run < n_runs; ++run) {
    const auto& r = out.runs[run];
    if (!r.feasible) continue;
    if (out.best_index < 0 || r.F_final < out.runs[out.best_index].F_final)
      out.best_index = run;
  }
  if (out.best_index < 0) {
    std::string detail;
    int completed = 0;
    for (int run = 0; run < n_runs; ++run) {
      if (errors[run].empty())
        ++completed;
      else if (detail.empty())
        detail = errors[run];
    }
    if (completed > 0)
      throw InfeasibleSeed("multi_start: no feasible run");
    throw NumericalFailure("multi_start: all runs failed" +
                           (detail.empty() ? "" : " (" + detail + ")"));
  }
  return out;
}

}  // namespace subrad
