#include "subrad/qp.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>

namespace subrad {

// Dual active-set iteration: start from the unconstrained minimum, repeatedly
// pick the most violated constraint and take mixed primal/dual steps until it
// can be added to the active set, dropping blocking constraints along the
// way. Dense refactorization per step; fine at the problem sizes used here.
QpResult solve_qp(const MatX& G, const VecX& a, const MatX& C, const VecX& b) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());
  if (G.rows() != n || G.cols() != n || C.rows() != n || C.cols() != m)
    throw Error("solve_qp: dimension mismatch");

  Eigen::LLT<MatX> llt(G);
  if (llt.info() != Eigen::Success)
    throw Error("solve_qp: G is not positive definite");
  auto ginv = [&](const VecX& v) -> VecX { return llt.solve(v); };

  const Real tol = 1e-10;
  QpResult res;
  res.x = -ginv(a);
  res.lambda = VecX::Zero(m);
  const int max_iter = 50 + 10 * m;

  while (true) {
    // most violated inactive constraint
    int p = -1;
    Real worst = -tol;
    for (int i = 0; i < m; ++i) {
      bool is_active = false;
      for (int k : res.active) {
        if (k == i) { is_active = true; break; }
      }
      if (is_active) continue;
      const Real s = C.col(i).dot(res.x) - b(i);
      if (s < worst) {
        worst = s;
        p = i;
      }
    }
    if (p < 0) return res;

    const VecX cp = C.col(p);
    Real lam_p = 0;
    while (true) {
      if (++res.iterations > max_iter)
        throw Error("solve_qp: active-set iteration cap exceeded");
      const int q = static_cast<int>(res.active.size());
      VecX r, z;
      if (q > 0) {
        MatX N(n, q), gin(n, q);
        for (int k = 0; k < q; ++k) {
          N.col(k) = C.col(res.active[k]);
          gin.col(k) = ginv(N.col(k));
        }
        const MatX M = N.transpose() * gin;
        r = M.ldlt().solve(N.transpose() * ginv(cp));
        z = ginv(cp) - gin * r;
      } else {
        r.resize(0);
        z = ginv(cp);
      }
      const Real zc = z.dot(cp);
      const Real sp = cp.dot(res.x) - b(p);
      const Real t1 = (zc > tol * std::max<Real>(1.0, cp.squaredNorm()))
                          ? -sp / zc
                          : std::numeric_limits<Real>::infinity();
      Real t2 = std::numeric_limits<Real>::infinity();
      int blocking = -1;
      for (int k = 0; k < q; ++k) {
        if (r(k) > tol) {
          const Real tk = res.lambda(res.active[k]) / r(k);
          if (tk < t2) {
            t2 = tk;
            blocking = k;
          }
        }
      }
      const Real t = std::min(t1, t2);
      if (!std::isfinite(t))
        throw QpInfeasible("solve_qp: inconsistent constraints");
      if (std::isfinite(t1)) res.x += t * z;
      for (int k = 0; k < q; ++k) res.lambda(res.active[k]) -= t * r(k);
      lam_p += t;
      if (t == t1) {
        res.lambda(p) = lam_p;
        res.active.push_back(p);
        break;
      }
      res.lambda(res.active[blocking]) = 0;
      res.active.erase(res.active.begin() + blocking);
    }
  }
}

}  // namespace subrad
