#pragma once

#include <vector>

#include "subrad/types.hpp"

namespace subrad {

struct QpInfeasible : Error {
  using Error::Error;
};

struct QpResult {
  VecX x;                   // minimizer
  VecX lambda;              // multipliers, >= 0, complementary
  std::vector<int> active;  // active constraint indices
  int iterations = 0;
};

/// Dense convex QP
///   min 1/2 x' G x + a' x   s.t.  C' x >= b
/// with G symmetric positive definite, C (n x m) holding one constraint
/// normal per column. Goldfarb-Idnani dual active-set method; throws
/// QpInfeasible when the constraint set is empty.
QpResult solve_qp(const MatX& G, const VecX& a, const MatX& C, const VecX& b);

}  // namespace subrad
