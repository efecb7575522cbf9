#include "subrad/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace subrad {

const char* to_string(GeometryKind kind) {
  switch (kind) {
    case GeometryKind::Square: return "square";
    case GeometryKind::Sunflower: return "sunflower";
    case GeometryKind::Ring: return "ring";
  }
  return "?";
}

GeometryKind geometry_kind_from_string(const std::string& s) {
  if (s == "square") return GeometryKind::Square;
  if (s == "sunflower") return GeometryKind::Sunflower;
  if (s == "ring") return GeometryKind::Ring;
  throw ConfigError("unknown geometry kind: " + s);
}

CVec3 GeometrySpec::default_dipole() {
  const Real s = 1.0 / std::sqrt(2.0);
  return CVec3(Complex(s, 0), Complex(0, s), Complex(0, 0));
}

void AtomArray::validate() const {
  const int n = size();
  if (n < 1) throw Error("AtomArray: empty");
  if (storage_index < 0 || storage_index >= n)
    throw Error("AtomArray: storage_index out of range");
  if (!(gamma0 > 0)) throw Error("AtomArray: gamma0 must be positive");
  if (!(omega0 > 0)) throw Error("AtomArray: omega0 must be positive");
  const Real dnorm = std::sqrt(std::norm(dipole(0)) + std::norm(dipole(1)) +
                               std::norm(dipole(2)));
  if (std::abs(dnorm - 1.0) > 1e-12)
    throw Error("AtomArray: dipole must be a unit vector");
  for (const Vec3& p : positions) {
    if (!p.allFinite()) throw Error("AtomArray: non-finite position");
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if ((positions[i] - positions[j]).norm() <= 0)
        throw Error("AtomArray: coincident atoms");
    }
  }
}

namespace {

void require_spec(const GeometrySpec& spec, GeometryKind kind) {
  if (spec.kind != kind) throw Error("geometry spec kind mismatch");
  if (spec.n < 2) throw Error("geometry: n must be >= 2");
  if (!(spec.a > 0)) throw Error("geometry: a must be positive");
}

// Mean over all atoms of the distance to their nearest neighbor.
Real mean_nearest_neighbor(const std::vector<Vec3>& pts) {
  const int n = static_cast<int>(pts.size());
  Real sum = 0;
  for (int i = 0; i < n; ++i) {
    Real best = std::numeric_limits<Real>::infinity();
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      best = std::min(best, (pts[i] - pts[j]).norm());
    }
    sum += best;
  }
  return sum / n;
}

std::vector<Vec3> sunflower_points(int n, Real rc) {
  const Real golden = EIGEN_PI * (3.0 - std::sqrt(5.0));
  std::vector<Vec3> pts;
  pts.reserve(n * n + 1);
  pts.emplace_back(Vec3::Zero());
  for (int j = 1; j <= n * n; ++j) {
    const Real r = std::sqrt(static_cast<Real>(j)) * rc;
    const Real th = j * golden;
    pts.emplace_back(r * std::cos(th), r * std::sin(th), 0.0);
  }
  return pts;
}

}  // namespace

AtomArray make_square(const GeometrySpec& spec) {
  require_spec(spec, GeometryKind::Square);
  AtomArray out;
  out.dipole = spec.dipole;
  const int n = spec.n;
  const bool even = (n % 2 == 0);
  if (even) {
    out.positions.emplace_back(Vec3::Zero());
    out.storage_index = 0;
  }
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const Real x = (ix - 0.5 * (n - 1)) * spec.a;
      const Real y = (iy - 0.5 * (n - 1)) * spec.a;
      out.positions.emplace_back(x, y, 0.0);
    }
  }
  if (!even) out.storage_index = (n * n - 1) / 2;
  out.validate();
  return out;
}

AtomArray make_sunflower(const GeometrySpec& spec) {
  require_spec(spec, GeometryKind::Sunflower);
  // mean NN distance is linear in rc, so the bracket test below is exact
  Real lo = spec.a / 10.0, hi = spec.a * 10.0;
  auto miss = [&](Real rc) {
    return mean_nearest_neighbor(sunflower_points(spec.n, rc)) - spec.a;
  };
  if (miss(lo) > 0 || miss(hi) < 0)
    throw Error("make_sunflower: r_c bisection bracket failed");
  Real rc = 0;
  bool converged = false;
  for (int it = 0; it < 200; ++it) {
    rc = 0.5 * (lo + hi);
    const Real f = miss(rc);
    if (std::abs(f) <= 1e-8) {
      converged = true;
      break;
    }
    (f < 0 ? lo : hi) = rc;
  }
  if (!converged) throw Error("make_sunflower: r_c bisection did not converge");

  AtomArray out;
  out.dipole = spec.dipole;
  out.positions = sunflower_points(spec.n, rc);
  out.storage_index = 0;
  out.validate();
  return out;
}

AtomArray make_ring(const GeometrySpec& spec) {
  require_spec(spec, GeometryKind::Ring);
  AtomArray out;
  out.dipole = spec.dipole;
  out.positions.emplace_back(Vec3::Zero());
  out.storage_index = 0;
  for (int m = 0; m < spec.n; ++m) {
    const Real th = 2.0 * EIGEN_PI * m / spec.n;
    out.positions.emplace_back(spec.a * std::cos(th), spec.a * std::sin(th),
                               0.0);
  }
  out.validate();
  return out;
}

AtomArray make_geometry(const GeometrySpec& spec) {
  switch (spec.kind) {
    case GeometryKind::Square: return make_square(spec);
    case GeometryKind::Sunflower: return make_sunflower(spec);
    case GeometryKind::Ring: return make_ring(spec);
  }
  throw Error("make_geometry: bad kind");
}

AtomArray perturb(const AtomArray& array, Real sigma_xy, Real sigma_z,
                  GaussianSampler& rng, PerturbScope scope) {
  if (sigma_xy < 0 || sigma_z < 0)
    throw Error("perturb: sigmas must be non-negative");
  AtomArray out = array;
  for (int i = 0; i < out.size(); ++i) {
    if (scope == PerturbScope::SurroundingOnly && i == out.storage_index)
      continue;
    const Real dx = rng.normal();
    const Real dy = rng.normal();
    const Real dz = rng.normal();
    out.positions[i] += Vec3(sigma_xy * dx, sigma_xy * dy, sigma_z * dz);
  }
  return out;
}

Real min_pair_distance(const AtomArray& array) {
  const int n = array.size();
  if (n < 2) throw Error("min_pair_distance: need at least two atoms");
  Real best = std::numeric_limits<Real>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      best = std::min(best, (array.positions[i] - array.positions[j]).norm());
    }
  }
  return best;
}

AtomArray scaled_to_min_distance(const AtomArray& array, Real rmin) {
  if (!(rmin > 0)) throw Error("scaled_to_min_distance: rmin must be positive");
  const Real factor = rmin / min_pair_distance(array);
  AtomArray out = array;
  for (Vec3& p : out.positions) p *= factor;
  return out;
}

}  // namespace subrad
