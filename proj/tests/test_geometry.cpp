#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "subrad/geometry.hpp"

using namespace subrad;

namespace {

GeometrySpec spec_of(GeometryKind kind, int n, Real a) {
  GeometrySpec s;
  s.kind = kind;
  s.n = n;
  s.a = a;
  return s;
}

// test-local O(N^2) oracle, independent of the library path
Real brute_force_min_distance(const std::vector<Vec3>& pts) {
  Real best = std::numeric_limits<Real>::infinity();
  for (size_t i = 0; i < pts.size(); ++i)
    for (size_t j = i + 1; j < pts.size(); ++j)
      best = std::min(best, (pts[i] - pts[j]).norm());
  return best;
}

Real brute_force_mean_nn(const std::vector<Vec3>& pts) {
  Real sum = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    Real best = std::numeric_limits<Real>::infinity();
    for (size_t j = 0; j < pts.size(); ++j) {
      if (i == j) continue;
      best = std::min(best, (pts[i] - pts[j]).norm());
    }
    sum += best;
  }
  return sum / pts.size();
}

}  // namespace

TEST_CASE("square 2x2 centers four atoms around the storage atom") {
  const AtomArray a = make_square(spec_of(GeometryKind::Square, 2, 0.25));
  REQUIRE(a.size() == 5);
  CHECK(a.storage_index == 0);
  CHECK(a.storage_position().norm() == doctest::Approx(0.0));
  for (int i = 1; i < 5; ++i) {
    CHECK(std::abs(a.positions[i](0)) == doctest::Approx(0.125));
    CHECK(std::abs(a.positions[i](1)) == doctest::Approx(0.125));
  }
  CHECK(min_pair_distance(a) == doctest::Approx(0.125 * std::sqrt(2.0)));
}

TEST_CASE("square n=10 has 100 surrounding atoms plus storage") {
  const AtomArray a = make_square(spec_of(GeometryKind::Square, 10, 0.25));
  CHECK(a.size() == 101);
  a.validate();
}

TEST_CASE("square odd n puts the storage atom on the central grid site") {
  const AtomArray a = make_square(spec_of(GeometryKind::Square, 3, 0.1));
  REQUIRE(a.size() == 9);
  CHECK(a.storage_position().norm() == doctest::Approx(0.0));
  Real to_neighbor = std::numeric_limits<Real>::infinity();
  for (int i = 0; i < a.size(); ++i) {
    if (i == a.storage_index) continue;
    to_neighbor =
        std::min(to_neighbor, (a.positions[i] - a.storage_position()).norm());
  }
  CHECK(to_neighbor == doctest::Approx(0.1));
}

TEST_CASE("square rejects bad parameters") {
  CHECK_THROWS_AS(make_square(spec_of(GeometryKind::Square, 1, 0.25)), Error);
  CHECK_THROWS_AS(make_square(spec_of(GeometryKind::Square, 4, 0.0)), Error);
  CHECK_THROWS_AS(make_square(spec_of(GeometryKind::Square, 4, -1.0)), Error);
}

TEST_CASE("sunflower mean nearest-neighbor distance hits the target") {
  const AtomArray a =
      make_sunflower(spec_of(GeometryKind::Sunflower, 10, 0.25));
  REQUIRE(a.size() == 101);
  CHECK(a.storage_index == 0);
  CHECK(a.storage_position().norm() == doctest::Approx(0.0));
  CHECK(brute_force_mean_nn(a.positions) == doctest::Approx(0.25).epsilon(1e-6));
}

TEST_CASE("sunflower first atom sits at the golden angle") {
  const AtomArray a = make_sunflower(spec_of(GeometryKind::Sunflower, 4, 0.2));
  const Vec3 p = a.positions[1];
  const Real angle = std::atan2(p(1), p(0));
  const Real golden = EIGEN_PI * (3.0 - std::sqrt(5.0));
  // golden angle ~ 2.39996 rad, wrapped into (-pi, pi]
  CHECK(angle == doctest::Approx(golden - 2 * EIGEN_PI).epsilon(1e-12));
  CHECK(std::abs(golden - 2.39996) < 1e-5);
}

TEST_CASE("sunflower r_c matches the bisection oracle") {
  // oracle: mean NN distance is linear in r_c, so r_c* = a / meanNN(rc=1)
  const int n = 10;
  const Real a_target = 0.25;
  const Real golden = EIGEN_PI * (3.0 - std::sqrt(5.0));
  std::vector<Vec3> unit;
  unit.emplace_back(Vec3::Zero());
  for (int j = 1; j <= n * n; ++j) {
    const Real r = std::sqrt(static_cast<Real>(j));
    unit.emplace_back(r * std::cos(j * golden), r * std::sin(j * golden), 0.0);
  }
  const Real rc_expected = a_target / brute_force_mean_nn(unit);

  const AtomArray arr =
      make_sunflower(spec_of(GeometryKind::Sunflower, n, a_target));
  const Real rc_actual = arr.positions[1].norm();  // |r_1| = rc
  CHECK(rc_actual == doctest::Approx(rc_expected).epsilon(1e-7));
}

TEST_CASE("ring chord distance and atom count") {
  const AtomArray a = make_ring(spec_of(GeometryKind::Ring, 12, 0.45));
  REQUIRE(a.size() == 13);
  const Real chord = 2.0 * 0.45 * std::sin(EIGEN_PI / 12);
  CHECK(min_pair_distance(a) == doctest::Approx(chord));
  CHECK(chord == doctest::Approx(0.23294).epsilon(1e-4));

  const AtomArray b = make_ring(spec_of(GeometryKind::Ring, 10, 0.25));
  CHECK(b.size() == 11);
}

TEST_CASE("ring n=4 lands on the axes") {
  const AtomArray a = make_ring(spec_of(GeometryKind::Ring, 4, 1.0));
  REQUIRE(a.size() == 5);
  CHECK((a.positions[1] - Vec3(1, 0, 0)).norm() == doctest::Approx(0.0));
  CHECK((a.positions[2] - Vec3(0, 1, 0)).norm() < 1e-15);
  CHECK((a.positions[3] - Vec3(-1, 0, 0)).norm() < 1e-15);
  CHECK((a.positions[4] - Vec3(0, -1, 0)).norm() < 1e-15);
}

TEST_CASE("perturb with zero sigma is the identity") {
  const AtomArray a = make_ring(spec_of(GeometryKind::Ring, 8, 0.3));
  GaussianSampler rng(42);
  const AtomArray b = perturb(a, 0.0, 0.0, rng);
  for (int i = 0; i < a.size(); ++i)
    CHECK((a.positions[i] - b.positions[i]).norm() == 0.0);
}

TEST_CASE("perturb is bitwise reproducible under a fixed seed") {
  const AtomArray a = make_ring(spec_of(GeometryKind::Ring, 8, 0.3));
  GaussianSampler r1(1234), r2(1234);
  const AtomArray b1 = perturb(a, 0.01, 0.002, r1, PerturbScope::AllAtoms);
  const AtomArray b2 = perturb(a, 0.01, 0.002, r2, PerturbScope::AllAtoms);
  for (int i = 0; i < a.size(); ++i) {
    CHECK(b1.positions[i](0) == b2.positions[i](0));
    CHECK(b1.positions[i](1) == b2.positions[i](1));
    CHECK(b1.positions[i](2) == b2.positions[i](2));
  }
}

TEST_CASE("perturb keeps the storage atom fixed by default") {
  const AtomArray a = make_ring(spec_of(GeometryKind::Ring, 8, 0.3));
  GaussianSampler rng(7);
  const AtomArray b = perturb(a, 0.05, 0.05, rng);
  CHECK((b.storage_position() - a.storage_position()).norm() == 0.0);
  CHECK((b.positions[1] - a.positions[1]).norm() > 0.0);
}

TEST_CASE("perturb variance matches sigma^2 (Monte Carlo)") {
  // single atom displaced many times; estimate per-axis variance
  AtomArray a;
  a.positions = {Vec3::Zero(), Vec3(10, 0, 0)};
  a.storage_index = 0;
  const int n_samples = 100000;
  const Real sigma = 0.01 / std::sqrt(2.0);
  GaussianSampler rng(99);
  Real acc = 0;
  for (int k = 0; k < n_samples; ++k) {
    const AtomArray b = perturb(a, sigma, 0.0, rng);
    const Vec3 d = b.positions[1] - a.positions[1];
    acc += d(0) * d(0) + d(1) * d(1);  // <dx^2 + dy^2> = 2 sigma^2 = (0.01)^2
  }
  const Real est = acc / n_samples;
  CHECK(est == doctest::Approx(0.01 * 0.01).epsilon(0.02));
}

TEST_CASE("min_pair_distance matches the brute-force oracle on a random cloud") {
  GaussianSampler rng(2024);
  AtomArray a;
  a.storage_index = 0;
  for (int i = 0; i < 50; ++i)
    a.positions.emplace_back(rng.normal(), rng.normal(), rng.normal());
  CHECK(min_pair_distance(a) ==
        doctest::Approx(brute_force_min_distance(a.positions)).epsilon(1e-15));
}

TEST_CASE("min_pair_distance is translation and permutation invariant") {
  const AtomArray a = make_ring(spec_of(GeometryKind::Ring, 12, 0.45));
  AtomArray shifted = a;
  for (Vec3& p : shifted.positions) p += Vec3(3.7, -1.2, 0.5);
  CHECK(min_pair_distance(shifted) == doctest::Approx(min_pair_distance(a)));

  AtomArray permuted = a;
  std::swap(permuted.positions[2], permuted.positions[9]);
  CHECK(min_pair_distance(permuted) == doctest::Approx(min_pair_distance(a)));

  AtomArray two;
  two.positions = {Vec3::Zero(), Vec3(0.1, 0, 0)};
  CHECK(min_pair_distance(two) == doctest::Approx(0.1));

  AtomArray one;
  one.positions = {Vec3::Zero()};
  CHECK_THROWS_AS(min_pair_distance(one), Error);
}

TEST_CASE("ring min distance is the chord, not the center distance") {
  const AtomArray a = make_ring(spec_of(GeometryKind::Ring, 12, 0.45));
  // chord 0.2329 < center distance 0.45
  CHECK(min_pair_distance(a) < 0.45);
}

TEST_CASE("scaled_to_min_distance hits the target exactly") {
  const AtomArray a = make_ring(spec_of(GeometryKind::Ring, 12, 0.45));
  const AtomArray b = scaled_to_min_distance(a, 0.1);
  CHECK(min_pair_distance(b) == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("validate rejects broken arrays") {
  AtomArray a = make_ring(spec_of(GeometryKind::Ring, 4, 0.3));
  a.storage_index = 99;
  CHECK_THROWS_AS(a.validate(), Error);

  AtomArray b = make_ring(spec_of(GeometryKind::Ring, 4, 0.3));
  b.positions[2] = b.positions[1];
  CHECK_THROWS_AS(b.validate(), Error);

  AtomArray c = make_ring(spec_of(GeometryKind::Ring, 4, 0.3));
  c.dipole *= 2.0;
  CHECK_THROWS_AS(c.validate(), Error);

  AtomArray d = make_ring(spec_of(GeometryKind::Ring, 4, 0.3));
  d.gamma0 = 0.0;
  CHECK_THROWS_AS(d.validate(), Error);
}
