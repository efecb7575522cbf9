#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>

#include "subrad/hamiltonian.hpp"

using namespace subrad;

namespace {

AtomArray two_atoms(Real separation) {
  AtomArray a;
  a.positions = {Vec3::Zero(), Vec3(separation, 0, 0)};
  a.storage_index = 0;
  a.dipole = CVec3(0, 0, 1);
  return a;
}

AtomArray single_atom() {
  AtomArray a;
  a.positions = {Vec3::Zero()};
  a.storage_index = 0;
  a.dipole = CVec3(0, 0, 1);
  return a;
}

GeometrySpec ring_spec(int n, Real a) {
  GeometrySpec s;
  s.kind = GeometryKind::Ring;
  s.n = n;
  s.a = a;
  return s;
}

}  // namespace

TEST_CASE("single atom gives H = -i gamma0/2") {
  const EffectiveHamiltonian h = build_hamiltonian(single_atom());
  REQUIRE(h.n_atoms == 1);
  CHECK(h.H(0, 0).real() == 0.0);
  CHECK(h.H(0, 0).imag() == doctest::Approx(-0.5));
  CHECK(h.Gamma(0, 0) == 1.0);
  CHECK(h.J(0, 0) == 0.0);
}

TEST_CASE("far-separated atoms decouple") {
  const EffectiveHamiltonian h = build_hamiltonian(two_atoms(100.0));
  CHECK(std::abs(h.J(0, 1)) < 1e-2);
  CHECK(std::abs(h.Gamma(0, 1)) < 1e-2);
  // the couplings decay like 1/r: much smaller than at r = 1
  const EffectiveHamiltonian h1 = build_hamiltonian(two_atoms(1.0));
  CHECK(std::abs(h.Gamma(0, 1)) < std::abs(h1.Gamma(0, 1)));
}

TEST_CASE("Gamma_12 tends to gamma0 at small separation") {
  for (const CVec3& d :
       {CVec3(0, 0, 1), CVec3(Complex(1 / std::sqrt(2.0), 0),
                              Complex(0, 1 / std::sqrt(2.0)), 0)}) {
    AtomArray a = two_atoms(1e-4);
    a.dipole = d;
    const EffectiveHamiltonian h = build_hamiltonian(a);
    CHECK(h.Gamma(0, 1) == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("matrix structure invariants") {
  const AtomArray a = make_ring(ring_spec(12, 0.45));
  const EffectiveHamiltonian h = build_hamiltonian(a);
  CHECK((h.J - h.J.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((h.Gamma - h.Gamma.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((h.H - h.H.transpose()).cwiseAbs().maxCoeff() == 0.0);
  for (int i = 0; i < h.n_atoms; ++i) {
    CHECK(h.Gamma(i, i) == 1.0);
    CHECK(h.J(i, i) == 0.0);
  }
  // Gamma is positive semidefinite
  Eigen::SelfAdjointEigenSolver<MatX> es(h.Gamma);
  CHECK(es.eigenvalues().minCoeff() > -1e-10);
}

TEST_CASE("J and Gamma are real for complex dipoles (symmetric sandwich)") {
  AtomArray a = make_ring(ring_spec(8, 0.3));
  const EffectiveHamiltonian h = build_hamiltonian(a);
  // realness is structural here (stored as real matrices); verify instead
  // that H = J - i/2 Gamma holds entrywise
  const CMatX rebuilt =
      h.J.cast<Complex>() - Complex(0, 0.5) * h.Gamma.cast<Complex>();
  CHECK((rebuilt - h.H).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gamma0 scaling covariance") {
  AtomArray a = make_ring(ring_spec(6, 0.4));
  const EffectiveHamiltonian h1 = build_hamiltonian(a);
  a.gamma0 = 3.5;
  const EffectiveHamiltonian h2 = build_hamiltonian(a);
  CHECK((h2.J - 3.5 * h1.J).cwiseAbs().maxCoeff() < 1e-14 * h1.J.cwiseAbs().maxCoeff());
  CHECK((h2.Gamma - 3.5 * h1.Gamma).cwiseAbs().maxCoeff() <
        1e-14 * h1.Gamma.cwiseAbs().maxCoeff());
  CHECK((h2.H - Complex(3.5, 0) * h1.H).cwiseAbs().maxCoeff() <
        1e-13 * h1.H.cwiseAbs().maxCoeff());
}

TEST_CASE("coincident atoms are rejected") {
  AtomArray a;
  a.positions = {Vec3::Zero(), Vec3::Zero()};
  a.storage_index = 0;
  a.dipole = CVec3(0, 0, 1);
  CHECK_THROWS_AS(build_hamiltonian(a), Error);
}
