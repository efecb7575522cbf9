#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "subrad/greens.hpp"
#include "subrad/rng.hpp"

using namespace subrad;

namespace {
constexpr Real kOmega = kDefaultOmega0;
}

TEST_CASE("Im G0 approaches (omega0/6pi) I at small separation") {
  const Vec3 r(1e-4, 0, 0);
  const CMat3 g = green_tensor<Real>(r, kOmega);
  const Real limit = kOmega / (6.0 * EIGEN_PI);
  for (int i = 0; i < 3; ++i) {
    CHECK(g(i, i).imag() == doctest::Approx(limit).epsilon(1e-6));
  }
  // off-diagonals vanish in the limit
  CHECK(std::abs(g(0, 1).imag()) < 1e-8 * limit);

  // cross-check: error shrinks as |r| decreases
  const Real e1 =
      std::abs(green_tensor<Real>(Vec3(1e-2, 0, 0), kOmega)(1, 1).imag() - limit);
  const Real e2 =
      std::abs(green_tensor<Real>(Vec3(1e-3, 0, 0), kOmega)(1, 1).imag() - limit);
  CHECK(e2 < e1);
}

TEST_CASE("self-decay consistency: (6 pi/omega0) d*.ImG0(0).d = 1") {
  GaussianSampler rng(5);
  for (int k = 0; k < 10; ++k) {
    CVec3 d(Complex(rng.normal(), rng.normal()),
            Complex(rng.normal(), rng.normal()),
            Complex(rng.normal(), rng.normal()));
    d /= d.norm();
    const CMat3 g = green_tensor<Real>(Vec3(1e-5, 2e-5, -1e-5), kOmega);
    const Complex s = d.adjoint() * g * d;
    CHECK((6.0 * EIGEN_PI / kOmega) * s.imag() ==
          doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("two-atom coefficients match the textbook closed forms") {
  // d perpendicular to the separation axis
  const Real u = 1.3;  // kr
  const Vec3 r(u / kOmega, 0, 0);
  const CMat3 g = green_tensor<Real>(r, kOmega);
  const Real gamma_perp =
      1.5 * (std::sin(u) / u + std::cos(u) / (u * u) - std::sin(u) / (u * u * u));
  const Real j_perp = 0.75 * (-std::cos(u) / u + std::sin(u) / (u * u) +
                              std::cos(u) / (u * u * u));
  CHECK((6.0 * EIGEN_PI / kOmega) * g(2, 2).imag() ==
        doctest::Approx(gamma_perp).epsilon(1e-12));
  CHECK(-(3.0 * EIGEN_PI / kOmega) * g(2, 2).real() ==
        doctest::Approx(j_perp).epsilon(1e-12));
  // d along the separation axis
  const Real gamma_par =
      3.0 * (-std::cos(u) / (u * u) + std::sin(u) / (u * u * u));
  CHECK((6.0 * EIGEN_PI / kOmega) * g(0, 0).imag() ==
        doctest::Approx(gamma_par).epsilon(1e-12));
}

TEST_CASE("green_tensor is even and symmetric") {
  GaussianSampler rng(13);
  for (int k = 0; k < 20; ++k) {
    const Vec3 r(rng.normal(), rng.normal(), rng.normal());
    const CMat3 g = green_tensor<Real>(r, kOmega);
    const CMat3 gm = green_tensor<Real>(Vec3(-r), kOmega);
    CHECK((g - gm).cwiseAbs().maxCoeff() == 0.0);
    CHECK((g - g.transpose()).cwiseAbs().maxCoeff() < 1e-12 * g.norm());
  }
}

TEST_CASE("green_tensor rejects zero separation") {
  CHECK_THROWS_AS(green_tensor<Real>(Vec3::Zero(), kOmega), Error);
}

TEST_CASE("far_field_projector basics") {
  const Mat3 p = far_field_projector<Real>(Vec3(0, 0, 1));
  CHECK(p(0, 0) == doctest::Approx(1.0));
  CHECK(p(1, 1) == doctest::Approx(1.0));
  CHECK(p(2, 2) == doctest::Approx(0.0));

  GaussianSampler rng(3);
  for (int k = 0; k < 20; ++k) {
    Vec3 n(rng.normal(), rng.normal(), rng.normal());
    n.normalize();
    const Mat3 q = far_field_projector<Real>(n);
    CHECK((q * q - q).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(q.trace() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK((q - q.transpose()).cwiseAbs().maxCoeff() < 1e-15);
  }
  CHECK_THROWS_AS(far_field_projector<Real>(Vec3(0, 0, 2)), Error);
}
