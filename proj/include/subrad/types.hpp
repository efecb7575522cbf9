#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace subrad {

using Real = double;
using Complex = std::complex<Real>;

using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3d;
using CMat3 = Eigen::Matrix3cd;
using VecX = Eigen::VectorXd;
using CVecX = Eigen::VectorXcd;
using MatX = Eigen::MatrixXd;
using CMatX = Eigen::MatrixXcd;

// Units: lengths in lambda0, time in 1/gamma0, hbar = c = 1, omega0 = k0 = 2*pi.
inline constexpr Real kDefaultOmega0 = 2.0 * EIGEN_PI;
inline constexpr Real kDefaultGamma0 = 1.0;

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// |<psiL|psiR>| below the defectiveness threshold: the eigenbasis cannot be
// biorthogonally normalized.
struct DefectiveMatrix : Error {
  using Error::Error;
};

// Eigenvalue matching between the right and adjoint problems is ambiguous.
struct PairingFailure : Error {
  using Error::Error;
};

// Requested integrator step exceeds the stability/accuracy bound.
struct StepTooLarge : Error {
  using Error::Error;
};

// The two dominant modes are degenerate in Re(kappa); no oscillation period.
struct DegenerateSplit : Error {
  using Error::Error;
};

// Optimization seed violates the distance constraints beyond restoration.
struct InfeasibleSeed : Error {
  using Error::Error;
};

// Numerical breakdown inside an evaluation (eigensolver, quadrature, ...).
struct NumericalFailure : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace subrad
