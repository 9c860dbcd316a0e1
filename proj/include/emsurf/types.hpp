// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace emsurf {

using cdouble = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using CVec3 = Eigen::Vector3cd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kC0 = 299792458.0;
inline constexpr double kMu0 = 4.0e-7 * kPi;
inline constexpr double kEps0 = 1.0 / (kMu0 * kC0 * kC0);
inline const double kEta0 = kMu0 * kC0;
inline constexpr cdouble kJ{0.0, 1.0};

/// Coincident-geometry tolerance in meters.
inline constexpr double kGeomTol = 1e-9;

enum class ErrorKind { Config, Geometry, Numerical, Io };

/// Library error. The kind maps onto CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline double free_space_wavenumber(double frequency_hz) { return 2.0 * kPi * frequency_hz / kC0; }

}  // namespace emsurf
