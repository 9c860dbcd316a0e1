// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "emsurf/kernels/greens.hpp"

#include <cmath>

namespace emsurf {

namespace {

constexpr double kSeriesLimit = 0.5;
constexpr double kInv4Pi = 1.0 / (4.0 * kPi);

}  // namespace

cdouble greens(cdouble k, const Vec3& r, const Vec3& rp) {
  const double R = (r - rp).norm();
  if (R == 0.0) throw Error(ErrorKind::Numerical, "greens: source and observation points coincide");
  return std::exp(-kJ * k * R) * kInv4Pi / R;
}

cdouble greens_smooth(cdouble k, double R) {
  const cdouble x = k * R;
  if (std::abs(x) < kSeriesLimit) {
    // (exp(-jx) - 1)/R = -jk * sum_{n>=0} (-jx)^n/(n+1)!
    cdouble term = 1.0, sum = 1.0;
    for (int n = 1; n < 24; ++n) {
      term *= -kJ * x / static_cast<double>(n + 1);
      sum += term;
    }
    return -kJ * k * sum * kInv4Pi;
  }
  return (std::exp(-kJ * x) - 1.0) * kInv4Pi / R;
}

cdouble greens_grad_factor(cdouble k, double R) {
  const cdouble x = k * R;
  return -(1.0 + kJ * x) * std::exp(-kJ * x) * kInv4Pi / (R * R * R);
}

cdouble greens_grad_factor_smooth(cdouble k, double R) {
  const cdouble x = k * R;
  if (std::abs(x) < kSeriesLimit) {
    // 1 - (1+jx)exp(-jx) = sum_{n>=2} (n-1)(-jx)^n/n!, divided by R^3.
    // Factor out (-jx)^2/R^3 = -k^2/R.
    cdouble acc = 0.0, pw = 1.0;  // pw = (-jx)^(n-2)
    double fact = 2.0;            // n!
    for (int n = 2; n < 26; ++n) {
      if (n > 2) {
        pw *= -kJ * x;
        fact *= n;
      }
      acc += static_cast<double>(n - 1) * pw / fact;
    }
    return -k * k * acc * kInv4Pi / R;
  }
  return (1.0 - (1.0 + kJ * x) * std::exp(-kJ * x)) * kInv4Pi / (R * R * R);
}

}  // namespace emsurf
