// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "emsurf/postproc/mie.hpp"

#include <cmath>

namespace emsurf {

// Riccati-Bessel recurrences with a downward logarithmic derivative.
MieSphere::MieSphere(double radius, cdouble eps_r, double frequency_hz) : k_(free_space_wavenumber(frequency_hz)) {
  const double x = k_ * radius;
  cdouble m = std::sqrt(eps_r);
  if (m.imag() < 0.0) m = -m;
  const cdouble mx = m * x;
  const int nstop = static_cast<int>(x + 4.0 * std::cbrt(x) + 2.0) + 4;
  const int nmx = static_cast<int>(std::max(static_cast<double>(nstop), std::abs(mx))) + 16;
  std::vector<cdouble> d(static_cast<std::size_t>(nmx) + 1, 0.0);
  for (int n = nmx; n >= 1; --n) {
    const cdouble rn = static_cast<double>(n) / mx;
    d[static_cast<std::size_t>(n) - 1] = rn - 1.0 / (d[static_cast<std::size_t>(n)] + rn);
  }
  double psi0 = std::cos(x), psi1 = std::sin(x);
  double chi0 = -std::sin(x), chi1 = std::cos(x);
  cdouble xi1(psi1, -chi1);
  for (int n = 1; n <= nstop; ++n) {
    const double psi = (2.0 * n - 1.0) * psi1 / x - psi0;
    const double chi = (2.0 * n - 1.0) * chi1 / x - chi0;
    const cdouble xi(psi, -chi);
    const cdouble dn = d[static_cast<std::size_t>(n)];
    const cdouble ta = dn / m + static_cast<double>(n) / x;
    const cdouble tb = m * dn + static_cast<double>(n) / x;
    a_.push_back((ta * psi - psi1) / (ta * xi - xi1));
    b_.push_back((tb * psi - psi1) / (tb * xi - xi1));
    psi0 = psi1;
    psi1 = psi;
    chi0 = chi1;
    chi1 = chi;
    xi1 = cdouble(psi1, -chi1);
  }
}

MieAmplitudes MieSphere::amplitudes(double theta) const {
  const double mu = std::cos(theta);
  double pi0 = 0.0, pi1 = 1.0;
  MieAmplitudes s;
  for (int n = 1; n <= terms(); ++n) {
    const double tau = n * mu * pi1 - (n + 1.0) * pi0;
    const double f = (2.0 * n + 1.0) / (n * (n + 1.0));
    s.s1 += f * (a_[static_cast<std::size_t>(n) - 1] * pi1 + b_[static_cast<std::size_t>(n) - 1] * tau);
    s.s2 += f * (a_[static_cast<std::size_t>(n) - 1] * tau + b_[static_cast<std::size_t>(n) - 1] * pi1);
    const double pi2 = ((2.0 * n + 1.0) * mu * pi1 - (n + 1.0) * pi0) / n;
    pi0 = pi1;
    pi1 = pi2;
  }
  return s;
}

double MieSphere::bistatic_rcs(double theta, double phi) const {
  const MieAmplitudes s = amplitudes(theta);
  const double c = std::cos(phi), sn = std::sin(phi);
  return 4.0 * kPi / (k_ * k_) * (std::norm(s.s2) * c * c + std::norm(s.s1) * sn * sn);
}

}  // namespace emsurf
