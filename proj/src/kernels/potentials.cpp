// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "emsurf/kernels/potentials.hpp"

#include <cmath>

namespace emsurf {

StaticPotentials static_potentials(const std::array<Vec3, 3>& tri, const Vec3& r) {
  const Vec3 cross = (tri[1] - tri[0]).cross(tri[2] - tri[0]);
  const double twice_area = cross.norm();
  if (twice_area <= 0.0) throw Error(ErrorKind::Numerical, "degenerate source triangle");
  const Vec3 n = cross / twice_area;
  const double size = std::max({(tri[1] - tri[0]).norm(), (tri[2] - tri[1]).norm(), (tri[0] - tri[2]).norm()});

  double h = (r - tri[0]).dot(n);
  if (std::abs(h) < 1e-12 * size) h = 0.0;
  const Vec3 rho = r - h * n;
  const double ah = std::abs(h);
  const double floor2 = 1e-28 * size * size;

  StaticPotentials out;
  double beta_sum = 0.0;
  Vec3 in_plane = Vec3::Zero();
  for (int i = 0; i < 3; ++i) {
    const Vec3& a = tri[static_cast<std::size_t>(i)];
    const Vec3& b = tri[static_cast<std::size_t>((i + 1) % 3)];
    const Vec3 l = (b - a).normalized();
    const Vec3 u = l.cross(n);
    const double lp = (b - rho).dot(l), lm = (a - rho).dot(l);
    const double p0 = (a - rho).dot(u);
    const double r02 = std::max(p0 * p0 + h * h, floor2);
    const double rp = std::sqrt(lp * lp + r02), rm = std::sqrt(lm * lm + r02);
    double f;
    if (lm >= 0.0) {
      f = std::log((rp + lp) / (rm + lm));
    } else if (lp <= 0.0) {
      f = std::log((rm - lm) / (rp - lp));
    } else {
      f = std::log((rp + lp) * (rm - lm) / r02);
    }
    const double beta = std::atan2(p0 * lp, r02 + ah * rp) - std::atan2(p0 * lm, r02 + ah * rm);
    out.i0 += p0 * f - ah * beta;
    beta_sum += beta;
    in_plane += u * (r02 * f + lp * rp - lm * rm);
    out.grad_i0 -= u * f;
  }
  const double sgn = h > 0 ? 1.0 : (h < 0 ? -1.0 : 0.0);
  out.grad_i0 -= sgn * beta_sum * n;
  out.i1 = 0.5 * in_plane - h * out.i0 * n;
  return out;
}

double static_self_integral(const std::array<Vec3, 3>& tri) {
  const double a = (tri[1] - tri[2]).norm(), b = (tri[2] - tri[0]).norm(), c = (tri[0] - tri[1]).norm();
  const double area = 0.5 * (tri[1] - tri[0]).cross(tri[2] - tri[0]).norm();
  const double p = a + b + c;
  const double s = std::log(p / (p - 2 * a)) / a + std::log(p / (p - 2 * b)) / b + std::log(p / (p - 2 * c)) / c;
  return 4.0 * area * area / 3.0 * s;
}

}  // namespace emsurf
