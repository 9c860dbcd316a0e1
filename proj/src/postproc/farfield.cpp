// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "emsurf/postproc/farfield.hpp"

#include "emsurf/kernels/quadrature.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace emsurf {

Radiator::Radiator(const std::vector<CurrentSet>& currents, double frequency_hz, int quad_points)
    : k_(free_space_wavenumber(frequency_hz)) {
  const QuadratureRule& rule = triangle_rule(quad_points);
  for (const auto& cs : currents) {
    const auto& cell = *cs.cell;
    // Accumulate per triangle so each quadrature point is stored once.
    // Per triangle: (+-(local edge + 1) with sign by kind, coefficient).
    std::vector<std::vector<std::pair<int, cdouble>>> on_tri(cell.triangles.size());
    for (Eigen::Index i = 0; i < cs.coeff.size(); ++i) {
      const RwgFunction& f = cs.basis->functions[static_cast<std::size_t>(cs.first + i)];
      const cdouble c = cs.coeff(i) * (f.kind == CurrentKind::Magnetic ? kEta0 : 1.0);
      if (c == cdouble(0.0)) continue;
      for (int p = 0; p < f.count; ++p) {
        const auto& pc = f.pieces[static_cast<std::size_t>(p)];
        const int code = (pc.local_edge + 1) * (f.kind == CurrentKind::Magnetic ? -1 : 1);
        on_tri[static_cast<std::size_t>(pc.tri)].push_back({code, static_cast<double>(pc.sign) * c});
      }
    }
    for (int t = 0; t < static_cast<int>(cell.triangles.size()); ++t) {
      const auto& list = on_tri[static_cast<std::size_t>(t)];
      if (list.empty()) continue;
      const double area = cell.area(t);
      for (std::size_t a = 0; a < rule.size(); ++a) {
        const Vec3& b = rule.points[a];
        const Vec3 r = b[0] * cell.vertex(t, 0) + b[1] * cell.vertex(t, 1) + b[2] * cell.vertex(t, 2);
        CVec3 jv = CVec3::Zero(), mv = CVec3::Zero();
        for (const auto& [code, c] : list) {
          const int le = std::abs(code) - 1;
          const Vec3 fv = edge_function(cell, t, le, r) * (rule.weights[a] * area);
          (code > 0 ? jv : mv) += c * fv.cast<cdouble>();
        }
        points_.push_back(r + cs.offset);
        j_.push_back(jv);
        m_.push_back(mv);
      }
    }
  }
}

FarField Radiator::field(double th, double ph) const {
  const Vec3 rhat(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
  const Vec3 that(std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), -std::sin(th));
  const Vec3 phat(-std::sin(ph), std::cos(ph), 0.0);
  cdouble nt = 0.0, np = 0.0, lt = 0.0, lp = 0.0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const cdouble e = std::exp(kJ * k_ * rhat.dot(points_[i]));
    const CVec3& j = j_[i];
    const CVec3& m = m_[i];
    nt += e * (that.x() * j.x() + that.y() * j.y() + that.z() * j.z());
    np += e * (phat.x() * j.x() + phat.y() * j.y() + phat.z() * j.z());
    lt += e * (that.x() * m.x() + that.y() * m.y() + that.z() * m.z());
    lp += e * (phat.x() * m.x() + phat.y() * m.y() + phat.z() * m.z());
  }
  const cdouble c = kJ * k_ / (4.0 * kPi);
  return {-c * (kEta0 * nt + lp), c * (lt - kEta0 * np)};
}

FarFieldCut radiate_cut(const FieldFunction& f, double phi_deg, const std::vector<double>& theta_deg) {
  FarFieldCut cut;
  cut.phi_deg = phi_deg;
  cut.theta_deg = theta_deg;
  for (double t : theta_deg) cut.field.push_back(f(t * kPi / 180.0, phi_deg * kPi / 180.0));
  return cut;
}

double radiated_power(const FieldFunction& f, int n_theta, int n_phi) {
  const double dt = kPi / n_theta, dp = 2.0 * kPi / n_phi;
  double p = 0.0;
  for (int i = 0; i < n_theta; ++i) {
    const double th = (i + 0.5) * dt;
    double row = 0.0;
    for (int k = 0; k < n_phi; ++k) row += f(th, k * dp).intensity();
    p += row * std::sin(th);
  }
  const double total = p * dt * dp;
  if (!(total > 0.0)) throw Error(ErrorKind::Numerical, "zero radiated power");
  return total;
}

double directivity(const FarField& e, double p_rad) { return 4.0 * kPi * e.intensity() / p_rad; }

void normalize_cut(FarFieldCut& cut, double p_rad) {
  cut.directivity_dbi.clear();
  for (const auto& e : cut.field) cut.directivity_dbi.push_back(to_dbi(directivity(e, p_rad)));
}

double relative_l2(const FarFieldCut& a, const FarFieldCut& b) {
  if (a.field.size() != b.field.size()) throw Error(ErrorKind::Numerical, "cuts have different grids");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.field.size(); ++i) {
    num += std::norm(a.field[i].e_theta - b.field[i].e_theta) + std::norm(a.field[i].e_phi - b.field[i].e_phi);
    den += std::norm(b.field[i].e_theta) + std::norm(b.field[i].e_phi);
  }
  return std::sqrt(num / den);
}

void write_cut_csv(std::ostream& os, const FarFieldCut& cut) {
  os << "theta_deg,phi_deg,re_Etheta,im_Etheta,re_Ephi,im_Ephi,D_dBi\n";
  char line[256];
  for (std::size_t i = 0; i < cut.field.size(); ++i) {
    const auto& e = cut.field[i];
    const double d = cut.directivity_dbi.empty() ? std::nan("") : cut.directivity_dbi[i];
    std::snprintf(line, sizeof(line), "%.6f,%.6f,%.12e,%.12e,%.12e,%.12e,%.6f\n", cut.theta_deg[i], cut.phi_deg,
                  e.e_theta.real(), e.e_theta.imag(), e.e_phi.real(), e.e_phi.imag(), d);
    os << line;
  }
}

}  // namespace emsurf
