// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "emsurf/kernels/sources.hpp"

#include "emsurf/basis/rwg.hpp"
#include "emsurf/kernels/quadrature.hpp"

#include <cmath>

namespace emsurf {

void IncidentSource::validate() const {
  if (!(frequency > 0.0) || !std::isfinite(frequency)) throw Error(ErrorKind::Config, "source frequency must be positive");
  if (kind == SourceKind::Dipole) {
    if (!moment.allFinite()) throw Error(ErrorKind::Config, "dipole moment must be finite");
    return;
  }
  if (std::abs(direction.norm() - 1.0) > 1e-9) throw Error(ErrorKind::Config, "plane-wave direction must be a unit vector");
  const cdouble d = polarization.x() * direction.x() + polarization.y() * direction.y() + polarization.z() * direction.z();
  if (std::abs(d) > 1e-9 * std::max(1.0, polarization.norm()))
    throw Error(ErrorKind::Config, "plane-wave polarization must be orthogonal to the propagation direction");
}

namespace {

// Bilinear products; Eigen's complex cross and dot conjugate an argument.
CVec3 cross(const CVec3& a, const CVec3& b) {
  return CVec3(a.y() * b.z() - a.z() * b.y(), a.z() * b.x() - a.x() * b.z(), a.x() * b.y() - a.y() * b.x());
}

}  // namespace

FieldPair incident_fields(const IncidentSource& s, const Vec3& r) {
  const double k = free_space_wavenumber(s.frequency);
  if (s.kind == SourceKind::PlaneWave) {
    const cdouble ph = std::exp(-kJ * k * s.direction.dot(r - s.position));
    const CVec3 e = s.amplitude * s.polarization * ph;
    return {e, cross(s.direction.cast<cdouble>(), e) / kEta0};
  }
  const Vec3 d = r - s.position;
  const double R = d.norm();
  if (R <= kGeomTol) throw Error(ErrorKind::Numerical, "field point coincides with the dipole");
  const CVec3 u = (d / R).cast<cdouble>();
  const CVec3& p = s.moment;
  const cdouble e = std::exp(-kJ * k * R);
  const cdouble jkr = kJ * k * R;
  const cdouble udotp = u.x() * p.x() + u.y() * p.y() + u.z() * p.z();
  const CVec3 transverse = cross(cross(u, p), u);  // (u x p) x u = p - u(u.p)
  const CVec3 radial = 3.0 * u * udotp - p;
  const CVec3 E = (-kJ * kEta0 * k / (4.0 * kPi * R)) * e * transverse +
                  (kEta0 / (4.0 * kPi * R * R)) * (1.0 + 1.0 / jkr) * e * radial;
  const CVec3 H = (kJ * k / (4.0 * kPi * R)) * (1.0 + 1.0 / jkr) * e * cross(p, u);
  return {E, H};
}

CVector project_incident(const BasisView& view, const IncidentSource& source, int quad_points) {
  source.validate();
  const UnitCellGeometry& cell = *view.cell;
  if (source.kind == SourceKind::Dipole && cell.has_box) {
    const Box b{cell.box.lo + view.offset, cell.box.hi + view.offset};
    if (b.contains(source.position)) throw Error(ErrorKind::Config, "dipole lies inside an equivalent surface");
  }
  const QuadratureRule& rule = triangle_rule(quad_points);
  CVector v = CVector::Zero(view.size());
  for (int f = 0; f < view.size(); ++f) {
    const RwgFunction& fn = view.function(f);
    cdouble acc = 0.0;
    for (int p = 0; p < fn.count; ++p) {
      const RwgPiece& pc = fn.pieces[static_cast<std::size_t>(p)];
      const TriangleData t = triangle_data(cell, pc.tri, view.offset);
      const double c = pc.sign * t.len[static_cast<std::size_t>(pc.local_edge)] / (2.0 * t.area);
      for (std::size_t a = 0; a < rule.size(); ++a) {
        const Vec3& bc = rule.points[a];
        const Vec3 r = bc[0] * t.p[0] + bc[1] * t.p[1] + bc[2] * t.p[2];
        const Vec3 fv = c * (r - t.p[static_cast<std::size_t>(pc.local_edge)]);
        const FieldPair fp = incident_fields(source, r);
        const CVec3& fld = fn.kind == CurrentKind::Electric ? fp.e : fp.h;
        const cdouble dot = fv.x() * fld.x() + fv.y() * fld.y() + fv.z() * fld.z();
        acc += rule.weights[a] * t.area * dot;
      }
    }
    v(f) = fn.kind == CurrentKind::Electric ? -acc / kEta0 : -acc;
  }
  return v;
}

}  // namespace emsurf
