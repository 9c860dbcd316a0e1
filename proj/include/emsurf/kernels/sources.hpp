// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "emsurf/kernels/operators.hpp"
#include "emsurf/types.hpp"

#include <utility>

namespace emsurf {

enum class SourceKind { Dipole, PlaneWave };

/// Incident excitation in free space. Dipole fields are exact (near and far
/// terms); plane-wave phase is referenced to `position`.
struct IncidentSource {
  SourceKind kind = SourceKind::Dipole;
  double frequency = 1e9;
  Vec3 position = Vec3::Zero();  // dipole location, or the plane-wave phase reference
  CVec3 moment = CVec3(1.0, 0.0, 0.0);  // I*l in A*m
  Vec3 direction = Vec3(0.0, 0.0, -1.0);
  CVec3 polarization = CVec3(1.0, 0.0, 0.0);
  double amplitude = 1.0;  // V/m

  void validate() const;
};

struct FieldPair {
  CVec3 e;
  CVec3 h;
};

FieldPair incident_fields(const IncidentSource& source, const Vec3& r);

/// Tested incident fields on the exterior-facing functions of `view`:
/// electric rows -<f, E_inc>/eta0, magnetic rows -<f, H_inc>.
CVector project_incident(const BasisView& view, const IncidentSource& source, int quad_points = 6);

}  // namespace emsurf
