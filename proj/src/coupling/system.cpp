// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "emsurf/coupling/system.hpp"

namespace emsurf {

CVector AssembledSystem::apply_expanded(const CVector& y) const {
  if (y.size() != expanded_size()) throw Error(ErrorKind::Numerical, "expanded vector size mismatch");
  CVector out = CVector::Zero(y.size());
  for (std::size_t p = 0; p < models.size(); ++p) {
    const int n = models[p]->size();
    out.segment(offsets[p], n).noalias() += models[p]->z * y.segment(offsets[p], n);
  }
  switch (path) {
    case CouplingPath::Fft:
      out += toeplitz->apply(y);
      break;
    case CouplingPath::Dense:
      out.noalias() += z0_dense * y;
      break;
    case CouplingPath::None:
      break;
  }
  return out;
}

CMatrix AssembledSystem::z0() const {
  if (path == CouplingPath::Fft || (toeplitz && z0_dense.size() == 0)) return toeplitz->dense();
  if (path == CouplingPath::None) return CMatrix::Zero(expanded_size(), expanded_size());
  return z0_dense;
}

CVector apply_system(const AssembledSystem& s, const CVector& y_tilde) {
  return s.u0.project(s.apply_expanded(s.u0.expand(y_tilde)));
}

CMatrix dense_system(const AssembledSystem& s) {
  const int n = s.unknowns();
  CMatrix a(n, n);
  CVector e = CVector::Zero(n);
  for (int j = 0; j < n; ++j) {
    e(j) = 1.0;
    a.col(j) = apply_system(s, e);
    e(j) = 0.0;
  }
  return a;
}

}  // namespace emsurf
