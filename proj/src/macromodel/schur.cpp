// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "emsurf/macromodel/schur.hpp"

#include <sstream>

namespace emsurf {

Macromodel schur_complement(const ReducedSystem& r, double rcond_floor) {
  Macromodel m;
  m.n_int = r.n_int;
  if (r.n_int == 0) {
    m.z = r.ee();
    return m;
  }
  auto lu = std::make_shared<Eigen::PartialPivLU<CMatrix>>(r.ii());
  m.rcond = lu->rcond();
  if (!(m.rcond > rcond_floor)) {
    std::ostringstream os;
    os << "interior block is singular (rcond " << m.rcond
       << "); check for an interior resonance or a degenerate mesh";
    throw Error(ErrorKind::Numerical, os.str());
  }
  m.z_ie = r.ie();
  const CMatrix x = lu->solve(m.z_ie);
  m.z = r.ee() - r.ei() * x;
  m.lu_ii = std::move(lu);
  return m;
}

CVector back_substitute(const Macromodel& model, const CVector& x_eq) {
  if (model.n_int == 0) return CVector();
  if (!model.lu_ii) throw Error(ErrorKind::Numerical, "interior factors are not available (macromodel loaded from cache)");
  if (x_eq.size() != model.z_ie.cols()) throw Error(ErrorKind::Numerical, "eq coefficient count mismatch");
  return -model.lu_ii->solve(model.z_ie * x_eq);
}

}  // namespace emsurf
