// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "emsurf/solve/gmres.hpp"

#include <cmath>

namespace emsurf {

void GmresOptions::validate() const {
  if (!(tol > 0.0 && tol < 1.0)) throw Error(ErrorKind::Config, "gmres tolerance must lie in (0, 1)");
  if (restart < 1) throw Error(ErrorKind::Config, "gmres restart must be at least 1");
  if (max_iterations < 0) throw Error(ErrorKind::Config, "gmres max_iterations must be non-negative");
}

GmresResult gmres(const LinearOperator& a, const CVector& b, const GmresOptions& opt, const LinearOperator& precond) {
  opt.validate();
  const Eigen::Index n = b.size();
  GmresResult res;
  res.x = CVector::Zero(n);
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    res.report.converged = true;
    res.report.residuals.push_back(0.0);
    return res;
  }
  auto apply_m = [&](const CVector& v) { return precond ? precond(v) : v; };

  const int m = opt.restart;
  CMatrix v(n, m + 1);
  CMatrix h = CMatrix::Zero(m + 1, m);
  std::vector<cdouble> cs(static_cast<std::size_t>(m)), sn(static_cast<std::size_t>(m));
  CVector g(m + 1);

  CVector r = b;
  double rnorm = bnorm;
  res.report.residuals.push_back(1.0);
  int total = 0;
  while (total < opt.max_iterations) {
    v.col(0) = r / rnorm;
    g.setZero();
    g(0) = rnorm;
    h.setZero();
    int k = 0;
    bool done = false;
    for (; k < m && total < opt.max_iterations; ++k) {
      CVector w = a(apply_m(v.col(k)));
      // Modified Gram-Schmidt with one reorthogonalization pass.
      for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i <= k; ++i) {
          const cdouble hij = v.col(i).dot(w);
          h(i, k) += hij;
          w -= hij * v.col(i);
        }
      const double hn = w.norm();
      h(k + 1, k) = hn;
      for (int i = 0; i < k; ++i) {
        const cdouble t = std::conj(cs[static_cast<std::size_t>(i)]) * h(i, k) + std::conj(sn[static_cast<std::size_t>(i)]) * h(i + 1, k);
        h(i + 1, k) = -sn[static_cast<std::size_t>(i)] * h(i, k) + cs[static_cast<std::size_t>(i)] * h(i + 1, k);
        h(i, k) = t;
      }
      const cdouble x1 = h(k, k), x2 = h(k + 1, k);
      const double den = std::sqrt(std::norm(x1) + std::norm(x2));
      if (den == 0.0) throw Error(ErrorKind::Numerical, "gmres breakdown: zero Krylov direction");
      cs[static_cast<std::size_t>(k)] = x1 / den;
      sn[static_cast<std::size_t>(k)] = x2 / den;
      h(k, k) = den;
      h(k + 1, k) = 0.0;
      g(k + 1) = -sn[static_cast<std::size_t>(k)] * g(k);
      g(k) = std::conj(cs[static_cast<std::size_t>(k)]) * g(k);
      ++total;
      const double rel = std::abs(g(k + 1)) / bnorm;
      res.report.residuals.push_back(rel);
      if (hn > 0.0) v.col(k + 1) = w / hn;
      if (rel <= opt.tol || hn == 0.0) {
        ++k;
        done = true;
        break;
      }
    }
    // Solve the triangular system and update x.
    CVector yk = h.topLeftCorner(k, k).triangularView<Eigen::Upper>().solve(g.head(k));
    res.x += apply_m(v.leftCols(k) * yk);
    r = b - a(res.x);
    rnorm = r.norm();
    if (done || rnorm / bnorm <= opt.tol) break;
  }
  res.report.iterations = total;
  res.report.final_residual = (b - a(res.x)).norm() / bnorm;
  // Small slack for the gap between the recurrence and the true residual.
  res.report.converged = res.report.final_residual <= 1.01 * opt.tol;
  return res;
}

}  // namespace emsurf
