// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "emsurf/coupling/toeplitz.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>
#include <sstream>

namespace emsurf {

namespace {

using PointSet = std::set<std::array<long long, 3>>;

PointSet quantize(const std::vector<Vec3>& pts) {
  PointSet s;
  for (const auto& p : pts)
    s.insert({std::llround(p.x() / (10 * kGeomTol)), std::llround(p.y() / (10 * kGeomTol)), std::llround(p.z() / (10 * kGeomTol))});
  return s;
}

int axis_of(int face) { return face / 2; }

}  // namespace

ToeplitzReport check_toeplitz_conditions(const ArrayLayout& layout, const std::vector<UnitCellGeometry>& entry_cells) {
  ToeplitzReport r;
  r.periodicity = check_eq_surface_periodicity(entry_cells, layout);
  if (!r.periodicity.pass) {
    r.scenario = 3;
    r.toeplitz = false;
    r.axis_scenario = {3, 3, 3};
    r.message = "equivalent surfaces differ (" + r.periodicity.message + "); dense coupling";
    return r;
  }
  // Only entries that are placed matter.
  std::vector<char> used(entry_cells.size(), 0);
  for (const auto& c : layout.cells) used[static_cast<std::size_t>(c.entry)] = 1;

  for (int face = 0; face < 6; ++face) {
    std::vector<PointSet> sets;
    std::vector<Vec3> union_pts;
    for (std::size_t e = 0; e < entry_cells.size(); ++e) {
      if (!used[e]) continue;
      const auto& pts = r.periodicity.traversal[e][static_cast<std::size_t>(face)].midpoints;
      r.traversal_edges += static_cast<int>(pts.size());
      sets.push_back(quantize(pts));
      if (!pts.empty() && union_pts.empty()) union_pts = pts;
    }
    int s = 1;
    PointSet common;
    for (const auto& ps : sets) {
      if (ps.empty()) continue;
      if (common.empty()) common = ps;
      else if (ps != common) s = 3;
    }
    if (s == 1) {
      for (const auto& ps : sets)
        if (ps.empty() && !common.empty()) s = 2;
    }
    if (s == 2) r.padding.insert(r.padding.end(), union_pts.begin(), union_pts.end());
    auto& a = r.axis_scenario[static_cast<std::size_t>(axis_of(face))];
    a = std::max(a, s);
  }
  r.scenario = *std::max_element(r.axis_scenario.begin(), r.axis_scenario.end());
  r.toeplitz = r.scenario < 3;
  if (r.scenario == 3) r.padding.clear();
  std::ostringstream os;
  if (r.traversal_edges == 0) os << "no traversal; ";
  os << "scenario " << r.scenario << " (x " << r.axis_scenario[0] << ", y " << r.axis_scenario[1] << ", z "
     << r.axis_scenario[2] << ")";
  if (r.scenario == 2) os << ", " << r.padding.size() << " padded edge positions";
  if (r.scenario == 3) os << ", traversals at differing positions; dense coupling";
  r.message = os.str();
  return r;
}

// FFTW planning is not thread-safe; plans are created under a global lock.
struct BlockToeplitzOperator::Plans {
  fftw_complex* buf = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
  int count = 0;
};

namespace {
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

BlockToeplitzOperator::BlockToeplitzOperator(int mx, int my, int n, const BlockFn& block)
    : mx_(mx), my_(my), n_(n), lx_(2 * mx - 1), ly_(2 * my - 1) {
  if (mx < 1 || my < 1 || n < 0) throw Error(ErrorKind::Config, "invalid Toeplitz grid");
  blocks_.resize(static_cast<std::size_t>(lx_ * ly_));
  for (int dj = -(my - 1); dj <= my - 1; ++dj)
    for (int di = -(mx - 1); di <= mx - 1; ++di) {
      CMatrix b = block(di, dj);
      if (b.rows() != n || b.cols() != n) throw Error(ErrorKind::Numerical, "Toeplitz block has the wrong size");
      blocks_[static_cast<std::size_t>((dj + my - 1) * lx_ + di + mx - 1)] = std::move(b);
    }

  const int L = lx_ * ly_;
  plans_ = std::make_unique<Plans>();
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    plans_->count = std::max(n, 1);
    plans_->buf = fftw_alloc_complex(static_cast<std::size_t>(L) * static_cast<std::size_t>(plans_->count));
    const int dims[2] = {ly_, lx_};
    plans_->fwd = fftw_plan_many_dft(2, dims, plans_->count, plans_->buf, nullptr, 1, L, plans_->buf, nullptr, 1, L,
                                     FFTW_FORWARD, FFTW_ESTIMATE);
    plans_->inv = fftw_plan_many_dft(2, dims, plans_->count, plans_->buf, nullptr, 1, L, plans_->buf, nullptr, 1, L,
                                     FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  // Spectrum of T'(e) = T(-e) on the circulant, one column of dof pairs at a time.
  spectra_.assign(static_cast<std::size_t>(L), CMatrix::Zero(n, n));
  auto* buf = reinterpret_cast<cdouble*>(plans_->buf);
  for (int c = 0; c < n; ++c) {
    std::fill(buf, buf + static_cast<std::ptrdiff_t>(L) * plans_->count, cdouble(0.0));
    for (int dj = -(my - 1); dj <= my - 1; ++dj)
      for (int di = -(mx - 1); di <= mx - 1; ++di) {
        const CMatrix& b = blocks_[static_cast<std::size_t>((dj + my - 1) * lx_ + di + mx - 1)];
        const int ex = ((-di) % lx_ + lx_) % lx_, ey = ((-dj) % ly_ + ly_) % ly_;
        for (int r = 0; r < n; ++r) buf[static_cast<std::ptrdiff_t>(r) * L + ey * lx_ + ex] = b(r, c);
      }
    fftw_execute(plans_->fwd);
    for (int w = 0; w < L; ++w)
      for (int r = 0; r < n; ++r) spectra_[static_cast<std::size_t>(w)](r, c) = buf[static_cast<std::ptrdiff_t>(r) * L + w];
  }
}

BlockToeplitzOperator::~BlockToeplitzOperator() {
  if (!plans_) return;
  std::lock_guard<std::mutex> lock(plan_mutex());
  fftw_destroy_plan(plans_->fwd);
  fftw_destroy_plan(plans_->inv);
  fftw_free(plans_->buf);
}

BlockToeplitzOperator::BlockToeplitzOperator(BlockToeplitzOperator&&) noexcept = default;
BlockToeplitzOperator& BlockToeplitzOperator::operator=(BlockToeplitzOperator&&) noexcept = default;

const CMatrix& BlockToeplitzOperator::block(int di, int dj) const {
  if (std::abs(di) >= mx_ || std::abs(dj) >= my_) throw Error(ErrorKind::Numerical, "Toeplitz offset out of range");
  return blocks_[static_cast<std::size_t>((dj + my_ - 1) * lx_ + di + mx_ - 1)];
}

CVector BlockToeplitzOperator::apply(const CVector& x) const {
  if (x.size() != size()) throw Error(ErrorKind::Numerical, "Toeplitz operand size mismatch");
  const int L = lx_ * ly_;
  auto* buf = reinterpret_cast<cdouble*>(plans_->buf);
  std::fill(buf, buf + static_cast<std::ptrdiff_t>(L) * plans_->count, cdouble(0.0));
  for (int j = 0; j < my_; ++j)
    for (int i = 0; i < mx_; ++i) {
      const int cell = j * mx_ + i;
      for (int c = 0; c < n_; ++c) buf[static_cast<std::ptrdiff_t>(c) * L + j * lx_ + i] = x(static_cast<Eigen::Index>(cell) * n_ + c);
    }
  fftw_execute(plans_->fwd);
  CVector xw(n_), yw(n_);
  for (int w = 0; w < L; ++w) {
    for (int c = 0; c < n_; ++c) xw(c) = buf[static_cast<std::ptrdiff_t>(c) * L + w];
    yw.noalias() = spectra_[static_cast<std::size_t>(w)] * xw;
    for (int r = 0; r < n_; ++r) buf[static_cast<std::ptrdiff_t>(r) * L + w] = yw(r);
  }
  fftw_execute(plans_->inv);
  CVector y(size());
  const double scale = 1.0 / L;
  for (int j = 0; j < my_; ++j)
    for (int i = 0; i < mx_; ++i) {
      const int cell = j * mx_ + i;
      for (int r = 0; r < n_; ++r) y(static_cast<Eigen::Index>(cell) * n_ + r) = scale * buf[static_cast<std::ptrdiff_t>(r) * L + j * lx_ + i];
    }
  return y;
}

CVector BlockToeplitzOperator::apply_dense(const CVector& x) const {
  if (x.size() != size()) throw Error(ErrorKind::Numerical, "Toeplitz operand size mismatch");
  CVector y = CVector::Zero(size());
  for (int j = 0; j < my_; ++j)
    for (int i = 0; i < mx_; ++i)
      for (int jj = 0; jj < my_; ++jj)
        for (int ii = 0; ii < mx_; ++ii)
          y.segment(static_cast<Eigen::Index>(j * mx_ + i) * n_, n_) +=
              block(ii - i, jj - j) * x.segment(static_cast<Eigen::Index>(jj * mx_ + ii) * n_, n_);
  return y;
}

CMatrix BlockToeplitzOperator::dense() const {
  CMatrix z(size(), size());
  for (int j = 0; j < my_; ++j)
    for (int i = 0; i < mx_; ++i)
      for (int jj = 0; jj < my_; ++jj)
        for (int ii = 0; ii < mx_; ++ii)
          z.block(static_cast<Eigen::Index>(j * mx_ + i) * n_, static_cast<Eigen::Index>(jj * mx_ + ii) * n_, n_, n_) =
              block(ii - i, jj - j);
  return z;
}

std::size_t BlockToeplitzOperator::memory_bytes() const {
  const std::size_t per = sizeof(cdouble) * static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
  return per * (blocks_.size() + spectra_.size()) + sizeof(cdouble) * static_cast<std::size_t>(lx_ * ly_ * plans_->count);
}

}  // namespace emsurf
