// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "emsurf/kernels/operators.hpp"

#include "emsurf/kernels/greens.hpp"
#include "emsurf/kernels/potentials.hpp"
#include "emsurf/kernels/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace emsurf {

namespace {

constexpr double kInv4Pi = 1.0 / (4.0 * kPi);

using Mat3c = std::array<std::array<cdouble, 3>, 3>;

inline cdouble dotc(const Vec3& a, const CVec3& b) { return a.x() * b.x() + a.y() * b.y() + a.z() * b.z(); }

inline CVec3 crossc(const CVec3& a, const Vec3& b) {
  return CVec3(a.y() * b.z() - a.z() * b.y(), a.z() * b.x() - a.x() * b.z(), a.x() * b.y() - a.y() * b.x());
}

// Moments of one pair, split into static and smooth parts when near.
struct Moments {
  Mat3c vec_static{}, vec_smooth{};
  cdouble s0_static = 0.0, s0_smooth = 0.0;
  Mat3c k{};
};

Moments pair_moments(const TriangleData& T, const TriangleData& S, cdouble k, const QuadratureOptions& q, bool near) {
  static thread_local QuadratureRule near_outer_cache;
  static thread_local int cached_points = -1, cached_levels = -1;
  if (cached_points != q.near_outer_points || cached_levels != q.near_outer_levels) {
    near_outer_cache = subdivided_rule(triangle_rule(q.near_outer_points), q.near_outer_levels);
    cached_points = q.near_outer_points;
    cached_levels = q.near_outer_levels;
  }
  const QuadratureRule& outer = near ? near_outer_cache : triangle_rule(q.far_points);
  const QuadratureRule& inner = near ? triangle_rule(q.near_inner_points) : triangle_rule(q.far_points);

  std::array<double, 3> ct{}, cs{};
  for (int i = 0; i < 3; ++i) {
    ct[i] = T.len[i] / (2.0 * T.area);
    cs[i] = S.len[i] / (2.0 * S.area);
  }
  // Source points in global coordinates.
  std::vector<Vec3> rs(inner.size());
  std::vector<double> ws(inner.size());
  for (std::size_t b = 0; b < inner.size(); ++b) {
    const Vec3& bc = inner.points[b];
    rs[b] = bc[0] * S.p[0] + bc[1] * S.p[1] + bc[2] * S.p[2];
    ws[b] = inner.weights[b] * S.area;
  }

  Moments m;
  const double tiny = 1e-14 * std::max(T.size, S.size);
  for (std::size_t a = 0; a < outer.size(); ++a) {
    const Vec3& bc = outer.points[a];
    const Vec3 r = bc[0] * T.p[0] + bc[1] * T.p[1] + bc[2] * T.p[2];
    const double wa = outer.weights[a] * T.area;
    double p0s = 0.0;
    Vec3 p1s = Vec3::Zero();
    cdouble p0 = 0.0;
    CVec3 p1 = CVec3::Zero(), w = CVec3::Zero();
    if (near) {
      const StaticPotentials sp = static_potentials(S.p, r);
      p0s = sp.i0 * kInv4Pi;
      p1s = (sp.i1 + r * sp.i0) * kInv4Pi;
      w = (sp.grad_i0 * kInv4Pi).cast<cdouble>();
      for (std::size_t b = 0; b < rs.size(); ++b) {
        const Vec3 d = r - rs[b];
        const double R = d.norm();
        const cdouble gs = greens_smooth(k, R) * ws[b];
        p0 += gs;
        p1 += gs * rs[b].cast<cdouble>();
        if (R > tiny) w += (greens_grad_factor_smooth(k, R) * ws[b]) * d.cast<cdouble>();
      }
    } else {
      for (std::size_t b = 0; b < rs.size(); ++b) {
        const Vec3 d = r - rs[b];
        const double R = d.norm();
        const cdouble e = std::exp(-kJ * k * R);
        const cdouble g = e * kInv4Pi / R * ws[b];
        p0 += g;
        p1 += g * rs[b].cast<cdouble>();
        w += (-(1.0 + kJ * k * R) * e * kInv4Pi / (R * R * R) * ws[b]) * d.cast<cdouble>();
      }
    }
    m.s0_static += wa * p0s;
    m.s0_smooth += wa * p0;
    for (int i = 0; i < 3; ++i) {
      const Vec3 ri = r - T.p[static_cast<std::size_t>(i)];
      for (int j = 0; j < 3; ++j) {
        const Vec3& qj = S.p[static_cast<std::size_t>(j)];
        const double c = wa * ct[static_cast<std::size_t>(i)] * cs[static_cast<std::size_t>(j)];
        if (near) m.vec_static[i][j] += c * ri.dot(p1s - qj * p0s);
        m.vec_smooth[i][j] += c * dotc(ri, p1 - qj.cast<cdouble>() * p0);
        m.k[i][j] += c * dotc(ri, crossc(w, r - qj));
      }
    }
  }
  return m;
}

// Regular meshes put many pairs exactly on the threshold; the slack keeps the
// choice independent of where the pair sits in space.
bool is_near(const TriangleData& T, const TriangleData& S, const QuadratureOptions& q) {
  return (T.centroid - S.centroid).norm() < q.near_factor * std::max(T.size, S.size) * (1.0 + 1e-9);
}

}  // namespace

TriangleData triangle_data(const std::array<Vec3, 3>& p) {
  TriangleData t;
  t.p = p;
  const Vec3 c = (p[1] - p[0]).cross(p[2] - p[0]);
  t.area = 0.5 * c.norm();
  if (t.area <= 0.0) throw Error(ErrorKind::Numerical, "degenerate triangle");
  t.n = c.normalized();
  for (int i = 0; i < 3; ++i) {
    t.len[static_cast<std::size_t>(i)] = (p[static_cast<std::size_t>((i + 1) % 3)] - p[static_cast<std::size_t>((i + 2) % 3)]).norm();
  }
  t.centroid = (p[0] + p[1] + p[2]) / 3.0;
  t.size = *std::max_element(t.len.begin(), t.len.end());
  return t;
}

TriangleData triangle_data(const UnitCellGeometry& cell, int tri, const Vec3& offset) {
  return triangle_data({cell.vertex(tri, 0) + offset, cell.vertex(tri, 1) + offset, cell.vertex(tri, 2) + offset});
}

bool coincident(const TriangleData& a, const TriangleData& b) {
  if ((a.centroid - b.centroid).norm() > kGeomTol) return false;
  for (const auto& p : a.p) {
    bool found = false;
    for (const auto& q : b.p) found = found || (p - q).norm() <= kGeomTol;
    if (!found) return false;
  }
  return true;
}

PairIntegrals triangle_pair(const TriangleData& T, const TriangleData& S, cdouble k, const QuadratureOptions& q) {
  const bool near = is_near(T, S, q);
  Moments m = pair_moments(T, S, k, q, near);
  if (near && coincident(T, S)) m.s0_static = static_self_integral(S.p) * kInv4Pi;
  PairIntegrals out;
  const cdouble inv_k2 = 1.0 / (k * k);
  const cdouble s0 = m.s0_static + m.s0_smooth;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double qi = T.len[static_cast<std::size_t>(i)] / T.area, qj = S.len[static_cast<std::size_t>(j)] / S.area;
      out.L[i][j] = m.vec_static[i][j] + m.vec_smooth[i][j] - inv_k2 * qi * qj * s0;
      out.K[i][j] = m.k[i][j];
    }
  return out;
}

SingularTerms singular_self_term(const TriangleData& T, const TriangleData& S, cdouble k, const QuadratureOptions& q) {
  Moments m = pair_moments(T, S, k, q, true);
  SingularTerms out;
  out.static_scalar = coincident(T, S) ? static_self_integral(S.p) * kInv4Pi : m.s0_static.real();
  out.smooth_scalar = m.s0_smooth;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      out.static_vector[i][j] = m.vec_static[i][j].real();
      out.smooth_vector[i][j] = m.vec_smooth[i][j];
    }
  return out;
}

std::array<std::array<double, 3>, 3> identity_term(const TriangleData& T, const TriangleData& S, const Vec3& n_in) {
  std::array<std::array<double, 3>, 3> out{};
  const QuadratureRule& rule = triangle_rule(3);
  for (std::size_t a = 0; a < rule.size(); ++a) {
    const Vec3& bc = rule.points[a];
    const Vec3 r = bc[0] * T.p[0] + bc[1] * T.p[1] + bc[2] * T.p[2];
    const double wa = rule.weights[a] * T.area;
    for (int i = 0; i < 3; ++i) {
      const Vec3 fi = T.len[static_cast<std::size_t>(i)] / (2.0 * T.area) * (r - T.p[static_cast<std::size_t>(i)]);
      for (int j = 0; j < 3; ++j) {
        const Vec3 fj = S.len[static_cast<std::size_t>(j)] / (2.0 * S.area) * (r - S.p[static_cast<std::size_t>(j)]);
        out[i][j] += 0.5 * wa * fi.dot(n_in.cross(fj));
      }
    }
  }
  return out;
}

RegionKernel region_kernel(const Region& region, double frequency_hz) {
  return {region.id, region_wavenumber(region, frequency_hz), region.eps_r};
}

DofMap DofMap::identity(int n) {
  DofMap m;
  m.index.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) m.index[static_cast<std::size_t>(i)] = i;
  m.sign.assign(static_cast<std::size_t>(n), 1);
  return m;
}

BlockCoefficients block_coefficients(const RegionKernel& kernel) {
  const cdouble sq = std::sqrt(kernel.eps_r);
  return {-kJ * kernel.k / sq, -1.0, 1.0, -kJ * kernel.k * sq};
}

namespace {

struct PieceRef {
  int function;
  int local_edge;
  int sign;
};

struct ViewTriangles {
  std::vector<int> tris;                       // cell triangle ids
  std::vector<std::vector<PieceRef>> pieces;   // per entry of tris
  std::vector<TriangleData> data;
  std::vector<double> sigma;                   // orientation of n_in relative to n
};

ViewTriangles gather(const BasisView& v, int region) {
  ViewTriangles out;
  std::vector<int> slot(v.cell->triangles.size(), -1);
  for (int f = 0; f < v.size(); ++f) {
    const RwgFunction& fn = v.function(f);
    for (int p = 0; p < fn.count; ++p) {
      const RwgPiece& pc = fn.pieces[static_cast<std::size_t>(p)];
      int& s = slot[static_cast<std::size_t>(pc.tri)];
      if (s < 0) {
        s = static_cast<int>(out.tris.size());
        out.tris.push_back(pc.tri);
        out.pieces.emplace_back();
      }
      out.pieces[static_cast<std::size_t>(s)].push_back({f, pc.local_edge, pc.sign});
    }
  }
  // Deterministic triangle order.
  std::vector<std::size_t> order(out.tris.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return out.tris[a] < out.tris[b]; });
  ViewTriangles sorted;
  for (std::size_t i : order) {
    const int t = out.tris[i];
    sorted.tris.push_back(t);
    sorted.pieces.push_back(std::move(out.pieces[i]));
    sorted.data.push_back(triangle_data(*v.cell, t, v.offset));
    const bool minus = v.cell->region_minus(t) == region;
    sorted.sigma.push_back(minus ? 1.0 : -1.0);
  }
  return sorted;
}

enum class Mode { Region, RawL, RawK };

struct Scatter {
  Mode mode;
  BlockCoefficients c;
  cdouble scale = 1.0;
};

void scatter_pair(const BasisView& test, const BasisView& source, const std::vector<PieceRef>& tp,
                  const std::vector<PieceRef>& sp, const PairIntegrals& pi, const std::array<std::array<double, 3>, 3>* idt,
                  bool transpose, const Scatter& sc, const DofMap& rows, const DofMap& cols, CMatrix& out) {
  for (const auto& a : tp) {
    const int row = rows.index[static_cast<std::size_t>(a.function)];
    if (row < 0) continue;
    const CurrentKind ka = test.function(a.function).kind;
    for (const auto& b : sp) {
      const int col = cols.index[static_cast<std::size_t>(b.function)];
      if (col < 0) continue;
      const CurrentKind kb = source.function(b.function).kind;
      const int i = a.local_edge, j = b.local_edge;
      const cdouble L = transpose ? pi.L[j][i] : pi.L[i][j];
      cdouble K = transpose ? pi.K[j][i] : pi.K[i][j];
      if (idt) K += (*idt)[i][j];
      cdouble v;
      switch (sc.mode) {
        case Mode::RawL: v = L; break;
        case Mode::RawK: v = K; break;
        default:
          if (ka == CurrentKind::Electric)
            v = kb == CurrentKind::Electric ? sc.c.l_e * L : sc.c.k_e * K;
          else
            v = kb == CurrentKind::Electric ? sc.c.k_h * K : sc.c.l_h * L;
      }
      const double s = static_cast<double>(a.sign * b.sign * rows.sign[static_cast<std::size_t>(a.function)] *
                                           cols.sign[static_cast<std::size_t>(b.function)]);
      out(row, col) += s * sc.scale * v;
    }
  }
}

void assemble_core(const BasisView& test, const BasisView& source, const RegionKernel& kernel,
                   const QuadratureOptions& quad, const DofMap& rows, const DofMap& cols, const Scatter& sc,
                   CMatrix& out) {
  const ViewTriangles tv = gather(test, kernel.region);
  const bool same = test.cell == source.cell && test.basis == source.basis && test.first == source.first &&
                    test.size() == source.size() && (test.offset - source.offset).norm() == 0.0;
  const ViewTriangles sv_storage = same ? ViewTriangles{} : gather(source, kernel.region);
  const ViewTriangles& sv = same ? tv : sv_storage;
  const int nt = static_cast<int>(tv.tris.size()), ns = static_cast<int>(sv.tris.size());

  constexpr int kChunk = 16;
  std::vector<PairIntegrals> buffer;
  for (int t0 = 0; t0 < nt; t0 += kChunk) {
    const int t1 = std::min(nt, t0 + kChunk);
    buffer.assign(static_cast<std::size_t>(t1 - t0) * static_cast<std::size_t>(ns), PairIntegrals{});
#pragma omp parallel for schedule(dynamic, 1)
    for (int t = t0; t < t1; ++t) {
      const int s_begin = same ? t : 0;
      for (int s = s_begin; s < ns; ++s) {
        PairIntegrals pi = triangle_pair(tv.data[static_cast<std::size_t>(t)], sv.data[static_cast<std::size_t>(s)], kernel.k, quad);
        if (same && s == t)
          for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) pi.L[i][j] = pi.L[j][i] = 0.5 * (pi.L[i][j] + pi.L[j][i]);
        buffer[static_cast<std::size_t>(t - t0) * static_cast<std::size_t>(ns) + static_cast<std::size_t>(s)] = pi;
      }
    }
    for (int t = t0; t < t1; ++t) {
      const auto& T = tv.data[static_cast<std::size_t>(t)];
      const int s_begin = same ? t : 0;
      for (int s = s_begin; s < ns; ++s) {
        const auto& S = sv.data[static_cast<std::size_t>(s)];
        const PairIntegrals& pi = buffer[static_cast<std::size_t>(t - t0) * static_cast<std::size_t>(ns) + static_cast<std::size_t>(s)];
        const bool coin = (same && s == t) || (!same && coincident(T, S));
        std::array<std::array<double, 3>, 3> idt{};
        if (coin) idt = identity_term(T, S, tv.sigma[static_cast<std::size_t>(t)] * T.n);
        scatter_pair(test, source, tv.pieces[static_cast<std::size_t>(t)], sv.pieces[static_cast<std::size_t>(s)], pi,
                     coin ? &idt : nullptr, false, sc, rows, cols, out);
        if (same && s != t)
          scatter_pair(test, source, sv.pieces[static_cast<std::size_t>(s)], tv.pieces[static_cast<std::size_t>(t)], pi,
                       nullptr, true, sc, rows, cols, out);
      }
    }
  }
}

}  // namespace

void assemble_region(const BasisView& test, const BasisView& source, const RegionKernel& kernel,
                     const QuadratureOptions& quad, const DofMap& rows, const DofMap& cols, CMatrix& out) {
  if (kernel.k == cdouble(0.0)) throw Error(ErrorKind::Numerical, "static (k = 0) operators are not supported");
  Scatter sc{Mode::Region, block_coefficients(kernel), 1.0};
  assemble_core(test, source, kernel, quad, rows, cols, sc, out);
}

CMatrix assemble_raw(OperatorKind op, const BasisView& test, const BasisView& source, const RegionKernel& kernel,
                     const QuadratureOptions& quad) {
  if (kernel.k == cdouble(0.0)) throw Error(ErrorKind::Numerical, "static (k = 0) operators are not supported");
  CMatrix out = CMatrix::Zero(test.size(), source.size());
  Scatter sc{op == OperatorKind::L ? Mode::RawL : Mode::RawK, block_coefficients(kernel), 1.0};
  assemble_core(test, source, kernel, quad, DofMap::identity(test.size()), DofMap::identity(source.size()), sc, out);
  return out;
}

CMatrix assemble_operator(FieldKind alpha, OperatorKind op, const BasisView& test, const BasisView& source,
                          const RegionKernel& kernel, const QuadratureOptions& quad) {
  const BlockCoefficients c = block_coefficients(kernel);
  cdouble scale;
  if (op == OperatorKind::L)
    scale = alpha == FieldKind::E ? c.l_e : c.l_h;
  else
    scale = alpha == FieldKind::E ? c.k_e : c.k_h;
  return scale * assemble_raw(op, test, source, kernel, quad);
}

}  // namespace emsurf
