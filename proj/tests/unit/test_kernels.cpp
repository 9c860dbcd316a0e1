// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "fixtures.hpp"

#include "emsurf/basis/rwg.hpp"
#include "emsurf/kernels/greens.hpp"
#include "emsurf/kernels/operators.hpp"
#include "emsurf/kernels/potentials.hpp"
#include "emsurf/kernels/quadrature.hpp"
#include "emsurf/kernels/sources.hpp"

#include <doctest.h>

#include <Eigen/Geometry>

using namespace emsurf;

namespace {

using Tri = std::array<Vec3, 3>;

const Tri kA{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0.3, 0.8, 0)};
const Tri kB{Vec3(1, 0, 0), Vec3(0, 0, 0), Vec3(0.6, -0.9, 0.2)};
const Tri kFar{Vec3(3, 0, 1), Vec3(4, 0.2, 1), Vec3(3.3, 0.8, 1.5)};

Vec3 at(const TriangleData& t, const Vec3& b) { return b[0] * t.p[0] + b[1] * t.p[1] + b[2] * t.p[2]; }

Vec3 phi(const TriangleData& t, int i, const Vec3& r) {
  return t.len[static_cast<std::size_t>(i)] / (2 * t.area) * (r - t.p[static_cast<std::size_t>(i)]);
}

// Max entry difference over the largest entry of b (or `floor` when larger).
double max_rel(const std::array<std::array<cdouble, 3>, 3>& a, const std::array<std::array<cdouble, 3>, 3>& b,
               double floor = 0.0) {
  double err = 0, scale = floor;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      err = std::max(err, std::abs(a[i][j] - b[i][j]));
      scale = std::max(scale, std::abs(b[i][j]));
    }
  return err / scale;
}

// Tensor-product quadrature of the full pair integrals, valid only for
// well-separated triangles.
PairIntegrals brute_force(const TriangleData& a, const TriangleData& b, cdouble k) {
  const QuadratureRule r = subdivided_rule(triangle_rule(7), 3);
  PairIntegrals out{};
  for (std::size_t x = 0; x < r.size(); ++x)
    for (std::size_t y = 0; y < r.size(); ++y) {
      const Vec3 p = at(a, r.points[x]), q = at(b, r.points[y]);
      const double w = r.weights[x] * r.weights[y] * a.area * b.area;
      const Vec3 d = p - q;
      const double R = d.norm();
      const cdouble g = std::exp(-kJ * k * R) / (4 * kPi * R);
      const cdouble gf = -(1.0 + kJ * k * R) * std::exp(-kJ * k * R) / (4 * kPi * R * R * R);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          const Vec3 fi = phi(a, i, p), fj = phi(b, j, q);
          const double di = a.len[static_cast<std::size_t>(i)] / a.area, dj = b.len[static_cast<std::size_t>(j)] / b.area;
          out.L[i][j] += w * g * (fi.dot(fj) - di * dj / (k * k));
          out.K[i][j] += w * gf * fi.dot(d.cross(fj));
        }
    }
  return out;
}

struct CubeFixture {
  UnitCellGeometry cell = build_cell(test::box_mesh(Vec3::Zero(), Vec3::Constant(0.01), 2),
                                     test::single_region_spec(2.5, PatchKind::Dielectric));
  CellBasis cb = build_basis(cell);
  BasisView view(const Vec3& offset = Vec3::Zero()) const { return BasisView{&cell, &cb.basis, offset, 0, -1}; }
};

}  // namespace

TEST_SUITE("kernels") {
  TEST_CASE("green's function values") {
    const double lambda = 0.3;
    const double k = 2 * kPi / lambda;
    CHECK(std::abs(greens(1e-12, Vec3::Zero(), Vec3(1, 0, 0)) - 1.0 / (4 * kPi)) < 1e-12);
    const cdouble full = greens(k, Vec3::Zero(), Vec3(lambda, 0, 0));
    CHECK(full.real() == doctest::Approx(1.0 / (4 * kPi * lambda)).epsilon(1e-12));
    CHECK(std::abs(full.imag()) < 1e-12);
    const cdouble half = greens(2 * kPi, Vec3::Zero(), Vec3(0, 0.5, 0));
    CHECK(half.real() == doctest::Approx(-0.159155).epsilon(1e-5));
    const Vec3 r(0.1, -0.2, 0.3), rp(-0.4, 0.05, 0.2);
    CHECK(std::abs(greens(k, r, rp) - greens(k, rp, r)) < 1e-15);
    CHECK_THROWS_AS(greens(k, r, r), Error);
  }

  TEST_CASE("static potentials match quadrature at a distant point and by finite differences") {
    const Vec3 r(0.4, 0.3, 0.7);
    const StaticPotentials sp = static_potentials(kA, r);
    const TriangleData t = triangle_data(kA);
    const QuadratureRule q = subdivided_rule(triangle_rule(7), 3);
    double i0 = 0;
    Vec3 i1 = Vec3::Zero();
    for (std::size_t a = 0; a < q.size(); ++a) {
      const Vec3 p = at(t, q.points[a]);
      const double R = (p - r).norm();
      i0 += q.weights[a] * t.area / R;
      i1 += q.weights[a] * t.area * (p - r) / R;
    }
    CHECK(sp.i0 == doctest::Approx(i0).epsilon(1e-9));
    CHECK((sp.i1 - i1).norm() < 1e-9 * i1.norm());
    const double h = 1e-6;
    for (int c = 0; c < 3; ++c) {
      Vec3 dr = Vec3::Zero();
      dr[c] = h;
      const double fd = (static_potentials(kA, r + dr).i0 - static_potentials(kA, r - dr).i0) / (2 * h);
      CHECK(sp.grad_i0[c] == doctest::Approx(fd).epsilon(1e-6));
    }
  }

  TEST_CASE("closed-form self integral agrees with quadrature over the analytic inner integral") {
    for (const Tri& tri : {kA, kB}) {
      const TriangleData t = triangle_data(tri);
      auto outer = [&](int levels) {
        const QuadratureRule q = subdivided_rule(triangle_rule(7), levels);
        double sum = 0;
        for (std::size_t a = 0; a < q.size(); ++a) sum += q.weights[a] * t.area * static_potentials(tri, at(t, q.points[a])).i0;
        return sum;
      };
      // The outer error falls as h^2; one Richardson step.
      const double s5 = outer(5), s6 = outer(6);
      CHECK(static_self_integral(tri) == doctest::Approx(s6 + (s6 - s5) / 3).epsilon(1e-6));
    }
  }

  TEST_CASE("well-separated pair integrals match tensor-product quadrature") {
    const cdouble k(2.0, -0.1);
    const auto a = triangle_data(kA), c = triangle_data(kFar);
    const PairIntegrals bf = brute_force(a, c, k);
    const PairIntegrals p = triangle_pair(a, c, k);
    CHECK(max_rel(p.L, bf.L) < 1e-3);
    CHECK(max_rel(p.K, bf.K) < 1e-3);
    QuadratureOptions fine;
    fine.far_points = 12;
    const PairIntegrals q = triangle_pair(a, c, k, fine);
    CHECK(max_rel(q.L, bf.L) < 1e-6);
    CHECK(max_rel(q.K, bf.K) < 1e-6);
  }

  TEST_CASE("near and self pairs converge under refinement") {
    const cdouble k(2.0, -0.1);
    QuadratureOptions fine;
    fine.near_outer_levels = 3;
    fine.near_inner_points = 12;
    fine.far_points = 12;
    const auto a = triangle_data(kA), b = triangle_data(kB);
    for (const auto* s : {&a, &b}) {
      const PairIntegrals lo = triangle_pair(a, *s, k), hi = triangle_pair(a, *s, k, fine);
      CHECK(max_rel(lo.L, hi.L) < 1e-2);
      // K vanishes on the coplanar self pair; measure it against L.
      CHECK(max_rel(lo.K, hi.K, std::abs(hi.L[0][0])) < 5e-2);
    }
  }

  TEST_CASE("pair integrals are invariant under rigid motion") {
    const cdouble k(3.0, 0.0);
    const Eigen::Matrix3d rot = Eigen::AngleAxisd(0.7, Vec3(1, 2, -1).normalized()).toRotationMatrix();
    const Vec3 shift(5.0, -2.0, 0.3);
    auto move = [&](const Tri& t) { return Tri{rot * t[0] + shift, rot * t[1] + shift, rot * t[2] + shift}; };
    for (const Tri& s : {kA, kB, kFar}) {
      const PairIntegrals p = triangle_pair(triangle_data(kA), triangle_data(s), k);
      const PairIntegrals q = triangle_pair(triangle_data(move(kA)), triangle_data(move(s)), k);
      CHECK(max_rel(q.L, p.L) < 1e-10);
      CHECK(max_rel(q.K, p.K, std::abs(p.L[0][0])) < 1e-10);
    }
  }

  TEST_CASE("galerkin L block is complex symmetric") {
    const CubeFixture fx;
    for (cdouble eps : {cdouble(1.0), cdouble(2.5, -0.3)}) {
      const RegionKernel kernel = region_kernel(Region{1, eps}, 12e9);
      const CMatrix L = assemble_raw(OperatorKind::L, fx.view(), fx.view(), kernel);
      CHECK((L - L.transpose()).norm() < 1e-10 * L.norm());
    }
  }

  TEST_CASE("identity term is half the rotated gram matrix") {
    const TriangleData t = triangle_data(kB);
    const auto id = identity_term(t, t, t.n);
    const QuadratureRule& q = triangle_rule(7);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double g = 0;
        for (std::size_t a = 0; a < q.size(); ++a) {
          const Vec3 r = at(t, q.points[a]);
          g += q.weights[a] * t.area * phi(t, i, r).dot(t.n.cross(phi(t, j, r)));
        }
        CHECK(id[i][j] == doctest::Approx(0.5 * g).epsilon(1e-12));
      }
    const auto flipped = identity_term(t, t, -t.n);
    CHECK(flipped[0][1] == doctest::Approx(-id[0][1]));
  }

  TEST_CASE("static operators are rejected") {
    const CubeFixture fx;
    RegionKernel kernel;
    kernel.region = 1;
    kernel.k = 0.0;
    CHECK_THROWS_AS(assemble_raw(OperatorKind::L, fx.view(), fx.view(), kernel), Error);
  }

  TEST_CASE("dipole far field on the equator and the axis null") {
    IncidentSource s;
    s.frequency = 10e9;
    s.moment = CVec3(0, 0, 1e-3);
    const double k = free_space_wavenumber(s.frequency);
    const double R = 1000.0 / k;
    const FieldPair eq = incident_fields(s, Vec3(R, 0, 0));
    const double expected = kEta0 * k * 1e-3 / (4 * kPi * R);
    CHECK(eq.e.norm() == doctest::Approx(expected).epsilon(2e-3));
    CHECK(eq.e.norm() / eq.h.norm() == doctest::Approx(kEta0).epsilon(2e-3));
    const FieldPair axis = incident_fields(s, Vec3(0, 0, R));
    // Only the near-field term survives on the axis: 2/(kR) of the far amplitude.
    CHECK(axis.e.norm() == doctest::Approx(2e-3 * expected * std::sqrt(1 + 1e-6)).epsilon(1e-12));
    CHECK(axis.h.norm() == 0.0);
  }

  TEST_CASE("plane wave is transverse with impedance eta0") {
    IncidentSource s;
    s.kind = SourceKind::PlaneWave;
    s.frequency = 5e9;
    s.direction = Vec3(1, 0, -1).normalized();
    s.polarization = CVec3(1, 0, 1).normalized().cast<cdouble>() * cdouble(0.0, 2.0);
    const FieldPair f = incident_fields(s, Vec3(0.01, 0.02, -0.03));
    CHECK(f.e.norm() / f.h.norm() == doctest::Approx(kEta0).epsilon(1e-12));
    const cdouble eh = f.e.x() * f.h.x() + f.e.y() * f.h.y() + f.e.z() * f.h.z();
    CHECK(std::abs(eh) < 1e-12 * f.e.norm() * f.h.norm());
    s.polarization = CVec3(1, 0, 0);
    CHECK_THROWS_AS(s.validate(), Error);
  }

  TEST_CASE("projected excitation: zero source and lattice phase shift") {
    const CubeFixture fx;
    IncidentSource dip;
    dip.frequency = 12e9;
    dip.position = Vec3(0.05, 0.0, 0.0);
    dip.moment = CVec3::Zero();
    CHECK(project_incident(fx.view(), dip).norm() == 0.0);

    IncidentSource pw;
    pw.kind = SourceKind::PlaneWave;
    pw.frequency = 12e9;
    pw.direction = Vec3(0.3, 0.4, -std::sqrt(0.75)).normalized();
    pw.polarization = pw.direction.cross(Vec3(0, 0, 1)).normalized().cast<cdouble>();
    const Vec3 d(0.0135, 0.027, 0.0);
    const CVector v0 = project_incident(fx.view(), pw);
    const CVector v1 = project_incident(fx.view(d), pw);
    const cdouble shift = std::exp(-kJ * free_space_wavenumber(pw.frequency) * pw.direction.dot(d));
    CHECK((v1 - shift * v0).norm() < 1e-12 * v0.norm());
  }
}
