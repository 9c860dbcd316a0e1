// Copyright emsurf contributors
// SPDX-License-Identifier: Apache-2.0

#include "emsurf/kernels/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace emsurf {

namespace {

void add_orbit3(QuadratureRule& q, double a, double b, double w) {
  q.points.emplace_back(a, b, b);
  q.points.emplace_back(b, a, b);
  q.points.emplace_back(b, b, a);
  for (int i = 0; i < 3; ++i) q.weights.push_back(w);
}

void add_orbit6(QuadratureRule& q, double a, double b, double c, double w) {
  const double p[6][3] = {{a, b, c}, {a, c, b}, {b, a, c}, {b, c, a}, {c, a, b}, {c, b, a}};
  for (const auto& x : p) {
    q.points.emplace_back(x[0], x[1], x[2]);
    q.weights.push_back(w);
  }
}

QuadratureRule make_rule(int points) {
  QuadratureRule q;
  switch (points) {
    case 1:
      q.points.emplace_back(1.0 / 3, 1.0 / 3, 1.0 / 3);
      q.weights.push_back(1.0);
      q.degree = 1;
      break;
    case 3:
      add_orbit3(q, 2.0 / 3, 1.0 / 6, 1.0 / 3);
      q.degree = 2;
      break;
    case 6:
      add_orbit3(q, 0.108103018168070, 0.445948490915965, 0.223381589678011);
      add_orbit3(q, 0.816847572980459, 0.091576213509771, 0.109951743655322);
      q.degree = 4;
      break;
    case 7:
      q.points.emplace_back(1.0 / 3, 1.0 / 3, 1.0 / 3);
      q.weights.push_back(0.225);
      add_orbit3(q, 0.059715871789770, 0.470142064105115, 0.132394152788506);
      add_orbit3(q, 0.797426985353087, 0.101286507323456, 0.125939180544827);
      q.degree = 5;
      break;
    case 12:
      add_orbit3(q, 0.501426509658179, 0.249286745170910, 0.116786275726379);
      add_orbit3(q, 0.873821971016996, 0.063089014491502, 0.050844906370207);
      add_orbit6(q, 0.053145049844817, 0.310352451033784, 0.636502499121399, 0.082851075618374);
      q.degree = 6;
      break;
    default:
      throw Error(ErrorKind::Config, "no triangle rule with " + std::to_string(points) + " points");
  }
  // Renormalize: the tabulated weights carry 15 digits.
  double s = 0;
  for (double w : q.weights) s += w;
  for (double& w : q.weights) w /= s;
  for (auto& p : q.points) p /= p.sum();
  q.label = std::to_string(points) + "-point";
  return q;
}

}  // namespace

const QuadratureRule& triangle_rule(int points) {
  static std::mutex mu;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(points);
  if (it == cache.end()) it = cache.emplace(points, make_rule(points)).first;
  return it->second;
}

QuadratureRule subdivided_rule(const QuadratureRule& base, int levels) {
  // Subtriangles as barycentric corner triples.
  std::vector<std::array<Vec3, 3>> tris{{Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1)}};
  for (int l = 0; l < levels; ++l) {
    std::vector<std::array<Vec3, 3>> next;
    for (const auto& t : tris) {
      const Vec3 m01 = 0.5 * (t[0] + t[1]), m12 = 0.5 * (t[1] + t[2]), m20 = 0.5 * (t[2] + t[0]);
      next.push_back({t[0], m01, m20});
      next.push_back({m01, t[1], m12});
      next.push_back({m20, m12, t[2]});
      next.push_back({m12, m20, m01});
    }
    tris = std::move(next);
  }
  QuadratureRule q;
  const double scale = 1.0 / static_cast<double>(tris.size());
  for (const auto& t : tris)
    for (std::size_t i = 0; i < base.size(); ++i) {
      const Vec3& b = base.points[i];
      q.points.push_back(b[0] * t[0] + b[1] * t[1] + b[2] * t[2]);
      q.weights.push_back(base.weights[i] * scale);
    }
  q.degree = base.degree;
  q.label = base.label + " x" + std::to_string(tris.size());
  return q;
}

void gauss_legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w) {
  x.assign(static_cast<std::size_t>(n), 0.0);
  w.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    x[static_cast<std::size_t>(i)] = c - h * z;
    x[static_cast<std::size_t>(n - 1 - i)] = c + h * z;
    w[static_cast<std::size_t>(i)] = h * wi;
    w[static_cast<std::size_t>(n - 1 - i)] = h * wi;
  }
}

QuadratureRule conical_rule(int n) {
  std::vector<double> x, w;
  gauss_legendre(n, 0.0, 1.0, x, w);
  QuadratureRule q;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double u = x[static_cast<std::size_t>(i)], v = x[static_cast<std::size_t>(j)];
      // (u, v) in the unit square -> triangle with Jacobian (1 - u).
      const double b1 = u, b2 = (1.0 - u) * v;
      q.points.emplace_back(1.0 - b1 - b2, b1, b2);
      q.weights.push_back(2.0 * w[static_cast<std::size_t>(i)] * w[static_cast<std::size_t>(j)] * (1.0 - u));
    }
  q.degree = 2 * n - 2;
  q.label = "conical " + std::to_string(n) + "x" + std::to_string(n);
  return q;
}

}  // namespace emsurf
