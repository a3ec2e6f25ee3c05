#pragma once

// Independent reference computations used only by the tests. None of these call the library
// routine they check.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <vector>

#include "brokenhyp.hpp"

namespace oracle {

using brokenhyp::MinkVec;

// Number of ideal vertices: corners identified across gluings, counted with union-find.
inline int vertex_count(int faces, const std::vector<brokenhyp::Gluing>& gluing) {
  std::vector<int> parent(3 * faces);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
  auto unite = [&](int a, int b) { parent[find(a)] = find(b); };
  for (const auto& [a, b] : gluing) {
    // side a runs from corner a+1 to a+2; glued reversed onto b's corners b+2 -> b+1
    unite(3 * a.face + (a.slot + 1) % 3, 3 * b.face + (b.slot + 2) % 3);
    unite(3 * a.face + (a.slot + 2) % 3, 3 * b.face + (b.slot + 1) % 3);
  }
  int count = 0;
  for (int i = 0; i < 3 * faces; ++i) count += find(i) == i;
  return count;
}

// Central-difference Jacobian of a map R^n -> R^m.
inline Eigen::MatrixXd jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                const Eigen::VectorXd& x, double h = 1e-6) {
  const Eigen::VectorXd fx = f(x);
  Eigen::MatrixXd j(fx.size(), x.size());
  for (int i = 0; i < x.size(); ++i) {
    Eigen::VectorXd a = x, b = x;
    a(i) += h;
    b(i) -= h;
    j.col(i) = (f(a) - f(b)) / (2 * h);
  }
  return j;
}

// Thurston form on large weights, evaluated straight from its definition
// -1/2 sum_cyc (dw(alpha) ^ dw(beta)) with dw(alpha) = (dw_b + dw_c - dw_a) / 2 per face.
inline double thurston_on_large(int faces, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  double total = 0.0;
  for (int f = 0; f < faces; ++f) {
    auto small = [&](const Eigen::VectorXd& x, int k) {
      return 0.5 * (x(3 * f + (k + 1) % 3) + x(3 * f + (k + 2) % 3) - x(3 * f + k));
    };
    for (int k = 0; k < 3; ++k) {
      const int l = (k + 1) % 3;
      total += -0.5 * (small(u, k) * small(v, l) - small(u, l) * small(v, k));
    }
  }
  return total;
}

// Weil-Petersson form on log-lambda coordinates from its definition.
inline double weil_petersson(int faces, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  double total = 0.0;
  for (int f = 0; f < faces; ++f)
    for (int k = 0; k < 3; ++k) {
      const int a = 3 * f + k, b = 3 * f + (k + 1) % 3;
      total += -2.0 * (u(a) * v(b) - u(b) * v(a));
    }
  return total;
}

inline Eigen::MatrixXd matrix_of(int n, const std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>& form) {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = form(Eigen::VectorXd::Unit(n, i), Eigen::VectorXd::Unit(n, j));
  return m;
}

inline double mink(const MinkVec& a, const MinkVec& b) { return a.x * b.x + a.y * b.y - a.z * b.z; }

// Point on the geodesic between ideal points ui, uj maximizing <x, uk>, by golden-section search
// on the arclength parameter x(t) = (e^t ui + e^-t uj) / sqrt(-2<ui,uj>).
inline MinkVec tangency_by_search(const MinkVec& ui, const MinkVec& uj, const MinkVec& uk) {
  const double n = std::sqrt(-2.0 * mink(ui, uj));
  auto point = [&](double t) { return (std::exp(t) * ui + std::exp(-t) * uj) / n; };
  // bisection on the sign of the derivative of t -> <point(t), uk>
  auto rising = [&](double t) { return std::exp(t) * mink(ui, uk) - std::exp(-t) * mink(uj, uk) > 0.0; };
  double a = -40.0, b = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    (rising(m) ? a : b) = m;
  }
  return point(0.5 * (a + b));
}

// Length along h(u) from the crossing with side (u, uj) to the crossing with side (u, uk), using the
// unit-speed parametrization w(s) = p + s e + (s^2 / 2) u of the horocycle through p. Evaluated in
// extended precision.
inline double horocycle_length(const MinkVec& u0, const MinkVec& uj0, const MinkVec& uk0) {
  using V = std::array<long double, 3>;
  auto lift = [](const MinkVec& v) {
    const long double x = v.x, y = v.y;
    return V{x, y, std::sqrt(x * x + y * y)};
  };
  auto dot = [](const V& a, const V& b) { return a[0] * b[0] + a[1] * b[1] - a[2] * b[2]; };
  const V u = lift(u0), uj = lift(uj0), uk = lift(uk0);
  auto crossing = [&](const V& v) {
    // the point of span(u, v) on the hyperboloid with <w, u> = -1
    const long double g = dot(u, v);
    const long double b = -1.0L / g;
    const long double a = -1.0L / (2.0L * b * g);
    return V{a * u[0] + b * v[0], a * u[1] + b * v[1], a * u[2] + b * v[2]};
  };
  const V p = crossing(uj);
  const V q = crossing(uk);
  // e spans the orthogonal complement of {p, u}
  V e{p[1] * u[2] - p[2] * u[1], p[2] * u[0] - p[0] * u[2], -(p[0] * u[1] - p[1] * u[0])};
  const long double n = std::sqrt(dot(e, e));
  return static_cast<double>(std::abs(dot(q, e) / n));
}

// Boundary points at least 0.05 apart and lift scales within a factor 100 of each other.
inline bool well_conditioned(const std::array<MinkVec, 3>& u) {
  double lo = INFINITY, hi = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double d = std::atan2(u[i].y, u[i].x) - std::atan2(u[(i + 1) % 3].y, u[(i + 1) % 3].x);
    if (std::abs(std::remainder(d, 2.0 * std::acos(-1.0))) < 0.05) return false;
    lo = std::min(lo, u[i].z);
    hi = std::max(hi, u[i].z);
  }
  return hi < 100.0 * lo;
}

// The horocycle of (0, 2, 2) at level -1 is the unit-speed curve x -> (x, x^2 + 3/4, x^2 + 5/4).
inline MinkVec sqrt2_horocycle(double x) { return {x, x * x + 0.75, x * x + 1.25}; }

// Klein-model point location: strict interior of the planar triangle abc.
inline bool strictly_inside(const std::array<double, 2>& p, const std::array<std::array<double, 2>, 3>& t,
                            double margin) {
  double sign = 0.0;
  for (int k = 0; k < 3; ++k) {
    const auto& a = t[k];
    const auto& b = t[(k + 1) % 3];
    const double cross = (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]);
    const double len = std::hypot(b[0] - a[0], b[1] - a[1]);
    const double d = cross / len;
    if (std::abs(d) <= margin) return false;
    if (sign == 0.0) sign = d;
    if (d * sign < 0.0) return false;
  }
  return true;
}

}  // namespace oracle
