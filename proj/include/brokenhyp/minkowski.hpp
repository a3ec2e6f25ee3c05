#pragma once

// Minkowski space R^{2,1} with quadratic form x^2 + y^2 - z^2, the hyperboloid model H and
// the positive light cone L+. A light-cone vector u stands for the horocycle
// h(u) = { w in H : <w, u> = -1 }, so that lambda(h(u), h(v)) = sqrt(-<u, v>).

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "brokenhyp/error.hpp"

namespace brokenhyp {

struct MinkVec {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  MinkVec& operator+=(const MinkVec& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  MinkVec& operator-=(const MinkVec& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  MinkVec& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
  friend MinkVec operator+(MinkVec a, const MinkVec& b) { return a += b; }
  friend MinkVec operator-(MinkVec a, const MinkVec& b) { return a -= b; }
  friend MinkVec operator*(MinkVec a, double s) { return a *= s; }
  friend MinkVec operator*(double s, MinkVec a) { return a *= s; }
  friend MinkVec operator/(MinkVec a, double s) { return a *= 1.0 / s; }
  friend MinkVec operator-(MinkVec a) { return a *= -1.0; }
  friend bool operator==(const MinkVec&, const MinkVec&) = default;
};

inline double inner(const MinkVec& a, const MinkVec& b) { return a.x * b.x + a.y * b.y - a.z * b.z; }

inline double det3(const MinkVec& a, const MinkVec& b, const MinkVec& c) {
  return a.x * (b.y * c.z - b.z * c.y) - a.y * (b.x * c.z - b.z * c.x) + a.z * (b.x * c.y - b.y * c.x);
}

// The vector n with <n, w> = det(a, b, w) for every w.
inline MinkVec lorentz_cross(const MinkVec& a, const MinkVec& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, -(a.x * b.y - a.y * b.x)};
}

inline double euclidean_norm(const MinkVec& a) { return std::sqrt(a.x * a.x + a.y * a.y + a.z * a.z); }

inline bool on_light_cone(const MinkVec& u, double rel_tol = 1e-10) {
  return u.z > 0.0 && std::abs(inner(u, u)) <= rel_tol * u.z * u.z;
}

inline bool on_hyperboloid(const MinkVec& w, double tol = 1e-9) {
  return w.z > 0.0 && std::abs(inner(w, w) + 1.0) <= tol * std::max(1.0, w.z * w.z);
}

// Pull a nearly-null vector back onto L+ by adjusting z.
inline MinkVec renormalize_null(const MinkVec& u) { return {u.x, u.y, std::hypot(u.x, u.y)}; }

// <u, v> for u, v in L+, written as -r r' (1 - cos) = -r r' |xi - xi'|^2 / 2 with r = hypot(x, y)
// and xi the boundary point. Unlike inner() this keeps full relative accuracy for nearby rays.
inline double null_inner(const MinkVec& u, const MinkVec& v) {
  const double r = std::hypot(u.x, u.y), s = std::hypot(v.x, v.y);
  if (!(r > 0.0) || !(s > 0.0)) return 0.0;
  const double dx = u.x / r - v.x / s, dy = u.y / r - v.y / s;
  return -0.5 * r * s * (dx * dx + dy * dy);
}

inline double lambda_pair(const MinkVec& u, const MinkVec& v) {
  const double g = null_inner(u, v);
  if (!(g < 0.0)) throw Error(ErrorKind::DegeneratePair, "light-cone points lie on a common ray");
  return std::sqrt(-g);
}

// Decorated ideal triangle: u[k] is the light-cone lift of corner k. The lambda-length
// between u[i] and u[j] belongs to the side opposite k.
struct TriangleLift {
  std::array<MinkVec, 3> u;

  double lambda(int k) const { return lambda_pair(u[(k + 1) % 3], u[(k + 2) % 3]); }
  double orientation() const { return det3(u[0], u[1], u[2]); }
};

// Unique points on the given rays realizing the prescribed lambda-lengths, where
// lambdas[k] is the lambda-length between the points on rays i and j, {i, j, k} = {0, 1, 2}.
inline TriangleLift solve_triangle(const std::array<MinkVec, 3>& rays, const std::array<double, 3>& lambdas) {
  for (const auto& r : rays)
    if (!on_light_cone(r, 1e-9)) throw Error(ErrorKind::DegenerateRays, "ray generator is not in L+");
  for (double l : lambdas)
    if (!(l > 0.0) || !std::isfinite(l)) throw Error(ErrorKind::InvalidInput, "lambda-lengths must be positive");
  const double scale = euclidean_norm(rays[0]) * euclidean_norm(rays[1]) * euclidean_norm(rays[2]);
  if (std::abs(det3(rays[0], rays[1], rays[2])) <= 1e-12 * scale)
    throw Error(ErrorKind::DegenerateRays, "rays are linearly dependent");
  // t_i t_j = m_k with m_k = lambda_k^2 / -<r_i, r_j>
  std::array<double, 3> m{};
  for (int k = 0; k < 3; ++k) {
    const double g = null_inner(rays[(k + 1) % 3], rays[(k + 2) % 3]);
    if (!(g < 0.0)) throw Error(ErrorKind::DegenerateRays, "rays are collinear");
    m[k] = lambdas[k] * lambdas[k] / -g;
  }
  TriangleLift lift;
  for (int i = 0; i < 3; ++i) {
    const double t = std::sqrt(m[(i + 1) % 3] * m[(i + 2) % 3] / m[i]);
    lift.u[i] = renormalize_null(rays[i] * t);
  }
  return lift;
}

enum class Side { Positive, Negative };

// Which side of the plane span(u, v) the point w lies on, read from sign det(u, v, w).
inline Side side_of(const MinkVec& u, const MinkVec& v, const MinkVec& w) {
  return det3(u, v, w) > 0.0 ? Side::Positive : Side::Negative;
}

inline Side opposite(Side s) { return s == Side::Positive ? Side::Negative : Side::Positive; }

// The point z in L+ with <z, u> = -lambda_u^2 and <z, v> = -lambda_v^2 on the requested side.
// Solved in boundary angles: with chord c(t) = 2|sin(t/2)| the conditions fix the ratio of the
// chords from z to u and to v, which leaves one candidate on each side of span(u, v). For u, v on
// distinct rays both candidates always exist, so there is no real-solution failure.
inline MinkVec extend_across(const MinkVec& u, const MinkVec& v, double lambda_u, double lambda_v, Side side) {
  if (!(lambda_u > 0.0) || !(lambda_v > 0.0))
    throw Error(ErrorKind::InvalidInput, "lambda-lengths must be positive");
  const double ru = std::hypot(u.x, u.y), rv = std::hypot(v.x, v.y);
  if (!(null_inner(u, v) < 0.0)) throw Error(ErrorKind::DegeneratePair, "points lie on a common ray");
  const double a = std::atan2(u.y, u.x);
  const double d = 0.5 * std::remainder(std::atan2(v.y, v.x) - a, 2.0 * std::numbers::pi);
  const double k = std::sqrt(lambda_u * lambda_u * rv / (lambda_v * lambda_v * ru));
  for (double sign : {1.0, -1.0}) {
    // sin(t/2) = sign k sin(t/2 - d)
    double half = std::atan2(-sign * k * std::sin(d), 1.0 - sign * k * std::cos(d));
    if (half > 0.5 * std::numbers::pi) half -= std::numbers::pi;
    if (half <= -0.5 * std::numbers::pi) half += std::numbers::pi;
    const bool positive = std::sin(d) * std::sin(half - d) * std::sin(half) > 0.0;
    if (positive != (side == Side::Positive)) continue;
    const double s = std::sin(half);
    const double r = lambda_u * lambda_u / (2.0 * ru * s * s);
    const double t = a + 2.0 * half;
    return {r * std::cos(t), r * std::sin(t), r};
  }
  throw Error(ErrorKind::DegeneratePair, "points lie on a common ray");
}

// Point where the horocycle h(u) meets the geodesic with ideal ends u and v.
inline MinkVec horocycle_crossing(const MinkVec& u, const MinkVec& v) {
  const double l2 = -null_inner(u, v);
  return 0.5 * u + v / l2;
}

// Signed arclength along the geodesic with ideal ends u, v, increasing toward v and vanishing
// where the two horocycles h(u) and h(v) are equidistant. x must lie on that geodesic.
inline double geodesic_coordinate(const MinkVec& x, const MinkVec& u, const MinkVec& v) {
  return 0.5 * std::log(inner(x, u) / inner(x, v));
}

// Foot of the perpendicular from the ideal point uk onto the geodesic between ui and uj, i.e. the
// point of that geodesic maximizing <x, uk>.
inline MinkVec tangency_point(const MinkVec& ui, const MinkVec& uj, const MinkVec& uk) {
  const double gij = null_inner(ui, uj);
  const double gik = null_inner(ui, uk);
  const double gjk = null_inner(uj, uk);
  if (!(gij < 0.0) || !(gik < 0.0) || !(gjk < 0.0))
    throw Error(ErrorKind::DegeneratePair, "ideal points must be distinct");
  // x = a ui + b uj with 2ab(-gij) = 1; maximize a gik + b gjk
  const double c = 1.0 / (-2.0 * gij);
  const double a = std::sqrt(c * gjk / gik);
  const double b = std::sqrt(c * gik / gjk);
  return a * ui + b * uj;
}

// Busemann level of x relative to the horocycle family centred at u (zero on h(u)).
inline double busemann(const MinkVec& x, const MinkVec& u) { return std::log(-inner(x, u)); }

struct HorocycleArc {
  double arc = 0.0;    // hyperbolic length of h(u_i) between the two sides at corner i
  double alpha = 0.0;  // lambda_i / (lambda_j lambda_k)
};

inline HorocycleArc horocycle_arc(const TriangleLift& lift, int i) {
  const MinkVec& ui = lift.u[i];
  const MinkVec& uj = lift.u[(i + 1) % 3];
  const MinkVec& uk = lift.u[(i + 2) % 3];
  // Along a horocycle the chord between two of its points is spacelike with Minkowski norm equal
  // to the arclength. For the crossings u/2 + uj/lj and u/2 + uk/lk the u terms cancel, leaving
  // the chord uj/lj - uk/lk.
  const double lj = -null_inner(ui, uj), lk = -null_inner(ui, uk);
  HorocycleArc out;
  out.arc = std::sqrt(std::max(0.0, -2.0 * null_inner(uj, uk) / (lj * lk)));
  out.alpha = lift.lambda(i) / (lift.lambda((i + 1) % 3) * lift.lambda((i + 2) % 3));
  return out;
}

// Poincare-disk image. Hyperboloid points map inside the disk; light-cone rays to the circle.
inline std::array<double, 2> project_poincare(const MinkVec& p) {
  if (!(p.z > 0.0)) throw Error(ErrorKind::InvalidInput, "point must have z > 0");
  const double q = inner(p, p);
  if (std::abs(q) <= 1e-10 * p.z * p.z) {
    const double r = std::hypot(p.x, p.y);
    return {p.x / r, p.y / r};
  }
  if (!(q < 0.0)) throw Error(ErrorKind::InvalidInput, "spacelike vector has no disk image");
  const MinkVec w = p / std::sqrt(-q);
  return {w.x / (1.0 + w.z), w.y / (1.0 + w.z)};
}

inline std::array<double, 2> project_klein(const MinkVec& p) { return {p.x / p.z, p.y / p.z}; }

}  // namespace brokenhyp
