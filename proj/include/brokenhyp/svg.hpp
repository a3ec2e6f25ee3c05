#pragma once

// Poincare-disk rendering of developed balls.

#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "brokenhyp/develop.hpp"
#include "brokenhyp/minkowski.hpp"

namespace brokenhyp::svg {

using Point = std::array<double, 2>;

// Geodesic between two boundary points: a circle orthogonal to the unit circle, or a diameter.
struct GeodesicArc {
  Point from{};
  Point to{};
  bool straight = false;
  Point center{};
  double radius = 0.0;
  bool sweep = false;

  // | |c|^2 - r^2 - 1 |, zero when the arc meets the boundary at right angles
  double orthogonality_residual() const {
    if (straight) return 0.0;
    return std::abs(center[0] * center[0] + center[1] * center[1] - radius * radius - 1.0);
  }
};

inline GeodesicArc geodesic_arc(const Point& p, const Point& q) {
  GeodesicArc arc{p, q};
  const double c = p[0] * q[0] + p[1] * q[1];
  const double cross = p[0] * q[1] - p[1] * q[0];
  if (1.0 + c < 1e-12 || std::abs(cross) < 1e-12) {
    arc.straight = true;
    return arc;
  }
  arc.center = {(p[0] + q[0]) / (1.0 + c), (p[1] + q[1]) / (1.0 + c)};
  arc.radius = std::sqrt((1.0 - c) / (1.0 + c));
  // the arc bends away from the centre of the disk
  arc.sweep = cross < 0.0;
  return arc;
}

struct Horocycle {
  Point tangency{};
  Point center{};
  double radius = 0.0;
};

// Disk image of h(u) = { w : <w, u> = -1 }.
inline Horocycle horocycle_circle(const MinkVec& u) {
  const double r = std::hypot(u.x, u.y);
  const Point xi{u.x / r, u.y / r};
  // the horocycle crosses the ray toward xi at hyperbolic distance log(u.z) from the origin
  const double rho = std::tanh(0.5 * std::log(u.z));
  return {xi, {0.5 * (1.0 + rho) * xi[0], 0.5 * (1.0 + rho) * xi[1]}, 0.5 * (1.0 - rho)};
}

namespace detail {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace detail

struct RenderOptions {
  bool horocycles = true;
  double stroke = 0.004;
};

inline std::string render(const DevelopedBall& ball, const RenderOptions& opt = {}) {
  using detail::num;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.05 -1.05 2.1 2.1\" width=\"800\" height=\"800\">\n";
  out << "<g transform=\"scale(1,-1)\" fill=\"none\" stroke-width=\"" << num(opt.stroke) << "\">\n";
  out << "<circle class=\"boundary\" cx=\"0\" cy=\"0\" r=\"1\" stroke=\"black\"/>\n";
  std::vector<Horocycle> drawn;
  for (const auto& tri : ball.triangles) {
    std::array<Point, 3> ideal;
    for (int k = 0; k < 3; ++k) ideal[k] = project_poincare(tri.lift.u[k]);
    for (int s = 0; s < 3; ++s) {
      if (s == tri.node.entry_slot) continue;  // already drawn by the parent
      const auto arc = geodesic_arc(ideal[cyc(s, 1)], ideal[cyc(s, 2)]);
      out << "<path class=\"edge\" stroke=\"#1f4e9c\" d=\"M " << num(arc.from[0]) << " " << num(arc.from[1]);
      if (arc.straight) {
        out << " L " << num(arc.to[0]) << " " << num(arc.to[1]) << "\"";
      } else {
        out << " A " << num(arc.radius) << " " << num(arc.radius) << " 0 0 " << (arc.sweep ? 1 : 0) << " "
            << num(arc.to[0]) << " " << num(arc.to[1]) << "\" data-cx=\"" << num(arc.center[0]) << "\" data-cy=\""
            << num(arc.center[1]) << "\"";
      }
      out << " data-face=\"" << tri.node.face << "\"/>\n";
    }
    if (!opt.horocycles) continue;
    for (int k = 0; k < 3; ++k) {
      const auto h = horocycle_circle(tri.lift.u[k] / tri.scale);
      bool seen = false;
      for (const auto& d : drawn)
        if (std::abs(d.center[0] - h.center[0]) + std::abs(d.center[1] - h.center[1]) +
                std::abs(d.radius - h.radius) < 1e-9)
          seen = true;
      if (seen) continue;
      drawn.push_back(h);
      out << "<circle class=\"horocycle\" stroke=\"#c0392b\" cx=\"" << num(h.center[0]) << "\" cy=\""
          << num(h.center[1]) << "\" r=\"" << num(h.radius) << "\"/>\n";
    }
  }
  out << "</g>\n</svg>\n";
  return out.str();
}

}  // namespace brokenhyp::svg
