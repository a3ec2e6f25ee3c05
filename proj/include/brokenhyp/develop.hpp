#pragma once

// Developing maps of decorated broken hyperbolic structures into the hyperboloid.
//
// Crossing the side k of a developed face into the next face (side k'), the child's accumulated
// scale is lambda_dev / lambda(child, k') where lambda_dev is the lambda-length already realized by
// the two shared light-cone points. The third point is then placed with extend_across
// using the child's other two lambda-lengths multiplied by that scale, on the side of the shared
// plane away from the parent's apex. Shared points are reused, never recomputed.

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <vector>

#include "brokenhyp/complex.hpp"
#include "brokenhyp/error.hpp"
#include "brokenhyp/hstruct.hpp"
#include "brokenhyp/minkowski.hpp"

namespace brokenhyp {

struct DevelopedTriangle {
  BallNode node;
  TriangleLift lift;   // lift.u[k] is the developed corner k of node.face
  double scale = 1.0;  // developed lambda = scale * own lambda on every side
};

struct DevelopedBall {
  UnfoldedBall ball;
  std::vector<DevelopedTriangle> triangles;  // parallel to ball.nodes
};

inline TriangleLift default_normalization(const DecoratedBrokenHyperbolic& h, FaceId base) {
  return lift_face(h, base);
}

namespace detail {

inline double scale_of(const DecoratedBrokenHyperbolic& h, FaceId f, const TriangleLift& lift) {
  return lift.lambda(0) / h.lambda({f, 0});
}

struct Step {
  FaceId face;
  TriangleLift lift;
  double scale;
};

// Develop across `slot` of the face carried by `lift`.
inline Step cross(const DecoratedBrokenHyperbolic& h, FaceId face, const TriangleLift& lift, int slot) {
  const auto& t = h.triangulation();
  const auto across = t.partner({face, slot});
  const int k = across.slot;
  // orientation reversal: child corner k+1 is parent corner slot+2, child corner k+2 is parent slot+1
  const MinkVec& a = lift.u[cyc(slot, 2)];
  const MinkVec& b = lift.u[cyc(slot, 1)];
  const MinkVec& apex = lift.u[slot];
  const double lambda_dev = lambda_pair(a, b);
  const double s = std::exp(std::log(lambda_dev) - h.log_lambda(across));
  // child corner k meets corner k+1 along side k+2 and corner k+2 along side k+1
  const double lambda_a = s * h.lambda({across.face, cyc(k, 2)});
  const double lambda_b = s * h.lambda({across.face, cyc(k, 1)});
  const MinkVec z = extend_across(a, b, lambda_a, lambda_b, opposite(side_of(a, b, apex)));
  Step out{across.face, {}, s};
  out.lift.u[k] = z;
  out.lift.u[cyc(k, 1)] = a;
  out.lift.u[cyc(k, 2)] = b;
  return out;
}

inline Eigen::Matrix3d as_columns(const TriangleLift& lift) {
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i) m.col(i) << lift.u[i].x, lift.u[i].y, lift.u[i].z;
  return m;
}

}  // namespace detail

inline DevelopedBall develop(const DecoratedBrokenHyperbolic& h, FaceId base, int depth,
                             const std::optional<TriangleLift>& normalization = std::nullopt) {
  DevelopedBall out{unfold_ball(h.triangulation(), base, depth), {}};
  const TriangleLift root = normalization ? *normalization : default_normalization(h, base);
  out.triangles.reserve(out.ball.nodes.size());
  out.triangles.push_back({out.ball.nodes[0], root, detail::scale_of(h, base, root)});
  for (std::size_t i = 1; i < out.ball.nodes.size(); ++i) {
    const BallNode& node = out.ball.nodes[i];
    const DevelopedTriangle& parent = out.triangles[node.parent];
    const auto step = detail::cross(h, parent.node.face, parent.lift, node.parent_slot);
    out.triangles.push_back({node, step.lift, step.scale});
  }
  return out;
}

// Holonomy of the developing map along a dual loop: the linear map taking the initial lift of the
// base face to its final lift, and the ratio of accumulated scales.
struct PathHolonomy {
  double scale = 1.0;
  Eigen::Matrix3d linear = Eigen::Matrix3d::Identity();

  // max |M^T J M - scale^2 J| / scale^2 with J = diag(1, 1, -1)
  double lorentz_residual() const {
    const Eigen::Matrix3d j = Eigen::Vector3d(1.0, 1.0, -1.0).asDiagonal();
    return (linear.transpose() * j * linear - scale * scale * j).cwiseAbs().maxCoeff() / (scale * scale);
  }
};

struct LoopDevelopment {
  std::vector<DevelopedTriangle> path;  // lifts along the loop, first = base
  PathHolonomy holonomy;
};

inline LoopDevelopment develop_loop(const DecoratedBrokenHyperbolic& h, const DualLoop& loop,
                                    const std::optional<TriangleLift>& normalization = std::nullopt) {
  const auto faces = loop_faces(h.triangulation(), loop);
  const TriangleLift root = normalization ? *normalization : default_normalization(h, loop.start);
  LoopDevelopment out;
  out.path.push_back({BallNode{-1, -1, -1, loop.start, 0}, root, detail::scale_of(h, loop.start, root)});
  for (std::size_t i = 0; i < loop.slots.size(); ++i) {
    const auto& cur = out.path.back();
    const auto step = detail::cross(h, faces[i], cur.lift, loop.slots[i]);
    const BallNode node{static_cast<int>(i), loop.slots[i], h.triangulation().partner({faces[i], loop.slots[i]}).slot,
                        step.face, static_cast<int>(i) + 1};
    out.path.push_back({node, step.lift, step.scale});
  }
  const auto& first = out.path.front();
  const auto& last = out.path.back();
  out.holonomy.scale = last.scale / first.scale;
  out.holonomy.linear = detail::as_columns(last.lift) * detail::as_columns(first.lift).inverse();
  return out;
}

inline PathHolonomy path_holonomy(const DecoratedBrokenHyperbolic& h, const DualLoop& loop,
                                  const std::optional<TriangleLift>& normalization = std::nullopt) {
  return develop_loop(h, loop, normalization).holonomy;
}

// Develop once around the corner cycle of a puncture (reached from `base` by a tree path) and
// compare the Busemann levels, at the shared ideal point, of the decoration horocycle in the first
// and last lift of the starting face. Zero means the decoration leaf closes up.
inline double cusp_closure_residual(const DecoratedBrokenHyperbolic& h, int puncture, FaceId base) {
  const auto& t = h.triangulation();
  const auto& cycle = t.corner_cycles().at(puncture);
  const Sector start = cycle.sectors.front();
  DualLoop loop{base, detail::face_path(t, base, start.face)};
  const std::size_t prefix = loop.slots.size();
  for (const auto& x : cycle.crossings) loop.slots.push_back(x.exit.slot);
  // develop the open path base -> start -> around the cycle; closure back to base is not needed
  const auto faces_prefix = [&] {
    std::vector<FaceId> f{base};
    for (std::size_t i = 0; i < loop.slots.size(); ++i) f.push_back(t.neighbor(f.back(), loop.slots[i]));
    return f;
  }();
  TriangleLift lift = default_normalization(h, base);
  double scale = detail::scale_of(h, base, lift);
  TriangleLift first_lift = lift;
  double first_scale = scale;
  for (std::size_t i = 0; i < loop.slots.size(); ++i) {
    if (i == prefix) {
      first_lift = lift;
      first_scale = scale;
    }
    const auto step = detail::cross(h, faces_prefix[i], lift, loop.slots[i]);
    lift = step.lift;
    scale = step.scale;
  }
  if (prefix == loop.slots.size()) {
    first_lift = lift;
    first_scale = scale;
  }
  const int k = start.corner;
  const MinkVec& ideal = first_lift.u[k];
  // level of the face's own decoration horocycle h(u / scale), read at its crossing with side k+2
  auto level = [&](const TriangleLift& l, double s) {
    const MinkVec centre = l.u[k] / s;
    const MinkVec x = horocycle_crossing(centre, l.u[cyc(k, 1)] / s);
    return busemann(x, ideal);
  };
  return std::abs(level(lift, scale) - level(first_lift, first_scale));
}

// Candidate deck transformations: for every non-root node carrying the base face, the map taking
// the root lift to that node's lift.
inline std::vector<PathHolonomy> deck_candidates(const DevelopedBall& ball) {
  std::vector<PathHolonomy> out;
  const auto& root = ball.triangles.front();
  const Eigen::Matrix3d root_inv = detail::as_columns(root.lift).inverse();
  for (std::size_t i = 1; i < ball.triangles.size(); ++i) {
    const auto& tri = ball.triangles[i];
    if (tri.node.face != root.node.face) continue;
    out.push_back({tri.scale / root.scale, detail::as_columns(tri.lift) * root_inv});
  }
  return out;
}

}  // namespace brokenhyp
