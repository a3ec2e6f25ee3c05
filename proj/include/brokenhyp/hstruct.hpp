#pragma once

// Lambda-length chart for decorated broken hyperbolic structures.
//
// A structure assigns to each triangle-edge pair (t, e) the lambda-length
// lambda = sqrt(2 exp(delta)), where delta >= 0 is the distance along e, in the metric of t,
// between the two decoration horocycles crossing e. Coordinates are stored as log(lambda) so
// that rays running off to infinity stay representable.

#include <array>
#include <cmath>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "brokenhyp/complex.hpp"
#include "brokenhyp/error.hpp"
#include "brokenhyp/minkowski.hpp"

namespace brokenhyp {

inline const double kLogTwo = std::numbers::ln2;
inline const double kLogSqrtTwo = 0.5 * std::numbers::ln2;

class DecoratedBrokenHyperbolic {
 public:
  DecoratedBrokenHyperbolic(std::shared_ptr<const IdealTriangulation> base, std::vector<double> log_lambda)
      : base_(std::move(base)), log_lambda_(std::move(log_lambda)) {
    if (!base_) throw Error(ErrorKind::InvalidInput, "missing triangulation");
    if (static_cast<int>(log_lambda_.size()) != base_->pair_count())
      throw Error(ErrorKind::InvalidInput, "need one lambda-length per triangle-edge pair");
    for (double l : log_lambda_)
      if (!std::isfinite(l)) throw Error(ErrorKind::InvalidInput, "lambda-lengths must be finite and positive");
    lambda_.reserve(log_lambda_.size());
    for (double l : log_lambda_) lambda_.push_back(std::exp(l));
  }

  static DecoratedBrokenHyperbolic from_lambda(std::shared_ptr<const IdealTriangulation> base,
                                               std::span<const double> lambda) {
    std::vector<double> logs;
    logs.reserve(lambda.size());
    for (double l : lambda) {
      if (!(l > 0.0) || !std::isfinite(l))
        throw Error(ErrorKind::InvalidInput, "lambda-lengths must be finite and positive");
      logs.push_back(std::log(l));
    }
    DecoratedBrokenHyperbolic h(std::move(base), std::move(logs));
    // keep the given values so that lambda() reproduces them bit for bit
    h.lambda_.assign(lambda.begin(), lambda.end());
    return h;
  }

  const IdealTriangulation& triangulation() const { return *base_; }
  const std::shared_ptr<const IdealTriangulation>& base() const { return base_; }

  double log_lambda(TriangleEdgePair p) const { return log_lambda_.at(p.index()); }
  double lambda(TriangleEdgePair p) const { return lambda_.at(p.index()); }
  std::span<const double> log_lambdas() const { return log_lambda_; }
  std::span<const double> lambdas() const { return lambda_; }
  std::array<double, 3> face_lambdas(FaceId f) const {
    return {lambda({f, 0}), lambda({f, 1}), lambda({f, 2})};
  }

 private:
  std::shared_ptr<const IdealTriangulation> base_;
  std::vector<double> log_lambda_;
  std::vector<double> lambda_;
};

inline double delta(const DecoratedBrokenHyperbolic& h, TriangleEdgePair p) {
  const double d = 2.0 * h.log_lambda(p) - kLogTwo;
  if (d < -kZeroSlack)
    throw Error(ErrorKind::InvalidDecoration, "lambda-length below sqrt(2) on pair (" + std::to_string(p.face) +
                                                  "," + std::to_string(p.slot) + "): horocycles overlap");
  return d < 0.0 ? 0.0 : d;
}

inline double lambda_from_delta(double d) { return std::sqrt(2.0 * std::exp(d)); }

// Homothety factor across the edge of p, from p's face to the other face: delta' / delta.
inline double sigma(const DecoratedBrokenHyperbolic& h, TriangleEdgePair p) {
  const double d = delta(h, p);
  const double d_other = delta(h, h.triangulation().partner(p));
  if (d <= kZeroSlack || d_other <= kZeroSlack)
    throw Error(ErrorKind::DegenerateEdge, "tangent decoration horocycles pin no homothety on edge " +
                                               std::to_string(h.triangulation().edge_of(p)));
  return d_other / d;
}

// Lambda-ratio scaling factor lambda' / lambda across the edge of p.
inline double sigma_lambda(const DecoratedBrokenHyperbolic& h, TriangleEdgePair p) {
  return std::exp(h.log_lambda(h.triangulation().partner(p)) - h.log_lambda(p));
}

enum class Convention { Measure, Lambda };

inline double puncture_holonomy(const DecoratedBrokenHyperbolic& h, const CornerCycle& cycle, Convention c) {
  double log_product = 0.0;
  for (const auto& x : cycle.crossings)
    log_product += std::log(c == Convention::Measure ? sigma(h, x.exit) : sigma_lambda(h, x.exit));
  return std::exp(log_product);
}

// Combinatorial h-length lambda_k / (lambda_{k+1} lambda_{k+2}) of the sector at corner k.
inline double h_length(const DecoratedBrokenHyperbolic& h, Sector s) {
  const int k = s.corner;
  return std::exp(h.log_lambda({s.face, k}) - h.log_lambda({s.face, cyc(k, 1)}) -
                  h.log_lambda({s.face, cyc(k, 2)}));
}

// Rays of the standard ideal triangle used to place single faces and the developing base.
inline std::array<MinkVec, 3> standard_rays() { return {MinkVec{-1, 0, 1}, MinkVec{1, 0, 1}, MinkVec{0, 1, 1}}; }

inline TriangleLift lift_face(const DecoratedBrokenHyperbolic& h, FaceId f) {
  return solve_triangle(standard_rays(), h.face_lambdas(f));
}

// Hyperbolic length of the decoration horocycle inside the sector, measured on a hyperboloid lift.
inline double geometric_arc(const DecoratedBrokenHyperbolic& h, Sector s) {
  return horocycle_arc(lift_face(h, s.face), s.corner).arc;
}

// alpha beta - gamma delta for the h-lengths at the two ends of an edge, one product per side.
inline double coupling_residual(const DecoratedBrokenHyperbolic& h, int edge) {
  const auto& e = h.triangulation().edges().at(edge);
  auto product = [&](TriangleEdgePair p) {
    return h_length(h, {p.face, cyc(p.slot, 1)}) * h_length(h, {p.face, cyc(p.slot, 2)});
  };
  return product(e.side[0]) - product(e.side[1]);
}

namespace detail {

// Positions on the side p of its own face, in that face's metric, along the boundary
// direction from corner slot+1 (A) to corner slot+2 (B), origin at the crossing of A's horocycle.
struct SideGeometry {
  double delta = 0.0;    // crossing of B's horocycle
  double foot = 0.0;     // foot of the perpendicular from the opposite corner
};

inline SideGeometry side_geometry(const DecoratedBrokenHyperbolic& h, TriangleEdgePair p) {
  const TriangleLift lift = lift_face(h, p.face);
  const MinkVec& a = lift.u[cyc(p.slot, 1)];
  const MinkVec& b = lift.u[cyc(p.slot, 2)];
  const MinkVec& c = lift.u[p.slot];
  const double xa = geodesic_coordinate(horocycle_crossing(a, b), a, b);
  const double xb = geodesic_coordinate(horocycle_crossing(b, a), a, b);
  const double xt = geodesic_coordinate(tangency_point(a, b, c), a, b);
  return {xb - xa, xt - xa};
}

}  // namespace detail

// Signed distance, in the metric of p's face, from p's distinguished point on the edge to the
// distinguished point of the other face, carried across by the homothety that matches the two
// decoration crossings. Positive in the counterclockwise boundary direction of p's face.
inline double shift_hyperbolic(const DecoratedBrokenHyperbolic& h, TriangleEdgePair p) {
  const auto q = h.triangulation().partner(p);
  const auto own = detail::side_geometry(h, p);
  const auto other = detail::side_geometry(h, q);
  if (own.delta <= kZeroSlack || other.delta <= kZeroSlack)
    throw Error(ErrorKind::DegenerateEdge, "tangent decoration horocycles pin no gluing on edge " +
                                               std::to_string(h.triangulation().edge_of(p)));
  // The other face runs the edge from our B to our A.
  const double foreign = own.delta * (other.delta - other.foot) / other.delta;
  return foreign - own.foot;
}

// ---------------------------------------------------------------------------
// Validity diagnostics

struct FaceCheck {
  FaceId face = 0;
  double residual = 0.0;  // min_k log(lambda_{k+1} lambda_{k+2} / (sqrt2 lambda_k))
  bool ok = true;
};

struct PunctureCheck {
  int puncture = 0;
  bool degenerate = false;  // crosses a tangent decoration, homothety undetermined
  double holonomy = 1.0;    // measure convention
  double lambda_holonomy = 1.0;
  bool ok = true;
};

struct HyperbolicReport {
  bool valid = true;
  bool degenerate_decoration = false;
  std::vector<FaceCheck> faces;
  std::vector<int> negative_delta_pairs;
  std::vector<int> mismatched_edges;  // delta zero on one side only
  std::vector<PunctureCheck> punctures;
};

inline HyperbolicReport validate(const DecoratedBrokenHyperbolic& h, double rel_tol = 1e-9) {
  const auto& t = h.triangulation();
  HyperbolicReport report;
  for (int f = 0; f < t.face_count(); ++f) {
    FaceCheck fc{f, 0.0, true};
    double worst = INFINITY;
    for (int k = 0; k < 3; ++k)
      worst = std::min(worst, h.log_lambda({f, cyc(k, 1)}) + h.log_lambda({f, cyc(k, 2)}) -
                                  kLogSqrtTwo - h.log_lambda({f, k}));
    fc.residual = worst;
    fc.ok = worst >= -kZeroSlack;
    report.valid = report.valid && fc.ok;
    report.faces.push_back(fc);
  }
  std::vector<double> deltas(t.pair_count(), 0.0);
  for (int i = 0; i < t.pair_count(); ++i) {
    deltas[i] = 2.0 * h.log_lambdas()[i] - kLogTwo;
    if (deltas[i] < -kZeroSlack) {
      report.negative_delta_pairs.push_back(i);
      report.valid = false;
    }
    if (std::abs(deltas[i]) <= kZeroSlack) report.degenerate_decoration = true;
  }
  for (int e = 0; e < t.edge_count(); ++e) {
    const auto& side = t.edges()[e].side;
    const bool z0 = std::abs(deltas[side[0].index()]) <= kZeroSlack;
    const bool z1 = std::abs(deltas[side[1].index()]) <= kZeroSlack;
    if (z0 != z1) {
      report.mismatched_edges.push_back(e);
      report.valid = false;
    }
  }
  if (!report.negative_delta_pairs.empty()) return report;
  for (int p = 0; p < t.puncture_count(); ++p) {
    const auto& cycle = t.corner_cycles()[p];
    PunctureCheck pc;
    pc.puncture = p;
    pc.lambda_holonomy = puncture_holonomy(h, cycle, Convention::Lambda);
    for (const auto& x : cycle.crossings)
      if (deltas[x.exit.index()] <= kZeroSlack || deltas[x.enter.index()] <= kZeroSlack) pc.degenerate = true;
    if (!pc.degenerate) {
      pc.holonomy = puncture_holonomy(h, cycle, Convention::Measure);
      pc.ok = std::abs(std::log(pc.holonomy)) <= rel_tol;
    }
    report.valid = report.valid && pc.ok;
    report.punctures.push_back(pc);
  }
  return report;
}

// Assign each edge's lambda-length to both of its sides (an ordinary decorated structure).
inline DecoratedBrokenHyperbolic embed_unbroken(std::shared_ptr<const IdealTriangulation> base,
                                                std::span<const double> edge_lambda) {
  if (static_cast<int>(edge_lambda.size()) != base->edge_count())
    throw Error(ErrorKind::InvalidInput, "need one lambda-length per edge");
  std::vector<double> per_pair(base->pair_count());
  for (int i = 0; i < base->pair_count(); ++i)
    per_pair[i] = edge_lambda[base->edge_of(TriangleEdgePair::from_index(i))];
  auto h = DecoratedBrokenHyperbolic::from_lambda(base, per_pair);
  const auto report = validate(h);
  for (const auto& fc : report.faces)
    if (!fc.ok)
      throw Error(ErrorKind::InvalidDecoration,
                  "face " + std::to_string(fc.face) + " violates lambda_j lambda_k >= sqrt2 lambda_i");
  if (!report.negative_delta_pairs.empty())
    throw Error(ErrorKind::InvalidDecoration, "lambda-length below sqrt(2)");
  return h;
}

// Same structure on the mirrored complex (orientation reversed).
inline DecoratedBrokenHyperbolic mirrored(const DecoratedBrokenHyperbolic& h) {
  auto base = std::make_shared<const IdealTriangulation>(mirrored(h.triangulation()));
  std::vector<double> logs(h.log_lambdas().size());
  for (int i = 0; i < static_cast<int>(logs.size()); ++i) {
    const auto p = TriangleEdgePair::from_index(i);
    logs[TriangleEdgePair{p.face, mirror_slot(p.slot)}.index()] = h.log_lambdas()[i];
  }
  return DecoratedBrokenHyperbolic(std::move(base), std::move(logs));
}

}  // namespace brokenhyp
