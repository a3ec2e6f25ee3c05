#pragma once

// Broken measures on the freeway dual to an ideal triangulation.

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "brokenhyp/complex.hpp"
#include "brokenhyp/error.hpp"

namespace brokenhyp {

// Weights on the large freeway edges, one per triangle-edge pair. The small weights are derived
// from the large ones through the corner equations and are never stored.
class BrokenMeasure {
 public:
  BrokenMeasure(std::shared_ptr<const IdealTriangulation> base, std::vector<double> large)
      : base_(std::move(base)), large_(std::move(large)) {
    if (!base_) throw Error(ErrorKind::InvalidInput, "missing triangulation");
    if (static_cast<int>(large_.size()) != base_->pair_count())
      throw Error(ErrorKind::InvalidInput, "need one weight per large freeway edge");
    for (double w : large_)
      if (!std::isfinite(w)) throw Error(ErrorKind::InvalidInput, "weights must be finite");
  }

  static BrokenMeasure zero(std::shared_ptr<const IdealTriangulation> base) {
    const int n = base->pair_count();
    return BrokenMeasure(std::move(base), std::vector<double>(n, 0.0));
  }

  const IdealTriangulation& triangulation() const { return *base_; }
  const std::shared_ptr<const IdealTriangulation>& base() const { return base_; }

  double large(TriangleEdgePair p) const { return large_.at(p.index()); }
  std::span<const double> large_weights() const { return large_; }

  // w(small at corner k) = (w_{k+1} + w_{k+2} - w_k) / 2, unchecked
  double small(Sector s) const {
    const int k = s.corner;
    return 0.5 * (large({s.face, cyc(k, 1)}) + large({s.face, cyc(k, 2)}) - large({s.face, k}));
  }
  std::vector<double> small_weights() const {
    std::vector<double> out(large_.size());
    for (int i = 0; i < static_cast<int>(out.size()); ++i) out[i] = small(Sector::from_index(i));
    return out;
  }

 private:
  std::shared_ptr<const IdealTriangulation> base_;
  std::vector<double> large_;
};

inline std::array<double, 3> small_weights(const BrokenMeasure& m, FaceId face) {
  std::array<double, 3> out{};
  const double scale = std::max({1.0, std::abs(m.large({face, 0})), std::abs(m.large({face, 1})),
                                 std::abs(m.large({face, 2}))});
  for (int k = 0; k < 3; ++k) {
    out[k] = m.small({face, k});
    if (out[k] < -kZeroSlack * scale)
      throw Error(ErrorKind::TriangleInequalityViolated,
                  "face " + std::to_string(face) + " large weights violate a triangle inequality");
  }
  return out;
}

// Large weights rebuilt from small weights through the switch condition w(a) = w(beta) + w(gamma).
inline std::vector<double> large_from_small(const IdealTriangulation& t, std::span<const double> small) {
  std::vector<double> out(t.pair_count());
  for (int f = 0; f < t.face_count(); ++f)
    for (int k = 0; k < 3; ++k)
      out[3 * f + k] = small[3 * f + cyc(k, 1)] + small[3 * f + cyc(k, 2)];
  return out;
}

struct MeasureFaceCheck {
  FaceId face = 0;
  std::array<double, 3> large{};
  std::array<double, 3> small{};
  double switch_residual = 0.0;  // max |w(beta) + w(gamma) - w(a)|
  bool nonnegative = true;
  bool ok = true;
};

struct MeasureReport {
  bool valid = true;
  std::vector<MeasureFaceCheck> faces;
  std::vector<FaceId> offending_faces;
};

inline MeasureReport validate_measure(const BrokenMeasure& m) {
  MeasureReport report;
  const auto& t = m.triangulation();
  for (int f = 0; f < t.face_count(); ++f) {
    MeasureFaceCheck fc;
    fc.face = f;
    double scale = 1.0;
    for (int k = 0; k < 3; ++k) {
      fc.large[k] = m.large({f, k});
      fc.small[k] = m.small({f, k});
      scale = std::max(scale, std::abs(fc.large[k]));
    }
    for (int k = 0; k < 3; ++k) {
      fc.switch_residual =
          std::max(fc.switch_residual, std::abs(fc.small[cyc(k, 1)] + fc.small[cyc(k, 2)] - fc.large[k]));
      if (fc.large[k] < -kZeroSlack * scale || fc.small[k] < -kZeroSlack * scale) fc.nonnegative = false;
    }
    fc.ok = fc.nonnegative && fc.switch_residual <= kZeroSlack * scale;
    if (!fc.ok) {
      report.valid = false;
      report.offending_faces.push_back(f);
    }
    report.faces.push_back(fc);
  }
  return report;
}

// Ratio w(t', e) / w(t, e) from p's face to the other side.
inline double homothety_factor(const BrokenMeasure& m, TriangleEdgePair p) {
  const double w = m.large(p);
  const double w_other = m.large(m.triangulation().partner(p));
  if (w <= kZeroSlack || w_other <= kZeroSlack)
    throw Error(ErrorKind::DegenerateEdge, "zero weight on edge " + std::to_string(m.triangulation().edge_of(p)));
  return w_other / w;
}

inline BrokenMeasure scale(const BrokenMeasure& m, double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorKind::InvalidInput, "scale factor must be positive");
  std::vector<double> w(m.large_weights().begin(), m.large_weights().end());
  for (double& x : w) x *= r;
  return BrokenMeasure(m.base(), std::move(w));
}

// Signed measure, in p's face, between the two singular-leaf hit points on the edge of p, with
// the other side's position rescaled by w(t,e)/w(t',e). Same orientation rule as the hyperbolic
// shift: positive in the counterclockwise boundary direction of p's face.
inline double shift_foliation(const BrokenMeasure& m, TriangleEdgePair p) {
  const auto q = m.triangulation().partner(p);
  const double w = m.large(p);
  const double w_other = m.large(q);
  if (w <= kZeroSlack || w_other <= kZeroSlack)
    throw Error(ErrorKind::DegenerateEdge, "zero weight on edge " + std::to_string(m.triangulation().edge_of(p)));
  // hit point from side p sits at the small weight of the corner where the edge starts
  const double own = m.small({p.face, cyc(p.slot, 1)});
  // the other face starts the edge at our far corner
  const double other_from_far = m.small({q.face, cyc(q.slot, 1)});
  const double foreign = (w_other - other_from_far) * w / w_other;
  return foreign - own;
}

struct LoopVector {
  std::vector<double> large;
  std::vector<double> small;
};

// Weights carried by one closed leaf around a puncture.
inline LoopVector puncture_loop_vector(const IdealTriangulation& t, int puncture) {
  LoopVector v{std::vector<double>(t.pair_count(), 0.0), std::vector<double>(t.sector_count(), 0.0)};
  const auto& cycle = t.corner_cycles().at(puncture);
  for (const auto& s : cycle.sectors) v.small[s.index()] += 1.0;
  for (const auto& x : cycle.crossings) {
    v.large[x.exit.index()] += 1.0;
    v.large[x.enter.index()] += 1.0;
  }
  return v;
}

struct CollarSplit {
  BrokenMeasure core;
  std::vector<double> collars;  // one width per puncture
};

// Remove the widest annulus of closed leaves around each puncture.
inline CollarSplit split_collars(const BrokenMeasure& m) {
  const auto& t = m.triangulation();
  std::vector<double> large(m.large_weights().begin(), m.large_weights().end());
  std::vector<double> collars;
  for (int p = 0; p < t.puncture_count(); ++p) {
    double c = INFINITY;
    for (const auto& s : t.corner_cycles()[p].sectors) c = std::min(c, m.small(s));
    c = std::max(c, 0.0);
    collars.push_back(c);
    const auto v = puncture_loop_vector(t, p);
    for (int i = 0; i < t.pair_count(); ++i) large[i] -= c * v.large[i];
  }
  return CollarSplit{BrokenMeasure(m.base(), std::move(large)), std::move(collars)};
}

// Product of homothety factors along the crossings of a dual loop.
inline double holonomy_hom(const BrokenMeasure& m, const DualLoop& loop) {
  const auto faces = loop_faces(m.triangulation(), loop);
  double log_phi = 0.0;
  for (std::size_t i = 0; i < loop.slots.size(); ++i)
    log_phi += std::log(homothety_factor(m, {faces[i], loop.slots[i]}));
  return std::exp(log_phi);
}

}  // namespace brokenhyp
