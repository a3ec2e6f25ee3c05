#pragma once

// Standard triangulations and seeded random structures and measures on them.

#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "brokenhyp/complex.hpp"
#include "brokenhyp/fstruct.hpp"
#include "brokenhyp/hstruct.hpp"

namespace brokenhyp {

// Once-punctured torus: two faces, slot k of face 0 glued to slot k of face 1 reversed in
// orientation, which is the cyclic-offset pattern once slots are read counterclockwise.
inline std::shared_ptr<const IdealTriangulation> torus_triangulation() {
  const std::vector<Gluing> g{{{0, 0}, {1, 0}}, {{0, 1}, {1, 1}}, {{0, 2}, {1, 2}}};
  return std::make_shared<const IdealTriangulation>(IdealTriangulation::build(2, g));
}

// Thrice-punctured sphere: two faces glued along their matching sides.
inline std::shared_ptr<const IdealTriangulation> sphere_triangulation() {
  const std::vector<Gluing> g{{{0, 0}, {1, 0}}, {{0, 1}, {1, 2}}, {{0, 2}, {1, 1}}};
  return std::make_shared<const IdealTriangulation>(IdealTriangulation::build(2, g));
}

using Rng = std::mt19937_64;

namespace detail {

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

// Per-pair weights with per-face triangle inequalities, from positive small weights.
inline std::vector<double> random_face_weights(const IdealTriangulation& t, Rng& rng, double lo, double hi) {
  std::vector<double> small(t.sector_count());
  for (double& s : small) s = uniform(rng, lo, hi);
  return large_from_small(t, small);
}

// Per-edge weights satisfying every face's triangle inequalities, by rejection.
inline std::vector<double> random_edge_weights(const IdealTriangulation& t, Rng& rng, double lo, double hi) {
  for (;;) {
    std::vector<double> w(t.edge_count());
    for (double& x : w) x = uniform(rng, lo, hi);
    bool ok = true;
    for (int f = 0; f < t.face_count() && ok; ++f)
      for (int k = 0; k < 3 && ok; ++k) {
        const double a = w[t.edge_of({f, k})];
        const double b = w[t.edge_of({f, cyc(k, 1)})];
        const double c = w[t.edge_of({f, cyc(k, 2)})];
        ok = b + c - a >= 0.05 * (lo + hi);
      }
    if (ok) return w;
  }
}

inline DecoratedBrokenHyperbolic from_deltas(std::shared_ptr<const IdealTriangulation> base,
                                             const std::vector<double>& deltas) {
  std::vector<double> logs(deltas.size());
  for (std::size_t i = 0; i < deltas.size(); ++i) logs[i] = 0.5 * (kLogTwo + deltas[i]);
  return DecoratedBrokenHyperbolic(std::move(base), std::move(logs));
}

}  // namespace detail

// Unbroken structure with per-edge delta in [lo, hi] and per-face inequalities satisfied.
inline DecoratedBrokenHyperbolic random_unbroken_structure(std::shared_ptr<const IdealTriangulation> base, Rng& rng,
                                                           double lo = 0.2, double hi = 3.0) {
  const auto edge = detail::random_edge_weights(*base, rng, lo, hi);
  std::vector<double> deltas(base->pair_count());
  for (int i = 0; i < base->pair_count(); ++i) deltas[i] = edge[base->edge_of(TriangleEdgePair::from_index(i))];
  return detail::from_deltas(std::move(base), deltas);
}

// Valid broken structure. With one puncture the cusp condition is automatic and every face is
// sampled independently; otherwise the deltas are an unbroken assignment rescaled face by face,
// which keeps every puncture holonomy trivial.
inline DecoratedBrokenHyperbolic random_structure(std::shared_ptr<const IdealTriangulation> base, Rng& rng) {
  if (base->puncture_count() == 1) return detail::from_deltas(base, detail::random_face_weights(*base, rng, 0.1, 1.5));
  const auto edge = detail::random_edge_weights(*base, rng, 0.2, 3.0);
  std::vector<double> factor(base->face_count());
  for (double& c : factor) c = std::exp(detail::uniform(rng, -0.7, 0.7));
  std::vector<double> deltas(base->pair_count());
  for (int i = 0; i < base->pair_count(); ++i) {
    const auto p = TriangleEdgePair::from_index(i);
    deltas[i] = factor[p.face] * edge[base->edge_of(p)];
  }
  return detail::from_deltas(std::move(base), deltas);
}

// Valid measure with strictly positive small weights in [lo, hi].
inline BrokenMeasure random_measure(std::shared_ptr<const IdealTriangulation> base, Rng& rng, double lo = 0.0,
                                    double hi = 2.0) {
  auto w = detail::random_face_weights(*base, rng, lo, hi);
  return BrokenMeasure(std::move(base), std::move(w));
}

// Same weight on every pair.
inline DecoratedBrokenHyperbolic constant_structure(std::shared_ptr<const IdealTriangulation> base, double lambda) {
  std::vector<double> l(base->pair_count(), lambda);
  return DecoratedBrokenHyperbolic::from_lambda(std::move(base), l);
}

}  // namespace brokenhyp
