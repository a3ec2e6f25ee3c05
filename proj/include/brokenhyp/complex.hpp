#pragma once

// Combinatorics of ideal triangulations of a punctured surface.
//
// Conventions used throughout the library:
//   * every face carries slots 0, 1, 2 in counterclockwise order;
//   * slot k is the side opposite corner k, so it runs from corner k+1 to
//     corner k+2 in the counterclockwise boundary direction of its face;
//   * corner k sits between slots k+1 and k+2 (indices mod 3);
//   * gluings always reverse the boundary orientation of the two sides, so
//     the counterclockwise slot order fixes the orientation of the surface.

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "brokenhyp/error.hpp"

namespace brokenhyp {

using FaceId = int;

constexpr int cyc(int k, int by = 1) { return ((k + by) % 3 + 3) % 3; }

struct TriangleEdgePair {
  FaceId face = 0;
  int slot = 0;

  constexpr int index() const { return 3 * face + slot; }
  static constexpr TriangleEdgePair from_index(int i) { return {i / 3, i % 3}; }
  friend constexpr auto operator<=>(const TriangleEdgePair&, const TriangleEdgePair&) = default;
};

struct Sector {
  FaceId face = 0;
  int corner = 0;

  constexpr int index() const { return 3 * face + corner; }
  static constexpr Sector from_index(int i) { return {i / 3, i % 3}; }
  friend constexpr auto operator<=>(const Sector&, const Sector&) = default;
};

using Gluing = std::pair<TriangleEdgePair, TriangleEdgePair>;

struct Edge {
  // side[0] < side[1] lexicographically.
  std::array<TriangleEdgePair, 2> side;
};

// Passage from one sector to the next while rotating counterclockwise about a puncture.
struct Crossing {
  TriangleEdgePair exit;   // side of the current face being crossed
  TriangleEdgePair enter;  // the glued side in the next face
  int edge = -1;
};

struct CornerCycle {
  std::vector<Sector> sectors;
  std::vector<Crossing> crossings;  // crossings[i] leads from sectors[i] to sectors[i + 1 mod n]

  std::size_t size() const { return sectors.size(); }
};

class IdealTriangulation {
 public:
  static IdealTriangulation build(int face_count, std::span<const Gluing> gluing) {
    if (face_count <= 0) throw Error(ErrorKind::InvalidInput, "face count must be positive");
    IdealTriangulation t;
    t.faces_ = face_count;
    const int pairs = 3 * face_count;
    t.partner_.assign(pairs, TriangleEdgePair{-1, -1});

    auto check = [&](const TriangleEdgePair& p) {
      if (p.face < 0 || p.face >= face_count || p.slot < 0 || p.slot > 2)
        throw Error(ErrorKind::InvalidInput, "gluing references (" + std::to_string(p.face) + "," +
                                                 std::to_string(p.slot) + ") outside the complex");
    };
    for (const auto& [a, b] : gluing) {
      check(a);
      check(b);
      if (a == b || t.partner_[a.index()].face >= 0 || t.partner_[b.index()].face >= 0)
        throw Error(ErrorKind::SlotReused, "slot (" + std::to_string(a.face) + "," +
                                               std::to_string(a.slot) + ") or (" +
                                               std::to_string(b.face) + "," +
                                               std::to_string(b.slot) + ") used twice");
      t.partner_[a.index()] = b;
      t.partner_[b.index()] = a;
    }
    for (int i = 0; i < pairs; ++i) {
      if (t.partner_[i].face < 0) {
        const auto p = TriangleEdgePair::from_index(i);
        throw Error(ErrorKind::SlotUnglued, "slot (" + std::to_string(p.face) + "," +
                                                std::to_string(p.slot) + ") is not glued");
      }
    }

    // connectivity over the face adjacency
    std::vector<char> seen(face_count, 0);
    std::queue<int> queue;
    queue.push(0);
    seen[0] = 1;
    while (!queue.empty()) {
      const int f = queue.front();
      queue.pop();
      for (int s = 0; s < 3; ++s) {
        const int g = t.partner_[3 * f + s].face;
        if (!seen[g]) {
          seen[g] = 1;
          queue.push(g);
        }
      }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
      throw Error(ErrorKind::Disconnected, "face adjacency graph is not connected");

    t.edge_of_.assign(pairs, -1);
    for (int i = 0; i < pairs; ++i) {
      if (t.edge_of_[i] >= 0) continue;
      const auto a = TriangleEdgePair::from_index(i);
      const auto b = t.partner_[i];
      t.edge_of_[a.index()] = t.edge_of_[b.index()] = static_cast<int>(t.edges_.size());
      t.edges_.push_back(Edge{{std::min(a, b), std::max(a, b)}});
    }

    t.puncture_of_.assign(pairs, -1);
    for (int i = 0; i < pairs; ++i) {
      if (t.puncture_of_[i] >= 0) continue;
      CornerCycle cycle;
      Sector s = Sector::from_index(i);
      const int id = static_cast<int>(t.cycles_.size());
      do {
        t.puncture_of_[s.index()] = id;
        cycle.sectors.push_back(s);
        const TriangleEdgePair exit{s.face, cyc(s.corner, 1)};
        const TriangleEdgePair enter = t.partner_[exit.index()];
        cycle.crossings.push_back(Crossing{exit, enter, t.edge_of_[exit.index()]});
        s = Sector{enter.face, cyc(enter.slot, 1)};
      } while (s.index() != i);
      t.cycles_.push_back(std::move(cycle));
    }

    const int chi = t.euler_characteristic();
    const int s = t.puncture_count();
    // Orientation-reversing gluing of ccw faces always yields an orientable surface.
    t.genus_ = (2 - chi - s) / 2;
    if (chi >= 0)
      throw Error(ErrorKind::InvalidInput, "surface must have negative Euler characteristic");
    return t;
  }

  int face_count() const { return faces_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int pair_count() const { return 3 * faces_; }
  int sector_count() const { return 3 * faces_; }
  int euler_characteristic() const { return faces_ - edge_count(); }
  int puncture_count() const { return static_cast<int>(cycles_.size()); }
  int genus() const { return genus_; }

  TriangleEdgePair partner(TriangleEdgePair p) const { return partner_.at(p.index()); }
  FaceId neighbor(FaceId f, int slot) const { return partner({f, slot}).face; }
  int edge_of(TriangleEdgePair p) const { return edge_of_.at(p.index()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<CornerCycle>& corner_cycles() const { return cycles_; }
  int puncture_of(Sector s) const { return puncture_of_.at(s.index()); }

  // Sorted list of gluing pairs, each pair ordered (smaller side first).
  std::vector<Gluing> canonical_gluing() const {
    std::vector<Gluing> out;
    out.reserve(edges_.size());
    for (const auto& e : edges_) out.emplace_back(e.side[0], e.side[1]);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  int faces_ = 0;
  int genus_ = 0;
  std::vector<TriangleEdgePair> partner_;
  std::vector<int> edge_of_;
  std::vector<Edge> edges_;
  std::vector<CornerCycle> cycles_;
  std::vector<int> puncture_of_;
};

inline IdealTriangulation build_triangulation(int face_count, std::span<const Gluing> gluing) {
  return IdealTriangulation::build(face_count, gluing);
}

inline const std::vector<CornerCycle>& corner_cycles(const IdealTriangulation& t) {
  return t.corner_cycles();
}

// Same complex with every face read clockwise: slots 1 and 2 swap. Corners follow their slots.
constexpr int mirror_slot(int k) { return k == 0 ? 0 : 3 - k; }

inline IdealTriangulation mirrored(const IdealTriangulation& t) {
  std::vector<Gluing> gluing;
  for (const auto& [a, b] : t.canonical_gluing())
    gluing.emplace_back(TriangleEdgePair{a.face, mirror_slot(a.slot)},
                        TriangleEdgePair{b.face, mirror_slot(b.slot)});
  return IdealTriangulation::build(t.face_count(), gluing);
}

// ---------------------------------------------------------------------------
// Dual freeway and dual graph

// Large edges are indexed like triangle-edge pairs, small edges like sectors; the small
// edge opposite the large edge at slot k is the one cutting corner k.
struct Freeway {
  struct Switch {
    TriangleEdgePair large;
    std::array<Sector, 2> small;
  };

  int large_count = 0;
  int small_count = 0;
  std::vector<Switch> trivalent;                          // 3 per face, index = 3 * face + slot
  std::vector<std::array<TriangleEdgePair, 2>> bivalent;  // one per edge of the triangulation

  // Complementary regions: one trigon inside each face plus one region per puncture.
  int region_count = 0;

  static constexpr Sector opposite_small(TriangleEdgePair large) { return {large.face, large.slot}; }
};

inline Freeway dual_freeway(const IdealTriangulation& t) {
  Freeway fw;
  fw.large_count = t.pair_count();
  fw.small_count = t.sector_count();
  for (int f = 0; f < t.face_count(); ++f)
    for (int k = 0; k < 3; ++k)
      fw.trivalent.push_back({TriangleEdgePair{f, k}, {Sector{f, cyc(k, 1)}, Sector{f, cyc(k, 2)}}});
  for (const auto& e : t.edges()) fw.bivalent.push_back(e.side);
  // closed-surface Euler count: V - E + R = 2 - 2g
  const int vertices = static_cast<int>(fw.trivalent.size() + fw.bivalent.size());
  const int edges = fw.large_count + fw.small_count;
  fw.region_count = 2 - 2 * t.genus() - vertices + edges;
  return fw;
}

struct DualGraph {
  struct DualEdge {
    FaceId face;  // trivalent end
    int bivalent;  // edge of the triangulation
  };
  int trivalent_count = 0;
  int bivalent_count = 0;
  std::vector<DualEdge> edges;  // index = triangle-edge pair index; ccw order at a face is slot order
};

inline DualGraph dual_graph(const IdealTriangulation& t) {
  DualGraph g;
  g.trivalent_count = t.face_count();
  g.bivalent_count = t.edge_count();
  for (int i = 0; i < t.pair_count(); ++i) {
    const auto p = TriangleEdgePair::from_index(i);
    g.edges.push_back({p.face, t.edge_of(p)});
  }
  return g;
}

// ---------------------------------------------------------------------------
// Finite unfolding of the lifted triangulation

struct BallNode {
  int parent = -1;
  int parent_slot = -1;  // slot of the parent face that was crossed
  int entry_slot = -1;   // slot of this face glued to parent_slot
  FaceId face = 0;
  int depth = 0;
};

struct UnfoldedBall {
  FaceId base = 0;
  int depth = 0;
  std::vector<BallNode> nodes;  // breadth-first, parents precede children
};

inline UnfoldedBall unfold_ball(const IdealTriangulation& t, FaceId base, int depth) {
  if (depth < 0) throw Error(ErrorKind::InvalidInput, "depth must be nonnegative");
  if (base < 0 || base >= t.face_count()) throw Error(ErrorKind::InvalidInput, "base face out of range");
  UnfoldedBall ball{base, depth, {}};
  ball.nodes.push_back(BallNode{-1, -1, -1, base, 0});
  for (std::size_t i = 0; i < ball.nodes.size(); ++i) {
    const BallNode node = ball.nodes[i];
    if (node.depth == depth) continue;
    for (int s = 0; s < 3; ++s) {
      if (s == node.entry_slot) continue;
      const auto across = t.partner({node.face, s});
      ball.nodes.push_back(BallNode{static_cast<int>(i), s, across.slot, across.face, node.depth + 1});
    }
  }
  return ball;
}

// ---------------------------------------------------------------------------
// Closed edge-paths in the dual graph

struct DualLoop {
  FaceId start = 0;
  std::vector<int> slots;  // slot crossed out of the current face at each step

  std::size_t length() const { return slots.size(); }
};

// Faces visited by the loop, starting and ending at loop.start; throws OpenPath if not closed.
inline std::vector<FaceId> loop_faces(const IdealTriangulation& t, const DualLoop& loop) {
  if (loop.start < 0 || loop.start >= t.face_count())
    throw Error(ErrorKind::InvalidInput, "loop start face out of range");
  std::vector<FaceId> faces{loop.start};
  for (int s : loop.slots) {
    if (s < 0 || s > 2) throw Error(ErrorKind::InvalidInput, "slot out of range in loop");
    faces.push_back(t.neighbor(faces.back(), s));
  }
  if (faces.back() != loop.start)
    throw Error(ErrorKind::OpenPath, "dual path ends at face " + std::to_string(faces.back()) +
                                         " instead of " + std::to_string(loop.start));
  return faces;
}

inline DualLoop make_dual_loop(const IdealTriangulation& t, FaceId start, std::vector<int> slots) {
  DualLoop loop{start, std::move(slots)};
  loop_faces(t, loop);
  return loop;
}

inline std::vector<DualLoop> dual_loops(const IdealTriangulation& t,
                                        const std::vector<std::pair<FaceId, std::vector<int>>>& explicit_loops) {
  std::vector<DualLoop> out;
  for (const auto& [start, slots] : explicit_loops) out.push_back(make_dual_loop(t, start, slots));
  return out;
}

inline DualLoop reversed(const IdealTriangulation& t, const DualLoop& loop) {
  const auto faces = loop_faces(t, loop);
  DualLoop out{loop.start, {}};
  for (std::size_t i = loop.slots.size(); i-- > 0;)
    out.slots.push_back(t.partner({faces[i], loop.slots[i]}).slot);
  return out;
}

inline DualLoop concatenate(const DualLoop& a, const DualLoop& b) {
  if (a.start != b.start) throw Error(ErrorKind::OpenPath, "loops based at different faces");
  DualLoop out = a;
  out.slots.insert(out.slots.end(), b.slots.begin(), b.slots.end());
  return out;
}

namespace detail {

// Shortest path of slot crossings from `from` to `to` through the face adjacency graph.
inline std::vector<int> face_path(const IdealTriangulation& t, FaceId from, FaceId to) {
  std::vector<int> prev_face(t.face_count(), -1), prev_slot(t.face_count(), -1);
  std::vector<char> seen(t.face_count(), 0);
  std::queue<FaceId> queue;
  queue.push(from);
  seen[from] = 1;
  while (!queue.empty()) {
    const FaceId f = queue.front();
    queue.pop();
    for (int s = 0; s < 3; ++s) {
      const FaceId g = t.neighbor(f, s);
      if (seen[g]) continue;
      seen[g] = 1;
      prev_face[g] = f;
      prev_slot[g] = s;
      queue.push(g);
    }
  }
  std::vector<int> slots;
  for (FaceId f = to; f != from; f = prev_face[f]) slots.push_back(prev_slot[f]);
  std::reverse(slots.begin(), slots.end());
  return slots;
}

}  // namespace detail

// Loop around a puncture following its corner cycle, conjugated into `base` by a tree path.
inline DualLoop puncture_loop(const IdealTriangulation& t, int puncture, FaceId base) {
  const auto& cycle = t.corner_cycles().at(puncture);
  std::size_t first = 0;
  bool local = false;
  for (std::size_t i = 0; i < cycle.size(); ++i)
    if (cycle.sectors[i].face == base) {
      first = i;
      local = true;
      break;
    }
  DualLoop loop{base, {}};
  const FaceId entry = cycle.sectors[first].face;
  std::vector<int> to_entry;
  if (!local) to_entry = detail::face_path(t, base, entry);
  loop.slots = to_entry;
  for (std::size_t i = 0; i < cycle.size(); ++i)
    loop.slots.push_back(cycle.crossings[(first + i) % cycle.size()].exit.slot);
  if (!local) {
    // walk the tree path back from entry to base
    std::vector<FaceId> faces{base};
    for (int s : to_entry) faces.push_back(t.neighbor(faces.back(), s));
    for (std::size_t i = to_entry.size(); i-- > 0;)
      loop.slots.push_back(t.partner({faces[i], to_entry[i]}).slot);
  }
  loop_faces(t, loop);
  return loop;
}

// Free basis of the fundamental group based at `base`: one loop per non-tree edge of a
// breadth-first spanning tree of the face adjacency graph.
inline std::vector<DualLoop> dual_loop_basis(const IdealTriangulation& t, FaceId base) {
  const int n = t.face_count();
  std::vector<int> parent_pair(n, -1);  // pair index in the child through which it was reached
  std::vector<char> seen(n, 0);
  std::vector<char> tree_edge(t.edge_count(), 0);
  std::queue<FaceId> queue;
  queue.push(base);
  seen[base] = 1;
  while (!queue.empty()) {
    const FaceId f = queue.front();
    queue.pop();
    for (int s = 0; s < 3; ++s) {
      const auto across = t.partner({f, s});
      if (seen[across.face]) continue;
      seen[across.face] = 1;
      tree_edge[t.edge_of({f, s})] = 1;
      queue.push(across.face);
    }
  }
  std::vector<DualLoop> basis;
  for (int e = 0; e < t.edge_count(); ++e) {
    if (tree_edge[e]) continue;
    const auto side = t.edges()[e].side[0];
    const auto other = t.edges()[e].side[1];
    DualLoop loop{base, detail::face_path(t, base, side.face)};
    loop.slots.push_back(side.slot);
    const auto back = detail::face_path(t, other.face, base);
    loop.slots.insert(loop.slots.end(), back.begin(), back.end());
    loop_faces(t, loop);
    basis.push_back(std::move(loop));
  }
  return basis;
}

}  // namespace brokenhyp
