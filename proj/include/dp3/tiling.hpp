// Copyright 2026 the dp3castles authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DP3_TILING_HPP
#define DP3_TILING_HPP

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dp3/quiver.hpp"

namespace dp3 {

struct not_on_lattice : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Plane points are integer pairs (p,q) in units of 1/6 of the triangular
// basis A = (1,0), B = (1/2, sqrt(3)/2). All geometric predicates reduce to
// integer arithmetic in these coordinates; the basis is orientation
// preserving, so cross-product signs agree with the drawn plane.
struct Pt {
  int p = 0, q = 0;
  auto operator<=>(const Pt&) const = default;
  Pt operator+(const Pt& o) const { return {p + o.p, q + o.q}; }
  Pt operator-(const Pt& o) const { return {p - o.p, q - o.q}; }
  Pt operator*(int k) const { return {p * k, q * k}; }
};

inline long long cross(const Pt& a, const Pt& b) {
  return static_cast<long long>(a.p) * b.q - static_cast<long long>(a.q) * b.p;
}

inline int mod6(int v) { return ((v % 6) + 6) % 6; }

enum class VertexKind { none, hub, black, pitch_up, pitch_down };

inline VertexKind vertex_kind(const Pt& v) {
  int p = mod6(v.p), q = mod6(v.q);
  if (p == 0 && q == 0) return VertexKind::hub;          // white, degree 6
  if ((p == 3 && q == 0) || (p == 0 && q == 3) || (p == 3 && q == 3))
    return VertexKind::black;                            // black, degree 4
  if (p == 2 && q == 2) return VertexKind::pitch_up;     // white, degree 3
  if (p == 4 && q == 4) return VertexKind::pitch_down;   // white, degree 3
  return VertexKind::none;
}

inline bool is_vertex(const Pt& v) { return vertex_kind(v) != VertexKind::none; }
inline bool is_white(const Pt& v) {
  auto k = vertex_kind(v);
  return k == VertexKind::hub || k == VertexKind::pitch_up ||
         k == VertexKind::pitch_down;
}
inline bool is_black(const Pt& v) { return vertex_kind(v) == VertexKind::black; }

/// A face of the tiling: the kite in sector `sector` (0..5, counterclockwise
/// from the +A spoke) of the flower centered at hub `flower`.
struct FaceId {
  Pt flower;
  int sector = 0;
  auto operator<=>(const FaceId&) const = default;
};

/// The dP3 brane tiling. Doubly periodic with translation lattice spanned by
/// A=(6,0) and B=(0,6); the fundamental domain holds one hub, one up-pitch,
/// one down-pitch white vertex, three black vertices, twelve edges and six
/// quadrilateral faces labeled 1..6. Hub-to-black edges are "long", black-to-
/// pitch edges are "short"; a contour unit is two collinear long edges.
class Tiling {
 public:
  // Spoke directions in counterclockwise order: A, B, B-A, -A, -B, A-B.
  static constexpr std::array<Pt, 6> spoke = {
      Pt{6, 0}, Pt{0, 6}, Pt{-6, 6}, Pt{-6, 0}, Pt{0, -6}, Pt{6, -6}};
  // Face labels around every flower, counterclockwise from sector (A,B).
  static constexpr std::array<int, 6> sector_label = {1, 3, 5, 2, 4, 6};

  static int label(const FaceId& f) {
    return sector_label[static_cast<size_t>(f.sector)];
  }

  /// Corners of a kite in counterclockwise order: hub, black on spoke s,
  /// pitch at the triangle centroid, black on spoke s+1.
  static std::array<Pt, 4> face_corners(const FaceId& f) {
    const Pt& d1 = spoke[static_cast<size_t>(f.sector)];
    const Pt& d2 = spoke[static_cast<size_t>((f.sector + 1) % 6)];
    Pt hub = f.flower;
    Pt b1{hub.p + d1.p / 2, hub.q + d1.q / 2};
    Pt b2{hub.p + d2.p / 2, hub.q + d2.q / 2};
    Pt pitch{hub.p + (d1.p + d2.p) / 3, hub.q + (d1.q + d2.q) / 3};
    return {hub, b1, pitch, b2};
  }

  /// Face center scaled by 4 (sum of the corners), exact.
  static Pt face_center4(const FaceId& f) {
    auto c = face_corners(f);
    return {c[0].p + c[1].p + c[2].p + c[3].p, c[0].q + c[1].q + c[2].q + c[3].q};
  }

  static bool is_edge(const Pt& u, const Pt& v) {
    auto ku = vertex_kind(u), kv = vertex_kind(v);
    if (ku == VertexKind::none || kv == VertexKind::none) return false;
    if (ku != VertexKind::black && kv != VertexKind::black) return false;
    const Pt& b = ku == VertexKind::black ? u : v;
    const Pt& w = ku == VertexKind::black ? v : u;
    for (const Pt& n : neighbors(b))
      if (n == w) return true;
    return false;
  }

  /// Neighbors of any vertex, counterclockwise.
  static std::vector<Pt> neighbors(const Pt& v) {
    switch (vertex_kind(v)) {
      case VertexKind::hub: {
        std::vector<Pt> out;
        for (const Pt& d : spoke) out.push_back({v.p + d.p / 2, v.q + d.q / 2});
        return out;
      }
      case VertexKind::pitch_up:
        return {{v.p + 1, v.q - 2}, {v.p + 1, v.q + 1}, {v.p - 2, v.q + 1}};
      case VertexKind::pitch_down:
        return {{v.p + 2, v.q - 1}, {v.p - 1, v.q + 2}, {v.p - 1, v.q - 1}};
      case VertexKind::black: {
        // two collinear long edges to hubs, two short edges to pitches
        Pt a = axis(v);
        std::vector<Pt> out = {{v.p + a.p, v.q + a.q}, {v.p - a.p, v.q - a.q}};
        for (const Pt& d :
             {Pt{1, 1}, Pt{1, -2}, Pt{-2, 1}, Pt{-1, -1}, Pt{-1, 2}, Pt{2, -1}}) {
          Pt w{v.p + d.p, v.q + d.q};
          auto k = vertex_kind(w);
          if (k == VertexKind::pitch_up || k == VertexKind::pitch_down)
            out.push_back(w);
        }
        return out;
      }
      default:
        throw not_on_lattice("no vertex at the queried point");
    }
  }

  /// Direction (times 3) of the two long edges through a black vertex.
  static Pt axis(const Pt& b) {
    int p = mod6(b.p), q = mod6(b.q);
    if (p == 3 && q == 0) return {3, 0};
    if (p == 0 && q == 3) return {0, 3};
    return {3, -3};  // (3,3) class sits between hubs w and w+(B-A)
  }

  static bool edge_is_long(const Pt& u, const Pt& v) {
    return vertex_kind(u) == VertexKind::hub || vertex_kind(v) == VertexKind::hub;
  }

  /// The two faces sharing the edge {u,v}.
  static std::array<FaceId, 2> faces_of_edge(const Pt& u, const Pt& v) {
    std::array<FaceId, 2> out;
    int found = 0;
    for (const FaceId& f : faces_at(u)) {
      auto c = face_corners(f);
      for (int i = 0; i < 4 && found < 2; ++i) {
        if ((c[i] == u && c[(i + 1) % 4] == v) ||
            (c[i] == v && c[(i + 1) % 4] == u)) {
          if (found == 0 || !(out[0] == f)) out[found++] = f;
        }
      }
    }
    if (found != 2) throw not_on_lattice("queried segment is not a tiling edge");
    return out;
  }

  /// All faces incident to a vertex.
  static std::vector<FaceId> faces_at(const Pt& v) {
    std::vector<FaceId> out;
    auto push_if_corner = [&](const FaceId& f) {
      auto c = face_corners(f);
      for (const Pt& p : c)
        if (p == v) {
          out.push_back(f);
          return;
        }
    };
    switch (vertex_kind(v)) {
      case VertexKind::hub:
        for (int s = 0; s < 6; ++s) out.push_back({v, s});
        break;
      case VertexKind::pitch_up:
      case VertexKind::pitch_down:
      case VertexKind::black: {
        // scan the flowers in a small neighborhood
        int fp = v.p - mod6(v.p), fq = v.q - mod6(v.q);
        for (int dp = -6; dp <= 6; dp += 6)
          for (int dq = -6; dq <= 6; dq += 6)
            for (int s = 0; s < 6; ++s)
              push_if_corner({Pt{fp + dp, fq + dq}, s});
        break;
      }
      default:
        throw not_on_lattice("no vertex at the queried point");
    }
    return out;
  }

  /// The face-adjacency quiver of the fundamental domain: one vertex per
  /// label, one arrow per edge class, oriented so that walking the edge from
  /// its white endpoint to its black endpoint puts the source face on the
  /// right. This is the transcription firewall against the quiver constant.
  static Quiver dual_quiver() {
    Quiver q;
    q.n_mutable = 6;
    Pt hub{0, 0};
    // the 12 edge classes: 6 long edges at the hub, 6 short edges around the
    // two pitches of the fundamental domain
    std::vector<std::pair<Pt, Pt>> edges;
    for (const Pt& d : spoke)
      edges.push_back({hub, Pt{d.p / 2, d.q / 2}});
    for (const Pt& w : {Pt{2, 2}, Pt{4, 4}})
      for (const Pt& b : neighbors(w)) edges.push_back({w, b});
    for (auto& [w, b] : edges) {
      // white w, black b by construction
      auto fs = faces_of_edge(w, b);
      Pt dir = b - w;
      Pt mid2 = w + b;  // midpoint * 2
      auto side = [&](const FaceId& f) {
        Pt c4 = face_center4(f);
        // cross(dir, center - mid), scaled by 4
        Pt rel{c4.p - 2 * mid2.p, c4.q - 2 * mid2.q};
        return cross(dir, rel);
      };
      const FaceId& f0 = fs[0];
      const FaceId& f1 = fs[1];
      bool f0_right = side(f0) < 0;
      int src = label(f0_right ? f0 : f1);
      int dst = label(f0_right ? f1 : f0);
      q.add(src, dst);
    }
    return q;
  }
};

/// Result of resolving a lattice coordinate: the containing face, the
/// coincident vertex, or a contour-start hub (which is both a vertex and
/// the center of a hexagonal flower).
struct Location {
  enum Kind { vertex, hub_center, face } kind;
  std::optional<Pt> vertex_at;
  std::optional<FaceId> face_at;
};

inline Location locate(const Pt& pos) {
  VertexKind k = vertex_kind(pos);
  if (k == VertexKind::hub) return {Location::hub_center, pos, std::nullopt};
  if (k != VertexKind::none) return {Location::vertex, pos, std::nullopt};
  // interior of a kite? test the kites of the nearby flowers
  int fp = pos.p - mod6(pos.p), fq = pos.q - mod6(pos.q);
  for (int dp = -6; dp <= 6; dp += 6)
    for (int dq = -6; dq <= 6; dq += 6)
      for (int s = 0; s < 6; ++s) {
        FaceId f{Pt{fp + dp, fq + dq}, s};
        auto c = Tiling::face_corners(f);
        bool inside = true;
        for (int i = 0; i < 4; ++i) {
          if (cross(c[(i + 1) % 4] - c[i], pos - c[i]) <= 0) {
            inside = false;
            break;
          }
        }
        if (inside) return {Location::face, std::nullopt, f};
      }
  throw not_on_lattice("point is on a face boundary but not a vertex");
}

}  // namespace dp3

#endif  // DP3_TILING_HPP
