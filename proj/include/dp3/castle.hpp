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

#ifndef DP3_CASTLE_HPP
#define DP3_CASTLE_HPP

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <vector>

#include "dp3/contour.hpp"

namespace dp3 {

/// Aztec Castle: the subgraph of the tiling cut out by a contour, with the
/// per-side color deletions applied. `trimmed` castles have had all dangling
/// edges removed together with their endpoint pairs (the forced pairs are
/// retained for bookkeeping since they are in every perfect matching).
class Castle {
 public:
  Vec3 point;
  Contour contour;
  bool trimmed = false;

  std::vector<Pt> verts;                    // sorted
  std::vector<std::pair<int, int>> edges;   // vertex indices, u < v
  std::vector<std::vector<int>> incident;   // vertex -> edge ids
  std::vector<std::pair<Pt, Pt>> forced;    // (black, white) pairs cut by trim
  std::vector<FaceId> bare_faces;           // in-contour faces with no edges
  bool infeasible = false;                  // a vertex lost all edges in trim

  int vertex_index(const Pt& p) const {
    auto it = std::lower_bound(verts.begin(), verts.end(), p);
    if (it == verts.end() || !(*it == p)) return -1;
    return static_cast<int>(it - verts.begin());
  }

  const Pt& vert(int i) const { return verts[static_cast<size_t>(i)]; }

  int black_count() const {
    int n = 0;
    for (const Pt& v : verts) n += is_black(v);
    return n;
  }
  int white_count() const { return static_cast<int>(verts.size()) - black_count(); }

  /// Faces together with the ids of their edges present in this graph.
  const std::map<FaceId, std::vector<int>>& faces() const { return faces_; }

  // Dense face views, rebuilt together with faces().
  const std::vector<FaceId>& face_list() const { return face_list_; }
  int face_label(int fi) const { return face_label_[static_cast<size_t>(fi)]; }
  const std::vector<int>& face_edges(int fi) const {
    return face_edges_[static_cast<size_t>(fi)];
  }
  const std::array<int, 2>& edge_faces(int e) const {
    return edge_faces_[static_cast<size_t>(e)];
  }
  /// +1 when the named face lies left of the edge walked black to white.
  int edge_face_side(int e, int fi) const {
    return edge_faces_[static_cast<size_t>(e)][0] == fi
               ? edge_face_sides_[static_cast<size_t>(e)][0]
               : edge_face_sides_[static_cast<size_t>(e)][1];
  }
  int face_index(const FaceId& f) const {
    auto it = std::lower_bound(face_list_.begin(), face_list_.end(), f);
    if (it == face_list_.end() || !(*it == f)) return -1;
    return static_cast<int>(it - face_list_.begin());
  }
  /// Black endpoint first.
  std::pair<Pt, Pt> edge_bw(int e) const {
    Pt a = vert(edges[static_cast<size_t>(e)].first);
    Pt b = vert(edges[static_cast<size_t>(e)].second);
    return is_black(a) ? std::make_pair(a, b) : std::make_pair(b, a);
  }

  bool face_is_interior(const FaceId& f) const {
    auto it = faces_.find(f);
    return it != faces_.end() && it->second.size() == 4;
  }

  std::pair<std::vector<FaceId>, std::vector<FaceId>> face_partition() const {
    std::pair<std::vector<FaceId>, std::vector<FaceId>> out;
    for (const auto& [f, es] : faces_) {
      (es.size() == 4 ? out.first : out.second).push_back(f);
    }
    return out;
  }

  void rebuild_indices() {
    incident.assign(verts.size(), {});
    faces_.clear();
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
      incident[static_cast<size_t>(edges[static_cast<size_t>(e)].first)].push_back(e);
      incident[static_cast<size_t>(edges[static_cast<size_t>(e)].second)].push_back(e);
      auto fs = Tiling::faces_of_edge(vert(edges[static_cast<size_t>(e)].first),
                                      vert(edges[static_cast<size_t>(e)].second));
      faces_[fs[0]].push_back(e);
      faces_[fs[1]].push_back(e);
    }
    face_list_.clear();
    for (const auto& [f, es] : faces_) face_list_.push_back(f);
    face_label_.resize(face_list_.size());
    face_edges_.assign(face_list_.size(), {});
    for (size_t fi = 0; fi < face_list_.size(); ++fi) {
      face_label_[fi] = Tiling::label(face_list_[fi]);
      face_edges_[fi] = faces_.at(face_list_[fi]);
    }
    edge_faces_.assign(edges.size(), {});
    edge_face_sides_.assign(edges.size(), {});
    for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
      auto [black, white] = edge_bw(e);
      auto fs = Tiling::faces_of_edge(black, white);
      Pt dir = white - black;
      Pt mid2 = black + white;
      for (int t = 0; t < 2; ++t) {
        int fi = face_index(fs[static_cast<size_t>(t)]);
        Pt c4 = Tiling::face_center4(fs[static_cast<size_t>(t)]);
        Pt rel{c4.p - 2 * mid2.p, c4.q - 2 * mid2.q};
        edge_faces_[static_cast<size_t>(e)][static_cast<size_t>(t)] = fi;
        edge_face_sides_[static_cast<size_t>(e)][static_cast<size_t>(t)] =
            cross(dir, rel) > 0 ? 1 : -1;
      }
    }
  }

 private:
  std::map<FaceId, std::vector<int>> faces_;
  std::vector<FaceId> face_list_;
  std::vector<int> face_label_;
  std::vector<std::vector<int>> face_edges_;
  std::vector<std::array<int, 2>> edge_faces_;
  std::vector<std::array<int, 2>> edge_face_sides_;
};

/// Steps 3 and 4: clip the tiling to the contour, apply per-side color
/// deletions and the zero-length-side corner rule, keep dangling edges.
inline Castle build_castle(int i, int j, int k) {
  Castle c;
  c.point = {i, j, k};
  c.contour = Contour::at(i, j, k);
  if (c.contour.is_self_intersecting())
    throw self_intersecting("castle contour self-intersects");

  int lop = c.contour.corner[0].p, hip = lop, loq = c.contour.corner[0].q,
      hiq = loq;
  for (const Pt& p : c.contour.polygon()) {
    lop = std::min(lop, p.p);
    hip = std::max(hip, p.p);
    loq = std::min(loq, p.q);
    hiq = std::max(hiq, p.q);
  }

  std::set<Pt> kept;
  for (int p = lop; p <= hip; ++p)
    for (int q = loq; q <= hiq; ++q) {
      Pt pt{p, q};
      if (vertex_kind(pt) == VertexKind::none) continue;
      if (c.contour.contains(pt)) kept.insert(pt);
    }

  // side deletions
  for (int s = 0; s < 6; ++s) {
    if (c.contour.sides[s] == 0) {
      // zero side: its corner vertex survives only between two positive sides
      int prev = c.contour.sides[(s + 5) % 6];
      int next = c.contour.sides[(s + 1) % 6];
      if (!(prev > 0 && next > 0)) kept.erase(c.contour.corner[s]);
      continue;
    }
    const Pt& a = c.contour.corner[s];
    const Pt& b = c.contour.corner[s + 1];
    bool positive = c.contour.sides[s] > 0;
    for (auto it = kept.begin(); it != kept.end();) {
      if (geom::on_segment(a, b, *it) && (positive ? is_black(*it) : is_white(*it)))
        it = kept.erase(it);
      else
        ++it;
    }
  }

  c.verts.assign(kept.begin(), kept.end());
  std::vector<Pt> poly2;
  for (const Pt& p : c.contour.polygon()) poly2.push_back(p * 2);
  for (int u = 0; u < static_cast<int>(c.verts.size()); ++u) {
    for (const Pt& n : Tiling::neighbors(c.vert(u))) {
      int v = c.vertex_index(n);
      if (v <= u) continue;
      // An edge between kept vertices still must not leave the region.
      Pt mid = c.vert(u) + n;
      if (!c.contour.boundary_contains2(mid) &&
          !geom::strictly_inside(poly2, mid))
        continue;
      c.edges.emplace_back(u, v);
    }
  }
  c.rebuild_indices();

  // Faces wholly inside the contour that own no castle edge at all. For the
  // degenerate castles near the initial points these carry the whole weight
  // (castle reduced to faces); elsewhere the list is empty.
  for (int p = lop - 6; p <= hip + 6; ++p)
    for (int q = loq - 6; q <= hiq + 6; ++q) {
      if (mod6(p) != 0 || mod6(q) != 0) continue;
      for (int s = 0; s < 6; ++s) {
        FaceId f{Pt{p, q}, s};
        if (c.faces().count(f)) continue;
        auto corners = Tiling::face_corners(f);
        bool inside = true;
        for (const Pt& pt : corners)
          if (!c.contour.contains(pt)) {
            inside = false;
            break;
          }
        if (inside) c.bare_faces.push_back(f);
      }
    }
  return c;
}

/// Step 5: iteratively delete dangling edges together with both endpoints
/// (such an edge is forced into every perfect matching), then all faces left
/// without edges. Idempotent.
inline Castle trim_dangling(const Castle& input) {
  std::vector<char> alive(input.verts.size(), 1);
  std::vector<char> edge_alive(input.edges.size(), 1);
  std::vector<int> degree(input.verts.size(), 0);
  for (size_t v = 0; v < input.verts.size(); ++v)
    degree[v] = static_cast<int>(input.incident[v].size());

  Castle out;
  out.point = input.point;
  out.contour = input.contour;
  out.trimmed = true;
  out.forced = input.forced;
  out.bare_faces = input.bare_faces;
  out.infeasible = input.infeasible;

  std::deque<int> queue;
  for (size_t v = 0; v < input.verts.size(); ++v) {
    if (degree[v] == 1) queue.push_back(static_cast<int>(v));
    if (degree[v] == 0) out.infeasible = true;
  }
  auto remove_edge = [&](int e) {
    if (!edge_alive[static_cast<size_t>(e)]) return;
    edge_alive[static_cast<size_t>(e)] = 0;
    for (int v : {input.edges[static_cast<size_t>(e)].first,
                  input.edges[static_cast<size_t>(e)].second}) {
      if (!alive[static_cast<size_t>(v)]) continue;
      if (--degree[static_cast<size_t>(v)] == 1) queue.push_back(v);
      if (degree[static_cast<size_t>(v)] == 0 && alive[static_cast<size_t>(v)])
        queue.push_back(v);
    }
  };
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    if (!alive[static_cast<size_t>(v)]) continue;
    if (degree[static_cast<size_t>(v)] == 0) {
      // stranded vertex: no perfect matching exists
      out.infeasible = true;
      alive[static_cast<size_t>(v)] = 0;
      continue;
    }
    if (degree[static_cast<size_t>(v)] != 1) continue;
    int the_edge = -1;
    for (int e : input.incident[static_cast<size_t>(v)])
      if (edge_alive[static_cast<size_t>(e)]) the_edge = e;
    int u = input.edges[static_cast<size_t>(the_edge)].first == v
                ? input.edges[static_cast<size_t>(the_edge)].second
                : input.edges[static_cast<size_t>(the_edge)].first;
    Pt pv = input.vert(v), pu = input.vert(u);
    out.forced.emplace_back(is_black(pv) ? pv : pu, is_black(pv) ? pu : pv);
    alive[static_cast<size_t>(v)] = 0;
    alive[static_cast<size_t>(u)] = 0;
    for (int e : input.incident[static_cast<size_t>(v)]) remove_edge(e);
    for (int e : input.incident[static_cast<size_t>(u)]) remove_edge(e);
  }

  std::vector<int> remap(input.verts.size(), -1);
  for (size_t v = 0; v < input.verts.size(); ++v)
    if (alive[v]) {
      remap[v] = static_cast<int>(out.verts.size());
      out.verts.push_back(input.verts[v]);
    }
  for (size_t e = 0; e < input.edges.size(); ++e)
    if (edge_alive[e])
      out.edges.emplace_back(remap[static_cast<size_t>(input.edges[e].first)],
                             remap[static_cast<size_t>(input.edges[e].second)]);
  out.rebuild_indices();
  return out;
}

}  // namespace dp3

#endif  // DP3_CASTLE_HPP
