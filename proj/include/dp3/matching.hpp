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

#ifndef DP3_MATCHING_HPP
#define DP3_MATCHING_HPP

#include <cstdlib>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dp3/castle.hpp"
#include "dp3/laurent.hpp"

namespace dp3 {

struct not_twistable : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct too_large : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Edge set of a perfect matching of a (trimmed) castle, as sorted edge ids.
struct Matching {
  const Castle* host = nullptr;
  std::vector<int> edge_ids;

  bool operator==(const Matching& o) const { return edge_ids == o.edge_ids; }
  bool contains(int e) const {
    return std::binary_search(edge_ids.begin(), edge_ids.end(), e);
  }
};

inline size_t default_matching_cap() {
  if (const char* env = std::getenv("DP3_MATCH_CAP")) {
    long v = std::atol(env);
    if (v > 0) return static_cast<size_t>(v);
  }
  return 4'000'000;
}

inline bool is_perfect(const Castle& c, const Matching& m) {
  std::vector<int> covered(c.verts.size(), 0);
  for (int e : m.edge_ids) {
    covered[static_cast<size_t>(c.edges[static_cast<size_t>(e)].first)]++;
    covered[static_cast<size_t>(c.edges[static_cast<size_t>(e)].second)]++;
  }
  for (int cv : covered)
    if (cv != 1) return false;
  return true;
}

namespace detail {

/// Backtracking enumeration with forced-edge propagation: branching always
/// happens at an uncovered vertex of minimal remaining degree, so forced
/// edges (degree one) are taken immediately. The callback returning false
/// stops the search.
inline void for_each_matching(const Castle& c,
                              const std::function<bool(const std::vector<int>&)>& cb) {
  size_t n = c.verts.size();
  if (n % 2) return;
  std::vector<char> covered(n, 0);
  std::vector<int> chosen;
  bool stop = false;

  std::function<void()> rec = [&]() {
    if (stop) return;
    int best = -1, best_deg = 1 << 30;
    for (size_t v = 0; v < n; ++v) {
      if (covered[v]) continue;
      int deg = 0;
      for (int e : c.incident[v]) {
        auto [a, b] = c.edges[static_cast<size_t>(e)];
        if (!covered[static_cast<size_t>(a)] && !covered[static_cast<size_t>(b)])
          ++deg;
      }
      if (deg < best_deg) {
        best_deg = deg;
        best = static_cast<int>(v);
        if (deg <= 1) break;
      }
    }
    if (best == -1) {
      std::vector<int> sorted = chosen;
      std::sort(sorted.begin(), sorted.end());
      if (!cb(sorted)) stop = true;
      return;
    }
    if (best_deg == 0) return;
    for (int e : c.incident[static_cast<size_t>(best)]) {
      auto [a, b] = c.edges[static_cast<size_t>(e)];
      if (covered[static_cast<size_t>(a)] || covered[static_cast<size_t>(b)])
        continue;
      covered[static_cast<size_t>(a)] = covered[static_cast<size_t>(b)] = 1;
      chosen.push_back(e);
      rec();
      chosen.pop_back();
      covered[static_cast<size_t>(a)] = covered[static_cast<size_t>(b)] = 0;
      if (stop) return;
    }
  };
  rec();
}

}  // namespace detail

/// All perfect matchings. Throws too_large when the count exceeds `cap`.
inline std::vector<Matching> enumerate_matchings(
    const Castle& c, size_t cap = default_matching_cap()) {
  std::vector<Matching> out;
  detail::for_each_matching(c, [&](const std::vector<int>& edges) {
    if (out.size() >= cap) throw too_large("matching count exceeds cap");
    out.push_back(Matching{&c, edges});
    return true;
  });
  return out;
}

inline size_t count_matchings(const Castle& c,
                              size_t cap = default_matching_cap()) {
  size_t n = 0;
  detail::for_each_matching(c, [&](const std::vector<int>&) {
    if (++n > cap) throw too_large("matching count exceeds cap");
    return true;
  });
  return n;
}

inline std::optional<Matching> first_matching(const Castle& c) {
  std::optional<Matching> out;
  detail::for_each_matching(c, [&](const std::vector<int>& edges) {
    out = Matching{&c, edges};
    return false;
  });
  return out;
}

/// Speyer weight of a matching of a trimmed castle:
/// wt(m) = prod over faces of x_label ^ (1 - #matched edges of the face).
/// Faces wholly inside the contour with no castle edge contribute a plain
/// factor x_label; near the initial points the castle degenerates to such
/// faces alone and the weight is the corresponding cluster variable.
inline Monomial weight_monomial(const Castle& c, const Matching& m) {
  Monomial mono;
  std::vector<int> cnt(c.face_list().size(), 0);
  for (int e : m.edge_ids) {
    cnt[static_cast<size_t>(c.edge_faces(e)[0])]++;
    cnt[static_cast<size_t>(c.edge_faces(e)[1])]++;
  }
  for (size_t fi = 0; fi < cnt.size(); ++fi)
    mono.exp[static_cast<size_t>(var_x(c.face_label(static_cast<int>(fi))))] +=
        static_cast<int16_t>(1 - cnt[fi]);
  for (const FaceId& f : c.bare_faces)
    mono.exp[static_cast<size_t>(var_x(Tiling::label(f)))] += 1;
  return mono;
}

inline LaurentPoly weight(const Castle& c, const Matching& m) {
  return LaurentPoly(Int(1), weight_monomial(c, m));
}

/// Whether the matched black-to-white edges of an interior face with two
/// matched edges circle it clockwise in the lattice basis. With the basis
/// used here, the paper's counterclockwise ("positive") faces are exactly
/// the basis-clockwise ones.
inline constexpr bool kPositiveIsBasisClockwise = true;

enum class TwistSign { positive, negative };

inline std::optional<TwistSign> twist_sign_by_index(const Castle& c,
                                                    const Matching& m, int fi) {
  const auto& es = c.face_edges(fi);
  if (es.size() != 4) return std::nullopt;
  int matched_edge = -1, nmatched = 0;
  for (int e : es)
    if (m.contains(e)) {
      matched_edge = e;
      ++nmatched;
    }
  if (nmatched != 2) return std::nullopt;
  // face left of black->white  <=>  black->white runs counterclockwise here
  bool basis_ccw = c.edge_face_side(matched_edge, fi) > 0;
  return (basis_ccw != kPositiveIsBasisClockwise) ? TwistSign::positive
                                                  : TwistSign::negative;
}

inline std::optional<TwistSign> twist_sign(const Castle& c, const Matching& m,
                                           const FaceId& f) {
  int fi = c.face_index(f);
  if (fi < 0) return std::nullopt;
  return twist_sign_by_index(c, m, fi);
}

/// Faces with an alternating pair of matched edges, split by circulation
/// sign. Boundary faces never qualify: a twist needs all four face edges.
inline std::pair<std::vector<FaceId>, std::vector<FaceId>> twistable_faces(
    const Castle& c, const Matching& m) {
  std::pair<std::vector<FaceId>, std::vector<FaceId>> out;
  for (int fi = 0; fi < static_cast<int>(c.face_list().size()); ++fi) {
    auto s = twist_sign_by_index(c, m, fi);
    if (!s) continue;
    (*s == TwistSign::positive ? out.first : out.second)
        .push_back(c.face_list()[static_cast<size_t>(fi)]);
  }
  return out;
}

inline Matching twist(const Castle& c, const Matching& m, const FaceId& f) {
  if (!twist_sign(c, m, f)) throw not_twistable("face has no alternating pair");
  Matching r = m;
  for (int e : c.faces().at(f)) {
    auto it = std::lower_bound(r.edge_ids.begin(), r.edge_ids.end(), e);
    if (it != r.edge_ids.end() && *it == e)
      r.edge_ids.erase(it);
    else
      r.edge_ids.insert(it, e);
  }
  return r;
}

/// Twist down at positive faces until none remain: by the lattice structure
/// this lands on the unique minimal matching regardless of the start.
inline Matching descend_to_minimum(const Castle& c, Matching m) {
  for (;;) {
    bool twisted = false;
    for (int fi = 0; fi < static_cast<int>(c.face_list().size()); ++fi) {
      auto s = twist_sign_by_index(c, m, fi);
      if (s && *s == TwistSign::positive) {
        m = twist(c, m, c.face_list()[static_cast<size_t>(fi)]);
        twisted = true;
        break;
      }
    }
    if (!twisted) return m;
  }
}

/// The unique matching with no positive twistable face (Propp's lattice
/// minimum), found independently of the sector construction.
inline Matching minimal_matching_bruteforce(const Castle& c) {
  auto m = first_matching(c);
  if (!m) throw std::runtime_error("castle has no perfect matching");
  return descend_to_minimum(c, *m);
}

struct TwistLattice {
  std::vector<Matching> nodes;
  std::vector<std::pair<int, int>> covers;  // (upper, lower): twist-down arcs
  int minimum = -1;
  int maximum = -1;
};

inline TwistLattice twist_lattice(const Castle& c,
                                  size_t cap = default_matching_cap()) {
  TwistLattice lat;
  lat.nodes = enumerate_matchings(c, cap);
  std::map<std::vector<int>, int> index;
  for (int i = 0; i < static_cast<int>(lat.nodes.size()); ++i)
    index.emplace(lat.nodes[static_cast<size_t>(i)].edge_ids, i);
  for (int i = 0; i < static_cast<int>(lat.nodes.size()); ++i) {
    auto [pos, neg] = twistable_faces(c, lat.nodes[static_cast<size_t>(i)]);
    if (pos.empty()) {
      if (lat.minimum != -1) throw std::runtime_error("two lattice minima");
      lat.minimum = i;
    }
    if (neg.empty()) {
      if (lat.maximum != -1) throw std::runtime_error("two lattice maxima");
      lat.maximum = i;
    }
    for (const FaceId& f : pos)
      lat.covers.emplace_back(
          i, index.at(twist(c, lat.nodes[static_cast<size_t>(i)], f).edge_ids));
  }
  return lat;
}

/// Vertex-disjoint cycles of the superposition of two matchings.
inline std::vector<std::vector<Pt>> superposition_cycles(const Castle& c,
                                                         const Matching& m,
                                                         const Matching& base) {
  std::vector<int> sym;
  std::set_symmetric_difference(m.edge_ids.begin(), m.edge_ids.end(),
                                base.edge_ids.begin(), base.edge_ids.end(),
                                std::back_inserter(sym));
  std::map<int, std::vector<int>> at;  // vertex -> incident symdiff edges
  for (int e : sym) {
    at[c.edges[static_cast<size_t>(e)].first].push_back(e);
    at[c.edges[static_cast<size_t>(e)].second].push_back(e);
  }
  for (const auto& [v, es] : at)
    if (es.size() != 2)
      throw std::runtime_error("superposition is not a disjoint cycle union");
  std::set<int> used;
  std::vector<std::vector<Pt>> cycles;
  for (int e0 : sym) {
    if (used.count(e0)) continue;
    std::vector<Pt> cyc;
    int v = c.edges[static_cast<size_t>(e0)].first;
    int e = e0;
    do {
      used.insert(e);
      cyc.push_back(c.vert(v));
      int w = c.edges[static_cast<size_t>(e)].first == v
                  ? c.edges[static_cast<size_t>(e)].second
                  : c.edges[static_cast<size_t>(e)].first;
      const auto& es = at.at(w);
      e = es[0] == e ? es[1] : es[0];
      v = w;
    } while (e != e0);
    cycles.push_back(std::move(cyc));
  }
  return cycles;
}

/// Per-face enclosure heights of a matching against a base matching,
/// evaluated by walking a spanning tree of the dual graph: crossing an edge
/// of the symmetric difference changes the height by the side-of-edge sign.
/// Built once per castle, reused over all matchings.
class HeightModel {
 public:
  explicit HeightModel(const Castle& c) : castle_(&c) {
    size_t F = c.face_list().size();
    arcs_.reserve(F);
    std::vector<char> seen(F, 0);
    std::vector<int> queue;
    auto visit_from_outer = [&](int fi) {
      if (seen[static_cast<size_t>(fi)]) return;
      seen[static_cast<size_t>(fi)] = 1;
      arcs_.push_back({fi, -1, -1, 0});
      queue.push_back(fi);
    };
    // Faces bordering the outside: any tiling edge of the face that is not
    // a castle edge and whose opposite face is not a castle face opens a
    // zero-cost crossing from the unbounded region.
    for (int fi = 0; fi < static_cast<int>(F); ++fi) {
      const FaceId& f = c.face_list()[static_cast<size_t>(fi)];
      auto corners = Tiling::face_corners(f);
      for (int t = 0; t < 4 && !seen[static_cast<size_t>(fi)]; ++t) {
        Pt u = corners[static_cast<size_t>(t)];
        Pt v = corners[static_cast<size_t>((t + 1) % 4)];
        if (castle_edge_id(c, u, v) >= 0) continue;
        auto fs = Tiling::faces_of_edge(u, v);
        FaceId other = fs[0] == f ? fs[1] : fs[0];
        if (c.face_index(other) < 0) visit_from_outer(fi);
      }
    }
    for (size_t head = 0; head < queue.size(); ++head) {
      int fi = queue[head];
      const FaceId& f = c.face_list()[static_cast<size_t>(fi)];
      auto corners = Tiling::face_corners(f);
      for (int t = 0; t < 4; ++t) {
        Pt u = corners[static_cast<size_t>(t)];
        Pt v = corners[static_cast<size_t>((t + 1) % 4)];
        auto fs = Tiling::faces_of_edge(u, v);
        FaceId other = fs[0] == f ? fs[1] : fs[0];
        int oi = c.face_index(other);
        if (oi < 0 || seen[static_cast<size_t>(oi)]) continue;
        int e = castle_edge_id(c, u, v);
        seen[static_cast<size_t>(oi)] = 1;
        // sign: crossing from fi into oi, +1 when oi is left of black->white
        int sign = e >= 0 ? c.edge_face_side(e, oi) : 0;
        arcs_.push_back({oi, fi, e, sign});
        queue.push_back(oi);
      }
    }
  }

  /// Heights per face index; in_m / in_base are edge-id bitmasks.
  void eval(const std::vector<char>& in_m, const std::vector<char>& in_base,
            std::vector<int>& h) const {
    h.assign(castle_->face_list().size(), 0);
    for (const Arc& a : arcs_) {
      int base = a.from < 0 ? 0 : h[static_cast<size_t>(a.from)];
      int delta = 0;
      if (a.edge >= 0) {
        int dm = in_m[static_cast<size_t>(a.edge)] ? 1 : 0;
        int db = in_base[static_cast<size_t>(a.edge)] ? 1 : 0;
        delta = a.sign * (dm - db);
      }
      h[static_cast<size_t>(a.face)] = base + delta;
    }
  }

 private:
  struct Arc {
    int face;
    int from;  // -1 for the unbounded region
    int edge;  // castle edge crossed, or -1 for a gap
    int sign;
  };
  static int castle_edge_id(const Castle& c, const Pt& u, const Pt& v) {
    int ui = c.vertex_index(u), vi = c.vertex_index(v);
    if (ui < 0 || vi < 0) return -1;
    for (int e : c.incident[static_cast<size_t>(ui)]) {
      auto [a, b] = c.edges[static_cast<size_t>(e)];
      if ((a == ui && b == vi) || (a == vi && b == ui)) return e;
    }
    return -1;
  }
  const Castle* castle_;
  std::vector<Arc> arcs_;
};

/// Height of m relative to the minimal matching: one factor y_label(f) per
/// enclosure of the face by the superposition cycles. ht(m_min) = 1.
inline LaurentPoly height_monomial(const Castle& c, const Matching& m,
                                   const Matching& m_min) {
  HeightModel model(c);
  std::vector<char> in_m(c.edges.size(), 0), in_base(c.edges.size(), 0);
  for (int e : m.edge_ids) in_m[static_cast<size_t>(e)] = 1;
  for (int e : m_min.edge_ids) in_base[static_cast<size_t>(e)] = 1;
  std::vector<int> h;
  model.eval(in_m, in_base, h);
  Monomial mono;
  for (size_t fi = 0; fi < h.size(); ++fi)
    mono.exp[static_cast<size_t>(var_y(c.face_label(static_cast<int>(fi))))] +=
        static_cast<int16_t>(h[fi]);
  return LaurentPoly(Int(1), mono);
}

/// wt(C) = sum of matching weights; equals the unframed cluster variable.
inline LaurentPoly weighted_sum(const Castle& castle,
                                size_t cap = default_matching_cap()) {
  Castle trimmed_storage;
  const Castle* cp = &castle;
  if (!castle.trimmed) {
    trimmed_storage = trim_dangling(castle);
    cp = &trimmed_storage;
  }
  const Castle& c = *cp;
  if (c.infeasible) return LaurentPoly::zero();
  if (c.verts.empty()) return weight(c, Matching{&c, {}});
  PolyAccum sum;
  size_t n = 0;
  detail::for_each_matching(c, [&](const std::vector<int>& edges) {
    if (++n > cap) throw too_large("matching count exceeds cap");
    sum.add(weight_monomial(c, Matching{&c, edges}), Int(1));
    return true;
  });
  return sum.take();
}

/// Framed generating function: sum of wt(m) * ht(m) over all matchings.
/// Its unique y-free term is the weight of the minimal matching.
inline LaurentPoly weighted_sum_framed(const Castle& castle,
                                       size_t cap = default_matching_cap()) {
  Castle trimmed_storage;
  const Castle* cp = &castle;
  if (!castle.trimmed) {
    trimmed_storage = trim_dangling(castle);
    cp = &trimmed_storage;
  }
  const Castle& c = *cp;
  if (c.infeasible) return LaurentPoly::zero();
  if (c.verts.empty()) return weight(c, Matching{&c, {}});
  Matching m_min = minimal_matching_bruteforce(c);
  HeightModel model(c);
  std::vector<char> in_base(c.edges.size(), 0);
  for (int e : m_min.edge_ids) in_base[static_cast<size_t>(e)] = 1;
  PolyAccum sum;
  std::vector<char> in_m(c.edges.size(), 0);
  std::vector<int> h;
  size_t n = 0;
  detail::for_each_matching(c, [&](const std::vector<int>& edges) {
    if (++n > cap) throw too_large("matching count exceeds cap");
    Matching m{&c, edges};
    std::fill(in_m.begin(), in_m.end(), 0);
    for (int e : edges) in_m[static_cast<size_t>(e)] = 1;
    model.eval(in_m, in_base, h);
    Monomial mono = weight_monomial(c, m);
    for (size_t fi = 0; fi < h.size(); ++fi)
      mono.exp[static_cast<size_t>(var_y(c.face_label(static_cast<int>(fi))))] +=
          static_cast<int16_t>(h[fi]);
    sum.add(mono, Int(1));
    return true;
  });
  return sum.take();
}

}  // namespace dp3

#endif  // DP3_MATCHING_HPP
