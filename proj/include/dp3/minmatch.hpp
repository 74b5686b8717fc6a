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

#ifndef DP3_MINMATCH_HPP
#define DP3_MINMATCH_HPP

#include <array>
#include <map>
#include <optional>
#include <vector>

#include "dp3/matching.hpp"

namespace dp3 {

struct construction_gap : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One row of the universal covering table: for each white vertex class the
/// offset to its matched black partner. Every row is a perfect matching
/// pattern of the whole tiling.
struct Covering {
  Pt hub_off, up_off, down_off;
  bool operator==(const Covering&) const = default;
};

namespace covering_detail {

// The covering table: three face-pair edge classes per side and sign.
inline constexpr int kTable[6][2][3][2] = {
    // side a                      positive            negative
    {{{1, 4}, {2, 5}, {3, 6}}, {{1, 5}, {2, 4}, {3, 6}}},
    // side b
    {{{1, 4}, {2, 6}, {3, 5}}, {{1, 4}, {2, 5}, {3, 6}}},
    // side c
    {{{1, 3}, {2, 6}, {4, 5}}, {{1, 4}, {2, 6}, {3, 5}}},
    // side d
    {{{1, 6}, {2, 3}, {4, 5}}, {{1, 3}, {2, 6}, {4, 5}}},
    // side e
    {{{1, 5}, {2, 3}, {4, 6}}, {{1, 6}, {2, 3}, {4, 5}}},
    // side f
    {{{1, 5}, {2, 4}, {3, 6}}, {{1, 5}, {2, 3}, {4, 6}}},
};

struct EdgeClass {
  Pt off;        // white -> black offset
  int kind;      // 0 hub, 1 up pitch, 2 down pitch
  int pair[2];   // face labels across the edge
};

inline const std::vector<EdgeClass>& edge_classes() {
  static const std::vector<EdgeClass> classes = [] {
    std::vector<EdgeClass> out;
    for (int s = 0; s < 6; ++s) {
      const Pt& d = Tiling::spoke[static_cast<size_t>(s)];
      out.push_back({Pt{d.p / 2, d.q / 2},
                     0,
                     {Tiling::sector_label[static_cast<size_t>((s + 5) % 6)],
                      Tiling::sector_label[static_cast<size_t>(s)]}});
    }
    for (const Pt& w : {Pt{2, 2}, Pt{4, 4}}) {
      for (const Pt& b : Tiling::neighbors(w)) {
        auto fs = Tiling::faces_of_edge(w, b);
        out.push_back({b - w,
                       vertex_kind(w) == VertexKind::pitch_up ? 1 : 2,
                       {Tiling::label(fs[0]), Tiling::label(fs[1])}});
      }
    }
    return out;
  }();
  return classes;
}

}  // namespace covering_detail

/// Covering for a side (0..5 = a..f) with the given sign.
inline Covering covering_for(int side, int sign) {
  const auto& row =
      covering_detail::kTable[side][sign > 0 ? 0 : 1];
  Covering cov;
  bool seen[3] = {false, false, false};
  for (int t = 0; t < 3; ++t) {
    int lo = std::min(row[t][0], row[t][1]);
    int hi = std::max(row[t][0], row[t][1]);
    bool found = false;
    for (const auto& cls : covering_detail::edge_classes()) {
      if (std::min(cls.pair[0], cls.pair[1]) != lo ||
          std::max(cls.pair[0], cls.pair[1]) != hi)
        continue;
      (cls.kind == 0 ? cov.hub_off
                     : cls.kind == 1 ? cov.up_off : cov.down_off) = cls.off;
      seen[cls.kind] = true;
      found = true;
      break;
    }
    if (!found) throw construction_gap("covering row names an unknown edge class");
  }
  if (!(seen[0] && seen[1] && seen[2]))
    throw construction_gap("covering row misses a white vertex class");
  return cov;
}

/// The table redundancy: a side's negative covering equals the previous
/// side's positive covering.
inline bool covering_table_redundancy_holds() {
  for (int s = 0; s < 6; ++s)
    if (!(covering_for(s, -1) == covering_for((s + 5) % 6, +1))) return false;
  return true;
}

/// The matching edge of the covering at a vertex: white vertices match along
/// their class offset, black vertices match to the unique white class whose
/// offset reaches them.
inline std::pair<Pt, Pt> covering_edge_at(const Pt& v, const Covering& cov) {
  switch (vertex_kind(v)) {
    case VertexKind::hub:
      return {v, v + cov.hub_off};
    case VertexKind::pitch_up:
      return {v, v + cov.up_off};
    case VertexKind::pitch_down:
      return {v, v + cov.down_off};
    case VertexKind::black: {
      for (const Pt& off : {cov.hub_off, cov.up_off, cov.down_off}) {
        Pt w = v - off;
        if (is_vertex(w) && is_white(w) && (w + off == v)) {
          // the white class must match the offset used
          VertexKind k = vertex_kind(w);
          if ((k == VertexKind::hub && off == cov.hub_off) ||
              (k == VertexKind::pitch_up && off == cov.up_off) ||
              (k == VertexKind::pitch_down && off == cov.down_off))
            return {w, v};
        }
      }
      throw construction_gap("black vertex not reached by the covering");
    }
    default:
      throw construction_gap("covering queried off the lattice");
  }
}

struct Staircase {
  int corner = 0;     // active corner index: between side `corner` and +1
  int neg_side = 0, pos_side = 0;
  std::vector<Pt> points;  // unit-step breakpoints from the contour corner
};

struct StraightBorder {
  int corner = 0;
  int first_side = 0, second_side = 0;
  int dir_side = 0;  // the side this border is parallel to
  std::vector<Pt> points;
};

struct SectorInfo {
  std::vector<int> sides;  // contour sides incident to the sector
  int row_side = 0;        // normalized positive-covering row
  bool touches_zero = false;
  std::vector<Pt> polygon;
};

struct SectorMap {
  std::array<int, 6> signs{};
  std::array<Staircase, 2> staircases;
  std::array<StraightBorder, 2> lines;
  std::vector<Pt> zero_line;  // breakpoints from one endpoint to the other
  std::vector<SectorInfo> sectors;
};

namespace minmatch_detail {

inline bool on_polyline(const std::vector<Pt>& pts, const Pt& v) {
  for (size_t t = 0; t + 1 < pts.size(); ++t)
    if (geom::on_segment(pts[t], pts[t + 1], v)) return true;
  return pts.size() == 1 && pts[0] == v;
}

/// Of dir and -dir, the one whose half-step probe from `from` lands strictly
/// inside the contour; nullopt when neither or both do (degenerate corner).
inline std::optional<Pt> inward_direction(const Contour& contour, const Pt& from,
                                          const Pt& dir) {
  std::vector<Pt> poly2;
  for (const Pt& p : contour.polygon()) poly2.push_back(p * 2);
  auto ok = [&](const Pt& d) {
    Pt probe2{2 * from.p + d.p, 2 * from.q + d.q};
    return !contour.boundary_contains2(probe2) &&
           geom::strictly_inside(poly2, probe2);
  };
  bool fwd = ok(dir), bwd = ok(Pt{-dir.p, -dir.q});
  if (fwd == bwd) return std::nullopt;
  return fwd ? dir : Pt{-dir.p, -dir.q};
}

}  // namespace minmatch_detail

/// Step 1 of the construction: walk the corners clockwise, draw straight
/// lines at equal-sign corners and staircases where a negative side turns
/// positive, intersect them pairwise and join the two intersection points
/// with the zero line.
inline SectorMap sector_division(const Contour& contour) {
  if (contour.is_self_intersecting())
    throw self_intersecting("sector division needs a simple contour");
  SectorMap sm;
  sm.signs = contour.signs;

  struct Corner {
    int index;  // between side index and index+1
    enum { none, line, staircase } kind;
  };
  std::array<Corner, 6> corners;
  int n_stairs = 0, n_lines = 0;
  for (int s = 0; s < 6; ++s) {
    int s1 = contour.signs[s], s2 = contour.signs[(s + 1) % 6];
    corners[s].index = s;
    if (s1 > 0 && s2 > 0) {
      corners[s].kind = Corner::line;
      ++n_lines;
    } else if (s1 < 0 && s2 < 0) {
      corners[s].kind = Corner::line;
      ++n_lines;
    } else if (s1 < 0 && s2 > 0) {
      corners[s].kind = Corner::staircase;
      ++n_stairs;
    } else {
      corners[s].kind = Corner::none;
    }
  }
  if (n_stairs != 2 || n_lines != 2)
    throw construction_gap("sign pattern does not yield two lines and two staircases");

  // grow the borders
  int perimeter = 0;
  for (int s = 0; s < 6; ++s) perimeter += std::abs(contour.sides[s]);

  int si = 0, li = 0;
  for (int s = 0; s < 6; ++s) {
    Pt at = contour.corner[s + 1];  // geometric corner between s and s+1
    if (corners[s].kind == Corner::staircase) {
      Staircase st;
      st.corner = s;
      st.neg_side = s;
      st.pos_side = (s + 1) % 6;
      st.points.push_back(at);
      // First step lies on the positive side, then the steps alternate with
      // inward runs parallel to the negative side.
      Pt base_dir = side_dir[static_cast<size_t>(st.pos_side)];
      auto side_d = minmatch_detail::inward_direction(
          contour, at + base_dir, side_dir[static_cast<size_t>(st.neg_side)]);
      std::vector<Pt> poly2;
      for (const Pt& p : contour.polygon()) poly2.push_back(p * 2);
      Pt cur = at;
      bool base = true;
      for (int steps = 0; steps <= 2 * perimeter; ++steps) {
        if (!base && !side_d) break;
        Pt dir = base ? base_dir : *side_d;
        Pt nxt = cur + dir;
        if (!contour.contains(nxt)) break;
        Pt mid2{cur.p + nxt.p, cur.q + nxt.q};
        if (!contour.boundary_contains2(mid2) &&
            !geom::strictly_inside(poly2, mid2))
          break;
        st.points.push_back(nxt);
        cur = nxt;
        base = !base;
      }
      sm.staircases[static_cast<size_t>(si++)] = std::move(st);
    } else if (corners[s].kind == Corner::line) {
      StraightBorder ln;
      ln.corner = s;
      ln.first_side = s;
      ln.second_side = (s + 1) % 6;
      bool pos_pair = contour.signs[s] > 0;
      ln.dir_side = pos_pair ? ln.second_side : ln.first_side;
      ln.points.push_back(at);
      auto d = minmatch_detail::inward_direction(
          contour, at, side_dir[static_cast<size_t>(ln.dir_side)]);
      if (d) {
        std::vector<Pt> poly2;
        for (const Pt& p : contour.polygon()) poly2.push_back(p * 2);
        Pt cur = at;
        for (int steps = 0; steps <= perimeter; ++steps) {
          Pt nxt = cur + *d;
          if (!contour.contains(nxt)) break;
          Pt mid2{cur.p + nxt.p, cur.q + nxt.q};
          if (!contour.boundary_contains2(mid2) &&
              !geom::strictly_inside(poly2, mid2))
            break;
          ln.points.push_back(nxt);
          cur = nxt;
        }
      }
      sm.lines[static_cast<size_t>(li++)] = std::move(ln);
    }
  }

  // pair every line with the staircase it meets; trim both at the meeting
  // point and record the two zero-line endpoints
  std::array<int, 2> line_stair{-1, -1};
  std::array<Pt, 2> meet{};
  for (int l = 0; l < 2; ++l) {
    bool found = false;
    for (size_t pi = 0; pi < sm.lines[static_cast<size_t>(l)].points.size() && !found;
         ++pi) {
      const Pt& p = sm.lines[static_cast<size_t>(l)].points[pi];
      for (int s = 0; s < 2 && !found; ++s) {
        if (l == 1 && line_stair[0] == s) continue;
        if (minmatch_detail::on_polyline(sm.staircases[static_cast<size_t>(s)].points,
                                         p)) {
          line_stair[static_cast<size_t>(l)] = s;
          meet[static_cast<size_t>(l)] = p;
          sm.lines[static_cast<size_t>(l)].points.resize(pi + 1);
          found = true;
        }
      }
    }
    if (!found)
      throw construction_gap("straight border never meets a staircase");
  }
  for (int s = 0; s < 2; ++s) {
    int l = line_stair[0] == s ? 0 : 1;
    auto& pts = sm.staircases[static_cast<size_t>(s)].points;
    for (size_t pi = 0; pi < pts.size(); ++pi)
      if (pts[pi] == meet[static_cast<size_t>(l)]) {
        pts.resize(pi + 1);
        break;
      }
  }

  // zero line between the two meeting points
  Pt z0 = meet[0], z1 = meet[1];
  sm.zero_line = {z0};
  if (!(z0 == z1)) {
    Pt d{z1.p - z0.p, z1.q - z0.q};
    Pt unit{0, 0};
    for (const Pt& cand : side_dir) {
      if (cross(cand, d) == 0 &&
          (static_cast<long long>(cand.p) * d.p +
           static_cast<long long>(cand.q) * d.q) > 0) {
        unit = cand;
        break;
      }
    }
    if (unit == Pt{0, 0})
      throw construction_gap("zero line is not a lattice segment");
    Pt cur = z0;
    while (!(cur == z1)) {
      cur = cur + unit;
      sm.zero_line.push_back(cur);
    }
  }

  // sectors: maximal runs of sides between active corners
  std::vector<int> active;
  for (int s = 0; s < 6; ++s)
    if (corners[s].kind != Corner::none) active.push_back(s);
  for (size_t t = 0; t < active.size(); ++t) {
    int from = active[t];                          // run starts after this corner
    int to = active[(t + 1) % active.size()];      // and ends at this corner
    SectorInfo sec;
    for (int s = (from + 1) % 6;; s = (s + 1) % 6) {
      sec.sides.push_back(s);
      if (s == to) break;
    }
    int s0 = sec.sides.front();
    sec.row_side = contour.signs[s0] > 0 ? s0 : (s0 + 5) % 6;
    for (int s : sec.sides) {
      int norm = contour.signs[s] > 0 ? s : (s + 5) % 6;
      if (norm != sec.row_side)
        throw construction_gap("sector sides disagree on their covering row");
    }
    // polygon: contour run, border at `to` out to its endpoint, possibly the
    // zero line, border at `from` back to the run's start corner
    auto border_pts = [&](int corner_index) -> const std::vector<Pt>& {
      for (const auto& ln : sm.lines)
        if (ln.corner == corner_index) return ln.points;
      for (const auto& st : sm.staircases)
        if (st.corner == corner_index) return st.points;
      throw construction_gap("missing border at an active corner");
    };
    std::vector<Pt> poly;
    poly.push_back(contour.corner[from + 1]);
    for (int s : sec.sides) poly.push_back(contour.corner[s + 1]);
    const auto& bto = border_pts(to);
    for (size_t pi = 1; pi < bto.size(); ++pi) poly.push_back(bto[pi]);
    const auto& bfrom = border_pts(from);
    Pt end_to = bto.back(), end_from = bfrom.back();
    if (!(end_to == end_from)) {
      sec.touches_zero = true;
      // walk the zero line from end_to to end_from
      std::vector<Pt> z = sm.zero_line;
      if (z.front() == end_from && z.back() == end_to)
        std::reverse(z.begin(), z.end());
      if (!(z.front() == end_to && z.back() == end_from))
        throw construction_gap("zero line does not join the border endpoints");
      for (size_t pi = 1; pi < z.size(); ++pi) poly.push_back(z[pi]);
    }
    for (size_t pi = bfrom.size(); pi-- > 1;) poly.push_back(bfrom[pi - 1]);
    // drop consecutive duplicates
    std::vector<Pt> clean;
    for (const Pt& p : poly)
      if (clean.empty() || !(clean.back() == p)) clean.push_back(p);
    while (clean.size() > 1 && clean.front() == clean.back()) clean.pop_back();
    sec.polygon = std::move(clean);
    sm.sectors.push_back(std::move(sec));
  }
  return sm;
}

/// The zero line of a contour.
inline std::vector<Pt> zero_line(const Contour& contour) {
  return sector_division(contour).zero_line;
}

// Rule toggles pinned by the worked examples and the lattice-minimum oracle.
inline constexpr bool kConcaveUpIsStepEnd = true;
inline constexpr bool kNegNegBlacksUseSecond = true;

/// Step 2: cover each sector by its table row; straight-line, staircase and
/// zero-line vertices follow the border rules. Returns the minimal matching.
inline Matching construct_minimal(const Castle& castle) {
  const Castle& c = castle;
  if (!c.trimmed)
    throw std::invalid_argument("construct_minimal expects a trimmed castle");
  SectorMap sm = sector_division(c.contour);

  std::map<Pt, std::pair<Pt, Pt>> assign;  // vertex -> its covering edge
  auto assign_edge = [&](const Pt& v, const std::pair<Pt, Pt>& e) {
    auto [it, fresh] = assign.emplace(v, e);
    if (!fresh && !(it->second == e))
      throw construction_gap("vertex assigned two different edges");
  };
  auto vertex_exists = [&](const Pt& v) { return c.vertex_index(v) >= 0; };

  // staircase rules
  for (const Staircase& st : sm.staircases) {
    Covering pos_cov =
        covering_for(st.pos_side, sm.signs[static_cast<size_t>(st.pos_side)]);
    Covering neg_cov =
        covering_for(st.neg_side, sm.signs[static_cast<size_t>(st.neg_side)]);
    const auto& pts = st.points;
    for (size_t t = 0; t + 1 < pts.size(); ++t) {
      bool base = t % 2 == 0;  // first step lies on the positive side
      Pt mid{(pts[t].p + pts[t + 1].p) / 2, (pts[t].q + pts[t + 1].q) / 2};
      if (base) {
        if (vertex_exists(mid)) assign_edge(mid, covering_edge_at(mid, pos_cov));
      } else {
        Pt concave_up = kConcaveUpIsStepEnd ? pts[t + 1] : pts[t];
        Pt concave_down = kConcaveUpIsStepEnd ? pts[t] : pts[t + 1];
        if (vertex_exists(mid)) assign_edge(mid, covering_edge_at(mid, pos_cov));
        if (vertex_exists(concave_up))
          assign_edge(concave_up, covering_edge_at(concave_up, neg_cov));
        if (vertex_exists(concave_down))
          assign_edge(concave_down, covering_edge_at(concave_down, pos_cov));
      }
    }
  }

  // straight-line rules
  for (const StraightBorder& ln : sm.lines) {
    bool pos_pair = sm.signs[static_cast<size_t>(ln.first_side)] > 0;
    Covering first_cov =
        covering_for(ln.first_side, sm.signs[static_cast<size_t>(ln.first_side)]);
    Covering second_cov = covering_for(
        ln.second_side, sm.signs[static_cast<size_t>(ln.second_side)]);
    Covering black_cov, white_cov;
    if (pos_pair) {
      black_cov = first_cov;
      white_cov = second_cov;
    } else if (kNegNegBlacksUseSecond) {
      black_cov = second_cov;
      white_cov = first_cov;
    } else {
      black_cov = first_cov;
      white_cov = second_cov;
    }
    const auto& pts = ln.points;
    for (size_t t = 0; t < pts.size(); ++t) {
      bool is_far_end = t + 1 == pts.size() && pts.size() > 1;
      if (is_far_end) continue;  // the meeting point belongs to the staircase
      for (const Pt& v :
           t + 1 < pts.size()
               ? std::vector<Pt>{pts[t],
                                 Pt{(pts[t].p + pts[t + 1].p) / 2,
                                    (pts[t].q + pts[t + 1].q) / 2}}
               : std::vector<Pt>{pts[t]}) {
        if (!vertex_exists(v) || assign.count(v)) continue;
        assign_edge(v, covering_edge_at(v, is_black(v) ? black_cov : white_cov));
      }
    }
  }

  // sector interiors
  std::vector<std::vector<Pt>> polys;
  for (const auto& sec : sm.sectors) polys.push_back(sec.polygon);
  for (const Pt& v : c.verts) {
    if (assign.count(v)) continue;
    if (minmatch_detail::on_polyline(sm.zero_line, v)) continue;  // later
    bool on_border = false;
    for (const auto& st : sm.staircases)
      on_border |= minmatch_detail::on_polyline(st.points, v);
    for (const auto& ln : sm.lines)
      on_border |= minmatch_detail::on_polyline(ln.points, v);
    if (on_border) continue;  // unassigned border vertices fall to zero line
    int found = -1;
    for (size_t t = 0; t < sm.sectors.size() && found < 0; ++t)
      if (geom::strictly_inside(polys[t], v)) found = static_cast<int>(t);
    // surviving vertices on the contour itself belong to their side's sector
    for (size_t t = 0; t < sm.sectors.size() && found < 0; ++t)
      for (int s : sm.sectors[t].sides)
        if (c.contour.sides[s] != 0 &&
            geom::on_segment(c.contour.corner[s], c.contour.corner[s + 1], v)) {
          found = static_cast<int>(t);
          break;
        }
    if (found < 0)
      throw construction_gap("castle vertex not located in any sector");
    Covering cov = covering_for(sm.sectors[static_cast<size_t>(found)].row_side, 1);
    assign_edge(v, covering_edge_at(v, cov));
  }

  // zero line: cover the remaining vertices with one flank row, preferring
  // the row that already covered one of the endpoints
  std::vector<Pt> zero_verts;
  for (const Pt& v : c.verts)
    if (!assign.count(v)) zero_verts.push_back(v);

  std::vector<int> flank_rows;
  for (const auto& sec : sm.sectors)
    if (sec.touches_zero) flank_rows.push_back(sec.row_side);
  // preference from a covered endpoint
  std::vector<int> order = flank_rows;
  for (const Pt& endp : {sm.zero_line.front(), sm.zero_line.back()}) {
    auto it = assign.find(endp);
    if (it == assign.end()) continue;
    for (size_t t = 0; t < order.size(); ++t) {
      Covering cov = covering_for(order[t], 1);
      auto edge = covering_edge_at(endp, cov);
      if (edge == it->second && t > 0) std::swap(order[0], order[t]);
    }
  }

  auto finalize = [&](const std::map<Pt, std::pair<Pt, Pt>>& full)
      -> std::optional<Matching> {
    std::vector<int> ids;
    for (const auto& [v, e] : full) {
      int ui = c.vertex_index(e.first), vi = c.vertex_index(e.second);
      if (ui < 0 || vi < 0) return std::nullopt;
      int found = -1;
      for (int eid : c.incident[static_cast<size_t>(ui)]) {
        auto [a, b] = c.edges[static_cast<size_t>(eid)];
        if ((a == ui && b == vi) || (a == vi && b == ui)) found = eid;
      }
      if (found < 0) return std::nullopt;
      ids.push_back(found);
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    Matching m{&c, ids};
    if (!is_perfect(c, m)) return std::nullopt;
    return m;
  };

  if (zero_verts.empty()) {
    auto m = finalize(assign);
    if (!m) throw construction_gap("sector coverings do not form a perfect matching");
    return *m;
  }
  for (int row : order) {
    auto full = assign;
    Covering cov = covering_for(row, 1);
    bool ok = true;
    for (const Pt& v : zero_verts) {
      try {
        auto e = covering_edge_at(v, cov);
        auto [it, fresh] = full.emplace(v, e);
        if (!fresh && !(it->second == e)) ok = false;
      } catch (const construction_gap&) {
        ok = false;
      }
      if (!ok) break;
    }
    if (!ok) continue;
    auto m = finalize(full);
    if (m) return *m;
  }
  throw construction_gap("no zero-line covering completes a perfect matching");
}

}  // namespace dp3

#endif  // DP3_MINMATCH_HPP
