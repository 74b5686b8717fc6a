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

#ifndef DP3_CONTOUR_HPP
#define DP3_CONTOUR_HPP

#include <array>
#include <cassert>
#include <string>
#include <vector>

#include "dp3/tiling.hpp"

namespace dp3 {

struct self_intersecting : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Directions of the six contour sides a..f. Consecutive sides turn by -60
/// degrees, so a positively-signed tuple is traversed as a clockwise-in-the-
/// paper hexagon. Sides run along lines of long edges; one unit is two long
/// edges (hub to hub). The rotation of this frame against the face labels is
/// pinned by the initial cluster variables: the castle at each initial point
/// must reduce to the face carrying that variable.
inline constexpr std::array<Pt, 6> side_dir = {
    Pt{-6, 6}, Pt{0, 6}, Pt{6, 0}, Pt{6, -6}, Pt{0, -6}, Pt{-6, 0}};

inline const char* side_name(int s) {
  static const char* names[6] = {"a", "b", "c", "d", "e", "f"};
  return names[s];
}

inline std::array<int, 6> tuple_for_point(int i, int j, int k) {
  return {j + k, -i - j - k, i + k, j + 1 - k, -i - j - 1 + k, i + 1 - k};
}

namespace geom {

// 1 if counterclockwise, -1 clockwise, 0 collinear.
inline int orient(const Pt& a, const Pt& b, const Pt& c) {
  long long v = cross(b - a, c - a);
  return (v > 0) - (v < 0);
}

inline bool on_segment(const Pt& a, const Pt& b, const Pt& p) {
  if (orient(a, b, p) != 0) return false;
  return std::min(a.p, b.p) <= p.p && p.p <= std::max(a.p, b.p) &&
         std::min(a.q, b.q) <= p.q && p.q <= std::max(a.q, b.q);
}

/// Whether closed segments [a,b] and [c,d] share any point.
inline bool segments_meet(const Pt& a, const Pt& b, const Pt& c, const Pt& d) {
  int o1 = orient(a, b, c), o2 = orient(a, b, d);
  int o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  return (o1 == 0 && on_segment(a, b, c)) || (o2 == 0 && on_segment(a, b, d)) ||
         (o3 == 0 && on_segment(c, d, a)) || (o4 == 0 && on_segment(c, d, b));
}

/// Point-in-polygon by crossing number; the point must not lie on the
/// boundary (callers test boundary membership separately).
inline bool strictly_inside(const std::vector<Pt>& poly, const Pt& pt) {
  bool in = false;
  size_t n = poly.size();
  for (size_t i = 0; i < n; ++i) {
    const Pt& u = poly[i];
    const Pt& v = poly[(i + 1) % n];
    if ((u.q > pt.q) != (v.q > pt.q)) {
      // x-coordinate of the crossing vs pt, exact: compare
      // (v.p-u.p)*(pt.q-u.q) vs (pt.p-u.p)*(v.q-u.q) with the sign of v.q-u.q
      long long lhs = static_cast<long long>(v.p - u.p) * (pt.q - u.q);
      long long rhs = static_cast<long long>(pt.p - u.p) * (v.q - u.q);
      bool cross_right = (v.q > u.q) ? (lhs > rhs) : (lhs < rhs);
      if (cross_right) in = !in;
    }
  }
  return in;
}

}  // namespace geom

struct Region {
  bool recognized = false;  // exactly four cyclic sign changes
  int family = 0;           // 1 white, 2 pink, 3 blue
  bool anti_orbit = false;  // pattern lies in the family's opposite orbit
  int rotation = 0;
  bool shifted = false;  // classified through the k <= 0 half-space shift
  std::vector<std::string> names;  // matched named regions, e.g. {"1","2"}
  std::string display() const {
    if (!recognized) return "self-intersecting (unrecognized sign pattern)";
    if (names.empty()) {
      std::string s = "Region family ";
      s += (family == 1 ? "white" : family == 2 ? "pink" : "blue");
      s += " sibling (rotation " + std::to_string(rotation) + ")";
      if (shifted) s += " [k<=0]";
      return s;
    }
    std::string s = "Region " + names[0];
    for (size_t t = 1; t < names.size(); ++t) s += "\xe2\x88\xa9" + names[t];
    if (shifted) s += " [k<=0]";
    return s;
  }
};

/// Six-sided contour: signed side lengths, the traced lattice polyline,
/// resolved sign pattern and region classification.
class Contour {
 public:
  Vec3 point;                    // provenance (i,j,k)
  std::array<int, 6> sides{};    // signed lengths a..f
  std::array<int, 6> signs{};    // resolved signs (+1/-1), zero sides included
  std::array<Pt, 7> corner{};    // corner[s] starts side s; corner[6]==corner[0]
  Region region;

  static Contour at(int i, int j, int k) {
    Contour c;
    c.point = {i, j, k};
    c.sides = tuple_for_point(i, j, k);
    c.corner[0] = Pt{0, 0};
    for (int s = 0; s < 6; ++s)
      c.corner[s + 1] = c.corner[s] + side_dir[s] * c.sides[s];
    c.resolve_signs();
    c.classify();
    return c;
  }

  /// Closure (a+b = d+e, c+d = f+a) plus balance (sum = 1).
  bool closure_holds() const {
    return sides[0] + sides[1] == sides[3] + sides[4] &&
           sides[2] + sides[3] == sides[5] + sides[0];
  }
  bool balance_holds() const {
    int s = 0;
    for (int v : sides) s += v;
    return s == 1;
  }

  /// Polyline corners; zero-length sides contribute nothing.
  std::vector<Pt> polygon() const {
    std::vector<Pt> poly;
    for (int s = 0; s < 6; ++s)
      if (sides[s] != 0) poly.push_back(corner[s]);
    // All-zero cannot happen: the balance condition forces a nonzero side.
    return poly;
  }

  bool is_self_intersecting() const {
    struct Seg {
      Pt a, b;
    };
    std::vector<Seg> segs;
    for (int s = 0; s < 6; ++s)
      if (sides[s] != 0) segs.push_back({corner[s], corner[s + 1]});
    size_t n = segs.size();
    if (n < 3) return true;  // degenerate: cannot bound a region
    for (size_t s = 0; s < n; ++s)
      for (size_t t = s + 1; t < n; ++t) {
        bool adjacent = (t == s + 1) || (s == 0 && t == n - 1);
        if (adjacent) {
          // consecutive sides share one corner; any further contact is a
          // self-intersection
          const Pt& shared = (t == s + 1) ? segs[s].b : segs[s].a;
          Pt sa = segs[s].a == shared ? segs[s].b : segs[s].a;
          Pt ta = segs[t].a == shared ? segs[t].b : segs[t].a;
          if (geom::on_segment(segs[t].a, segs[t].b, sa) ||
              geom::on_segment(segs[s].a, segs[s].b, ta))
            return true;
        } else if (geom::segments_meet(segs[s].a, segs[s].b, segs[t].a,
                                       segs[t].b)) {
          return true;
        }
      }
    return false;
  }

  bool boundary_contains(const Pt& pt) const {
    for (int s = 0; s < 6; ++s)
      if (sides[s] != 0 && geom::on_segment(corner[s], corner[s + 1], pt))
        return true;
    return false;
  }

  /// Boundary test for a point given in doubled coordinates.
  bool boundary_contains2(const Pt& pt2) const {
    for (int s = 0; s < 6; ++s)
      if (sides[s] != 0 &&
          geom::on_segment(corner[s] * 2, corner[s + 1] * 2, pt2))
        return true;
    return false;
  }

  /// Inside-or-boundary test; only meaningful for simple contours.
  bool contains(const Pt& pt) const {
    if (boundary_contains(pt)) return true;
    return geom::strictly_inside(polygon(), pt);
  }

 private:
  static int cyclic_changes(const std::array<int, 6>& sg) {
    int ch = 0;
    for (int s = 0; s < 6; ++s) ch += sg[s] != sg[(s + 1) % 6];
    return ch;
  }

  void resolve_signs() {
    std::vector<int> zeros;
    for (int s = 0; s < 6; ++s) {
      signs[s] = sides[s] > 0 ? 1 : sides[s] < 0 ? -1 : 0;
      if (sides[s] == 0) zeros.push_back(s);
    }
    if (zeros.empty()) return;
    // Zero sides take the assigned sign completing a four-change pattern,
    // preferring '+' at the earliest zero position on ties.
    int z = static_cast<int>(zeros.size());
    for (int mask = 0; mask < (1 << z); ++mask) {
      std::array<int, 6> cand = signs;
      for (int t = 0; t < z; ++t)
        cand[static_cast<size_t>(zeros[static_cast<size_t>(t)])] =
            (mask >> t) & 1 ? -1 : 1;
      if (cyclic_changes(cand) == 4) {
        signs = cand;
        return;
      }
    }
    // No completion exists (self-intersecting shapes); default zeros to '+'.
    for (int s : zeros) signs[static_cast<size_t>(s)] = 1;
  }

  void classify() {
    Region r;
    r.recognized = cyclic_changes(signs) == 4;
    if (!r.recognized) {
      region = r;
      return;
    }
    int i = point.x, j = point.y, k = point.z;
    std::array<int, 6> pat = signs;
    if (k <= 0) {
      r.shifted = true;
      k = 1 - k;
      // the shifted point's pattern is pat rotated by three
      std::array<int, 6> rot;
      for (int s = 0; s < 6; ++s) rot[s] = pat[(s + 3) % 6];
      pat = rot;
    }
    // orbit lookup
    static const std::array<std::array<int, 6>, 6> reps = {{
        {1, -1, 1, 1, -1, 1},    // white
        {-1, 1, -1, -1, 1, -1},  // white anti
        {1, 1, -1, -1, 1, -1},   // pink
        {-1, -1, 1, 1, -1, 1},   // pink anti
        {1, 1, 1, -1, 1, -1},    // blue
        {-1, -1, -1, 1, -1, 1},  // blue anti
    }};
    for (int b = 0; b < 6 && r.family == 0; ++b)
      for (int rot = 0; rot < 6; ++rot) {
        bool eq = true;
        for (int s = 0; s < 6; ++s)
          if (pat[s] != reps[b][(s + rot) % 6]) {
            eq = false;
            break;
          }
        if (eq) {
          r.family = b / 2 + 1;
          r.anti_orbit = b % 2;
          r.rotation = rot;
          break;
        }
      }
    // named representative regions, all for k >= 1
    auto name = [&](bool cond, const char* n) {
      if (cond) r.names.push_back(n);
    };
    name(i >= k - 1 && j >= k - 1, "1");
    name(i + j >= k - 1 && i <= -k, "1'");
    name(i >= -k && i <= k - 1 && j >= k - 1 && i + j >= k - 1, "2");
    name(i <= -k && i + j >= -k && i + j <= k - 1 && j >= k - 1, "2'");
    name(i <= k - 1 && j <= k - 1 && i + j >= k - 1, "3");
    name(i + j <= k - 1 && j >= k - 1 && i >= -k, "3'");
    region = r;
  }
};

enum class DragonKind { D, Dprime, D_half, Dprime_half };

/// Appendix coordinates of the four Aztec Dragon families.
inline Vec3 dragon(DragonKind kind, int n) {
  switch (kind) {
    case DragonKind::D:
      return {0, n, 1};
    case DragonKind::Dprime:
      return {0, n, 0};
    case DragonKind::D_half:
      return {-1, n + 1, 0};
    case DragonKind::Dprime_half:
      return {-1, n + 1, 1};
  }
  throw std::invalid_argument("bad dragon kind");
}

}  // namespace dp3

#endif  // DP3_CONTOUR_HPP
