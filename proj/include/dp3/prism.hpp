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

#ifndef DP3_PRISM_HPP
#define DP3_PRISM_HPP

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <queue>
#include <stdexcept>
#include <tuple>
#include <vector>

namespace dp3 {

struct Vec3 {
  int x = 0, y = 0, z = 0;
  auto operator<=>(const Vec3&) const = default;
};

/// Positions of the six prism vertices in Z^3, indexed by label 1..6.
/// Labels 1,4,5 always share one z-plane and 2,3,6 the other; the pairs
/// {1,2}, {3,4}, {5,6} always sit on vertical unit edges.
struct PrismState {
  std::array<Vec3, 6> pos;

  static PrismState initial() {
    PrismState p;
    p.pos = {Vec3{0, -1, 1}, Vec3{0, -1, 0}, Vec3{-1, 0, 0},
             Vec3{-1, 0, 1}, Vec3{0, 0, 1},  Vec3{0, 0, 0}};
    return p;
  }

  Vec3& at(int label) { return pos[static_cast<size_t>(label - 1)]; }
  const Vec3& at(int label) const {
    return pos[static_cast<size_t>(label - 1)];
  }

  bool operator==(const PrismState&) const = default;
};

/// tau_1/2/3 reflect the named vertical edge through the centroid of the
/// other four vertices and swap the two labels; tau_4/5 mirror one triangle
/// face through the plane of the other, labels staying put.
inline PrismState tau_on_prism(const PrismState& p, int t) {
  PrismState q = p;
  auto reflect_pair = [&](int a, int b, std::array<int, 4> rest) {
    long cx = 0, cy = 0, cz = 0;
    for (int r : rest) {
      cx += p.at(r).x;
      cy += p.at(r).y;
      cz += p.at(r).z;
    }
    // 2*centroid - v, with centroid = (sum)/4; sums of prism rectangles are
    // divisible by 2 coordinatewise.
    auto refl = [&](const Vec3& v) {
      return Vec3{static_cast<int>(cx / 2 - v.x), static_cast<int>(cy / 2 - v.y),
                  static_cast<int>(cz / 2 - v.z)};
    };
    // mutate both then swap labels
    Vec3 na = refl(p.at(b));
    Vec3 nb = refl(p.at(a));
    q.at(a) = na;
    q.at(b) = nb;
  };
  auto mirror_triangle = [&](std::array<int, 3> moving, int anchor) {
    int plane = p.at(anchor).z;
    for (int m : moving) q.at(m).z = 2 * plane - p.at(m).z;
  };
  switch (t) {
    case 1:
      reflect_pair(1, 2, {3, 4, 5, 6});
      break;
    case 2:
      reflect_pair(3, 4, {1, 2, 5, 6});
      break;
    case 3:
      reflect_pair(5, 6, {1, 2, 3, 4});
      break;
    case 4:
      mirror_triangle({1, 4, 5}, 2);
      break;
    case 5:
      mirror_triangle({2, 3, 6}, 1);
      break;
    default:
      throw std::invalid_argument("tau index must be 1..5");
  }
  return q;
}

struct TauPlan {
  std::vector<int> word;  // taus applied left to right from the initial prism
  int label = 0;          // label sitting at the target after replay
};

/// Finds a tau-word carrying some prism label to `target`, by breadth-first
/// search over prism states inside a box around origin and target. The word
/// is shortest; among labels reaching the target the smallest is returned.
inline TauPlan tau_word_to_point(const Vec3& target) {
  // State: (x,y) of the three vertical pairs plus the two z-planes.
  using State = std::array<int, 8>;  // x12,y12,x34,y34,x56,y56,zA,zB
  auto encode = [](const PrismState& p) {
    return State{p.at(1).x, p.at(1).y, p.at(3).x, p.at(3).y,
                 p.at(5).x, p.at(5).y, p.at(1).z, p.at(2).z};
  };

  auto label_at_target = [&](const State& s) -> int {
    // zA carries labels 1,4,5; zB carries 2,3,6.
    struct L {
      int label, x, y, z;
    };
    const L layout[6] = {{1, s[0], s[1], s[6]}, {2, s[0], s[1], s[7]},
                         {3, s[2], s[3], s[7]}, {4, s[2], s[3], s[6]},
                         {5, s[4], s[5], s[6]}, {6, s[4], s[5], s[7]}};
    for (const L& l : layout)
      if (l.x == target.x && l.y == target.y && l.z == target.z) return l.label;
    return 0;
  };

  for (int margin = 2;; margin += 2) {
    int lox = std::min(-1, target.x) - margin, hix = std::max(0, target.x) + margin;
    int loy = std::min(-1, target.y) - margin, hiy = std::max(0, target.y) + margin;
    int loz = std::min(0, target.z) - margin, hiz = std::max(1, target.z) + margin;
    auto in_box = [&](const State& s) {
      for (int i = 0; i < 6; i += 2)
        if (s[i] < lox || s[i] > hix || s[i + 1] < loy || s[i + 1] > hiy)
          return false;
      return s[6] >= loz && s[6] <= hiz && s[7] >= loz && s[7] <= hiz;
    };

    State start = encode(PrismState::initial());
    std::map<State, std::pair<State, int>> prev;
    std::queue<State> q;
    prev.emplace(start, std::make_pair(start, 0));
    q.push(start);
    while (!q.empty()) {
      State s = q.front();
      q.pop();
      if (int label = label_at_target(s); label != 0) {
        TauPlan plan;
        plan.label = label;
        for (State cur = s; prev.at(cur).second != 0; cur = prev.at(cur).first)
          plan.word.push_back(prev.at(cur).second);
        std::reverse(plan.word.begin(), plan.word.end());
        return plan;
      }
      for (int t = 1; t <= 5; ++t) {
        State n = s;
        switch (t) {
          case 1:
            n[0] = s[2] + s[4] - s[0];
            n[1] = s[3] + s[5] - s[1];
            break;
          case 2:
            n[2] = s[0] + s[4] - s[2];
            n[3] = s[1] + s[5] - s[3];
            break;
          case 3:
            n[4] = s[0] + s[2] - s[4];
            n[5] = s[1] + s[3] - s[5];
            break;
          case 4:
            n[6] = 2 * s[7] - s[6];
            break;
          case 5:
            n[7] = 2 * s[6] - s[7];
            break;
        }
        if (!in_box(n) || prev.count(n)) continue;
        prev.emplace(n, std::make_pair(s, t));
        q.push(n);
      }
    }
    // Box exhausted without reaching the target; widen and retry.
  }
}

}  // namespace dp3

#endif  // DP3_PRISM_HPP
