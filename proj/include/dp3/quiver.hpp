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

#ifndef DP3_QUIVER_HPP
#define DP3_QUIVER_HPP

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dp3/laurent.hpp"
#include "dp3/prism.hpp"

namespace dp3 {

struct frozen_vertex : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Directed multigraph on vertices 1..n_mutable (+ frozen n_mutable+1..).
/// Arrows are a multiset of ordered pairs; no loops or 2-cycles survive a
/// mutation, and arrows between two frozen vertices are dropped.
struct Quiver {
  int n_mutable = 6;
  int n_frozen = 0;
  std::map<std::pair<int, int>, int> arrows;  // (src,dst) -> multiplicity

  bool operator==(const Quiver&) const = default;

  int count(int u, int v) const {
    auto it = arrows.find({u, v});
    return it == arrows.end() ? 0 : it->second;
  }

  void add(int u, int v, int mult = 1) {
    if (mult == 0) return;
    auto [it, inserted] = arrows.emplace(std::make_pair(u, v), mult);
    if (!inserted) {
      it->second += mult;
      if (it->second == 0) arrows.erase(it);
    }
  }

  bool is_frozen(int v) const { return v > n_mutable; }

  int in_degree(int v) const {
    int d = 0;
    for (const auto& [e, m] : arrows)
      if (e.second == v) d += m;
    return d;
  }
  int out_degree(int v) const {
    int d = 0;
    for (const auto& [e, m] : arrows)
      if (e.first == v) d += m;
    return d;
  }

  /// Quiver mutation at v: complete 2-paths through v, reverse arrows at v,
  /// cancel 2-cycles. Frozen-frozen arrows are discarded.
  void mutate(int v) {
    if (is_frozen(v)) throw frozen_vertex("mutation at a frozen vertex");
    std::vector<std::pair<int, int>> in, out;  // (vertex, multiplicity)
    for (const auto& [e, m] : arrows) {
      if (e.second == v) in.emplace_back(e.first, m);
      if (e.first == v) out.emplace_back(e.second, m);
    }
    for (const auto& [j, mj] : in)
      for (const auto& [k, mk] : out) {
        if (is_frozen(j) && is_frozen(k)) continue;
        add(j, k, mj * mk);
      }
    for (const auto& [j, mj] : in) {
      add(j, v, -mj);
      add(v, j, mj);
    }
    for (const auto& [k, mk] : out) {
      add(v, k, -mk);
      add(k, v, mk);
    }
    // cancel 2-cycles
    for (auto it = arrows.begin(); it != arrows.end();) {
      auto [u, w] = it->first;
      if (u < w) {
        int back = count(w, u);
        if (back > 0) {
          int c = std::min(it->second, back);
          add(w, u, -c);
          it->second -= c;
          if (it->second == 0) {
            it = arrows.erase(it);
            continue;
          }
        }
      }
      ++it;
    }
  }

  /// Relabel mutable vertices: arrow u->w becomes sigma[u]->sigma[w].
  /// sigma is 1-based over mutable vertices; frozen labels stay put.
  Quiver relabeled(const std::array<int, 6>& sigma) const {
    Quiver q;
    q.n_mutable = n_mutable;
    q.n_frozen = n_frozen;
    auto map = [&](int v) { return v <= 6 ? sigma[static_cast<size_t>(v - 1)] : v; };
    for (const auto& [e, m] : arrows) q.add(map(e.first), map(e.second), m);
    return q;
  }
};

inline bool is_toric(const Quiver& q, int v) {
  return q.in_degree(v) == 2 && q.out_degree(v) == 2;
}

/// The dP3 quiver: a 6-cycle through 1,3,5,2,4,6 plus two 3-cycles on the
/// alternating vertex sets {1,5,4} and {3,2,6}. Framing adds one frozen
/// vertex i+6 and one arrow v_i -> v_{i+6} per mutable vertex.
inline Quiver dp3_quiver(bool framed = false) {
  Quiver q;
  q.n_mutable = 6;
  const int hex[6] = {1, 3, 5, 2, 4, 6};
  const int tri_a[3] = {1, 5, 4};
  const int tri_b[3] = {3, 2, 6};
  for (int i = 0; i < 6; ++i) q.add(hex[i], hex[(i + 1) % 6]);
  for (int i = 0; i < 3; ++i) {
    q.add(tri_a[i], tri_a[(i + 1) % 3]);
    q.add(tri_b[i], tri_b[(i + 1) % 3]);
  }
  if (framed) {
    q.n_frozen = 6;
    for (int i = 1; i <= 6; ++i) q.add(i, i + 6);
  }
  return q;
}

/// Framed or unframed seed: quiver, ordered cluster, frozen coefficients,
/// and the prism tracking which lattice point each cluster position
/// corresponds to.
struct Seed {
  Quiver quiver;
  std::array<LaurentPoly, 6> cluster;
  std::array<LaurentPoly, 6> coeffs;
  PrismState prism;
  bool framed = false;

  bool operator==(const Seed&) const = default;

  static Seed initial(bool framed) {
    Seed s;
    s.framed = framed;
    s.quiver = dp3_quiver(framed);
    for (int i = 1; i <= 6; ++i) {
      s.cluster[static_cast<size_t>(i - 1)] = LaurentPoly::variable(var_x(i));
      s.coeffs[static_cast<size_t>(i - 1)] = LaurentPoly::variable(var_y(i));
    }
    s.prism = PrismState::initial();
    return s;
  }

  const LaurentPoly& variable_at(int v) const {
    if (v <= 6) return cluster[static_cast<size_t>(v - 1)];
    return coeffs[static_cast<size_t>(v - 7)];
  }
};

/// Seed mutation: binomial exchange at v with exact division, then the
/// quiver move. Frozen variables enter the products but are never mutated.
inline Seed mutate(const Seed& s, int v) {
  if (v < 1 || v > 6) throw frozen_vertex("can only mutate vertices 1..6");
  Seed r = s;
  LaurentPoly out_prod = LaurentPoly::one();
  LaurentPoly in_prod = LaurentPoly::one();
  for (const auto& [e, m] : s.quiver.arrows) {
    if (e.first == v) out_prod *= pow(s.variable_at(e.second), m);
    if (e.second == v) in_prod *= pow(s.variable_at(e.first), m);
  }
  r.cluster[static_cast<size_t>(v - 1)] =
      div_exact(out_prod + in_prod, s.cluster[static_cast<size_t>(v - 1)]);
  r.quiver.mutate(v);
  return r;
}

namespace detail {

struct TauDef {
  std::vector<int> word;     // mutations, applied left to right
  std::array<int, 6> sigma;  // relabeling: position l's content moves to sigma[l-1]
};

inline const TauDef& tau_def(int t) {
  static const std::array<TauDef, 5> defs = {{
      {{1, 2}, {2, 1, 3, 4, 5, 6}},
      {{3, 4}, {1, 2, 4, 3, 5, 6}},
      {{5, 6}, {1, 2, 3, 4, 6, 5}},
      {{1, 4, 1, 5, 1}, {4, 2, 3, 5, 1, 6}},  // (145): 1->4, 4->5, 5->1
      {{2, 3, 2, 6, 2}, {1, 3, 6, 4, 5, 2}},  // (236): 2->3, 3->6, 6->2
  }};
  if (t < 1 || t > 5) throw std::invalid_argument("tau index must be 1..5");
  return defs[static_cast<size_t>(t - 1)];
}

}  // namespace detail

/// Applies tau_t: its mutation word left to right, then the relabeling on
/// cluster positions and quiver labels, and the matching prism move.
/// An optional hook observes each intermediate mutation vertex (used by
/// tests to confirm every step lands on a toric vertex).
template <typename Hook>
Seed apply_tau(const Seed& s, int t, Hook&& on_mutation) {
  const auto& def = detail::tau_def(t);
  Seed cur = s;
  for (int v : def.word) {
    on_mutation(cur, v);
    cur = mutate(cur, v);
  }
  Seed out = cur;
  out.quiver = cur.quiver.relabeled(def.sigma);
  for (int l = 1; l <= 6; ++l)
    out.cluster[static_cast<size_t>(def.sigma[static_cast<size_t>(l - 1)] - 1)] =
        cur.cluster[static_cast<size_t>(l - 1)];
  out.prism = tau_on_prism(s.prism, t);
  return out;
}

inline Seed apply_tau(const Seed& s, int t) {
  return apply_tau(s, t, [](const Seed&, int) {});
}

inline Seed apply_tau_word(const Seed& s, const std::vector<int>& word) {
  Seed cur = s;
  for (int t : word) cur = apply_tau(cur, t);
  return cur;
}

/// The mutation-engine oracle: the cluster variable sitting at a lattice
/// point, computed by replaying a planned tau-word from the initial seed.
inline LaurentPoly cluster_var_at_point(const Vec3& target, bool framed) {
  TauPlan plan = tau_word_to_point(target);
  Seed s = apply_tau_word(Seed::initial(framed), plan.word);
  return s.cluster[static_cast<size_t>(plan.label - 1)];
}

}  // namespace dp3

#endif  // DP3_QUIVER_HPP
