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

#ifndef DP3_LAURENT_HPP
#define DP3_LAURENT_HPP

#include <algorithm>
#include <array>
#include <cctype>
#include <compare>
#include <cstdint>
#include <cstring>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace dp3 {

using Int = boost::multiprecision::cpp_int;

struct not_divisible : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct non_unit_into_negative_exponent : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The variable universe is fixed: ids 0..5 are x1..x6, ids 6..11 are y1..y6.
inline constexpr int kNumVars = 12;

constexpr int var_x(int i) { return i - 1; }
constexpr int var_y(int i) { return i + 5; }

inline std::string var_name(int id) {
  return (id < 6 ? "x" : "y") + std::to_string(id % 6 + 1);
}

/// Exponent vector over the fixed 12-variable universe. The all-zero vector
/// is the monomial 1. The default ordering (lexicographic on exponents) is
/// the fixed total order giving every polynomial a canonical term order.
struct Monomial {
  std::array<int16_t, kNumVars> exp{};

  auto operator<=>(const Monomial&) const = default;

  static Monomial one() { return {}; }

  static Monomial var(int id, int e = 1) {
    Monomial m;
    m.exp[static_cast<size_t>(id)] = static_cast<int16_t>(e);
    return m;
  }

  Monomial operator*(const Monomial& o) const {
    Monomial r;
    for (int i = 0; i < kNumVars; ++i)
      r.exp[i] = static_cast<int16_t>(exp[i] + o.exp[i]);
    return r;
  }

  // Division is always defined: Laurent monomials form a group.
  Monomial operator/(const Monomial& o) const {
    Monomial r;
    for (int i = 0; i < kNumVars; ++i)
      r.exp[i] = static_cast<int16_t>(exp[i] - o.exp[i]);
    return r;
  }

  bool is_one() const {
    for (int16_t e : exp)
      if (e != 0) return false;
    return true;
  }

  bool has_negative_y() const {
    for (int i = 6; i < kNumVars; ++i)
      if (exp[i] < 0) return true;
    return false;
  }
};

struct MonomialHash {
  size_t operator()(const Monomial& m) const {
    uint64_t w[3];
    std::memcpy(w, m.exp.data(), sizeof w);
    uint64_t h = 0x9e3779b97f4a7c15ull;
    for (uint64_t v : w) {
      h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h *= 0xff51afd7ed558ccdull;
    }
    return static_cast<size_t>(h);
  }
};

namespace detail {

/// Open-addressing accumulation table keyed by monomials; the workhorse for
/// large products and bulk sums (node-based maps are too slow there).
class MonoTable {
 public:
  explicit MonoTable(size_t expect) {
    size_t cap = 64;
    while (cap < expect * 2) cap <<= 1;
    keys_.resize(cap);
    vals_.resize(cap);
    used_.assign(cap, 0);
  }

  Int& slot(const Monomial& m) {
    if (count_ * 10 >= used_.size() * 7) grow();
    size_t mask = used_.size() - 1;
    size_t i = MonomialHash{}(m)&mask;
    while (used_[i]) {
      if (keys_[i] == m) return vals_[i];
      i = (i + 1) & mask;
    }
    used_[i] = 1;
    keys_[i] = m;
    ++count_;
    return vals_[i];
  }

  std::vector<std::pair<Monomial, Int>> sorted_terms() {
    std::vector<std::pair<Monomial, Int>> out;
    out.reserve(count_);
    for (size_t i = 0; i < used_.size(); ++i)
      if (used_[i] && vals_[i] != 0) out.emplace_back(keys_[i], std::move(vals_[i]));
    std::sort(out.begin(), out.end(),
              [](const auto& s, const auto& t) { return s.first < t.first; });
    return out;
  }

 private:
  void grow() {
    MonoTable bigger(used_.size() * 2);
    for (size_t i = 0; i < used_.size(); ++i)
      if (used_[i]) bigger.slot(keys_[i]) = std::move(vals_[i]);
    *this = std::move(bigger);
  }
  std::vector<Monomial> keys_;
  std::vector<Int> vals_;
  std::vector<uint8_t> used_;
  size_t count_ = 0;
};

}  // namespace detail

/// Multivariate Laurent polynomial with exact integer coefficients, stored
/// as terms sorted by the monomial order. Invariants: no zero coefficients,
/// strictly increasing monomials; structural equality is ring equality.
class LaurentPoly {
 public:
  using Term = std::pair<Monomial, Int>;
  using Terms = std::vector<Term>;

  LaurentPoly() = default;
  explicit LaurentPoly(Int c) {
    if (c != 0) terms_.emplace_back(Monomial::one(), std::move(c));
  }
  LaurentPoly(Int c, const Monomial& m) {
    if (c != 0) terms_.emplace_back(m, std::move(c));
  }

  static LaurentPoly zero() { return LaurentPoly(); }
  static LaurentPoly one() { return LaurentPoly(Int(1)); }
  static LaurentPoly variable(int id, int e = 1) {
    return LaurentPoly(Int(1), Monomial::var(id, e));
  }

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_one() const {
    return terms_.size() == 1 && terms_[0].first.is_one() && terms_[0].second == 1;
  }
  bool is_monomial() const { return terms_.size() == 1; }
  size_t term_count() const { return terms_.size(); }
  const Term& leading() const { return terms_.back(); }

  bool operator==(const LaurentPoly&) const = default;

  /// Inserts c * m, merging with an existing term. Linear in the distance
  /// from the insertion point; use an accumulator for bulk sums.
  void add_term(const Monomial& m, const Int& c) {
    if (c == 0) return;
    auto it = std::lower_bound(
        terms_.begin(), terms_.end(), m,
        [](const Term& t, const Monomial& mm) { return t.first < mm; });
    if (it != terms_.end() && it->first == m) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    } else {
      terms_.emplace(it, m, c);
    }
  }

  LaurentPoly& operator+=(const LaurentPoly& o) {
    *this = merged(*this, o, 1);
    return *this;
  }
  LaurentPoly& operator-=(const LaurentPoly& o) {
    *this = merged(*this, o, -1);
    return *this;
  }
  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
    return merged(a, b, 1);
  }
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) {
    return merged(a, b, -1);
  }
  LaurentPoly operator-() const {
    LaurentPoly r = *this;
    for (auto& [m, c] : r.terms_) c = -c;
    return r;
  }

  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    if (a.terms_.size() == 1) return b.shifted(a.terms_[0].first, a.terms_[0].second);
    if (b.terms_.size() == 1) return a.shifted(b.terms_[0].first, b.terms_[0].second);
    size_t pairs = a.terms_.size() * b.terms_.size();
    LaurentPoly r;
    if (pairs <= 65536) {
      Terms buf;
      buf.reserve(pairs);
      for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) buf.emplace_back(ma * mb, ca * cb);
      std::sort(buf.begin(), buf.end(),
                [](const Term& s, const Term& t) { return s.first < t.first; });
      r.terms_.reserve(buf.size());
      for (auto& t : buf) {
        if (!r.terms_.empty() && r.terms_.back().first == t.first) {
          r.terms_.back().second += t.second;
          if (r.terms_.back().second == 0) r.terms_.pop_back();
        } else {
          r.terms_.push_back(std::move(t));
        }
      }
    } else {
      detail::MonoTable acc(std::min(pairs / 4 + 16, static_cast<size_t>(1) << 21));
      for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_) acc.slot(ma * mb) += ca * cb;
      r.terms_ = acc.sorted_terms();
    }
    return r;
  }
  LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

  /// Multiply by a single monomial times coefficient (cheap shift).
  LaurentPoly shifted(const Monomial& m, const Int& c) const {
    LaurentPoly r;
    if (c == 0) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& [mm, cc] : terms_) r.terms_.emplace_back(mm * m, cc * c);
    return r;
  }

  bool all_coefficients_positive() const {
    for (const auto& [m, c] : terms_)
      if (c < 0) return false;
    return true;
  }

  /// No y-variable carries a negative exponent anywhere. Cluster variables
  /// of the framed quiver must satisfy this.
  bool y_exponents_nonnegative() const {
    for (const auto& [m, c] : terms_)
      if (m.has_negative_y()) return false;
    return true;
  }

  LaurentPoly substitute(const std::map<int, LaurentPoly>& assignment) const;

  std::string str() const;
  static LaurentPoly parse(std::string_view s);

  static LaurentPoly from_sorted(Terms terms) {
    LaurentPoly r;
    r.terms_ = std::move(terms);
    return r;
  }

 private:
  static LaurentPoly merged(const LaurentPoly& a, const LaurentPoly& b, int bsign) {
    LaurentPoly r;
    r.terms_.reserve(a.terms_.size() + b.terms_.size());
    auto ia = a.terms_.begin(), ib = b.terms_.begin();
    while (ia != a.terms_.end() || ib != b.terms_.end()) {
      bool take_a;
      if (ia == a.terms_.end())
        take_a = false;
      else if (ib == b.terms_.end())
        take_a = true;
      else if (ia->first == ib->first) {
        Int c = ia->second + (bsign > 0 ? ib->second : -ib->second);
        if (c != 0) r.terms_.emplace_back(ia->first, std::move(c));
        ++ia;
        ++ib;
        continue;
      } else {
        take_a = ia->first < ib->first;
      }
      if (take_a) {
        r.terms_.push_back(*ia++);
      } else {
        r.terms_.emplace_back(ib->first, bsign > 0 ? ib->second : -ib->second);
        ++ib;
      }
    }
    return r;
  }

  Terms terms_;
};

/// Order-preserving bulk accumulator for large sums of small polynomials.
class PolyAccum {
 public:
  void add(const Monomial& m, const Int& c) {
    if (c == 0) return;
    acc_.slot(m) += c;
  }
  void add(const LaurentPoly& p) {
    for (const auto& [m, c] : p.terms()) add(m, c);
  }
  LaurentPoly take() {
    auto terms = acc_.sorted_terms();
    acc_ = detail::MonoTable(64);
    return LaurentPoly::from_sorted(std::move(terms));
  }

 private:
  detail::MonoTable acc_{64};
};

/// Exact division by iterated leading-term elimination under the fixed
/// monomial order; any total order works because divisibility is exact.
/// Throws not_divisible when den does not divide num, which in this project
/// always flags a bookkeeping bug in mutation (the Laurent phenomenon
/// guarantees divisibility for legal exchanges).
inline LaurentPoly div_exact(const LaurentPoly& num, const LaurentPoly& den) {
  if (den.is_zero()) throw not_divisible("division by zero polynomial");
  if (num.is_zero()) return {};
  if (den.terms().size() == 1) {
    Monomial inv;
    for (int i = 0; i < kNumVars; ++i)
      inv.exp[i] = static_cast<int16_t>(-den.terms()[0].first.exp[i]);
    const Int& dc = den.terms()[0].second;
    LaurentPoly::Terms out;
    out.reserve(num.terms().size());
    for (const auto& [m, c] : num.terms()) {
      if (c % dc != 0) throw not_divisible("coefficient does not divide");
      out.emplace_back(m * inv, c / dc);
    }
    return LaurentPoly::from_sorted(std::move(out));
  }

  // Remainder lives in an ordered map so its leading term is rbegin();
  // quotient terms come out in decreasing order.
  std::map<Monomial, Int> rem(num.terms().begin(), num.terms().end());
  const auto& dterms = den.terms();
  const Monomial& dm = dterms.back().first;
  const Int& dc = dterms.back().second;
  LaurentPoly::Terms quot;
  while (!rem.empty()) {
    auto lead = std::prev(rem.end());
    if (lead->second % dc != 0)
      throw not_divisible("leading coefficient does not divide");
    Int qc = lead->second / dc;
    Monomial lead_mono = lead->first;
    Monomial qm = lead_mono / dm;
    quot.emplace_back(qm, qc);
    // in-place subtraction of qc * qm * den (erases the lead term itself)
    for (const auto& [m, c] : dterms) {
      Monomial target = m * qm;
      auto [it, fresh] = rem.try_emplace(target);
      if (fresh)
        it->second = -qc * c;
      else
        it->second -= qc * c;
      if (it->second == 0) rem.erase(it);
    }
    if (!rem.empty() && !(rem.rbegin()->first < lead_mono))
      throw not_divisible("remainder fails to shrink");
  }
  std::reverse(quot.begin(), quot.end());
  return LaurentPoly::from_sorted(std::move(quot));
}

inline LaurentPoly pow(const LaurentPoly& p, int e) {
  if (e < 0) {
    if (p.term_count() != 1)
      throw non_unit_into_negative_exponent("negative power of a non-monomial");
    const auto& [m, c] = p.terms()[0];
    if (c != 1 && c != -1)
      throw non_unit_into_negative_exponent(
          "negative power of a non-unit coefficient");
    Monomial r;
    for (int i = 0; i < kNumVars; ++i)
      r.exp[i] = static_cast<int16_t>(m.exp[i] * e);
    return LaurentPoly((e % 2 == 0) ? Int(1) : c, r);
  }
  LaurentPoly r = LaurentPoly::one();
  LaurentPoly base = p;
  while (e > 0) {
    if (e & 1) r *= base;
    base *= base;
    e >>= 1;
  }
  return r;
}

inline LaurentPoly LaurentPoly::substitute(
    const std::map<int, LaurentPoly>& assignment) const {
  PolyAccum out;
  for (const auto& [m, c] : terms_) {
    Monomial untouched;
    LaurentPoly factor(c);
    for (int i = 0; i < kNumVars; ++i) {
      if (m.exp[i] == 0) continue;
      auto it = assignment.find(i);
      if (it == assignment.end())
        untouched.exp[i] = m.exp[i];
      else
        factor *= pow(it->second, m.exp[i]);
    }
    out.add(factor.shifted(untouched, Int(1)));
  }
  return out.take();
}

inline std::string LaurentPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Leading term first.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    Int a = c;
    if (first) {
      if (a < 0) {
        os << "-";
        a = -a;
      }
    } else {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    first = false;
    bool printed = false;
    if (a != 1 || m.is_one()) {
      os << a;
      printed = true;
    }
    for (int i = 0; i < kNumVars; ++i) {
      if (m.exp[i] == 0) continue;
      if (printed) os << "*";
      os << var_name(i);
      if (m.exp[i] != 1) os << "^" << m.exp[i];
      printed = true;
    }
  }
  return os.str();
}

namespace detail {

struct Cursor {
  std::string_view s;
  size_t pos = 0;
  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }
  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::optional<char> peek() {
    skip_ws();
    if (pos >= s.size()) return std::nullopt;
    return s[pos];
  }
};

inline Int parse_int(Cursor& c) {
  c.skip_ws();
  bool neg = c.eat('-');
  if (!neg) c.eat('+');
  c.skip_ws();
  std::string digits;
  while (c.pos < c.s.size() &&
         std::isdigit(static_cast<unsigned char>(c.s[c.pos])))
    digits += c.s[c.pos++];
  if (digits.empty()) throw parse_error("expected integer");
  Int v(digits);
  return neg ? -v : v;
}

}  // namespace detail

inline LaurentPoly LaurentPoly::parse(std::string_view s) {
  detail::Cursor c{s};
  LaurentPoly out;
  c.skip_ws();
  if (!c.peek()) throw parse_error("empty polynomial");
  bool first = true;
  while (c.peek()) {
    Int sign = 1;
    if (c.eat('+')) {
      sign = 1;
    } else if (c.eat('-')) {
      sign = -1;
    } else if (!first) {
      throw parse_error("expected '+' or '-' between terms");
    }
    first = false;
    Int coeff = sign;
    Monomial mono;
    bool any_factor = false;
    for (;;) {
      auto p = c.peek();
      if (p && std::isdigit(static_cast<unsigned char>(*p))) {
        coeff *= detail::parse_int(c);
        any_factor = true;
      } else if (p && (*p == 'x' || *p == 'y')) {
        char kind = *p;
        ++c.pos;
        auto d = c.peek();
        if (!d || !std::isdigit(static_cast<unsigned char>(*d)))
          throw parse_error("expected variable index");
        int idx = *d - '0';
        ++c.pos;
        if (idx < 1 || idx > 6) throw parse_error("variable index out of range");
        int id = (kind == 'x') ? var_x(idx) : var_y(idx);
        int e = 1;
        if (c.eat('^')) e = static_cast<int>(detail::parse_int(c));
        mono.exp[static_cast<size_t>(id)] =
            static_cast<int16_t>(mono.exp[static_cast<size_t>(id)] + e);
        any_factor = true;
      } else {
        break;
      }
      if (!c.eat('*')) break;
    }
    if (!any_factor) throw parse_error("empty term");
    out.add_term(mono, coeff);
  }
  return out;
}

}  // namespace dp3

#endif  // DP3_LAURENT_HPP
