#pragma once

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "biorder/errors.hpp"
#include "biorder/freeword.hpp"
#include "biorder/order.hpp"

namespace biorder {

// What the wreath construction and the lexicographic extensions need from a
// base group: exact group operations plus a sign and an Archimedean
// comparison (both only queried away from the identity).
template <typename G>
concept OrderedGroup = requires(const G& g, const typename G::Element& x,
                                const typename G::Element& y) {
  typename G::Element;
  { g.identity() } -> std::same_as<typename G::Element>;
  { g.multiply(x, y) } -> std::same_as<typename G::Element>;
  { g.invert(x) } -> std::same_as<typename G::Element>;
  { g.equal(x, y) } -> std::same_as<bool>;
  { g.is_identity(x) } -> std::same_as<bool>;
  { g.sign(x) } -> std::same_as<Sign>;
  { g.arch_cmp(x, y) } -> std::same_as<ArchRel>;
  { g.str(x) } -> std::same_as<std::string>;
};

/// The free group on a, b ordered by a Magnus-family oracle.
class F2MagnusGroup {
 public:
  using Element = FreeWord;

  explicit F2MagnusGroup(F2Order order = F2Order::magnus()) : order_(std::move(order)) {}

  Element identity() const { return FreeWord(); }
  Element multiply(const Element& x, const Element& y) const { return biorder::multiply(x, y); }
  Element invert(const Element& x) const { return x.inverted(); }
  bool equal(const Element& x, const Element& y) const { return x == y; }
  bool is_identity(const Element& x) const { return x.is_identity(); }
  Sign sign(const Element& x) const { return order_.sign(x); }
  ArchRel arch_cmp(const Element& x, const Element& y) const { return order_.arch_cmp(x, y); }
  std::string str(const Element& x) const { return x.is_identity() ? "e" : x.str(); }

  const F2Order& order() const { return order_; }

  // Uniform reduced word of length 0..max_len (generator-ball sampling).
  Element sample(std::mt19937_64& rng, int max_len = 3) const {
    std::uniform_int_distribution<int> len_dist(0, max_len);
    int len = len_dist(rng);
    std::string w;
    std::uniform_int_distribution<int> first(0, 3);
    std::uniform_int_distribution<int> rest(0, 2);
    for (int i = 0; i < len; ++i) {
      if (w.empty()) {
        w.push_back(kLetters[first(rng)]);
      } else {
        int banned = letter_rank(inverse_letter(w.back()));
        int r = rest(rng);
        if (r >= banned) ++r;
        w.push_back(kLetters[r]);
      }
    }
    return FreeWord(w);
  }

 private:
  F2Order order_;
};

/// The restricted wreath product Z wr Z with the shift-dominant lexicographic
/// order: an element is a finitely supported lamp vector plus a shift, and it
/// is positive when the shift is, or failing that when the lamp of smallest
/// index is. Lamps of smaller index are archimedean-larger; the shift tops
/// them all.
class LamplighterGroup {
 public:
  struct Element {
    // (index, value) pairs, index-sorted, values nonzero.
    std::vector<std::pair<long long, long long>> lamps;
    long long shift = 0;

    friend bool operator==(const Element& x, const Element& y) {
      return x.shift == y.shift && x.lamps == y.lamps;
    }
  };

  Element identity() const { return Element{}; }

  static Element lamp(long long index, long long value = 1) {
    Element e;
    if (value != 0) e.lamps.emplace_back(index, value);
    return e;
  }

  static Element shift_by(long long k) {
    Element e;
    e.shift = k;
    return e;
  }

  Element multiply(const Element& x, const Element& y) const {
    Element out;
    out.shift = x.shift + y.shift;
    out.lamps = x.lamps;
    for (const auto& [i, v] : y.lamps) add_lamp(out.lamps, i + x.shift, v);
    return out;
  }

  Element invert(const Element& x) const {
    Element out;
    out.shift = -x.shift;
    for (const auto& [i, v] : x.lamps) add_lamp(out.lamps, i - x.shift, -v);
    return out;
  }

  bool equal(const Element& x, const Element& y) const { return x == y; }
  bool is_identity(const Element& x) const { return x.shift == 0 && x.lamps.empty(); }

  Sign sign(const Element& x) const {
    if (is_identity(x)) throw IdentityInput("sign of the identity is undefined");
    if (x.shift != 0) return x.shift > 0 ? Sign::positive : Sign::negative;
    return x.lamps.front().second > 0 ? Sign::positive : Sign::negative;
  }

  ArchRel arch_cmp(const Element& x, const Element& y) const {
    if (is_identity(x) || is_identity(y)) throw IdentityInput("archimedean class of the identity");
    bool sx = x.shift != 0, sy = y.shift != 0;
    if (sx && sy) return ArchRel::similar;
    if (sx) return ArchRel::much_greater;
    if (sy) return ArchRel::much_less;
    long long ix = x.lamps.front().first, iy = y.lamps.front().first;
    if (ix == iy) return ArchRel::similar;
    return ix < iy ? ArchRel::much_greater : ArchRel::much_less;
  }

  std::string str(const Element& x) const {
    if (is_identity(x)) return "e";
    std::string s;
    for (const auto& [i, v] : x.lamps) {
      if (!s.empty()) s += "*";
      s += "z[" + std::to_string(i) + "]^" + std::to_string(v);
    }
    if (x.shift != 0) {
      if (!s.empty()) s += "*";
      s += "t^" + std::to_string(x.shift);
    }
    return s;
  }

  Element sample(std::mt19937_64& rng, int radius = 2) const {
    std::uniform_int_distribution<long long> small(-radius, radius);
    std::uniform_int_distribution<int> count(0, 3);
    Element e;
    e.shift = small(rng);
    int n = count(rng);
    for (int i = 0; i < n; ++i) add_lamp(e.lamps, small(rng), small(rng));
    return e;
  }

 private:
  static void add_lamp(std::vector<std::pair<long long, long long>>& lamps, long long index,
                       long long value) {
    if (value == 0) return;
    auto it = std::lower_bound(lamps.begin(), lamps.end(), index,
                               [](const auto& p, long long i) { return p.first < i; });
    if (it != lamps.end() && it->first == index) {
      it->second += value;
      if (it->second == 0) lamps.erase(it);
    } else {
      lamps.insert(it, {index, value});
    }
  }
};

static_assert(OrderedGroup<F2MagnusGroup>);
static_assert(OrderedGroup<LamplighterGroup>);

}  // namespace biorder
