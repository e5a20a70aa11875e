#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "biorder/errors.hpp"
#include "biorder/freeword.hpp"

namespace biorder {

using Int = boost::multiprecision::cpp_int;

// A word over the abstract letters {A, B}, encoded as (1 << degree) | bits
// with A = 0, B = 1 and the first letter in the most significant bit. The
// empty monomial (the constant term) has key 1. With this encoding plain
// integer comparison is exactly degree-then-lex order with A < B.
struct Monomial {
  std::uint64_t key = 1;

  int degree() const { return std::bit_width(key) - 1; }
  bool is_constant() const { return key == 1; }

  static Monomial letter_a() { return Monomial{2}; }
  static Monomial letter_b() { return Monomial{3}; }

  // Pure power A^k or B^k.
  static Monomial pow(bool letter_b, int k) {
    std::uint64_t bits = letter_b ? ((std::uint64_t{1} << k) - 1) : 0;
    return Monomial{(std::uint64_t{1} << k) | bits};
  }

  friend Monomial operator*(Monomial m1, Monomial m2) {
    int d2 = m2.degree();
    std::uint64_t mask = (std::uint64_t{1} << d2) - 1;
    return Monomial{(m1.key << d2) | (m2.key & mask)};
  }

  friend bool operator==(Monomial x, Monomial y) { return x.key == y.key; }
  friend bool operator!=(Monomial x, Monomial y) { return x.key != y.key; }

  std::string str() const {
    if (key == 1) return "1";
    std::string s;
    int d = degree();
    for (int i = d - 1; i >= 0; --i) s.push_back((key >> i) & 1 ? 'B' : 'A');
    return s;
  }

  static Monomial parse(std::string_view text) {
    if (text == "1" || text.empty()) return Monomial{};
    if (text.size() > 62) throw Error("monomial too long");
    std::uint64_t k = 1;
    for (char c : text) {
      if (c == 'A') k = k << 1;
      else if (c == 'B') k = (k << 1) | 1;
      else throw Error(std::string("invalid monomial letter '") + c + "'");
    }
    return Monomial{k};
  }
};

// Within a degree the tie-break is either A < B or B < A. Either choice
// refines degree order, and any such order yields a bi-invariant cone.
enum class MonomialOrder { lex_ab, lex_ba };

inline bool monomial_less(Monomial x, Monomial y, MonomialOrder order) {
  if (order == MonomialOrder::lex_ab) return x.key < y.key;
  int dx = x.degree(), dy = y.degree();
  if (dx != dy) return dx < dy;
  std::uint64_t mask = (std::uint64_t{1} << dx) - 1;
  return ((x.key & mask) ^ mask) < ((y.key & mask) ^ mask);
}

struct LeadingTerm {
  Monomial monomial;
  Int coefficient;
};

/// Truncated integer series in the noncommuting letters A, B: the image of a
/// free-group word under a |-> 1 + A, a^-1 |-> 1 - A + A^2 - ..., and the
/// same with B for b. Terms of degree above the bound are dropped.
class MagnusSeries {
 public:
  explicit MagnusSeries(int degree_bound) : bound_(degree_bound) {
    if (degree_bound < 1) throw Error("degree bound must be >= 1");
    if (degree_bound > 62) throw Error("degree bound above 62 is not representable");
  }

  static MagnusSeries one(int degree_bound) {
    MagnusSeries s(degree_bound);
    s.terms_.emplace_back(1, Int(1));
    return s;
  }

  static MagnusSeries letter(char c, int degree_bound) {
    MagnusSeries s(degree_bound);
    bool is_b = (c == 'b' || c == 'B');
    bool inv = (c == 'A' || c == 'B');
    if (!inv) {
      s.terms_.emplace_back(1, Int(1));
      s.terms_.emplace_back(Monomial::pow(is_b, 1).key, Int(1));
    } else {
      // Geometric series (1 + X)^-1 truncated: alternating signs.
      for (int k = 0; k <= degree_bound; ++k) {
        s.terms_.emplace_back(Monomial::pow(is_b, k).key, Int(k % 2 == 0 ? 1 : -1));
      }
    }
    return s;
  }

  static MagnusSeries expand(const FreeWord& w, int degree_bound) {
    MagnusSeries s = one(degree_bound);
    for (std::size_t i = 0; i < w.length(); ++i) {
      s = s.times(letter(w.letter(i), degree_bound));
    }
    return s;
  }

  MagnusSeries times(const MagnusSeries& other) const {
    MagnusSeries out(bound_);
    std::vector<std::pair<std::uint64_t, Int>> raw;
    raw.reserve(terms_.size() * 2);
    for (const auto& [k1, c1] : terms_) {
      int d1 = Monomial{k1}.degree();
      for (const auto& [k2, c2] : other.terms_) {
        if (d1 + Monomial{k2}.degree() > bound_) break;  // other's terms sorted by key, degree ascending
        raw.emplace_back((Monomial{k1} * Monomial{k2}).key, c1 * c2);
      }
    }
    std::sort(raw.begin(), raw.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    for (auto& [k, c] : raw) {
      if (!out.terms_.empty() && out.terms_.back().first == k) {
        out.terms_.back().second += c;
      } else {
        out.terms_.emplace_back(k, std::move(c));
      }
    }
    std::erase_if(out.terms_, [](const auto& t) { return t.second == 0; });
    return out;
  }

  Int coefficient(Monomial m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m.key,
                               [](const auto& t, std::uint64_t k) { return t.first < k; });
    if (it != terms_.end() && it->first == m.key) return it->second;
    return Int(0);
  }

  // First non-constant term in the given monomial order, if any.
  std::optional<LeadingTerm> leading(MonomialOrder order) const {
    auto it = terms_.begin();
    if (it != terms_.end() && it->first == 1) ++it;
    if (it == terms_.end()) return std::nullopt;
    // Terms are key-sorted, so the first present degree forms a contiguous run.
    int d = Monomial{it->first}.degree();
    LeadingTerm best{Monomial{it->first}, it->second};
    for (++it; it != terms_.end() && Monomial{it->first}.degree() == d; ++it) {
      if (monomial_less(Monomial{it->first}, best.monomial, order)) {
        best = {Monomial{it->first}, it->second};
      }
    }
    return best;
  }

  int degree_bound() const { return bound_; }
  const std::vector<std::pair<std::uint64_t, Int>>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [k, c] : terms_) {
      Int a = c < 0 ? Int(-c) : c;
      if (out.empty()) {
        if (c < 0) out += "-";
      } else {
        out += c < 0 ? " - " : " + ";
      }
      std::string mono = Monomial{k}.str();
      if (a != 1 || mono == "1") {
        out += a.str();
        if (mono != "1") out += "*";
      }
      if (mono != "1") out += mono;
    }
    return out;
  }

  friend bool operator==(const MagnusSeries& x, const MagnusSeries& y) {
    return x.terms_ == y.terms_;
  }

 private:
  int bound_;
  std::vector<std::pair<std::uint64_t, Int>> terms_;  // key-sorted, nonzero
};

inline constexpr int kDefaultDegreeMax = 32;

namespace detail {

// Coefficient of AB in the expansion: sum over pairs (a-letter before
// b-letter) of the product of their signs. Computable in one pass.
inline long long commutator_coefficient(const FreeWord& w) {
  long long run_a = 0, e = 0;
  for (std::size_t i = 0; i < w.length(); ++i) {
    switch (w.letter(i)) {
      case 'a': ++run_a; break;
      case 'A': --run_a; break;
      case 'b': e += run_a; break;
      case 'B': e -= run_a; break;
    }
  }
  return e;
}

}  // namespace detail

// Leading term of expand(w) - 1, found at the smallest adequate degree.
// Degree-1 and degree-2 leading terms are read off in closed form (exponent
// sums; the AB coefficient for balanced words, whose AA/BB coefficients
// vanish identically); deeper words fall back to the exact expansion with a
// doubling degree ladder up to degree_max.
inline LeadingTerm leading_term(const FreeWord& w, MonomialOrder order,
                                int degree_max = kDefaultDegreeMax) {
  if (w.is_identity()) throw IdentityInput("leading term of the identity is undefined");
  long long ea = w.exponent_a();
  long long eb = w.exponent_b();
  if (ea != 0 || eb != 0) {
    bool pick_a = (order == MonomialOrder::lex_ab) ? (ea != 0) : (eb == 0);
    return pick_a ? LeadingTerm{Monomial::letter_a(), Int(ea)}
                  : LeadingTerm{Monomial::letter_b(), Int(eb)};
  }
  long long e = detail::commutator_coefficient(w);
  if (e != 0) {
    if (degree_max < 2) {
      throw TruncationExceeded("series of '" + w.str() + "' is constant up to degree " +
                               std::to_string(degree_max));
    }
    return (order == MonomialOrder::lex_ab)
               ? LeadingTerm{Monomial::parse("AB"), Int(e)}
               : LeadingTerm{Monomial::parse("BA"), Int(-e)};
  }
  int d = std::min(4, degree_max);
  for (;;) {
    auto lt = MagnusSeries::expand(w, d).leading(order);
    if (lt) return *lt;
    if (d >= degree_max) {
      throw TruncationExceeded("series of '" + w.str() + "' is constant up to degree " +
                               std::to_string(degree_max));
    }
    d = std::min(2 * d, degree_max);
  }
}

}  // namespace biorder
