#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "biorder/errors.hpp"
#include "biorder/freeword.hpp"
#include "biorder/homeo.hpp"
#include "biorder/order.hpp"

namespace biorder {

/// A finite stage of the order-preserving embedding into the rationals:
/// the first n ShortLex words, each assigned the midpoint of its order
/// neighbors (or an endpoint plus/minus one). All realized maps share one
/// bounding interval so they can be composed.
struct Stage {
  F2Order order;
  std::vector<FreeWord> elements;                 // ShortLex order
  std::vector<FreeWord> by_order;                 // ascending in the group order
  std::unordered_map<std::string, Rational> t;    // word -> embedding value
  Rational box_lo, box_hi;

  bool contains(const FreeWord& w) const { return t.count(w.str()) > 0; }
  const Rational& t_of(const FreeWord& w) const {
    auto it = t.find(w.str());
    if (it == t.end()) throw Error("word '" + w.str() + "' is not in the stage");
    return it->second;
  }
  // Affine rescale of the bounding interval onto [0,1].
  Rational rescale(const Rational& x) const { return (x - box_lo) / (box_hi - box_lo); }
};

// Greedy midpoint embedding over the first n ShortLex words.
inline Stage build_embedding(const F2Order& order, std::size_t n) {
  if (n == 0) throw Error("a stage needs at least the identity");
  Stage s{order, {}, {}, {}, Rational(0), Rational(0)};
  s.elements = enumerate_words(n);
  for (const auto& w : s.elements) {
    // Position among the already-inserted elements.
    auto it = std::lower_bound(s.by_order.begin(), s.by_order.end(), w,
                               [&](const FreeWord& u, const FreeWord& v) {
                                 return order.compare(u, v) == Cmp::less;
                               });
    Rational value;
    if (s.by_order.empty()) {
      value = Rational(0);
    } else if (it == s.by_order.begin()) {
      value = s.t.at(it->str()) - 1;
    } else if (it == s.by_order.end()) {
      value = s.t.at((it - 1)->str()) + 1;
    } else {
      value = (s.t.at((it - 1)->str()) + s.t.at(it->str())) / 2;
    }
    s.t.emplace(w.str(), value);
    s.by_order.insert(it, w);
  }
  s.box_lo = s.t.at(s.by_order.front().str()) - 1;
  s.box_hi = s.t.at(s.by_order.back().str()) + 1;
  return s;
}

// Control points of left multiplication by g, in embedding coordinates:
// (t(h), t(gh)) for every h with both h and gh in the stage.
inline std::vector<std::pair<Rational, Rational>> control_points(const FreeWord& g,
                                                                 const Stage& s) {
  std::vector<std::pair<Rational, Rational>> pts;
  for (const auto& h : s.by_order) {
    FreeWord gh = multiply(g, h);
    if (s.contains(gh)) pts.emplace_back(s.t_of(h), s.t_of(gh));
  }
  return pts;  // x-sorted since by_order is ascending and t is order-preserving
}

// The PL realization of g on the stage's bounding interval, rescaled to [0,1].
inline RationalPLMap realize(const FreeWord& g, const Stage& s) {
  auto controls = control_points(g, s);
  if (controls.empty()) throw EmptySupport("no pair (h, gh) lies in the stage");
  std::vector<RationalPLMap::Point> pts;
  pts.reserve(controls.size() + 2);
  pts.emplace_back(Rational(0), Rational(0));
  for (const auto& [x, y] : controls) pts.emplace_back(s.rescale(x), s.rescale(y));
  pts.emplace_back(Rational(1), Rational(1));
  return RationalPLMap::from_breakpoints(std::move(pts));
}

struct HomomorphismReport {
  std::size_t points_checked = 0;
  bool vacuous = false;
  bool passed = true;
};

// rho(g1 g2) agrees with rho(g1) . rho(g2) at every stage point whose whole
// orbit segment lies in the stage.
inline HomomorphismReport check_homomorphism(const FreeWord& g1, const FreeWord& g2,
                                             const Stage& s) {
  HomomorphismReport r;
  RationalPLMap f1, f2, f12;
  try {
    f1 = realize(g1, s);
    f2 = realize(g2, s);
    f12 = realize(multiply(g1, g2), s);
  } catch (const EmptySupport&) {
    r.vacuous = true;
    return r;
  }
  FreeWord g12 = multiply(g1, g2);
  for (const auto& h : s.by_order) {
    if (!s.contains(multiply(g2, h)) || !s.contains(multiply(g12, h))) continue;
    Rational x = s.rescale(s.t_of(h));
    if (f12(x) != f1(f2(x))) r.passed = false;
    ++r.points_checked;
  }
  r.vacuous = (r.points_checked == 0);
  return r;
}

struct PositivityReport {
  std::size_t points_checked = 0;
  std::size_t strict_points = 0;
  bool passed = true;
};

// A positive g translates every stage point upward: t(gh) > t(h).
inline PositivityReport check_positivity(const FreeWord& g, const Stage& s) {
  if (g.is_identity() || s.order.sign(g) != Sign::positive) {
    throw NotPositive("check_positivity requires a positive word");
  }
  PositivityReport r;
  for (const auto& h : s.by_order) {
    FreeWord gh = multiply(g, h);
    if (!s.contains(gh)) continue;
    ++r.points_checked;
    const Rational& a = s.t_of(h);
    const Rational& b = s.t_of(gh);
    if (b < a) r.passed = false;
    if (b > a) ++r.strict_points;
  }
  if (r.points_checked > 0 && r.strict_points == 0) r.passed = false;
  return r;
}

/// A removed middle-third interval of the Cantor construction, addressed by
/// the descent path: '0' = left third, '2' = right third.
struct GapInterval {
  std::string address;
  Rational lo, hi;

  friend bool operator==(const GapInterval& x, const GapInterval& y) {
    return x.lo == y.lo && x.hi == y.hi;
  }
  friend bool operator<(const GapInterval& x, const GapInterval& y) { return x.lo < y.lo; }
};

inline GapInterval cantor_gap(const std::string& address) {
  Rational lo(0), len(1);
  for (char c : address) {
    len /= 3;
    if (c == '2') {
      lo += 2 * len;
    } else if (c != '0') {
      throw Error("gap address must be over {0,2}");
    }
  }
  return GapInterval{address, lo + len / 3, lo + 2 * len / 3};
}

// A gap strictly between two gaps, found by descending into the construction
// interval that separates them.
inline GapInterval gap_between(const GapInterval& lhs, const GapInterval& rhs) {
  if (!(lhs.lo < rhs.lo)) throw PreconditionFailed("gap_between requires lhs < rhs");
  const Rational& a = lhs.hi;  // zone to search: (lhs.hi, rhs.lo)
  const Rational& b = rhs.lo;
  std::string addr;
  for (int depth = 0; depth < 4096; ++depth) {
    GapInterval g = cantor_gap(addr);
    if (g.hi <= a) {
      addr.push_back('2');
    } else if (b <= g.lo) {
      addr.push_back('0');
    } else if (a <= g.lo && g.hi <= b) {
      return g;
    } else {
      throw Error("gap endpoints do not separate");  // cannot happen for genuine gaps
    }
  }
  throw Error("gap_between descent did not terminate");
}

/// The archimedean classes of all words up to a length bound, mapped
/// order-preservingly onto Cantor gaps: the smallest class gets the root gap
/// and each next class a one-step-deeper right-extreme gap.
struct ClassAtlas {
  F2Order order;
  int length_bound = 0;
  std::vector<std::pair<Monomial, GapInterval>> entries;  // ascending in class order

  const GapInterval& gap_of(Monomial cls) const {
    for (const auto& [m, g] : entries) {
      if (m == cls) return g;
    }
    throw Error("class " + cls.str() + " is not in the atlas");
  }
  const GapInterval& gap_of_word(const FreeWord& w) const { return gap_of(order.arch_class(w)); }
  // t(g): the left endpoint of the gap assigned to g's class.
  const Rational& left_endpoint(const FreeWord& w) const { return gap_of_word(w).lo; }
};

inline ClassAtlas build_tau(const F2Order& order, int length_bound) {
  std::vector<Monomial> classes;
  for (const auto& w : words_up_to(static_cast<std::size_t>(length_bound))) {
    Monomial m = order.arch_class(w);
    if (std::find(classes.begin(), classes.end(), m) == classes.end()) classes.push_back(m);
  }
  // Ascending archimedean order = descending monomial order.
  std::sort(classes.begin(), classes.end(), [&](Monomial x, Monomial y) {
    return monomial_less(y, x, order.monomial_order());
  });
  ClassAtlas atlas{order, length_bound, {}};
  std::string addr;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (i > 0) addr.push_back('2');
    atlas.entries.emplace_back(classes[i], cantor_gap(addr));
  }
  return atlas;
}

inline nlohmann::json stage_json(const Stage& s, const ClassAtlas* atlas = nullptr) {
  nlohmann::json tvals = nlohmann::json::array();
  for (const auto& w : s.elements) {
    tvals.push_back({{"word", w.str()}, {"value", rational_str(s.t_of(w))}});
  }
  nlohmann::json j{{"order", s.order.descriptor()},
                   {"N", std::to_string(s.elements.size())},
                   {"box", {rational_str(s.box_lo), rational_str(s.box_hi)}},
                   {"t", tvals}};
  if (atlas) {
    nlohmann::json tau = nlohmann::json::array();
    for (const auto& [m, g] : atlas->entries) {
      tau.push_back({{"class", m.str()},
                     {"address", g.address},
                     {"endpoints", {rational_str(g.lo), rational_str(g.hi)}}});
    }
    j["tau"] = tau;
  }
  return j;
}

}  // namespace biorder
