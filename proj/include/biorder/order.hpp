#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "biorder/errors.hpp"
#include "biorder/freeword.hpp"
#include "biorder/magnus.hpp"

namespace biorder {

enum class Sign { negative, positive };

inline Sign flip(Sign s) { return s == Sign::positive ? Sign::negative : Sign::positive; }
inline char sign_char(Sign s) { return s == Sign::positive ? '+' : '-'; }
inline std::string sign_str(Sign s) { return std::string(1, sign_char(s)); }
inline Sign parse_sign(std::string_view t) {
  if (t == "+") return Sign::positive;
  if (t == "-") return Sign::negative;
  throw Error("invalid sign '" + std::string(t) + "'");
}

enum class Cmp { less, equal, greater };

// Archimedean comparison: much_less means every power of |x| stays below |y|.
enum class ArchRel { much_less, similar, much_greater };

inline std::string arch_str(ArchRel r) {
  switch (r) {
    case ArchRel::much_less: return "<<";
    case ArchRel::similar: return "~~";
    default: return ">>";
  }
}

// An automorphism of the free group built from a whitelist of Nielsen moves:
//   swap       a <-> b
//   inv-a      a -> a^-1, b -> b
//   right-mult a -> ab,   b -> b
// Restricting to this closure keeps well-definedness a construction fact.
class NielsenMap {
 public:
  NielsenMap() : image_a_("a"), image_b_("b") {}

  static const std::vector<std::string>& whitelist() {
    static const std::vector<std::string> names = {"swap", "inv-a", "right-mult"};
    return names;
  }

  static NielsenMap move(std::string_view name) {
    NielsenMap m;
    m.moves_.emplace_back(name);
    if (name == "swap") {
      m.image_a_ = FreeWord("b");
      m.image_b_ = FreeWord("a");
    } else if (name == "inv-a") {
      m.image_a_ = FreeWord("A");
      m.image_b_ = FreeWord("b");
    } else if (name == "right-mult") {
      m.image_a_ = FreeWord("ab");
      m.image_b_ = FreeWord("b");
    } else {
      throw Error("unknown Nielsen move '" + std::string(name) + "'");
    }
    return m;
  }

  static NielsenMap compose(const std::vector<std::string>& names) {
    NielsenMap m;
    for (const auto& n : names) m = m.then(n);
    return m;
  }

  // The composition "this, then the named move".
  NielsenMap then(std::string_view name) const {
    NielsenMap next = move(name);
    NielsenMap out;
    out.moves_ = moves_;
    out.moves_.emplace_back(name);
    out.image_a_ = next.apply(image_a_);
    out.image_b_ = next.apply(image_b_);
    return out;
  }

  FreeWord apply(const FreeWord& w) const {
    std::string out;
    out.reserve(w.length() * 2);
    for (std::size_t i = 0; i < w.length(); ++i) {
      switch (w.letter(i)) {
        case 'a': out += image_a_.str(); break;
        case 'A': out += image_a_.inverted().str(); break;
        case 'b': out += image_b_.str(); break;
        case 'B': out += image_b_.inverted().str(); break;
      }
    }
    return FreeWord(out);
  }

  bool is_identity_map() const {
    return image_a_ == FreeWord("a") && image_b_ == FreeWord("b");
  }

  const FreeWord& image_a() const { return image_a_; }
  const FreeWord& image_b() const { return image_b_; }
  const std::vector<std::string>& moves() const { return moves_; }

  std::string label() const {
    if (moves_.empty()) return "id";
    std::string s;
    for (const auto& m : moves_) {
      if (!s.empty()) s += ".";
      s += m;
    }
    return s;
  }

 private:
  std::vector<std::string> moves_;
  FreeWord image_a_, image_b_;
};

/// A total bi-order on the free group, given by its sign function. Every
/// member of the family evaluates the same way: substitute a Nielsen map,
/// read off the leading term of the Magnus expansion under the chosen
/// monomial order, then apply class-cut flips and an optional reversal.
class F2Order {
 public:
  static F2Order magnus(int degree_max = kDefaultDegreeMax) {
    F2Order o;
    o.degree_max_ = degree_max;
    return o;
  }

  Sign sign(const FreeWord& w) const {
    if (w.is_identity()) throw IdentityInput("sign of the identity is undefined");
    LeadingTerm lt = leading_term(pre_.apply(w), order_, degree_max_);
    Sign s = lt.coefficient > 0 ? Sign::positive : Sign::negative;
    for (Monomial t : flips_) {
      if (!monomial_less(lt.monomial, t, order_)) s = flip(s);
    }
    if (reversed_) s = flip(s);
    return s;
  }

  Cmp compare(const FreeWord& u, const FreeWord& v) const {
    if (u == v) return Cmp::equal;
    return sign(multiply(u.inverted(), v)) == Sign::positive ? Cmp::less : Cmp::greater;
  }

  // The Archimedean class, represented by the leading monomial. Conjugation
  // leaves it fixed, and class order is monomial order reversed.
  Monomial arch_class(const FreeWord& w) const {
    if (w.is_identity()) throw IdentityInput("the identity has no Archimedean class");
    return leading_term(pre_.apply(w), order_, degree_max_).monomial;
  }

  ArchRel arch_cmp(const FreeWord& x, const FreeWord& y) const {
    Monomial mx = arch_class(x);
    Monomial my = arch_class(y);
    if (mx == my) return ArchRel::similar;
    // Earlier monomial = shallower in the series = archimedean-larger element.
    return monomial_less(mx, my, order_) ? ArchRel::much_greater : ArchRel::much_less;
  }

  FreeWord abs(const FreeWord& w) const {
    if (w.is_identity()) return w;
    return sign(w) == Sign::positive ? w : w.inverted();
  }

  const std::string& label() const { return label_; }
  int degree_max() const { return degree_max_; }
  MonomialOrder monomial_order() const { return order_; }
  const NielsenMap& premap() const { return pre_; }

  nlohmann::json descriptor() const {
    return nlohmann::json{{"base", "magnus"},
                          {"degree", std::to_string(degree_max_)},
                          {"transforms", transforms_}};
  }

  static F2Order from_descriptor(const nlohmann::json& d);

  // Transform builders; the free functions in transform.hpp are the public face.
  F2Order with_reverse() const {
    F2Order o = *this;
    o.reversed_ = !o.reversed_;
    o.transforms_.push_back({{"kind", "reverse"}});
    o.label_ = "reverse(" + label_ + ")";
    return o;
  }

  F2Order with_flip(Monomial threshold) const {
    if (threshold.is_constant()) throw Error("convex flip threshold must be a nonconstant monomial");
    F2Order o = *this;
    o.flips_.push_back(threshold);
    o.transforms_.push_back({{"kind", "convex-flip"}, {"threshold", threshold.str()}});
    o.label_ = "convex-flip[" + threshold.str() + "](" + label_ + ")";
    return o;
  }

  F2Order with_monomial_swap() const {
    if (!flips_.empty()) {
      throw Error("monomial-swap after a convex flip is not supported");
    }
    F2Order o = *this;
    o.order_ = (order_ == MonomialOrder::lex_ab) ? MonomialOrder::lex_ba : MonomialOrder::lex_ab;
    o.transforms_.push_back({{"kind", "monomial-swap"}});
    o.label_ = "monomial-swap(" + label_ + ")";
    return o;
  }

  F2Order with_pullback(const NielsenMap& phi) const {
    F2Order o = *this;
    // sign'(w) = sign(phi(w)), so the stored substitution becomes pre . phi.
    NielsenMap composed = phi;
    for (const auto& mv : pre_.moves()) composed = composed.then(mv);
    o.pre_ = composed;
    o.transforms_.push_back({{"kind", "pullback"}, {"maps", phi.moves()}});
    o.label_ = "pullback[" + phi.label() + "](" + label_ + ")";
    return o;
  }

  bool same_descriptor(const F2Order& other) const {
    return descriptor() == other.descriptor();
  }

 private:
  F2Order() = default;

  NielsenMap pre_;
  MonomialOrder order_ = MonomialOrder::lex_ab;
  std::vector<Monomial> flips_;
  bool reversed_ = false;
  int degree_max_ = kDefaultDegreeMax;
  nlohmann::json transforms_ = nlohmann::json::array();
  std::string label_ = "magnus";
};

inline F2Order F2Order::from_descriptor(const nlohmann::json& d) {
  if (!d.is_object() || d.value("base", "") != std::string("magnus")) {
    throw Error("unsupported order descriptor");
  }
  int degree = kDefaultDegreeMax;
  if (d.contains("degree")) {
    const auto& deg = d.at("degree");
    degree = deg.is_string() ? std::stoi(deg.get<std::string>()) : deg.get<int>();
  }
  F2Order o = F2Order::magnus(degree);
  if (!d.contains("transforms")) return o;
  for (const auto& t : d.at("transforms")) {
    std::string kind = t.at("kind").get<std::string>();
    if (kind == "reverse") {
      o = o.with_reverse();
    } else if (kind == "monomial-swap") {
      o = o.with_monomial_swap();
    } else if (kind == "convex-flip") {
      o = o.with_flip(Monomial::parse(t.at("threshold").get<std::string>()));
    } else if (kind == "pullback") {
      o = o.with_pullback(NielsenMap::compose(t.at("maps").get<std::vector<std::string>>()));
    } else {
      throw Error("unknown transform kind '" + kind + "'");
    }
  }
  return o;
}

}  // namespace biorder
