#pragma once

#include <functional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "biorder/errors.hpp"
#include "biorder/ordered_group.hpp"

namespace biorder {

/// The restricted wreath product Z wr_Omega H over an ordered base group H
/// with a designated archimedean gap (lo, hi), lo << hi. Omega is the set of
/// left cosets of M = {h : lo^h ~ lo}, and the added generator z is ordered
/// strictly between the gap endpoints, which is what removes the gap.
///
/// An element is head * prod_i (z^{k_i})^{c_i M} in normal form: coset
/// representatives canonicalized, equal cosets merged, zero exponents
/// dropped, entries sorted by the coset-symbol order. Writing the conjugate
/// x^y = y x y^-1 and moving heads left through the tails gives
///   x * y   : each left-factor coset cM re-bases to (y.head^-1 c)M,
///   x^-1    : head^-1, each (c, k) becomes (head*c, -k).
template <OrderedGroup G>
class WreathProduct {
 public:
  using Base = G;
  using BaseElement = typename G::Element;
  using CanonicalRep = std::function<BaseElement(const G&, const BaseElement&)>;

  struct Element {
    BaseElement head;
    std::vector<std::pair<BaseElement, long long>> tail;  // (coset rep, exponent)
  };

  WreathProduct(G base, BaseElement gap_low, BaseElement gap_high, CanonicalRep canonical_rep)
      : base_(std::move(base)),
        lo_(std::move(gap_low)),
        hi_(std::move(gap_high)),
        rep_(std::move(canonical_rep)) {
    if (base_.arch_cmp(lo_, hi_) != ArchRel::much_less) {
      throw PreconditionFailed("gap pair must satisfy lo << hi");
    }
  }

  const G& base() const { return base_; }
  const BaseElement& gap_low() const { return lo_; }
  const BaseElement& gap_high() const { return hi_; }

  Element identity() const { return Element{base_.identity(), {}}; }
  Element lift(const BaseElement& h) const { return Element{h, {}}; }

  Element z_at(const BaseElement& coset_rep, long long k = 1) const {
    Element e{base_.identity(), {{coset_rep, k}}};
    normalize(e);
    return e;
  }
  Element z(long long k = 1) const { return z_at(base_.identity(), k); }

  bool is_identity(const Element& x) const {
    return base_.is_identity(x.head) && x.tail.empty();
  }

  bool equal(const Element& x, const Element& y) const {
    if (!base_.equal(x.head, y.head) || x.tail.size() != y.tail.size()) return false;
    for (std::size_t i = 0; i < x.tail.size(); ++i) {
      if (x.tail[i].second != y.tail[i].second) return false;
      if (!coset_eq(x.tail[i].first, y.tail[i].first)) return false;
    }
    return true;
  }

  Element multiply(const Element& x, const Element& y) const {
    Element out;
    out.head = base_.multiply(x.head, y.head);
    BaseElement shift = base_.invert(y.head);
    out.tail.reserve(x.tail.size() + y.tail.size());
    for (const auto& [c, k] : x.tail) out.tail.emplace_back(base_.multiply(shift, c), k);
    for (const auto& [c, k] : y.tail) out.tail.emplace_back(c, k);
    normalize(out);
    return out;
  }

  Element invert(const Element& x) const {
    Element out;
    out.head = base_.invert(x.head);
    out.tail.reserve(x.tail.size());
    for (const auto& [c, k] : x.tail) out.tail.emplace_back(base_.multiply(x.head, c), -k);
    normalize(out);
    return out;
  }

  Element power(const Element& x, long long n) const {
    if (n < 0) return power(invert(x), -n);
    Element r = identity();
    for (long long i = 0; i < n; ++i) r = multiply(r, x);
    return r;
  }

  // M-membership of c2^-1 c1, i.e. whether c1 and c2 name the same coset.
  bool coset_eq(const BaseElement& c1, const BaseElement& c2) const {
    BaseElement d = base_.multiply(base_.invert(c2), c1);
    if (base_.is_identity(d)) return true;
    return base_.arch_cmp(conj(lo_, d), lo_) == ArchRel::similar;
  }

  // Rule 1: z^{c1 M} << z^{c2 M} iff lo^{c1} << lo^{c2} (and the cosets differ).
  ArchRel symbol_cmp(const BaseElement& c1, const BaseElement& c2) const {
    if (coset_eq(c1, c2)) return ArchRel::similar;
    return base_.arch_cmp(conj(lo_, c1), conj(lo_, c2));
  }

  // Rule 2: h << z^{cM} if h << hi^c, and h >> z^{cM} if h >> lo^c. The gap
  // property makes these two cases exhaustive for h != 1.
  ArchRel base_vs_symbol(const BaseElement& h, const BaseElement& c) const {
    if (base_.is_identity(h)) return ArchRel::much_less;
    if (base_.arch_cmp(h, conj(hi_, c)) == ArchRel::much_less) return ArchRel::much_less;
    if (base_.arch_cmp(h, conj(lo_, c)) == ArchRel::much_greater) return ArchRel::much_greater;
    throw Error("element sits strictly inside the designated gap; not a gap");
  }

  // A coset symbol z^{cM}, named by a representative.
  struct CosetSymbol {
    BaseElement rep;
  };
  using Operand = std::variant<BaseElement, CosetSymbol>;

  // The extended much-less comparison on base elements and coset symbols.
  ArchRel cmp_much(const Operand& u, const Operand& v) const {
    if (std::holds_alternative<CosetSymbol>(u)) {
      const auto& cu = std::get<CosetSymbol>(u).rep;
      if (std::holds_alternative<CosetSymbol>(v)) {
        return symbol_cmp(cu, std::get<CosetSymbol>(v).rep);
      }
      return reversed(base_vs_symbol(std::get<BaseElement>(v), cu));
    }
    const auto& hu = std::get<BaseElement>(u);
    if (std::holds_alternative<CosetSymbol>(v)) {
      return base_vs_symbol(hu, std::get<CosetSymbol>(v).rep);
    }
    return base_.arch_cmp(hu, std::get<BaseElement>(v));
  }

  // The positive cone: compare the head with the largest coset symbol of the
  // tail; whichever dominates contributes its sign.
  Sign sign(const Element& x) const {
    if (is_identity(x)) throw IdentityInput("sign of the identity is undefined");
    if (x.tail.empty()) return base_.sign(x.head);
    const auto& top = x.tail.back();  // tail sorted ascending by symbol order
    ArchRel rel = base_vs_symbol(x.head, top.first);
    if (rel == ArchRel::much_greater) return base_.sign(x.head);
    return top.second > 0 ? Sign::positive : Sign::negative;
  }

  struct GapCheck {
    bool lower_holds = false;   // z * lo^-n positive for n = 1..power_bound
    bool upper_holds = false;   // hi * z^-n positive for n = 1..power_bound
    bool sanity_inverted_fails = false;  // the same test on (z, z) must fail
    int power_bound = 0;
  };

  // Certifies lo << z << hi inside the extension, at sampled powers.
  GapCheck gap_elimination_check(int power_bound = 8) const {
    GapCheck r;
    r.power_bound = power_bound;
    r.lower_holds = dominates(z(), lift(lo_), power_bound);
    r.upper_holds = dominates(lift(hi_), z(), power_bound);
    r.sanity_inverted_fails = !dominates(z(), z(), power_bound);
    return r;
  }

  std::string str(const Element& x) const {
    std::string s = base_.str(x.head);
    for (const auto& [c, k] : x.tail) {
      s += " (z^" + std::to_string(k) + ")^[" + base_.str(c) + "]";
    }
    return s;
  }

  Element sample(std::mt19937_64& rng, const std::function<BaseElement(std::mt19937_64&)>& base_sampler,
                 int max_tail = 3, int max_exp = 3) const {
    std::uniform_int_distribution<int> tail_count(0, max_tail);
    std::uniform_int_distribution<int> exp_dist(-max_exp, max_exp);
    Element e;
    e.head = base_sampler(rng);
    int n = tail_count(rng);
    for (int i = 0; i < n; ++i) {
      long long k = exp_dist(rng);
      if (k != 0) e.tail.emplace_back(base_sampler(rng), k);
    }
    normalize(e);
    return e;
  }

 private:
  static ArchRel reversed(ArchRel r) {
    if (r == ArchRel::much_less) return ArchRel::much_greater;
    if (r == ArchRel::much_greater) return ArchRel::much_less;
    return r;
  }

  BaseElement conj(const BaseElement& x, const BaseElement& g) const {
    return base_.multiply(base_.multiply(g, x), base_.invert(g));
  }

  // x > y^n for n = 1..bound, evidenced by sign(x * y^-n) = +.
  bool dominates(const Element& x, const Element& y, int bound) const {
    for (int n = 1; n <= bound; ++n) {
      Element p = multiply(x, power(invert(y), n));
      if (is_identity(p) || sign(p) != Sign::positive) return false;
    }
    return true;
  }

  void normalize(Element& e) const {
    std::vector<std::pair<BaseElement, long long>> merged;
    for (auto& [c, k] : e.tail) {
      if (k == 0) continue;
      BaseElement cc = rep_(base_, c);
      bool found = false;
      for (auto& [mc, mk] : merged) {
        if (coset_eq(mc, cc)) {
          mk += k;
          found = true;
          break;
        }
      }
      if (!found) merged.emplace_back(std::move(cc), k);
    }
    std::erase_if(merged, [](const auto& p) { return p.second == 0; });
    // Insertion sort by the symbol order (tails are short).
    std::vector<std::pair<BaseElement, long long>> sorted;
    for (auto& entry : merged) {
      auto it = sorted.begin();
      while (it != sorted.end() && symbol_cmp(it->first, entry.first) == ArchRel::much_less) ++it;
      sorted.insert(it, std::move(entry));
    }
    e.tail = std::move(sorted);
  }

  G base_;
  BaseElement lo_, hi_;
  CanonicalRep rep_;
};

// The free-group instance: conjugation fixes every archimedean class, so M is
// the whole group, Omega is a single coset, and the extension degenerates to
// Z x F2 with z wedged between the classes of b and a.
inline WreathProduct<F2MagnusGroup> make_f2_magnus_wreath(F2Order order = F2Order::magnus()) {
  F2MagnusGroup base(std::move(order));
  return WreathProduct<F2MagnusGroup>(
      base, FreeWord("b"), FreeWord("a"),
      [](const F2MagnusGroup& g, const FreeWord&) { return g.identity(); });
}

// The lamplighter instance: the gap (z_1, z_0) has M = the zero-shift
// subgroup, so Omega is indexed by the shift and conjugation genuinely moves
// cosets around.
inline WreathProduct<LamplighterGroup> make_lamplighter_wreath() {
  LamplighterGroup base;
  return WreathProduct<LamplighterGroup>(
      base, LamplighterGroup::lamp(1), LamplighterGroup::lamp(0),
      [](const LamplighterGroup&, const LamplighterGroup::Element& c) {
        return LamplighterGroup::shift_by(c.shift);
      });
}

struct WreathSuiteReport {
  std::size_t samples = 0;
  std::size_t associativity_violations = 0;
  std::size_t identity_violations = 0;
  std::size_t inverse_violations = 0;
  std::size_t double_inverse_violations = 0;
  std::size_t cone_product_checked = 0;
  std::size_t cone_product_violations = 0;
  std::size_t cone_conjugation_checked = 0;
  std::size_t cone_conjugation_violations = 0;
  std::size_t trichotomy_checked = 0;
  std::size_t trichotomy_violations = 0;
  std::size_t coset_subgroup_checked = 0;
  std::size_t coset_subgroup_violations = 0;
  std::size_t gap_sampled_checked = 0;
  std::size_t gap_sampled_violations = 0;
  bool gap_lower = false;
  bool gap_upper = false;
  bool gap_sanity = false;

  std::size_t total_violations() const {
    return associativity_violations + identity_violations + inverse_violations +
           double_inverse_violations + cone_product_violations + cone_conjugation_violations +
           trichotomy_violations + coset_subgroup_violations + gap_sampled_violations;
  }
};

// Randomized group-axiom and cone-axiom suite plus the gap certificate.
template <OrderedGroup G>
WreathSuiteReport run_wreath_suite(const WreathProduct<G>& w,
                                   const std::function<typename G::Element(std::mt19937_64&)>& base_sampler,
                                   std::size_t samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  WreathSuiteReport r;
  r.samples = samples;
  using Element = typename WreathProduct<G>::Element;

  auto sample_positive = [&](std::mt19937_64& gen) -> Element {
    for (;;) {
      Element e = w.sample(gen, base_sampler);
      if (w.is_identity(e)) continue;
      if (w.sign(e) == Sign::positive) return e;
    }
  };

  for (std::size_t i = 0; i < samples; ++i) {
    Element x = w.sample(rng, base_sampler);
    Element y = w.sample(rng, base_sampler);
    Element zz = w.sample(rng, base_sampler);

    if (!w.equal(w.multiply(w.multiply(x, y), zz), w.multiply(x, w.multiply(y, zz))))
      ++r.associativity_violations;
    if (!w.equal(w.multiply(x, w.identity()), x) || !w.equal(w.multiply(w.identity(), x), x))
      ++r.identity_violations;
    if (!w.is_identity(w.multiply(x, w.invert(x))) || !w.is_identity(w.multiply(w.invert(x), x)))
      ++r.inverse_violations;
    if (!w.equal(w.invert(w.invert(x)), x)) ++r.double_inverse_violations;

    Element p = sample_positive(rng);
    Element q = sample_positive(rng);
    Element pq = w.multiply(p, q);
    ++r.cone_product_checked;
    if (w.is_identity(pq) || w.sign(pq) != Sign::positive) ++r.cone_product_violations;

    Element c = w.multiply(w.multiply(x, p), w.invert(x));
    ++r.cone_conjugation_checked;
    if (w.is_identity(c) || w.sign(c) != Sign::positive) ++r.cone_conjugation_violations;

    if (!w.is_identity(x)) {
      ++r.trichotomy_checked;
      if (w.sign(x) != flip(w.sign(w.invert(x)))) ++r.trichotomy_violations;
    }

    // M is closed under products: two M-members multiply to an M-member.
    auto m1 = base_sampler(rng);
    auto m2 = base_sampler(rng);
    const auto& base = w.base();
    if (w.coset_eq(m1, base.identity()) && w.coset_eq(m2, base.identity())) {
      ++r.coset_subgroup_checked;
      if (!w.coset_eq(base.multiply(m1, m2), base.identity())) ++r.coset_subgroup_violations;
    }

    // The pair really is a gap on the sampled ball: nothing lies strictly
    // between the classes of lo and hi.
    auto b = base_sampler(rng);
    if (!base.is_identity(b)) {
      ++r.gap_sampled_checked;
      if (base.arch_cmp(b, w.gap_low()) == ArchRel::much_greater &&
          base.arch_cmp(b, w.gap_high()) == ArchRel::much_less)
        ++r.gap_sampled_violations;
    }
  }

  auto gap = w.gap_elimination_check(8);
  r.gap_lower = gap.lower_holds;
  r.gap_upper = gap.upper_holds;
  r.gap_sanity = gap.sanity_inverted_fails;
  return r;
}

}  // namespace biorder
