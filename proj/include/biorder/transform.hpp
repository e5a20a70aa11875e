#pragma once

#include <string>
#include <utility>
#include <vector>

#include "biorder/ordered_group.hpp"
#include "biorder/order.hpp"

namespace biorder {

// Order transformers. Each returns a new total bi-order of the Magnus family;
// the input is untouched.

// P -> P^-1.
inline F2Order reverse(const F2Order& o) { return o.with_reverse(); }

// Reverses the order inside the convex normal subgroup of all elements whose
// class monomial is at or beyond the threshold, and keeps it outside.
inline F2Order convex_flip(const F2Order& o, Monomial threshold) { return o.with_flip(threshold); }

// sign'(w) = sign(phi(w)) for a whitelisted automorphism phi.
inline F2Order pullback(const F2Order& o, const NielsenMap& phi) { return o.with_pullback(phi); }

// Same expansion, monomial tie-break B < A instead of A < B.
inline F2Order monomial_swap(const F2Order& o) { return o.with_monomial_swap(); }

// The canonical family the test suites quantify over: the base order, its
// reversal, the swapped-tie-break order, two class cuts, a composed cut, and
// the three single Nielsen pullbacks.
inline std::vector<F2Order> transform_family(int degree_max = kDefaultDegreeMax) {
  F2Order m = F2Order::magnus(degree_max);
  std::vector<F2Order> family;
  family.push_back(m);
  family.push_back(reverse(m));
  family.push_back(monomial_swap(m));
  family.push_back(convex_flip(m, Monomial::parse("AA")));
  family.push_back(convex_flip(m, Monomial::parse("AB")));
  family.push_back(reverse(convex_flip(m, Monomial::parse("AA"))));
  family.push_back(pullback(m, NielsenMap::move("swap")));
  family.push_back(pullback(m, NielsenMap::move("inv-a")));
  family.push_back(pullback(m, NielsenMap::move("right-mult")));
  return family;
}

// All monomials over {A, B} of degree 1..max_degree in ascending order.
inline std::vector<Monomial> class_thresholds(int max_degree) {
  std::vector<Monomial> out;
  for (int d = 1; d <= max_degree; ++d) {
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << d); ++bits) {
      out.push_back(Monomial{(std::uint64_t{1} << d) | bits});
    }
  }
  return out;
}

/// Z x H with the new generator z lexicographically dominant: z beats every
/// element of the base, which removes any peak of H.
template <OrderedGroup G>
class LexZPrepend {
 public:
  struct Element {
    long long z = 0;
    typename G::Element body;

    friend bool operator==(const Element& x, const Element& y) = default;
  };

  explicit LexZPrepend(G base) : base_(std::move(base)) {}

  Element identity() const { return Element{0, base_.identity()}; }
  Element z_gen(long long k = 1) const { return Element{k, base_.identity()}; }
  Element lift(const typename G::Element& h) const { return Element{0, h}; }

  Element multiply(const Element& x, const Element& y) const {
    return Element{x.z + y.z, base_.multiply(x.body, y.body)};
  }
  Element invert(const Element& x) const { return Element{-x.z, base_.invert(x.body)}; }
  bool equal(const Element& x, const Element& y) const {
    return x.z == y.z && base_.equal(x.body, y.body);
  }
  bool is_identity(const Element& x) const { return x.z == 0 && base_.is_identity(x.body); }

  Sign sign(const Element& x) const {
    if (is_identity(x)) throw IdentityInput("sign of the identity is undefined");
    if (x.z != 0) return x.z > 0 ? Sign::positive : Sign::negative;
    return base_.sign(x.body);
  }

  ArchRel arch_cmp(const Element& x, const Element& y) const {
    bool zx = x.z != 0, zy = y.z != 0;
    if (zx && zy) return ArchRel::similar;
    if (zx) return ArchRel::much_greater;
    if (zy) return ArchRel::much_less;
    return base_.arch_cmp(x.body, y.body);
  }

  std::string str(const Element& x) const {
    return "z^" + std::to_string(x.z) + "*" + base_.str(x.body);
  }

  const G& base() const { return base_; }

 private:
  G base_;
};

/// H x Z with the new generator z lexicographically negligible: z sits below
/// every nontrivial element of the base, which removes any bottom of H.
template <OrderedGroup G>
class LexZAppend {
 public:
  struct Element {
    typename G::Element body;
    long long z = 0;

    friend bool operator==(const Element& x, const Element& y) = default;
  };

  explicit LexZAppend(G base) : base_(std::move(base)) {}

  Element identity() const { return Element{base_.identity(), 0}; }
  Element z_gen(long long k = 1) const { return Element{base_.identity(), k}; }
  Element lift(const typename G::Element& h) const { return Element{h, 0}; }

  Element multiply(const Element& x, const Element& y) const {
    return Element{base_.multiply(x.body, y.body), x.z + y.z};
  }
  Element invert(const Element& x) const { return Element{base_.invert(x.body), -x.z}; }
  bool equal(const Element& x, const Element& y) const {
    return x.z == y.z && base_.equal(x.body, y.body);
  }
  bool is_identity(const Element& x) const { return x.z == 0 && base_.is_identity(x.body); }

  Sign sign(const Element& x) const {
    if (is_identity(x)) throw IdentityInput("sign of the identity is undefined");
    if (!base_.is_identity(x.body)) return base_.sign(x.body);
    return x.z > 0 ? Sign::positive : Sign::negative;
  }

  ArchRel arch_cmp(const Element& x, const Element& y) const {
    bool bx = !base_.is_identity(x.body), by = !base_.is_identity(y.body);
    if (bx && by) return base_.arch_cmp(x.body, y.body);
    if (bx) return ArchRel::much_greater;
    if (by) return ArchRel::much_less;
    return ArchRel::similar;  // two powers of z
  }

  std::string str(const Element& x) const {
    return base_.str(x.body) + "*z^" + std::to_string(x.z);
  }

  const G& base() const { return base_; }

 private:
  G base_;
};

}  // namespace biorder
