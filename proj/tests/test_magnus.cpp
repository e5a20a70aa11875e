#include <catch_amalgamated.hpp>

#include <map>
#include <random>
#include <string>

#include "biorder/magnus.hpp"
#include "biorder/order.hpp"

using namespace biorder;

namespace {

// Test-side series arithmetic over plain string monomials, independent of the
// packed-key representation.
using NaiveSeries = std::map<std::string, long long>;

NaiveSeries naive_letter(char c, int bound) {
  NaiveSeries s;
  bool is_b = (c == 'b' || c == 'B');
  bool inv = (c == 'A' || c == 'B');
  std::string x = is_b ? "B" : "A";
  if (!inv) {
    s[""] = 1;
    s[x] = 1;
  } else {
    std::string m;
    for (int k = 0; k <= bound; ++k) {
      s[m] = (k % 2 == 0) ? 1 : -1;
      m += x;
    }
  }
  return s;
}

NaiveSeries naive_times(const NaiveSeries& p, const NaiveSeries& q, int bound) {
  NaiveSeries out;
  for (const auto& [m1, c1] : p) {
    for (const auto& [m2, c2] : q) {
      if (m1.size() + m2.size() > static_cast<std::size_t>(bound)) continue;
      out[m1 + m2] += c1 * c2;
    }
  }
  std::erase_if(out, [](const auto& t) { return t.second == 0; });
  return out;
}

NaiveSeries naive_expand(const FreeWord& w, int bound) {
  NaiveSeries s{{"", 1}};
  for (std::size_t i = 0; i < w.length(); ++i) {
    s = naive_times(s, naive_letter(w.letter(i), bound), bound);
  }
  return s;
}

NaiveSeries to_naive(const MagnusSeries& s) {
  NaiveSeries out;
  for (const auto& [k, c] : s.terms()) {
    Monomial m{k};
    out[m.is_constant() ? "" : m.str()] = static_cast<long long>(c);
  }
  return out;
}

FreeWord random_reduced(std::mt19937_64& rng, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> first(0, 3);
  std::uniform_int_distribution<int> rest(0, 2);
  std::string w;
  int n = len(rng);
  for (int i = 0; i < n; ++i) {
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

}  // namespace

TEST_CASE("monomial encoding and order", "[magnus]") {
  CHECK(Monomial::parse("AB").str() == "AB");
  CHECK(Monomial::parse("AB").degree() == 2);
  CHECK(Monomial{}.is_constant());
  CHECK((Monomial::parse("A") * Monomial::parse("BA")).str() == "ABA");

  // Degree first, then lex: A < B < AA < AB < BA < BB.
  auto lt = [](const char* x, const char* y, MonomialOrder o) {
    return monomial_less(Monomial::parse(x), Monomial::parse(y), o);
  };
  CHECK(lt("A", "B", MonomialOrder::lex_ab));
  CHECK(lt("B", "AA", MonomialOrder::lex_ab));
  CHECK(lt("AA", "AB", MonomialOrder::lex_ab));
  CHECK(lt("AB", "BA", MonomialOrder::lex_ab));
  // Swapped tie-break: B < A within each degree, degrees still ascending.
  CHECK(lt("B", "A", MonomialOrder::lex_ba));
  CHECK(lt("A", "BB", MonomialOrder::lex_ba));
  CHECK(lt("BB", "BA", MonomialOrder::lex_ba));
  CHECK(lt("BA", "AB", MonomialOrder::lex_ba));
  CHECK(lt("AB", "AA", MonomialOrder::lex_ba));
}

TEST_CASE("expand matches the defining substitution", "[magnus]") {
  CHECK(MagnusSeries::expand(FreeWord("a"), 2).str() == "1 + A");
  CHECK(to_naive(MagnusSeries::expand(FreeWord("a"), 2)) == NaiveSeries{{"", 1}, {"A", 1}});
  CHECK(to_naive(MagnusSeries::expand(FreeWord("A"), 2)) ==
        NaiveSeries{{"", 1}, {"A", -1}, {"AA", 1}});
  // Commutator at degree 2: hand-checked product oracle.
  CHECK(to_naive(MagnusSeries::expand(FreeWord("abAB"), 2)) ==
        naive_expand(FreeWord("abAB"), 2));
  CHECK(to_naive(MagnusSeries::expand(FreeWord("abAB"), 2)) ==
        NaiveSeries{{"", 1}, {"AB", 1}, {"BA", -1}});
  CHECK(MagnusSeries::expand(FreeWord(), 5).str() == "1");

  SECTION("agrees with the naive expansion on random words") {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 120; ++i) {
      FreeWord w = random_reduced(rng, 6);
      CHECK(to_naive(MagnusSeries::expand(w, 4)) == naive_expand(w, 4));
    }
  }

  SECTION("multiplicative modulo the degree bound") {
    std::mt19937_64 rng(22);
    for (int i = 0; i < 80; ++i) {
      FreeWord u = random_reduced(rng, 5);
      FreeWord v = random_reduced(rng, 5);
      auto product = MagnusSeries::expand(u, 5).times(MagnusSeries::expand(v, 5));
      CHECK(to_naive(product) == to_naive(MagnusSeries::expand(multiply(u, v), 5)));
    }
  }
}

TEST_CASE("leading term fast paths equal the full expansion", "[magnus]") {
  std::mt19937_64 rng(23);
  for (MonomialOrder order : {MonomialOrder::lex_ab, MonomialOrder::lex_ba}) {
    for (int i = 0; i < 400; ++i) {
      FreeWord w = random_reduced(rng, 8);
      if (w.is_identity()) continue;
      LeadingTerm fast = leading_term(w, order);
      auto full = MagnusSeries::expand(w, 10).leading(order);
      REQUIRE(full.has_value());
      CHECK(fast.monomial == full->monomial);
      CHECK(fast.coefficient == full->coefficient);
    }
  }
}

TEST_CASE("deep leading terms via the expansion ladder", "[magnus]") {
  // [a,b][a^-1,b] has zero exponent sums and zero commutator coefficient, so
  // the closed-form paths pass and the exact expansion takes over.
  FreeWord w("abABAbaB");
  CHECK(w.exponent_a() == 0);
  CHECK(w.exponent_b() == 0);
  LeadingTerm lt = leading_term(w, MonomialOrder::lex_ab);
  CHECK(lt.monomial.degree() == 3);
  auto full = MagnusSeries::expand(w, 6).leading(MonomialOrder::lex_ab);
  REQUIRE(full.has_value());
  CHECK(lt.monomial == full->monomial);
  CHECK(lt.coefficient == full->coefficient);

  SECTION("no word of length <= 6 reaches class degree 3") {
    // Balanced words of length 6 always carry a nonzero commutator
    // coefficient once reduced; the shortest deeper words have length 8.
    for (const auto& v : words_up_to(6)) {
      CHECK(leading_term(v, MonomialOrder::lex_ab).monomial.degree() <= 2);
    }
  }
}

TEST_CASE("sign oracle", "[magnus]") {
  F2Order o = F2Order::magnus();
  CHECK(o.sign(FreeWord("a")) == Sign::positive);
  CHECK(o.sign(FreeWord("abAB")) == Sign::positive);  // leading AB, coefficient +1
  CHECK(o.sign(FreeWord("Ba")) == Sign::positive);    // leading A, so b < a
  CHECK_THROWS_AS(o.sign(FreeWord()), IdentityInput);

  SECTION("degree cap is honoured") {
    F2Order capped = F2Order::magnus(1);
    CHECK_THROWS_AS(capped.sign(FreeWord("abAB")), TruncationExceeded);
  }
}

TEST_CASE("compare", "[magnus]") {
  F2Order o = F2Order::magnus();
  CHECK(o.compare(FreeWord("b"), FreeWord("a")) == Cmp::less);
  CHECK(o.compare(FreeWord("a"), FreeWord("a")) == Cmp::equal);
  CHECK(o.compare(FreeWord("abAB"), FreeWord()) == Cmp::greater);
}

TEST_CASE("archimedean classes", "[magnus]") {
  F2Order o = F2Order::magnus();
  CHECK(o.arch_cmp(FreeWord("b"), FreeWord("a")) == ArchRel::much_less);
  CHECK(o.arch_cmp(FreeWord("a"), FreeWord("a")) == ArchRel::similar);
  CHECK(o.arch_cmp(FreeWord("abAB"), FreeWord("b")) == ArchRel::much_less);
  CHECK(o.arch_class(FreeWord("abAB")).str() == "AB");

  SECTION("b << a definitionally: a^n > b and a > b^n for n <= 8") {
    for (int n = 1; n <= 8; ++n) {
      CHECK(o.compare(power(FreeWord("a"), n), FreeWord("b")) == Cmp::greater);
      CHECK(o.compare(FreeWord("a"), power(FreeWord("b"), n)) == Cmp::greater);
    }
  }

  SECTION("definitional cross-check on all pairs of words of length <= 4") {
    auto words = words_up_to(4);
    for (const auto& x : words) {
      for (const auto& y : words) {
        ArchRel rel = o.arch_cmp(x, y);
        FreeWord ax = o.abs(x), ay = o.abs(y);
        if (rel == ArchRel::much_greater) {
          for (int n = 1; n <= 8; ++n) {
            CHECK(o.compare(ax, power(ay, n)) == Cmp::greater);
          }
        } else if (rel == ArchRel::similar) {
          bool x_bounded = false, y_bounded = false;
          for (int k = 1; k <= 8 && !(x_bounded && y_bounded); ++k) {
            if (o.compare(ax, power(ay, k)) == Cmp::less) x_bounded = true;
            if (o.compare(ay, power(ax, k)) == Cmp::less) y_bounded = true;
          }
          CHECK(x_bounded);
          CHECK(y_bounded);
        }
      }
    }
  }

  SECTION("conjugation fixes classes (words <= 4, conjugators <= 3)") {
    for (const auto& w : words_up_to(4)) {
      for (const auto& g : words_up_to(3)) {
        CHECK(o.arch_cmp(conjugate(w, g), w) == ArchRel::similar);
      }
    }
  }
}

TEST_CASE("absolute value", "[magnus]") {
  F2Order o = F2Order::magnus();
  CHECK(o.abs(FreeWord("A")).str() == "a");
  CHECK(o.abs(FreeWord("abAB")).str() == "abAB");
  CHECK(o.abs(FreeWord()).is_identity());
}

TEST_CASE("bi-order axioms at small scale", "[magnus]") {
  F2Order o = F2Order::magnus();
  auto words = words_up_to(4);
  for (const auto& w : words) {
    CHECK(o.sign(w.inverted()) == flip(o.sign(w)));
  }
  std::mt19937_64 rng(24);
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  for (int i = 0; i < 2000; ++i) {
    FreeWord u = words[pick(rng)];
    FreeWord v = words[pick(rng)];
    if (o.sign(u) != Sign::positive || o.sign(v) != Sign::positive) continue;
    FreeWord uv = multiply(u, v);
    REQUIRE(!uv.is_identity());
    CHECK(o.sign(uv) == Sign::positive);
  }
  for (int i = 0; i < 1000; ++i) {
    FreeWord w = words[pick(rng)];
    FreeWord g = words[pick(rng)];
    CHECK(o.sign(conjugate(w, g)) == o.sign(w));
  }
}
