#include <catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "biorder/cones.hpp"
#include "biorder/transform.hpp"

using namespace biorder;

namespace {

// Brute-force census oracle: enumerate every total sign assignment on the
// canonical words of length <= L and filter by the axioms directly.
int brute_force_census(const std::vector<std::pair<FreeWord, Sign>>& seeds, int L, int Lc,
                       ConeMode mode) {
  std::vector<FreeWord> canonical;
  for (const auto& w : words_up_to(L)) {
    if (canonical_of_pair(w) == w) canonical.push_back(w);
  }
  auto conjugators = words_up_to(Lc);
  int count = 0;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << canonical.size()); ++bits) {
    std::map<std::string, Sign> sigma;
    for (std::size_t i = 0; i < canonical.size(); ++i) {
      Sign s = (bits >> i) & 1 ? Sign::positive : Sign::negative;
      sigma[canonical[i].str()] = s;
      sigma[canonical[i].inverted().str()] = flip(s);
    }
    bool ok = true;
    for (const auto& [w, s] : seeds) {
      if (sigma.at(w.str()) != s) ok = false;
    }
    std::vector<FreeWord> all = words_up_to(L);
    for (std::size_t i = 0; ok && i < all.size(); ++i) {
      for (std::size_t j = 0; ok && j < all.size(); ++j) {
        if (sigma.at(all[i].str()) != sigma.at(all[j].str())) continue;
        FreeWord p = multiply(all[i], all[j]);
        if (!p.is_identity() && static_cast<int>(p.length()) <= L &&
            sigma.at(p.str()) != sigma.at(all[i].str())) {
          ok = false;
        }
      }
      if (ok && mode == ConeMode::bi_order) {
        for (const auto& g : conjugators) {
          FreeWord c = conjugate(all[i], g);
          if (static_cast<int>(c.length()) <= L && sigma.at(c.str()) != sigma.at(all[i].str())) {
            ok = false;
            break;
          }
        }
      }
    }
    if (ok) ++count;
  }
  return count;
}

}  // namespace

TEST_CASE("assert_sign", "[cones]") {
  PartialCone c(2, 2);
  c.assert_sign(FreeWord("a"), Sign::positive);
  CHECK(c.sign_of(FreeWord("a")) == Sign::positive);
  CHECK(c.sign_of(FreeWord("A")) == Sign::negative);
  CHECK_FALSE(c.sign_of(FreeWord("b")).has_value());
  CHECK_THROWS_AS(c.assert_sign(FreeWord("A"), Sign::positive), ImmediateClash);
  CHECK_THROWS_AS(c.assert_sign(FreeWord("abAB"), Sign::positive), LengthExceeded);
  CHECK_THROWS_AS(c.assert_sign(FreeWord(), Sign::positive), LengthExceeded);
}

TEST_CASE("saturation closes {a+, b+} at L=2", "[cones]") {
  PartialCone c(2, 2);
  c.assert_sign(FreeWord("a"), Sign::positive);
  c.assert_sign(FreeWord("b"), Sign::positive);
  auto report = c.saturate();
  REQUIRE(report.consistent);

  // Hand closure: the four like-signed products of length 2, inverses implied.
  for (const char* w : {"aa", "bb", "ab", "ba"}) {
    CHECK(c.sign_of(FreeWord(w)) == Sign::positive);
  }
  for (const char* w : {"AA", "BB", "BA", "AB"}) {
    CHECK(c.sign_of(FreeWord(w)) == Sign::negative);
  }
  CHECK(report.derived.size() == 4);
  // aB and Ab stay undetermined.
  CHECK_FALSE(c.sign_of(FreeWord("aB")).has_value());
  CHECK_FALSE(c.sign_of(FreeWord("Ab")).has_value());

  SECTION("every derivation replays") {
    for (const auto& d : report.derived) CHECK(c.replay(d));
  }
}

TEST_CASE("saturation reports contradictions with a trace", "[cones]") {
  // Pre-seeded inconsistency that no single assert can see.
  PartialCone c(2, 0);
  c.assert_sign(FreeWord("a"), Sign::positive);
  c.assert_sign(FreeWord("aa"), Sign::negative);
  auto report = c.saturate();
  CHECK_FALSE(report.consistent);
  REQUIRE(report.contradiction.has_value());
  const auto& [old_rec, new_rec] = *report.contradiction;
  CHECK(multiply(new_rec.premises.at(0), new_rec.premises.at(1)) == new_rec.word);
  CHECK(canonical_of_pair(old_rec.word) == canonical_of_pair(new_rec.word));
  Sign implied = (old_rec.word == new_rec.word) ? old_rec.sign : flip(old_rec.sign);
  CHECK(implied != new_rec.sign);
}

TEST_CASE("left-order mode skips conjugation", "[cones]") {
  // a+ with a conjugate asserted negative: fine as a left order, contradictory
  // as a bi-order.
  PartialCone left(3, 1, ConeMode::left_order);
  left.assert_sign(FreeWord("a"), Sign::positive);
  left.assert_sign(FreeWord("baB"), Sign::negative);
  CHECK(left.saturate().consistent);

  PartialCone bi(3, 1, ConeMode::bi_order);
  bi.assert_sign(FreeWord("a"), Sign::positive);
  bi.assert_sign(FreeWord("baB"), Sign::negative);
  CHECK_FALSE(bi.saturate().consistent);
}

TEST_CASE("from_oracle yields a saturated cone", "[cones]") {
  F2Order magnus = F2Order::magnus();

  SECTION("L=1 assignments") {
    PartialCone c = PartialCone::from_oracle(magnus, 1, 0);
    CHECK(c.sign_of(FreeWord("a")) == Sign::positive);
    CHECK(c.sign_of(FreeWord("A")) == Sign::negative);
    CHECK(c.sign_of(FreeWord("b")) == Sign::positive);
    CHECK(c.sign_of(FreeWord("B")) == Sign::negative);
  }
  SECTION("reversed oracle negates") {
    PartialCone c = PartialCone::from_oracle(reverse(magnus), 1, 0);
    CHECK(c.sign_of(FreeWord("a")) == Sign::negative);
    CHECK(c.sign_of(FreeWord("A")) == Sign::positive);
    CHECK(c.sign_of(FreeWord("b")) == Sign::negative);
    CHECK(c.sign_of(FreeWord("B")) == Sign::positive);
  }
  SECTION("L=2 orders the generator quotients: b < a") {
    PartialCone c = PartialCone::from_oracle(magnus, 2, 0);
    CHECK(c.sign_of(FreeWord("Ba")) == Sign::positive);
    CHECK(c.sign_of(FreeWord("aB")) == Sign::positive);  // conjugate of Ba
    CHECK(c.sign_of(FreeWord("bA")) == Sign::negative);
    CHECK(c.sign_of(FreeWord("Ab")) == Sign::negative);
  }
  SECTION("soundness: no contradictions, no new facts, family oracles, L <= 5") {
    for (const auto& o : transform_family()) {
      INFO(o.label());
      for (int L = 1; L <= 5; ++L) {
        PartialCone c = PartialCone::from_oracle(o, L, std::min(L, 3));
        auto report = c.saturate();
        CHECK(report.consistent);
        CHECK(report.derived.empty());
      }
    }
  }
}

TEST_CASE("saturation is monotone", "[cones]") {
  // Larger bounds can only grow the derived set.
  auto derived_words = [](int L, int Lc) {
    PartialCone c(L, Lc);
    c.assert_sign(FreeWord("a"), Sign::positive);
    c.assert_sign(FreeWord("ab"), Sign::positive);
    c.saturate();
    std::set<std::string> out;
    for (const auto& [w, s] : c.assignments()) out.insert(w.str());
    return out;
  };
  auto small = derived_words(3, 1);
  auto larger = derived_words(4, 2);
  CHECK(std::includes(larger.begin(), larger.end(), small.begin(), small.end()));
}

TEST_CASE("census via enumerate_extensions", "[cones]") {
  SECTION("no constraints, L=1: both generators free") {
    PartialCone c(1, 1);
    c.saturate();
    auto result = c.enumerate_extensions(100);
    CHECK_FALSE(result.exhausted);
    CHECK(result.completions.size() == 4);
  }

  SECTION("{a+, b+} at L=2: 4 left-order completions") {
    PartialCone c(2, 2, ConeMode::left_order);
    c.assert_sign(FreeWord("a"), Sign::positive);
    c.assert_sign(FreeWord("b"), Sign::positive);
    REQUIRE(c.saturate().consistent);
    auto result = c.enumerate_extensions(1000);
    CHECK_FALSE(result.exhausted);
    CHECK(result.completions.size() == 4);
    for (const auto& comp : result.completions) CHECK(comp.fully_determined());
    CHECK(brute_force_census({{FreeWord("a"), Sign::positive}, {FreeWord("b"), Sign::positive}},
                             2, 2, ConeMode::left_order) == 4);
  }

  SECTION("{a+, b+} at L=2, bi mode: conjugation by a^-1 ties Ba to aB") {
    // g(ab^-1)g^-1 = b^-1 a for g = a^-1, so only one sign stays free.
    PartialCone c(2, 2, ConeMode::bi_order);
    c.assert_sign(FreeWord("a"), Sign::positive);
    c.assert_sign(FreeWord("b"), Sign::positive);
    REQUIRE(c.saturate().consistent);
    auto result = c.enumerate_extensions(1000);
    CHECK(result.completions.size() == 2);
    CHECK(brute_force_census({{FreeWord("a"), Sign::positive}, {FreeWord("b"), Sign::positive}},
                             2, 2, ConeMode::bi_order) == 2);
  }

  SECTION("contradictory seeds have no completions") {
    PartialCone c(2, 2);
    CHECK_THROWS_AS((c.assert_sign(FreeWord("a"), Sign::positive),
                     c.assert_sign(FreeWord("A"), Sign::positive)),
                    ImmediateClash);
  }

  SECTION("budget exhaustion returns a prefix") {
    PartialCone c(2, 0, ConeMode::left_order);
    c.saturate();
    auto result = c.enumerate_extensions(3);
    CHECK(result.exhausted);
    CHECK(result.nodes <= 3);
  }
}
