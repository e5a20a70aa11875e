#include <catch_amalgamated.hpp>

#include <random>
#include <set>
#include <string>

#include "biorder/freeword.hpp"

using namespace biorder;

namespace {

// Independent reducer: repeatedly rescan for an adjacent inverse pair.
std::string rescan_reduce(std::string s) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i + 1 < s.size(); ++i) {
      if (s[i] == inverse_letter(s[i + 1])) {
        s.erase(i, 2);
        changed = true;
        break;
      }
    }
  }
  return s;
}

std::string random_raw(std::mt19937_64& rng, int max_len) {
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> pick(0, 3);
  std::string s;
  int n = len(rng);
  for (int i = 0; i < n; ++i) s.push_back(kLetters[pick(rng)]);
  return s;
}

FreeWord random_reduced(std::mt19937_64& rng, int max_len) {
  return FreeWord(random_raw(rng, max_len));
}

}  // namespace

TEST_CASE("reduce cancels inverse pairs", "[freeword]") {
  CHECK(FreeWord("aA").is_identity());
  CHECK(FreeWord("abAB").str() == "abAB");
  CHECK(FreeWord("abBA").is_identity());  // two-step cancellation

  SECTION("agrees with a rescan reducer on random raw strings") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
      std::string raw = random_raw(rng, 16);
      CHECK(FreeWord(raw).str() == rescan_reduce(raw));
    }
  }

  SECTION("idempotent") {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 200; ++i) {
      FreeWord w = random_reduced(rng, 12);
      CHECK(FreeWord(w.str()) == w);
    }
  }
}

TEST_CASE("multiply reduces the concatenation", "[freeword]") {
  CHECK(multiply(FreeWord("a"), FreeWord("A")).is_identity());
  CHECK(multiply(FreeWord("ab"), FreeWord("BA")).is_identity());
  CHECK(multiply(FreeWord("aB"), FreeWord("b")).str() == "a");

  SECTION("group laws on random words") {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 300; ++i) {
      FreeWord u = random_reduced(rng, 8);
      FreeWord v = random_reduced(rng, 8);
      FreeWord w = random_reduced(rng, 8);
      CHECK(multiply(multiply(u, v), w) == multiply(u, multiply(v, w)));
      CHECK(multiply(u, u.inverted()).is_identity());
      CHECK(multiply(u, FreeWord()) == u);
      CHECK(multiply(FreeWord(), u) == u);
    }
  }
}

TEST_CASE("invert and conjugate", "[freeword]") {
  SECTION("invert reverses and flips") {
    // Oracle: explicit reverse-and-flip, then reduce.
    auto flip_reverse = [](const FreeWord& w) {
      std::string s;
      for (std::size_t i = w.length(); i > 0; --i) s.push_back(inverse_letter(w.letter(i - 1)));
      return FreeWord(s);
    };
    CHECK(FreeWord("abA").inverted() == flip_reverse(FreeWord("abA")));
    CHECK(FreeWord("abA").inverted().str() == "aBA");
    std::mt19937_64 rng(10);
    for (int i = 0; i < 200; ++i) {
      FreeWord w = random_reduced(rng, 10);
      CHECK(w.inverted() == flip_reverse(w));
      CHECK(w.inverted().inverted() == w);
    }
  }
  SECTION("conjugation") {
    CHECK(conjugate(FreeWord("b"), FreeWord("a")).str() == "abA");
    CHECK(conjugate(FreeWord("a"), FreeWord("a")).str() == "a");
  }
}

TEST_CASE("shortlex enumeration", "[freeword]") {
  CHECK(enumerate_words(1).size() == 1);
  CHECK(enumerate_words(1)[0].is_identity());

  auto first5 = enumerate_words(5);
  CHECK(first5[0].str() == "");
  CHECK(first5[1].str() == "a");
  CHECK(first5[2].str() == "A");
  CHECK(first5[3].str() == "b");
  CHECK(first5[4].str() == "B");

  SECTION("enumerate(17) contains all 12 two-letter words") {
    auto words = enumerate_words(17);
    int count = 0;
    for (const auto& w : words) {
      if (w.length() == 2) ++count;
    }
    CHECK(count == 12);
  }

  SECTION("strictly increasing and complete") {
    auto words = enumerate_words(200);
    std::set<std::string> seen;
    for (std::size_t i = 1; i < words.size(); ++i) {
      CHECK(shortlex_less(words[i - 1], words[i]));
    }
    for (const auto& w : words) seen.insert(w.str());
    CHECK(seen.size() == words.size());
    // No reduced word of length <= 3 is missing.
    for (char c1 : {'a', 'A', 'b', 'B'}) {
      for (char c2 : {'a', 'A', 'b', 'B'}) {
        for (char c3 : {'a', 'A', 'b', 'B'}) {
          std::string s{c1, c2, c3};
          if (FreeWord(s).length() == 3) CHECK(seen.count(s) == 1);
        }
      }
    }
  }

  SECTION("index round trip") {
    std::mt19937_64 rng(11);
    for (std::uint64_t i = 0; i < 500; ++i) {
      CHECK(shortlex_index(shortlex_word(i)) == i);
    }
    for (int i = 0; i < 100; ++i) {
      FreeWord w = random_reduced(rng, 9);
      CHECK(shortlex_word(shortlex_index(w)) == w);
    }
  }
}

TEST_CASE("canonical pair representative", "[freeword]") {
  CHECK(canonical_of_pair(FreeWord("a")).str() == "a");
  CHECK(canonical_of_pair(FreeWord("A")).str() == "a");
  CHECK(canonical_of_pair(FreeWord("BA")).str() == "ab");
}

TEST_CASE("word parsing", "[freeword]") {
  CHECK(FreeWord::parse("e").is_identity());
  CHECK(FreeWord::parse("").is_identity());
  CHECK_THROWS_AS(FreeWord::parse("xyz"), Error);
}
