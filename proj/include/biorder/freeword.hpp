#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "biorder/errors.hpp"

namespace biorder {

// Letters of the rank-2 free group in display form: 'a', 'b' are the
// generators, 'A', 'B' their inverses. The global letter order
// a < A < b < B fixes the ShortLex enumeration that every index, metric and
// search order in this library depends on.
inline constexpr char kLetters[4] = {'a', 'A', 'b', 'B'};

inline int letter_rank(char c) {
  switch (c) {
    case 'a': return 0;
    case 'A': return 1;
    case 'b': return 2;
    case 'B': return 3;
    default: return -1;
  }
}

inline char inverse_letter(char c) {
  switch (c) {
    case 'a': return 'A';
    case 'A': return 'a';
    case 'b': return 'B';
    case 'B': return 'b';
    default: throw Error(std::string("invalid letter '") + c + "'");
  }
}

/// A freely reduced word over {a, a^-1, b, b^-1}. The empty word is the
/// identity. Construction always reduces, so every instance is in normal
/// form and equality of words is equality of group elements.
class FreeWord {
 public:
  FreeWord() = default;

  // Reduces an arbitrary letter sequence (free cancellation).
  explicit FreeWord(std::string_view raw) {
    w_.reserve(raw.size());
    for (char c : raw) {
      if (letter_rank(c) < 0) throw Error(std::string("invalid letter '") + c + "' in word");
      if (!w_.empty() && w_.back() == inverse_letter(c)) {
        w_.pop_back();
      } else {
        w_.push_back(c);
      }
    }
  }

  // Accepts the CLI text encoding: "" or "e" for the identity.
  static FreeWord parse(std::string_view text) {
    if (text == "e" || text == "1") return FreeWord();
    return FreeWord(text);
  }

  std::size_t length() const { return w_.size(); }
  bool is_identity() const { return w_.empty(); }
  const std::string& str() const { return w_; }

  char letter(std::size_t i) const { return w_[i]; }

  FreeWord inverted() const {
    FreeWord r;
    r.w_.reserve(w_.size());
    for (auto it = w_.rbegin(); it != w_.rend(); ++it) r.w_.push_back(inverse_letter(*it));
    return r;  // reversal of a reduced word stays reduced
  }

  // Exponent sums of a and b (the abelianization).
  long long exponent_a() const {
    long long s = 0;
    for (char c : w_) s += (c == 'a') ? 1 : (c == 'A') ? -1 : 0;
    return s;
  }
  long long exponent_b() const {
    long long s = 0;
    for (char c : w_) s += (c == 'b') ? 1 : (c == 'B') ? -1 : 0;
    return s;
  }

  friend bool operator==(const FreeWord& u, const FreeWord& v) { return u.w_ == v.w_; }
  friend bool operator!=(const FreeWord& u, const FreeWord& v) { return u.w_ != v.w_; }

 private:
  std::string w_;
};

inline FreeWord multiply(const FreeWord& u, const FreeWord& v) {
  return FreeWord(u.str() + v.str());
}

// Conjugation g w g^-1.
inline FreeWord conjugate(const FreeWord& w, const FreeWord& g) {
  return FreeWord(g.str() + w.str() + g.inverted().str());
}

inline FreeWord power(const FreeWord& w, long long n) {
  if (n < 0) return power(w.inverted(), -n);
  FreeWord r;
  for (long long i = 0; i < n; ++i) r = multiply(r, w);
  return r;
}

// ShortLex order: by length, ties by lexicographic comparison in the fixed
// letter order a < A < b < B.
inline bool shortlex_less(const FreeWord& u, const FreeWord& v) {
  if (u.length() != v.length()) return u.length() < v.length();
  for (std::size_t i = 0; i < u.length(); ++i) {
    int ru = letter_rank(u.letter(i));
    int rv = letter_rank(v.letter(i));
    if (ru != rv) return ru < rv;
  }
  return false;
}

// Canonical pick among {w, w^-1}; used wherever only one of the pair is stored.
inline FreeWord canonical_of_pair(const FreeWord& w) {
  FreeWord inv = w.inverted();
  return shortlex_less(inv, w) ? inv : w;
}

namespace detail {
// Number of reduced words of length exactly len: 1, 4, 4*3, 4*3^2, ...
inline std::uint64_t words_of_length(std::size_t len) {
  if (len == 0) return 1;
  std::uint64_t n = 4;
  for (std::size_t i = 1; i < len; ++i) n *= 3;
  return n;
}
}  // namespace detail

// Position of a reduced word in the ShortLex enumeration (identity = 0).
inline std::uint64_t shortlex_index(const FreeWord& w) {
  if (w.length() > 38) throw Error("shortlex_index: word too long for a 64-bit index");
  std::uint64_t base = 0;
  for (std::size_t len = 0; len < w.length(); ++len) base += detail::words_of_length(len);
  std::uint64_t offset = 0;
  for (std::size_t i = 0; i < w.length(); ++i) {
    int rank = letter_rank(w.letter(i));
    int pos = rank;
    if (i > 0) {
      // Rank among the three letters that do not cancel the previous one.
      int banned = letter_rank(inverse_letter(w.letter(i - 1)));
      pos = rank - (rank > banned ? 1 : 0);
    }
    std::uint64_t tail = 1;
    for (std::size_t j = i + 1; j < w.length(); ++j) tail *= 3;
    offset += static_cast<std::uint64_t>(pos) * tail;
  }
  return base + offset;
}

// Inverse of shortlex_index.
inline FreeWord shortlex_word(std::uint64_t index) {
  std::size_t len = 0;
  while (index >= detail::words_of_length(len)) {
    index -= detail::words_of_length(len);
    ++len;
    if (len > 38) throw Error("shortlex_word: index out of range");
  }
  std::string out;
  out.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    std::uint64_t tail = 1;
    for (std::size_t j = i + 1; j < len; ++j) tail *= 3;
    int pos = static_cast<int>(index / tail);
    index %= tail;
    int rank = pos;
    if (i > 0) {
      int banned = letter_rank(inverse_letter(out.back()));
      if (rank >= banned) ++rank;
    }
    out.push_back(kLetters[rank]);
  }
  return FreeWord(out);
}

// First n reduced words in ShortLex order.
inline std::vector<FreeWord> enumerate_words(std::uint64_t n) {
  std::vector<FreeWord> out;
  out.reserve(static_cast<std::size_t>(n));
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(shortlex_word(i));
  return out;
}

// All reduced words of length 1..max_len in ShortLex order.
inline std::vector<FreeWord> words_up_to(std::size_t max_len) {
  std::uint64_t total = 0;
  for (std::size_t len = 1; len <= max_len; ++len) total += detail::words_of_length(len);
  std::vector<FreeWord> out;
  out.reserve(static_cast<std::size_t>(total));
  for (std::uint64_t i = 1; i <= total; ++i) out.push_back(shortlex_word(i));
  return out;
}

}  // namespace biorder
