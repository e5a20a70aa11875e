#pragma once

#include <deque>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "biorder/errors.hpp"
#include "biorder/freeword.hpp"
#include "biorder/order.hpp"

namespace biorder {

enum class ConeMode { bi_order, left_order };

inline std::string cone_mode_str(ConeMode m) {
  return m == ConeMode::bi_order ? "bi" : "left";
}
inline ConeMode parse_cone_mode(std::string_view t) {
  if (t == "bi") return ConeMode::bi_order;
  if (t == "left") return ConeMode::left_order;
  throw Error("invalid cone mode '" + std::string(t) + "'");
}

// One derived (or asserted) fact, replayable from its premises:
//   assert       no premises
//   product      premises [u, v], word = reduce(uv), same sign as u and v
//   conjugation  premises [w, g], word = g w g^-1, same sign as w
struct Derivation {
  FreeWord word;
  Sign sign;
  std::string rule;
  std::vector<FreeWord> premises;
};

struct SaturationReport {
  bool consistent = true;
  std::vector<Derivation> derived;  // only facts new in this saturate call
  std::optional<std::pair<Derivation, Derivation>> contradiction;
};

/// A partial positive cone at finite resolution: a sign assignment on reduced
/// words of length 1..L, closed (after saturate) under inverse antisymmetry,
/// products of like-signed words, and (in bi-order mode) conjugation by words
/// of length <= Lc. Closure is sound for any genuine order extending the
/// assignment; it is not complete, so "consistent" always means "consistent
/// at this length bound".
class PartialCone {
 public:
  PartialCone(int length_bound, int conj_bound, ConeMode mode = ConeMode::bi_order)
      : L_(length_bound), Lc_(conj_bound), mode_(mode) {
    if (length_bound < 1) throw Error("length bound must be >= 1");
    if (conj_bound < 0) throw Error("conjugator bound must be >= 0");
  }

  int length_bound() const { return L_; }
  int conj_bound() const { return Lc_; }
  ConeMode mode() const { return mode_; }

  // Records the sign of w and the opposite sign of w^-1. No closure.
  void assert_sign(const FreeWord& w, Sign s) {
    if (w.is_identity() || static_cast<int>(w.length()) > L_) {
      throw LengthExceeded("word '" + w.str() + "' outside length bound 1.." + std::to_string(L_));
    }
    auto existing = sign_of(w);
    if (existing) {
      if (*existing != s) {
        throw ImmediateClash("word '" + w.str() + "' already carries sign " +
                             sign_str(*existing));
      }
      return;
    }
    store(w, s, Derivation{w, s, "assert", {}});
    saturated_ = false;
  }

  std::optional<Sign> sign_of(const FreeWord& w) const {
    FreeWord c = canonical_of_pair(w);
    auto it = signs_.find(c.str());
    if (it == signs_.end()) return std::nullopt;
    return c == w ? it->second.sign : flip(it->second.sign);
  }

  // Least fixed point of the closure rules. Derivations stop at the first
  // contradiction, which is reported with the two clashing records.
  SaturationReport saturate() {
    SaturationReport report;
    std::deque<std::string> work;
    for (const auto& k : order_) work.push_back(k);

    auto derive = [&](const FreeWord& w, Sign s, const char* rule,
                      std::vector<FreeWord> premises) -> bool {
      if (w.is_identity() || static_cast<int>(w.length()) > L_) return true;
      Derivation d{w, s, rule, std::move(premises)};
      auto existing = sign_of(w);
      if (existing) {
        if (*existing == s) return true;
        report.consistent = false;
        report.contradiction = {record_for(w), std::move(d)};
        return false;
      }
      store(w, s, d);
      report.derived.push_back(std::move(d));
      work.push_back(canonical_of_pair(w).str());
      return true;
    };

    std::vector<FreeWord> conjugators =
        (mode_ == ConeMode::bi_order && Lc_ > 0) ? words_up_to(Lc_) : std::vector<FreeWord>{};

    while (!work.empty()) {
      std::string key = work.front();
      work.pop_front();
      FreeWord w(key);
      Sign sw = signs_.at(key).sign;

      // Like-signed products, both orders; the partner list is a snapshot but
      // every later insertion re-enters the worklist, so all pairs are seen.
      std::vector<std::pair<FreeWord, Sign>> partners;
      partners.reserve(order_.size() * 2);
      for (const auto& k : order_) {
        Sign sk = signs_.at(k).sign;
        partners.emplace_back(FreeWord(k), sk);
        partners.emplace_back(FreeWord(k).inverted(), flip(sk));
      }
      for (const auto& side : {std::pair{w, sw}, std::pair{w.inverted(), flip(sw)}}) {
        for (const auto& [x, sx] : partners) {
          if (sx != side.second) continue;
          if (!derive(multiply(side.first, x), sx, "product", {side.first, x})) return report;
          if (!derive(multiply(x, side.first), sx, "product", {x, side.first})) return report;
        }
      }
      for (const auto& g : conjugators) {
        for (const auto& side : {std::pair{w, sw}, std::pair{w.inverted(), flip(sw)}}) {
          if (!derive(conjugate(side.first, g), side.second, "conjugation", {side.first, g}))
            return report;
        }
      }
    }
    saturated_ = true;
    return report;
  }

  bool is_saturated() const { return saturated_; }

  static PartialCone from_oracle(const F2Order& oracle, int L, int Lc,
                                 ConeMode mode = ConeMode::bi_order) {
    PartialCone c(L, Lc, mode);
    for (const auto& w : words_up_to(static_cast<std::size_t>(L))) {
      if (canonical_of_pair(w) == w) c.assert_sign(w, oracle.sign(w));
    }
    return c;
  }

  // Every determined word (both members of each inverse pair), ShortLex order.
  std::vector<std::pair<FreeWord, Sign>> assignments() const {
    std::vector<std::pair<FreeWord, Sign>> out;
    out.reserve(signs_.size() * 2);
    for (const auto& w : words_up_to(static_cast<std::size_t>(L_))) {
      if (auto s = sign_of(w)) out.emplace_back(w, *s);
    }
    return out;
  }

  std::size_t determined_pairs() const { return signs_.size(); }

  bool fully_determined() const {
    std::uint64_t total = 0;
    for (int len = 1; len <= L_; ++len) total += detail::words_of_length(len);
    return signs_.size() * 2 == total;
  }

  std::optional<FreeWord> first_undetermined() const {
    for (const auto& w : words_up_to(static_cast<std::size_t>(L_))) {
      if (!sign_of(w)) return w;
    }
    return std::nullopt;
  }

  struct ExtensionResult {
    std::vector<PartialCone> completions;
    bool exhausted = false;
    std::size_t nodes = 0;
  };

  // Depth-first search over the undetermined words in ShortLex order, trying
  // + before -, re-saturating and pruning after each choice. The budget
  // counts saturate calls; hitting it returns the prefix found so far.
  ExtensionResult enumerate_extensions(std::size_t budget) const {
    if (!saturated_) throw PreconditionFailed("enumerate_extensions requires a saturated cone");
    ExtensionResult result;
    extend(*this, budget, result);
    return result;
  }

  const std::vector<Derivation>& log() const { return log_; }

  nlohmann::json report_json(const SaturationReport& report) const {
    nlohmann::json assigns = nlohmann::json::array();
    for (const auto& [w, s] : assignments()) {
      assigns.push_back({{"word", w.str()}, {"sign", sign_str(s)}});
    }
    nlohmann::json derivations = nlohmann::json::array();
    for (const auto& d : report.derived) derivations.push_back(derivation_json(d));
    nlohmann::json j{{"outcome", report.consistent ? "consistent" : "contradiction"},
                     {"assignments", assigns},
                     {"derivations", derivations},
                     {"exhausted", false}};
    if (report.contradiction) {
      j["contradiction_trace"] = {derivation_json(report.contradiction->first),
                                  derivation_json(report.contradiction->second)};
    }
    return j;
  }

  static nlohmann::json derivation_json(const Derivation& d) {
    nlohmann::json premises = nlohmann::json::array();
    for (const auto& p : d.premises) premises.push_back(p.str());
    return {{"word", d.word.str()},
            {"sign", sign_str(d.sign)},
            {"rule", d.rule},
            {"premises", premises}};
  }

  // Re-runs a derivation from its premises against this cone's assignment.
  bool replay(const Derivation& d) const {
    if (d.rule == "assert") return sign_of(d.word) == d.sign;
    if (d.rule == "product") {
      if (d.premises.size() != 2) return false;
      if (sign_of(d.premises[0]) != d.sign || sign_of(d.premises[1]) != d.sign) return false;
      return multiply(d.premises[0], d.premises[1]) == d.word;
    }
    if (d.rule == "conjugation") {
      if (d.premises.size() != 2) return false;
      if (mode_ != ConeMode::bi_order) return false;
      if (static_cast<int>(d.premises[1].length()) > Lc_) return false;
      if (sign_of(d.premises[0]) != d.sign) return false;
      return conjugate(d.premises[0], d.premises[1]) == d.word;
    }
    return false;
  }

 private:
  struct Entry {
    Sign sign;           // sign of the canonical member of the pair
    std::size_t log_id;  // establishing record
  };

  void store(const FreeWord& w, Sign s, const Derivation& d) {
    FreeWord c = canonical_of_pair(w);
    signs_[c.str()] = Entry{c == w ? s : flip(s), log_.size()};
    order_.push_back(c.str());
    log_.push_back(d);
  }

  Derivation record_for(const FreeWord& w) const {
    return log_[signs_.at(canonical_of_pair(w).str()).log_id];
  }

  static void extend(const PartialCone& cone, std::size_t budget, ExtensionResult& result) {
    if (result.exhausted) return;
    auto next = cone.first_undetermined();
    if (!next) {
      result.completions.push_back(cone);
      return;
    }
    for (Sign s : {Sign::positive, Sign::negative}) {
      if (result.nodes >= budget) {
        result.exhausted = true;
        return;
      }
      PartialCone branch = cone;
      branch.assert_sign(*next, s);
      ++result.nodes;
      if (branch.saturate().consistent) {
        extend(branch, budget, result);
        if (result.exhausted) return;
      }
    }
  }

  int L_;
  int Lc_;
  ConeMode mode_;
  std::unordered_map<std::string, Entry> signs_;  // canonical word -> entry
  std::vector<std::string> order_;                // canonical words, insertion order
  std::vector<Derivation> log_;
  bool saturated_ = false;
};

}  // namespace biorder
