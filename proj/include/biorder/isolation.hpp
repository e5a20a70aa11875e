#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "biorder/cones.hpp"
#include "biorder/errors.hpp"
#include "biorder/freeword.hpp"
#include "biorder/homeo.hpp"
#include "biorder/order.hpp"
#include "biorder/transform.hpp"

namespace biorder {

/// A basic open set of the space of orders: finitely many words required to
/// be positive.
struct BasicOpenSet {
  std::vector<FreeWord> positives;

  static BasicOpenSet of(std::vector<FreeWord> words) {
    BasicOpenSet u{std::move(words)};
    for (std::size_t i = 0; i < u.positives.size(); ++i) {
      if (u.positives[i].is_identity()) throw Error("constraints must not include the identity");
      for (std::size_t j = i + 1; j < u.positives.size(); ++j) {
        if (u.positives[i] == u.positives[j].inverted()) {
          throw Error("constraints must not include a word and its inverse");
        }
      }
    }
    return u;
  }

  bool contains(const FreeWord& w) const {
    return std::find(positives.begin(), positives.end(), w) != positives.end();
  }
  bool contains_pair(const FreeWord& w) const { return contains(w) || contains(w.inverted()); }
};

// 2^(-k) at the first ShortLex index where the sign functions disagree.
struct OrderDistance {
  std::optional<std::uint64_t> first_disagreement;
  Rational value;  // 0 when the orders agree up to the bound
};

inline OrderDistance order_distance(const F2Order& o1, const F2Order& o2,
                                    std::size_t length_bound) {
  std::uint64_t index = 0;
  for (const auto& w : words_up_to(length_bound)) {
    ++index;
    if (o1.sign(w) != o2.sign(w)) {
      Rational v(Int(1), Int(1) << index);
      return OrderDistance{index, v};
    }
  }
  return OrderDistance{std::nullopt, Rational(0)};
}

// Witness preference: the conjugate-quotient words x^a (x^b)^-1 built from
// the constraints first, then the ShortLex words outside the constraint set.
inline std::vector<FreeWord> witness_candidates(const BasicOpenSet& U,
                                                std::size_t shortlex_max_len) {
  std::vector<FreeWord> out;
  auto push_unique = [&](const FreeWord& w) {
    if (w.is_identity()) return;
    if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(w);
  };
  for (const auto& x : U.positives) {
    push_unique(multiply(conjugate(x, FreeWord("a")), conjugate(x, FreeWord("b")).inverted()));
  }
  for (const auto& w : words_up_to(shortlex_max_len)) {
    if (!U.contains_pair(w)) push_unique(w);
  }
  return out;
}

enum class WitnessMethod { structured_transform, cone_search };

inline std::string witness_method_str(WitnessMethod m) {
  return m == WitnessMethod::structured_transform ? "structured-transform" : "cone-search";
}

// One side of a certificate: either a named total order of the transform
// family, or a saturated bounded cone given by its full sign assignment.
struct CertificateSide {
  std::optional<nlohmann::json> descriptor;
  std::vector<std::pair<FreeWord, Sign>> cone_assignments;
  std::string label;

  bool is_descriptor() const { return descriptor.has_value(); }

  nlohmann::json to_json() const {
    if (is_descriptor()) return {{"kind", "descriptor"}, {"descriptor", *descriptor}, {"label", label}};
    nlohmann::json assigns = nlohmann::json::array();
    for (const auto& [w, s] : cone_assignments) {
      assigns.push_back({{"word", w.str()}, {"sign", sign_str(s)}});
    }
    return {{"kind", "cone"}, {"assignments", assigns}, {"label", label}};
  }

  static CertificateSide from_json(const nlohmann::json& j) {
    CertificateSide side;
    side.label = j.value("label", "");
    if (j.at("kind") == "descriptor") {
      side.descriptor = j.at("descriptor");
    } else if (j.at("kind") == "cone") {
      for (const auto& a : j.at("assignments")) {
        side.cone_assignments.emplace_back(FreeWord::parse(a.at("word").get<std::string>()),
                                           parse_sign(a.at("sign").get<std::string>()));
      }
    } else {
      throw Error("certificate side kind must be 'descriptor' or 'cone'");
    }
    return side;
  }
};

struct NonIsolationCertificate {
  BasicOpenSet constraints;
  int length_bound = 0;
  int conj_bound = 0;
  WitnessMethod method = WitnessMethod::structured_transform;
  CertificateSide base;
  CertificateSide alternative;
  FreeWord witness;
  Sign base_sign = Sign::positive;
  Sign alternative_sign = Sign::negative;

  nlohmann::json to_json() const {
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& w : constraints.positives) cs.push_back(w.str());
    return {{"constraints", cs},
            {"length_bound", std::to_string(length_bound)},
            {"conj_bound", std::to_string(conj_bound)},
            {"method", witness_method_str(method)},
            {"base", base.to_json()},
            {"alternative", alternative.to_json()},
            {"witness_word", witness.str()},
            {"signs",
             {{"base", sign_str(base_sign)}, {"alternative", sign_str(alternative_sign)}}}};
  }

  static NonIsolationCertificate from_json(const nlohmann::json& j) {
    NonIsolationCertificate c;
    std::vector<FreeWord> words;
    for (const auto& w : j.at("constraints")) words.push_back(FreeWord::parse(w.get<std::string>()));
    c.constraints = BasicOpenSet::of(std::move(words));
    c.length_bound = std::stoi(j.at("length_bound").get<std::string>());
    c.conj_bound = std::stoi(j.at("conj_bound").get<std::string>());
    c.method = j.at("method") == "structured-transform" ? WitnessMethod::structured_transform
                                                        : WitnessMethod::cone_search;
    c.base = CertificateSide::from_json(j.at("base"));
    c.alternative = CertificateSide::from_json(j.at("alternative"));
    c.witness = FreeWord::parse(j.at("witness_word").get<std::string>());
    c.base_sign = parse_sign(j.at("signs").at("base").get<std::string>());
    c.alternative_sign = parse_sign(j.at("signs").at("alternative").get<std::string>());
    return c;
  }
};

// The structured scan: reversal-with-flips first, then the swapped tie-break,
// then plain class cuts, then short Nielsen pullbacks.
inline std::vector<F2Order> structured_scan_list(int degree_max = kDefaultDegreeMax) {
  F2Order m = F2Order::magnus(degree_max);
  std::vector<F2Order> scan;
  scan.push_back(reverse(m));
  for (Monomial t : class_thresholds(3)) scan.push_back(reverse(convex_flip(m, t)));
  scan.push_back(monomial_swap(m));
  for (Monomial t : class_thresholds(3)) scan.push_back(convex_flip(m, t));
  for (const auto& first : NielsenMap::whitelist()) {
    NielsenMap phi = NielsenMap::move(first);
    if (!phi.is_identity_map()) scan.push_back(pullback(m, phi));
  }
  for (const auto& first : NielsenMap::whitelist()) {
    for (const auto& second : NielsenMap::whitelist()) {
      NielsenMap phi = NielsenMap::move(first).then(second);
      if (!phi.is_identity_map()) scan.push_back(pullback(m, phi));
    }
  }
  return scan;
}

struct WitnessStats {
  std::size_t structured_scanned = 0;
  std::size_t cone_attempts = 0;
  bool budget_exhausted = false;
};

struct WitnessOutcome {
  std::optional<NonIsolationCertificate> certificate;
  WitnessStats stats;

  bool found() const { return certificate.has_value(); }
};

// Two certified order approximations inside the basic open set U, differing
// on a witness word. Phase 1 scans the structured transform family for a
// genuinely total second order; phase 2 falls back to flipping a candidate
// word and saturating, which certifies consistency at the bounds only.
inline WitnessOutcome witness_nonisolation(const BasicOpenSet& U, int L, int Lc,
                                           std::size_t budget = 1000) {
  F2Order base = F2Order::magnus();
  for (const auto& x : U.positives) {
    if (static_cast<int>(x.length()) > L) {
      throw PreconditionFailed("constraint '" + x.str() + "' is longer than the length bound");
    }
    if (base.sign(x) != Sign::positive) {
      throw PreconditionFailed("constraint '" + x.str() +
                               "' is not positive under the base order");
    }
  }
  WitnessOutcome outcome;
  std::vector<FreeWord> candidates = witness_candidates(U, static_cast<std::size_t>(L));

  for (const F2Order& alt : structured_scan_list(base.degree_max())) {
    ++outcome.stats.structured_scanned;
    bool keeps_constraints = true;
    for (const auto& x : U.positives) {
      if (alt.sign(x) != Sign::positive) {
        keeps_constraints = false;
        break;
      }
    }
    if (!keeps_constraints) continue;
    for (const auto& w : candidates) {
      if (static_cast<int>(w.length()) > L) continue;
      Sign sb = base.sign(w);
      if (alt.sign(w) == sb) continue;
      NonIsolationCertificate cert;
      cert.constraints = U;
      cert.length_bound = L;
      cert.conj_bound = Lc;
      cert.method = WitnessMethod::structured_transform;
      cert.base = CertificateSide{base.descriptor(), {}, base.label()};
      cert.alternative = CertificateSide{alt.descriptor(), {}, alt.label()};
      cert.witness = w;
      cert.base_sign = sb;
      cert.alternative_sign = flip(sb);
      outcome.certificate = std::move(cert);
      return outcome;
    }
  }

  for (const auto& w : candidates) {
    if (w.length() == 0 || static_cast<int>(w.length()) > L) continue;
    if (outcome.stats.cone_attempts >= budget) {
      outcome.stats.budget_exhausted = true;
      break;
    }
    ++outcome.stats.cone_attempts;
    Sign sb = base.sign(w);
    PartialCone cone(L, Lc, ConeMode::bi_order);
    try {
      for (const auto& x : U.positives) cone.assert_sign(x, Sign::positive);
      cone.assert_sign(w, flip(sb));
    } catch (const ImmediateClash&) {
      continue;
    }
    if (!cone.saturate().consistent) continue;
    NonIsolationCertificate cert;
    cert.constraints = U;
    cert.length_bound = L;
    cert.conj_bound = Lc;
    cert.method = WitnessMethod::cone_search;
    cert.base = CertificateSide{base.descriptor(), {}, base.label()};
    cert.alternative = CertificateSide{std::nullopt, cone.assignments(),
                                       "cone[" + w.str() + ":" + sign_str(flip(sb)) + "]"};
    cert.witness = w;
    cert.base_sign = sb;
    cert.alternative_sign = flip(sb);
    outcome.certificate = std::move(cert);
    return outcome;
  }
  return outcome;
}

struct VerifyResult {
  bool valid = true;
  std::string reason;

  static VerifyResult fail(std::string why) { return VerifyResult{false, std::move(why)}; }
};

// Independent check of a certificate: re-derive both sides' signs on the
// constraints and the witness, and re-run saturation at the certificate's
// bounds (or tighter ones). Deliberately shares nothing with the search.
inline VerifyResult verify_certificate(const nlohmann::json& j,
                                       std::optional<int> length_override = std::nullopt,
                                       std::optional<int> conj_override = std::nullopt) {
  NonIsolationCertificate cert;
  try {
    cert = NonIsolationCertificate::from_json(j);
  } catch (const std::exception& e) {
    return VerifyResult::fail(std::string("malformed certificate: ") + e.what());
  }
  int L = length_override.value_or(cert.length_bound);
  int Lc = conj_override.value_or(cert.conj_bound);
  if (L < 1 || L > cert.length_bound || Lc < 0 || Lc > cert.conj_bound) {
    return VerifyResult::fail("verification bounds must refine the certificate bounds");
  }
  if (cert.witness.is_identity()) return VerifyResult::fail("witness is the identity");
  if (static_cast<int>(cert.witness.length()) > L) {
    return VerifyResult::fail("witness is longer than the length bound");
  }
  if (cert.base_sign != flip(cert.alternative_sign)) {
    return VerifyResult::fail("the two sides must assign opposite signs to the witness");
  }

  struct Side {
    const CertificateSide* data;
    Sign witness_sign;
    const char* name;
  };
  for (Side side : {Side{&cert.base, cert.base_sign, "base"},
                    Side{&cert.alternative, cert.alternative_sign, "alternative"}}) {
    std::optional<F2Order> oracle;
    auto side_sign = [&](const FreeWord& w) -> std::optional<Sign> {
      if (side.data->is_descriptor()) {
        if (!oracle) oracle = F2Order::from_descriptor(*side.data->descriptor);
        return oracle->sign(w);
      }
      for (const auto& [word, s] : side.data->cone_assignments) {
        if (word == w) return s;
      }
      return std::nullopt;
    };

    for (const auto& x : cert.constraints.positives) {
      auto s = side_sign(x);
      if (!s) return VerifyResult::fail(std::string(side.name) + " side does not determine constraint '" + x.str() + "'");
      if (*s != Sign::positive) {
        return VerifyResult::fail(std::string(side.name) + " side makes constraint '" + x.str() + "' non-positive");
      }
    }
    auto ws = side_sign(cert.witness);
    if (!ws) return VerifyResult::fail(std::string(side.name) + " side does not determine the witness");
    if (*ws != side.witness_sign) {
      return VerifyResult::fail(std::string(side.name) + " side disagrees with the stated witness sign");
    }

    // Seed saturation: the side's claimed signs must be closed-consistent.
    PartialCone seed(L, Lc, ConeMode::bi_order);
    try {
      for (const auto& x : cert.constraints.positives) {
        if (static_cast<int>(x.length()) <= L) seed.assert_sign(x, Sign::positive);
      }
      seed.assert_sign(cert.witness, side.witness_sign);
    } catch (const ImmediateClash&) {
      return VerifyResult::fail(std::string(side.name) + " side signs clash immediately");
    }
    if (!seed.saturate().consistent) {
      return VerifyResult::fail(std::string(side.name) + " side signs are inconsistent under saturation");
    }

    // A cone side must itself replay: fully re-saturating its assignment may
    // add nothing new and must stay consistent.
    if (!side.data->is_descriptor()) {
      PartialCone replayed(cert.length_bound, cert.conj_bound, ConeMode::bi_order);
      try {
        for (const auto& [word, s] : side.data->cone_assignments) replayed.assert_sign(word, s);
      } catch (const ImmediateClash&) {
        return VerifyResult::fail(std::string(side.name) + " cone contains an inverse-pair clash");
      }
      auto rep = replayed.saturate();
      if (!rep.consistent) {
        return VerifyResult::fail(std::string(side.name) + " cone is not saturation-consistent");
      }
      if (!rep.derived.empty()) {
        return VerifyResult::fail(std::string(side.name) + " cone is not saturated");
      }
    }
  }
  return VerifyResult{};
}

struct SweepItem {
  BasicOpenSet constraints;
  std::optional<NonIsolationCertificate> certificate;
  bool verified = false;
  WitnessStats stats;
};

struct SweepReport {
  std::size_t total = 0;
  std::size_t certified = 0;
  std::size_t structured = 0;
  std::size_t cone_search = 0;
  std::size_t verified = 0;
  std::vector<SweepItem> items;

  nlohmann::json to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& item : items) {
      nlohmann::json cs = nlohmann::json::array();
      for (const auto& w : item.constraints.positives) cs.push_back(w.str());
      nlohmann::json row{{"constraints", cs}};
      if (item.certificate) {
        row["method"] = witness_method_str(item.certificate->method);
        row["witness_word"] = item.certificate->witness.str();
        row["alternative"] = item.certificate->alternative.label;
        row["verified"] = item.verified;
      } else {
        row["method"] = "not-found";
        row["stats"] = {{"structured_scanned", std::to_string(item.stats.structured_scanned)},
                        {"cone_attempts", std::to_string(item.stats.cone_attempts)},
                        {"budget_exhausted", item.stats.budget_exhausted}};
      }
      rows.push_back(row);
    }
    return {{"total", std::to_string(total)},
            {"certified", std::to_string(certified)},
            {"structured", std::to_string(structured)},
            {"cone_search", std::to_string(cone_search)},
            {"verified", std::to_string(verified)},
            {"success_rate", std::to_string(certified) + "/" + std::to_string(total)},
            {"items", rows}};
  }
};

// Every basic open set with up to n_max positive constraints of length up to
// len_max (one representative per inverse pair, since the enumeration uses
// the base-positive word), each given to the witness engine and the verifier.
inline SweepReport nonisolation_sweep(std::size_t n_max, std::size_t len_max, int L, int Lc,
                                      std::size_t budget = 1000) {
  F2Order base = F2Order::magnus();
  std::vector<FreeWord> pool;
  for (const auto& w : words_up_to(len_max)) {
    if (base.sign(w) == Sign::positive) pool.push_back(w);
  }
  std::vector<std::vector<FreeWord>> subsets{{}};
  std::vector<std::size_t> picks;
  // All subsets of size 1..n_max in lexicographic index order.
  auto expand = [&](auto&& self, std::size_t start, std::size_t remaining) -> void {
    if (remaining == 0) return;
    for (std::size_t i = start; i < pool.size(); ++i) {
      picks.push_back(i);
      std::vector<FreeWord> subset;
      for (std::size_t p : picks) subset.push_back(pool[p]);
      subsets.push_back(std::move(subset));
      self(self, i + 1, remaining - 1);
      picks.pop_back();
    }
  };
  expand(expand, 0, n_max);

  SweepReport report;
  report.total = subsets.size();
  for (auto& subset : subsets) {
    SweepItem item{BasicOpenSet::of(std::move(subset)), std::nullopt, false, {}};
    WitnessOutcome outcome = witness_nonisolation(item.constraints, L, Lc, budget);
    item.stats = outcome.stats;
    if (outcome.found()) {
      item.certificate = std::move(outcome.certificate);
      ++report.certified;
      if (item.certificate->method == WitnessMethod::structured_transform) {
        ++report.structured;
      } else {
        ++report.cone_search;
      }
      item.verified = verify_certificate(item.certificate->to_json()).valid;
      if (item.verified) ++report.verified;
    }
    report.items.push_back(std::move(item));
  }
  return report;
}

}  // namespace biorder
