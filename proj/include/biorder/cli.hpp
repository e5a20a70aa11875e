#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "biorder/cones.hpp"
#include "biorder/dynreal.hpp"
#include "biorder/errors.hpp"
#include "biorder/freeword.hpp"
#include "biorder/homeo.hpp"
#include "biorder/isolation.hpp"
#include "biorder/order.hpp"
#include "biorder/transform.hpp"
#include "biorder/wreath.hpp"

namespace biorder::cli {

inline constexpr std::uint64_t kDefaultSeed = 20260809;

inline F2Order parse_order_arg(const std::string& arg, int degree_max = kDefaultDegreeMax) {
  if (arg.empty() || arg == "magnus") return F2Order::magnus(degree_max);
  if (arg == "magnus-swapped") return monomial_swap(F2Order::magnus(degree_max));
  std::ifstream in(arg);
  if (!in) throw Error("cannot open order descriptor '" + arg + "'");
  nlohmann::json j;
  in >> j;
  return F2Order::from_descriptor(j);
}

inline std::vector<FreeWord> parse_word_list(const std::string& csv) {
  std::vector<FreeWord> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(FreeWord::parse(item));
  }
  return out;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

inline void emit_json(const nlohmann::json& j, const std::string& out_path, std::ostream& os) {
  std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    os << text;
  } else {
    write_text_file(out_path, text);
  }
}

// Assignments as CSV rows, for --format csv.
inline std::string assignments_csv(const nlohmann::json& assigns) {
  std::string out = "word,sign\n";
  for (const auto& a : assigns) {
    out += a.at("word").get<std::string>() + "," + a.at("sign").get<std::string>() + "\n";
  }
  return out;
}

// Single entry point behind the binary; returns the process exit code.
// Exit 2: usage error. Exit 1: contradiction, truncation, not-found, or a
// failed verification. Exit 0 otherwise.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"exact computation with bi-orderings of the rank-2 free group"};
  app.require_subcommand(1);

  std::string order_arg = "magnus";
  std::string format = "json";
  std::string out_path;

  // sign
  auto* sign_cmd = app.add_subcommand("sign", "sign of a word under an order");
  std::string sign_word;
  int sign_degree = 0;
  int degree_max = kDefaultDegreeMax;
  sign_cmd->add_option("word", sign_word, "reduced word, e.g. abAB")->required();
  sign_cmd->add_option("--degree", sign_degree, "evaluate at exactly this truncation degree");
  sign_cmd->add_option("--max-degree", degree_max, "degree cap for the adaptive ladder");
  sign_cmd->add_option("--order", order_arg, "magnus | magnus-swapped | descriptor.json");

  // cmp
  auto* cmp_cmd = app.add_subcommand("cmp", "compare two words");
  std::string cmp_u, cmp_v;
  cmp_cmd->add_option("w1", cmp_u)->required();
  cmp_cmd->add_option("w2", cmp_v)->required();
  cmp_cmd->add_option("--order", order_arg);
  cmp_cmd->add_option("--max-degree", degree_max);

  // arch
  auto* arch_cmd = app.add_subcommand("arch", "archimedean comparison of two words");
  std::string arch_u, arch_v;
  arch_cmd->add_option("w1", arch_u)->required();
  arch_cmd->add_option("w2", arch_v)->required();
  arch_cmd->add_option("--order", order_arg);
  arch_cmd->add_option("--max-degree", degree_max);

  // saturate
  auto* sat_cmd = app.add_subcommand("saturate", "close a partial cone under the order axioms");
  std::string positives_arg, negatives_arg, mode_arg = "bi";
  int length_bound = 0, conj_bound = -1;
  sat_cmd->add_option("--positives", positives_arg, "comma-separated words asserted positive");
  sat_cmd->add_option("--negatives", negatives_arg, "comma-separated words asserted negative");
  sat_cmd->add_option("--length", length_bound, "word length bound L")->required();
  sat_cmd->add_option("--conj", conj_bound, "conjugator length bound Lc (default: L)");
  sat_cmd->add_option("--mode", mode_arg, "bi | left");
  sat_cmd->add_option("--out", out_path, "report path (default: stdout)");
  sat_cmd->add_option("--format", format, "json | csv");

  // census
  auto* census_cmd = app.add_subcommand("census", "count consistent completions of a cone");
  std::size_t budget = 10000;
  census_cmd->add_option("--positives", positives_arg);
  census_cmd->add_option("--negatives", negatives_arg);
  census_cmd->add_option("--length", length_bound)->required();
  census_cmd->add_option("--conj", conj_bound);
  census_cmd->add_option("--mode", mode_arg);
  census_cmd->add_option("--budget", budget, "node budget for the search");
  census_cmd->add_option("--out", out_path);
  census_cmd->add_option("--format", format);

  // witness
  auto* wit_cmd = app.add_subcommand("witness", "non-isolation certificate for a basic open set");
  wit_cmd->add_option("--positives", positives_arg, "the positivity constraints");
  wit_cmd->add_option("--length", length_bound)->required();
  wit_cmd->add_option("--conj", conj_bound);
  wit_cmd->add_option("--budget", budget);
  wit_cmd->add_option("--out", out_path);

  // verify
  auto* ver_cmd = app.add_subcommand("verify", "independently verify a certificate");
  std::string cert_path;
  ver_cmd->add_option("certificate", cert_path, "certificate JSON path")->required();

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "certify every small basic open set");
  std::size_t max_constraints = 2, max_word_length = 3;
  sweep_cmd->add_option("--max-constraints", max_constraints);
  sweep_cmd->add_option("--max-word-length", max_word_length);
  sweep_cmd->add_option("--length", length_bound)->required();
  sweep_cmd->add_option("--conj", conj_bound);
  sweep_cmd->add_option("--budget", budget);
  sweep_cmd->add_option("--out", out_path);

  // dynreal
  auto* dyn_cmd = app.add_subcommand("dynreal", "finite-stage dynamical realization");
  std::size_t elements = 50;
  int tau_length = 4;
  std::string plot_path, csv_path, word_arg;
  dyn_cmd->add_option("--order", order_arg);
  dyn_cmd->add_option("--elements", elements, "stage size N");
  dyn_cmd->add_option("--tau-length", tau_length, "class horizon for the gap atlas");
  dyn_cmd->add_option("--out", out_path, "stage JSON path");
  dyn_cmd->add_option("--word", word_arg, "word to realize");
  dyn_cmd->add_option("--plot", plot_path, "SVG of the realized map (requires --word)");
  dyn_cmd->add_option("--csv", csv_path, "breakpoint CSV of the realized map (requires --word)");

  // wreath-demo
  auto* wreath_cmd = app.add_subcommand("wreath-demo", "wreath-product axiom and gap suite");
  std::string instance_arg = "f2-magnus";
  std::size_t samples = 2000;
  std::uint64_t seed = kDefaultSeed;
  wreath_cmd->add_option("--instance", instance_arg, "f2-magnus | lamplighter");
  wreath_cmd->add_option("--samples", samples);
  wreath_cmd->add_option("--seed", seed);
  wreath_cmd->add_option("--out", out_path);

  // class-census
  auto* cls_cmd = app.add_subcommand("class-census", "archimedean classes of short words");
  std::size_t max_len = 4;
  cls_cmd->add_option("--max-length", max_len);
  cls_cmd->add_option("--order", order_arg);
  cls_cmd->add_option("--out", out_path);
  cls_cmd->add_option("--format", format);

  std::vector<const char*> argv;
  argv.push_back("biorder");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (sign_cmd->parsed()) {
      // --degree caps the truncation exactly there; --max-degree caps the ladder.
      F2Order o = parse_order_arg(order_arg, sign_degree > 0 ? sign_degree : degree_max);
      out << sign_char(o.sign(FreeWord::parse(sign_word))) << "\n";
      return 0;
    }
    if (cmp_cmd->parsed()) {
      F2Order o = parse_order_arg(order_arg, degree_max);
      Cmp c = o.compare(FreeWord::parse(cmp_u), FreeWord::parse(cmp_v));
      out << (c == Cmp::less ? "<" : c == Cmp::equal ? "=" : ">") << "\n";
      return 0;
    }
    if (arch_cmd->parsed()) {
      F2Order o = parse_order_arg(order_arg, degree_max);
      out << arch_str(o.arch_cmp(FreeWord::parse(arch_u), FreeWord::parse(arch_v))) << "\n";
      return 0;
    }

    if (sat_cmd->parsed() || census_cmd->parsed()) {
      if (conj_bound < 0) conj_bound = length_bound;
      ConeMode mode = parse_cone_mode(mode_arg);
      nlohmann::json config{{"command", sat_cmd->parsed() ? "saturate" : "census"},
                            {"positives", positives_arg},
                            {"negatives", negatives_arg},
                            {"length", std::to_string(length_bound)},
                            {"conj", std::to_string(conj_bound)},
                            {"mode", mode_arg}};
      PartialCone cone(length_bound, conj_bound, mode);
      bool clash = false;
      std::string clash_word;
      try {
        for (const auto& w : parse_word_list(positives_arg)) cone.assert_sign(w, Sign::positive);
        for (const auto& w : parse_word_list(negatives_arg)) cone.assert_sign(w, Sign::negative);
      } catch (const ImmediateClash& e) {
        clash = true;
        clash_word = e.what();
      }

      if (sat_cmd->parsed()) {
        if (clash) {
          nlohmann::json j{{"config", config},
                           {"outcome", "contradiction"},
                           {"immediate_clash", clash_word},
                           {"assignments", nlohmann::json::array()},
                           {"derivations", nlohmann::json::array()},
                           {"exhausted", false}};
          emit_json(j, out_path, out);
          return 1;
        }
        SaturationReport rep = cone.saturate();
        nlohmann::json j = cone.report_json(rep);
        j["config"] = config;
        if (format == "csv") {
          std::string csv = assignments_csv(j.at("assignments"));
          if (out_path.empty()) out << csv;
          else write_text_file(out_path, csv);
        } else {
          emit_json(j, out_path, out);
        }
        return rep.consistent ? 0 : 1;
      }

      // census
      config["budget"] = std::to_string(budget);
      if (clash || !cone.saturate().consistent) {
        nlohmann::json j{{"config", config},
                         {"outcome", "contradiction"},
                         {"count", "0"},
                         {"exhausted", false},
                         {"completions", nlohmann::json::array()}};
        emit_json(j, out_path, out);
        return 1;
      }
      auto result = cone.enumerate_extensions(budget);
      nlohmann::json comps = nlohmann::json::array();
      for (const auto& c : result.completions) {
        nlohmann::json assigns = nlohmann::json::array();
        for (const auto& [w, s] : c.assignments()) {
          assigns.push_back({{"word", w.str()}, {"sign", sign_str(s)}});
        }
        comps.push_back(assigns);
      }
      nlohmann::json j{{"config", config},
                       {"outcome", "consistent"},
                       {"count", std::to_string(result.completions.size())},
                       {"nodes", std::to_string(result.nodes)},
                       {"exhausted", result.exhausted},
                       {"completions", comps}};
      if (format == "csv") {
        std::string csv = "completion,word,sign\n";
        for (std::size_t i = 0; i < comps.size(); ++i) {
          for (const auto& a : comps[i]) {
            csv += std::to_string(i) + "," + a.at("word").get<std::string>() + "," +
                   a.at("sign").get<std::string>() + "\n";
          }
        }
        if (out_path.empty()) out << csv;
        else write_text_file(out_path, csv);
      } else {
        emit_json(j, out_path, out);
      }
      if (!out_path.empty()) {
        out << result.completions.size() << (result.exhausted ? " (budget exhausted)" : "") << "\n";
      }
      return 0;
    }

    if (wit_cmd->parsed()) {
      if (conj_bound < 0) conj_bound = length_bound;
      BasicOpenSet U = BasicOpenSet::of(parse_word_list(positives_arg));
      nlohmann::json config{{"command", "witness"},
                            {"positives", positives_arg},
                            {"length", std::to_string(length_bound)},
                            {"conj", std::to_string(conj_bound)},
                            {"budget", std::to_string(budget)}};
      WitnessOutcome outcome = witness_nonisolation(U, length_bound, conj_bound, budget);
      if (!outcome.found()) {
        nlohmann::json j{{"config", config},
                         {"outcome", "not-found"},
                         {"stats",
                          {{"structured_scanned", std::to_string(outcome.stats.structured_scanned)},
                           {"cone_attempts", std::to_string(outcome.stats.cone_attempts)},
                           {"budget_exhausted", outcome.stats.budget_exhausted}}}};
        emit_json(j, out_path, out);
        err << "no certificate found\n";
        return 1;
      }
      nlohmann::json j = outcome.certificate->to_json();
      j["config"] = config;
      emit_json(j, out_path, out);
      return 0;
    }

    if (ver_cmd->parsed()) {
      std::ifstream in(cert_path);
      if (!in) throw Error("cannot open certificate '" + cert_path + "'");
      nlohmann::json j;
      in >> j;
      VerifyResult r = verify_certificate(j);
      if (r.valid) {
        out << "valid\n";
        return 0;
      }
      err << "invalid certificate: " << r.reason << "\n";
      return 1;
    }

    if (sweep_cmd->parsed()) {
      if (conj_bound < 0) conj_bound = length_bound;
      nlohmann::json config{{"command", "sweep"},
                            {"max_constraints", std::to_string(max_constraints)},
                            {"max_word_length", std::to_string(max_word_length)},
                            {"length", std::to_string(length_bound)},
                            {"conj", std::to_string(conj_bound)},
                            {"budget", std::to_string(budget)}};
      SweepReport report = nonisolation_sweep(max_constraints, max_word_length, length_bound,
                                              conj_bound, budget);
      nlohmann::json j = report.to_json();
      j["config"] = config;
      emit_json(j, out_path, out);
      bool ok = report.certified == report.total && report.verified == report.certified;
      if (!ok) err << "sweep incomplete: " << report.certified << "/" << report.total << " certified\n";
      return ok ? 0 : 1;
    }

    if (dyn_cmd->parsed()) {
      F2Order o = parse_order_arg(order_arg, degree_max);
      nlohmann::json config{{"command", "dynreal"},
                            {"order", o.descriptor()},
                            {"elements", std::to_string(elements)},
                            {"tau_length", std::to_string(tau_length)},
                            {"word", word_arg}};
      Stage stage = build_embedding(o, elements);
      ClassAtlas atlas = build_tau(o, tau_length);
      nlohmann::json j = stage_json(stage, &atlas);
      j["config"] = config;
      if (!word_arg.empty()) {
        FreeWord g = FreeWord::parse(word_arg);
        RationalPLMap f = realize(g, stage);
        nlohmann::json bps = nlohmann::json::array();
        for (const auto& [x, y] : f.breakpoints()) {
          bps.push_back({rational_str(x), rational_str(y)});
        }
        j["realized"] = {{"word", g.str()}, {"breakpoints", bps}};
        if (!plot_path.empty()) {
          std::ofstream svg(plot_path);
          if (!svg) throw Error("cannot write '" + plot_path + "'");
          write_svg(f, svg, "realization of " + (g.is_identity() ? std::string("e") : g.str()),
                    &config);
        }
        if (!csv_path.empty()) {
          std::ofstream csv(csv_path);
          if (!csv) throw Error("cannot write '" + csv_path + "'");
          write_breakpoints_csv(f, csv);
        }
      }
      emit_json(j, out_path, out);
      return 0;
    }

    if (wreath_cmd->parsed()) {
      nlohmann::json config{{"command", "wreath-demo"},
                            {"instance", instance_arg},
                            {"samples", std::to_string(samples)},
                            {"seed", std::to_string(seed)}};
      WreathSuiteReport r;
      if (instance_arg == "f2-magnus") {
        auto w = make_f2_magnus_wreath();
        F2MagnusGroup base = w.base();
        r = run_wreath_suite<F2MagnusGroup>(
            w, [base](std::mt19937_64& rng) { return base.sample(rng); }, samples, seed);
      } else if (instance_arg == "lamplighter") {
        auto w = make_lamplighter_wreath();
        LamplighterGroup base = w.base();
        r = run_wreath_suite<LamplighterGroup>(
            w, [base](std::mt19937_64& rng) { return base.sample(rng); }, samples, seed);
      } else {
        throw Error("unknown instance '" + instance_arg + "'");
      }
      nlohmann::json j{
          {"config", config},
          {"samples", std::to_string(r.samples)},
          {"ball_radius", instance_arg == "f2-magnus" ? "3" : "2"},
          {"violations",
           {{"associativity", std::to_string(r.associativity_violations)},
            {"identity", std::to_string(r.identity_violations)},
            {"inverse", std::to_string(r.inverse_violations)},
            {"double_inverse", std::to_string(r.double_inverse_violations)},
            {"cone_product", std::to_string(r.cone_product_violations)},
            {"cone_conjugation", std::to_string(r.cone_conjugation_violations)},
            {"trichotomy", std::to_string(r.trichotomy_violations)},
            {"coset_subgroup", std::to_string(r.coset_subgroup_violations)},
            {"gap_sampled", std::to_string(r.gap_sampled_violations)}}},
          {"gap_elimination",
           {{"lower", r.gap_lower},
            {"upper", r.gap_upper},
            {"power_bound", "8"},
            {"sanity_inverted_fails", r.gap_sanity}}}};
      emit_json(j, out_path, out);
      bool ok = r.total_violations() == 0 && r.gap_lower && r.gap_upper && r.gap_sanity;
      return ok ? 0 : 1;
    }

    if (cls_cmd->parsed()) {
      F2Order o = parse_order_arg(order_arg, degree_max);
      nlohmann::json config{{"command", "class-census"},
                            {"order", o.descriptor()},
                            {"max_length", std::to_string(max_len)}};
      // Census only: which monomials occur as classes at this horizon.
      std::vector<std::pair<Monomial, std::pair<FreeWord, std::size_t>>> classes;
      for (const auto& w : words_up_to(max_len)) {
        Monomial m = o.arch_class(w);
        bool found = false;
        for (auto& [cm, data] : classes) {
          if (cm == m) {
            ++data.second;
            found = true;
            break;
          }
        }
        if (!found) classes.push_back({m, {w, 1}});
      }
      std::sort(classes.begin(), classes.end(),
                [&](const auto& x, const auto& y) { return monomial_less(x.first, y.first, o.monomial_order()); });
      if (format == "csv") {
        std::string csv = "class,first_word,words\n";
        for (const auto& [m, data] : classes) {
          csv += m.str() + "," + data.first.str() + "," + std::to_string(data.second) + "\n";
        }
        if (out_path.empty()) out << csv;
        else write_text_file(out_path, csv);
      } else {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& [m, data] : classes) {
          rows.push_back({{"class", m.str()},
                          {"first_word", data.first.str()},
                          {"words", std::to_string(data.second)}});
        }
        emit_json(nlohmann::json{{"config", config}, {"classes", rows}}, out_path, out);
      }
      return 0;
    }
  } catch (const TruncationExceeded& e) {
    err << "truncation exceeded: " << e.what() << "\n";
    return 1;
  } catch (const PreconditionFailed& e) {
    err << "precondition failed: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "no subcommand\n";
  return 2;
}

}  // namespace biorder::cli
