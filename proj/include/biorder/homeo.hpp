#pragma once

#include <algorithm>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "biorder/errors.hpp"

namespace biorder {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string rational_str(const Rational& r) {
  return numerator(r).str() + "/" + denominator(r).str();
}

inline Rational parse_rational(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(Int(std::string(text)));
  Int num(std::string(text.substr(0, slash)));
  Int den(std::string(text.substr(slash + 1)));
  if (den == 0) throw Error("rational with zero denominator");
  return Rational(num, den);
}

/// An orientation-preserving piecewise-linear bijection of [0,1] with exact
/// rational breakpoints, endpoints fixed. Breakpoints are normalized: strictly
/// increasing in both coordinates with collinear interior points removed, so
/// equality of breakpoint lists is equality of maps.
class RationalPLMap {
 public:
  using Point = std::pair<Rational, Rational>;

  RationalPLMap() : pts_{{Rational(0), Rational(0)}, {Rational(1), Rational(1)}} {}

  static RationalPLMap from_breakpoints(std::vector<Point> pts) {
    if (pts.size() < 2) throw Error("a PL map needs at least the two endpoints");
    std::sort(pts.begin(), pts.end(),
              [](const Point& p, const Point& q) { return p.first < q.first; });
    if (pts.front() != Point{Rational(0), Rational(0)} ||
        pts.back() != Point{Rational(1), Rational(1)}) {
      throw Error("breakpoints must start at (0,0) and end at (1,1)");
    }
    for (std::size_t i = 1; i < pts.size(); ++i) {
      if (pts[i].first <= pts[i - 1].first || pts[i].second <= pts[i - 1].second) {
        throw Error("breakpoints must be strictly increasing in both coordinates");
      }
    }
    RationalPLMap f;
    f.pts_ = std::move(pts);
    f.normalize();
    return f;
  }

  const std::vector<Point>& breakpoints() const { return pts_; }

  Rational operator()(const Rational& x) const {
    if (x < 0 || x > 1) throw Error("PL map evaluated outside [0,1]");
    auto it = std::upper_bound(pts_.begin(), pts_.end(), x,
                               [](const Rational& v, const Point& p) { return v < p.first; });
    // it points past the segment start; x lies in [prev.x, it.x]
    const Point& hi = (it == pts_.end()) ? pts_.back() : *it;
    const Point& lo = *(it - 1);
    if (x == lo.first) return lo.second;
    Rational t = (x - lo.first) / (hi.first - lo.first);
    return lo.second + t * (hi.second - lo.second);
  }

  RationalPLMap inverted() const {
    std::vector<Point> pts;
    pts.reserve(pts_.size());
    for (const auto& [x, y] : pts_) pts.emplace_back(y, x);
    RationalPLMap f;
    f.pts_ = std::move(pts);
    return f;
  }

  bool is_identity() const { return pts_.size() == 2; }

  friend bool operator==(const RationalPLMap& f, const RationalPLMap& g) {
    return f.pts_ == g.pts_;
  }

 private:
  void normalize() {
    std::vector<Point> out;
    out.reserve(pts_.size());
    for (const auto& p : pts_) {
      while (out.size() >= 2) {
        const Point& a = out[out.size() - 2];
        const Point& b = out.back();
        // Drop b if it lies on the segment from a to p.
        if ((b.second - a.second) * (p.first - a.first) ==
            (p.second - a.second) * (b.first - a.first)) {
          out.pop_back();
        } else {
          break;
        }
      }
      out.push_back(p);
    }
    pts_ = std::move(out);
  }

  std::vector<Point> pts_;
};

// f after g, exact: breakpoints at g's breakpoints and at g-preimages of f's.
inline RationalPLMap compose(const RationalPLMap& f, const RationalPLMap& g) {
  std::set<Rational> xs;
  for (const auto& [x, y] : g.breakpoints()) xs.insert(x);
  RationalPLMap ginv = g.inverted();
  for (const auto& [x, y] : f.breakpoints()) xs.insert(ginv(x));
  std::vector<RationalPLMap::Point> pts;
  pts.reserve(xs.size());
  for (const auto& x : xs) pts.emplace_back(x, f(g(x)));
  return RationalPLMap::from_breakpoints(std::move(pts));
}

inline RationalPLMap pl_identity() { return RationalPLMap(); }

// Where f dips below the diagonal, and a point beyond that where it rises
// strictly above. Both are exact segment-versus-diagonal computations.
struct TailAnalysis {
  Rational violation_sup;                  // sup {x : f(x) < x}, 0 if none
  std::optional<Rational> strict_witness;  // some y in (violation_sup, 1) with f(y) > y
};

inline TailAnalysis analyze_tail(const RationalPLMap& f) {
  TailAnalysis out{Rational(0), std::nullopt};
  const auto& pts = f.breakpoints();
  // Rightmost violation: scan segments right to left for f(x) - x < 0.
  for (std::size_t i = pts.size() - 1; i >= 1; --i) {
    const auto& [x1, y1] = pts[i - 1];
    const auto& [x2, y2] = pts[i];
    Rational d1 = y1 - x1, d2 = y2 - x2;
    if (d2 < 0) {
      out.violation_sup = x2;
      break;
    }
    if (d1 < 0) {
      // d crosses zero inside the segment.
      out.violation_sup = x1 + (x2 - x1) * d1 / (d1 - d2);
      break;
    }
  }
  // A strict point after the violation zone.
  const Rational& v = out.violation_sup;
  if (v < 1) {
    for (std::size_t i = 1; i < pts.size(); ++i) {
      const auto& [x1, y1] = pts[i - 1];
      const auto& [x2, y2] = pts[i];
      if (x2 <= v) continue;
      Rational d1 = y1 - x1, d2 = y2 - x2;
      if (d1 <= 0 && d2 <= 0) continue;
      // The sub-interval of [x1, x2] where f is strictly above the diagonal.
      Rational alpha = x1, beta = x2;
      if (d1 <= 0) alpha = x1 + (x2 - x1) * d1 / (d1 - d2);
      if (d2 <= 0) beta = x1 + (x2 - x1) * d1 / (d1 - d2);
      Rational lo = std::max(alpha, v);
      Rational hi = std::min(beta, Rational(1));
      if (lo < hi) {
        out.strict_witness = (lo + hi) / 2;
        break;
      }
    }
  }
  return out;
}

// Membership in the positive cone: f >= id on a right tail [t, 1] with at
// least one strictly rising point there.
inline bool in_positive_cone(const RationalPLMap& f) {
  TailAnalysis t = analyze_tail(f);
  return t.violation_sup < 1 && t.strict_witness.has_value();
}

enum class PartialOrderResult { less, greater, equal, incomparable };

// Convention: the greater map dominates on a right tail, i.e. f > g when
// g^-1 . f lies in the cone. With finitely many breakpoints the rightmost
// off-diagonal segment of the quotient always decides, so distinct PL maps
// compare; the incomparable arm exists for carriers without that property.
inline constexpr std::string_view kOrderConvention = "greater-dominates-right-tail";

inline PartialOrderResult partial_cmp(const RationalPLMap& f, const RationalPLMap& g) {
  if (f == g) return PartialOrderResult::equal;
  if (in_positive_cone(compose(g.inverted(), f))) return PartialOrderResult::greater;
  if (in_positive_cone(compose(f.inverted(), g))) return PartialOrderResult::less;
  return PartialOrderResult::incomparable;
}

inline void write_breakpoints_csv(const RationalPLMap& f, std::ostream& os) {
  os << "x,y\n";
  for (const auto& [x, y] : f.breakpoints()) {
    os << rational_str(x) << "," << rational_str(y) << "\n";
  }
}

// Plot of the map against the diagonal. Coordinates are scaled to integers
// exactly; no floating point is formed.
inline void write_svg(const RationalPLMap& f, std::ostream& os, const std::string& title,
                      const nlohmann::json* config = nullptr) {
  const long long size = 720, margin = 40;
  auto px = [&](const Rational& v) {
    Rational scaled(v * size);
    long long whole = static_cast<long long>(Int(numerator(scaled) / denominator(scaled)));
    return margin + whole;
  };
  auto py = [&](const Rational& v) { return margin + size - (px(v) - margin); };
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size + 2 * margin
     << "\" height=\"" << size + 2 * margin << "\" viewBox=\"0 0 " << size + 2 * margin << " "
     << size + 2 * margin << "\">\n";
  if (config) os << "<!-- config: " << config->dump() << " -->\n";
  os << "<title>" << title << "</title>\n";
  os << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << size << "\" height=\""
     << size << "\" fill=\"white\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << px(Rational(0)) << "\" y1=\"" << py(Rational(0)) << "\" x2=\""
     << px(Rational(1)) << "\" y2=\"" << py(Rational(1))
     << "\" stroke=\"lightgray\" stroke-dasharray=\"4\"/>\n";
  os << "<polyline fill=\"none\" stroke=\"crimson\" stroke-width=\"2\" points=\"";
  for (const auto& [x, y] : f.breakpoints()) os << px(x) << "," << py(y) << " ";
  os << "\"/>\n</svg>\n";
}

// Random monotone breakpoint set on a power-of-two grid.
inline RationalPLMap sample_pl_map(std::mt19937_64& rng, int grid_log2 = 6, int max_interior = 4) {
  long long grid = 1LL << grid_log2;
  std::uniform_int_distribution<int> count(1, max_interior);
  std::uniform_int_distribution<long long> cell(1, grid - 1);
  int k = count(rng);
  std::set<long long> xs, ys;
  while (static_cast<int>(xs.size()) < k) xs.insert(cell(rng));
  while (static_cast<int>(ys.size()) < k) ys.insert(cell(rng));
  std::vector<RationalPLMap::Point> pts;
  pts.emplace_back(Rational(0), Rational(0));
  auto xi = xs.begin();
  auto yi = ys.begin();
  for (; xi != xs.end(); ++xi, ++yi) pts.emplace_back(Rational(*xi, grid), Rational(*yi, grid));
  pts.emplace_back(Rational(1), Rational(1));
  return RationalPLMap::from_breakpoints(std::move(pts));
}

}  // namespace biorder
