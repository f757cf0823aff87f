#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "biord/errors.hpp"
#include "biord/rational.hpp"
#include "biord/sign.hpp"

namespace biord {

struct PLPoint {
  Rational x;
  Rational y;
  bool operator==(const PLPoint&) const = default;
};

/// Orientation-preserving piecewise-linear homeomorphism of the line.
///
/// Determined by breakpoints (x_i, y_i), strictly increasing in both
/// coordinates, and the slope of the left tail. The map is affine through
/// (x_0, y_0) with that slope on (-inf, x_0], interpolates between
/// breakpoints, and is the identity on [x_k, inf), so y_k == x_k.
///
/// Instances are kept canonical (no removable breakpoints), hence two maps
/// are equal as functions iff they compare equal.
class PLMap {
 public:
  PLMap() = default;

  static PLMap from_points(std::vector<PLPoint> points, Rational left_slope = 1) {
    if (left_slope <= 0) throw PreconditionError("left tail slope must be positive");
    for (std::size_t i = 1; i < points.size(); ++i) {
      if (!(points[i - 1].x < points[i].x) || !(points[i - 1].y < points[i].y)) {
        throw PreconditionError("breakpoints must increase strictly in both coordinates");
      }
    }
    if (!points.empty() && points.back().x != points.back().y) {
      throw PreconditionError("last breakpoint must lie on the diagonal (identity right tail)");
    }
    PLMap m;
    m.points_ = std::move(points);
    m.left_slope_ = left_slope;
    m.canonicalize();
    return m;
  }

  static PLMap identity() { return PLMap{}; }

  const std::vector<PLPoint>& points() const { return points_; }
  const Rational& left_slope() const { return left_slope_; }
  bool is_identity() const { return points_.empty(); }

  /// Intercept of the left tail line y = slope * x + offset.
  Rational left_offset() const {
    if (points_.empty()) return Rational(0);
    Rational o = points_.front().y - left_slope_ * points_.front().x;
    return o;
  }

  Rational operator()(const Rational& x) const { return eval(x); }

  Rational eval(const Rational& x) const {
    if (points_.empty()) return x;
    if (x <= points_.front().x) {
      Rational y = points_.front().y + left_slope_ * (x - points_.front().x);
      return y;
    }
    if (x >= points_.back().x) return x;
    auto it = std::upper_bound(points_.begin(), points_.end(), x,
                               [](const Rational& v, const PLPoint& p) { return v < p.x; });
    return interpolate(*(it - 1), *it, x);
  }

  Rational eval_inverse(const Rational& y) const {
    if (points_.empty()) return y;
    if (y <= points_.front().y) {
      Rational x = points_.front().x + (y - points_.front().y) / left_slope_;
      return x;
    }
    if (y >= points_.back().y) return y;
    auto it = std::upper_bound(points_.begin(), points_.end(), y,
                               [](const Rational& v, const PLPoint& p) { return v < p.y; });
    const PLPoint& a = *(it - 1);
    const PLPoint& b = *it;
    return interpolate({a.y, a.x}, {b.y, b.x}, y);
  }

  /// Slope of the piece containing (x - delta, x) for small delta.
  Rational left_slope_at(const Rational& x) const {
    if (points_.empty() || x > points_.back().x) return Rational(1);
    if (x <= points_.front().x) return left_slope_;
    auto it = std::lower_bound(points_.begin(), points_.end(), x,
                               [](const PLPoint& p, const Rational& v) { return p.x < v; });
    const PLPoint& b = *it;
    const PLPoint& a = *(it - 1);
    Rational s = (b.y - a.y) / (b.x - a.x);
    return s;
  }

  bool operator==(const PLMap&) const = default;

 private:
  static Rational interpolate(const PLPoint& a, const PLPoint& b, const Rational& x) {
    Rational y = a.y + (x - a.x) * (b.y - a.y) / (b.x - a.x);
    return y;
  }

  void canonicalize() {
    // Interior points where the slope does not change.
    std::vector<PLPoint> kept;
    for (std::size_t i = 0; i < points_.size(); ++i) {
      if (!kept.empty() && i + 1 < points_.size()) {
        const PLPoint& a = kept.back();
        const PLPoint& p = points_[i];
        const PLPoint& b = points_[i + 1];
        if ((p.y - a.y) * (b.x - p.x) == (b.y - p.y) * (p.x - a.x)) continue;
      }
      kept.push_back(points_[i]);
    }
    points_ = std::move(kept);
    // Trailing identity pieces.
    while (points_.size() >= 2 && points_[points_.size() - 2].x == points_[points_.size() - 2].y) {
      points_.pop_back();
    }
    // Leading pieces continuing the left tail.
    while (points_.size() >= 2) {
      const PLPoint& a = points_[0];
      const PLPoint& b = points_[1];
      if ((b.y - a.y) != left_slope_ * (b.x - a.x)) break;
      points_.erase(points_.begin());
    }
    if (points_.size() == 1 && left_slope_ == 1) points_.clear();
    if (points_.empty()) left_slope_ = 1;
  }

  std::vector<PLPoint> points_;
  Rational left_slope_ = 1;
};

inline Rational pl_eval(const PLMap& f, const Rational& x) { return f.eval(x); }

/// f o g.
inline PLMap pl_compose(const PLMap& f, const PLMap& g) {
  if (f.is_identity()) return g;
  if (g.is_identity()) return f;
  const auto& gp = g.points();
  const auto& fp = f.points();
  std::vector<PLPoint> out;
  out.reserve(gp.size() + fp.size());
  std::size_t i = 0;
  std::size_t j = 0;
  // Merge g's breakpoints with g-preimages of f's breakpoints, both sorted.
  std::vector<Rational> pre;
  pre.reserve(fp.size());
  for (const PLPoint& p : fp) pre.push_back(g.eval_inverse(p.x));
  while (i < gp.size() || j < pre.size()) {
    if (j == pre.size() || (i < gp.size() && gp[i].x < pre[j])) {
      out.push_back({gp[i].x, f.eval(gp[i].y)});
      ++i;
    } else if (i == gp.size() || pre[j] < gp[i].x) {
      out.push_back({pre[j], fp[j].y});
      ++j;
    } else {
      out.push_back({gp[i].x, fp[j].y});
      ++i;
      ++j;
    }
  }
  Rational slope = f.left_slope() * g.left_slope();
  return PLMap::from_points(std::move(out), slope);
}

inline PLMap pl_invert(const PLMap& f) {
  std::vector<PLPoint> pts;
  pts.reserve(f.points().size());
  for (const PLPoint& p : f.points()) pts.push_back({p.y, p.x});
  Rational slope = 1 / f.left_slope();
  return PLMap::from_points(std::move(pts), slope);
}

inline PLMap pl_conjugate(const PLMap& g, const PLMap& h) { return pl_compose(h, pl_compose(g, pl_invert(h))); }

inline PLMap pl_power(const PLMap& f, std::int64_t n) {
  PLMap base = n < 0 ? pl_invert(f) : f;
  std::uint64_t k = n < 0 ? static_cast<std::uint64_t>(-n) : static_cast<std::uint64_t>(n);
  PLMap acc;
  while (k > 0) {
    if (k & 1U) acc = pl_compose(acc, base);
    k >>= 1U;
    if (k > 0) base = pl_compose(base, base);
  }
  return acc;
}

/// sup{x : f(x) != x}; nullopt stands for -infinity (f is the identity).
inline std::optional<Rational> critical_point(const PLMap& f) {
  if (f.is_identity()) return std::nullopt;
  return f.points().back().x;
}

/// Sign of f(t) - t for t slightly below x.
inline Sign germ_sign_left(const PLMap& f, const Rational& x) {
  Rational d = f.eval(x) - x;
  if (d != 0) return sign_of(d);
  Rational s = 1 - f.left_slope_at(x);
  return sign_of(s);
}

/// sup|f(x) - x|; nullopt when unbounded (left tail slope other than 1).
inline std::optional<Rational> pl_norm(const PLMap& f) {
  if (f.left_slope() != 1) return std::nullopt;
  Rational best = 0;
  for (const PLPoint& p : f.points()) {
    Rational d = abs(p.y - p.x);
    if (d > best) best = d;
  }
  return best;
}

/// sup{x : sign(f(x) - x) == want}, for want = positive or negative;
/// nullopt when that set is empty.
inline std::optional<Rational> sup_of_displacement(const PLMap& f, Sign want) {
  const auto& pts = f.points();
  if (pts.empty()) return std::nullopt;
  const int w = static_cast<int>(want);
  auto disp = [&](std::size_t i) {
    Rational d = pts[i].y - pts[i].x;
    return d;
  };
  // Pieces [x_{i-1}, x_i] from the right; the right tail contributes nothing.
  for (std::size_t i = pts.size() - 1; i >= 1; --i) {
    Rational dl = disp(i - 1) * w;
    Rational dr = disp(i) * w;
    if (dr > 0) return pts[i].x;
    if (dl > 0) {
      Rational z = pts[i - 1].x + dl * (pts[i].x - pts[i - 1].x) / (dl - dr);
      return z;
    }
  }
  Rational d0 = disp(0) * w;
  if (d0 > 0) return pts[0].x;
  // Left tail: d(x) = d0 + (slope - 1)(x - x0), scaled by w.
  Rational rate = (f.left_slope() - 1) * w;
  if (rate < 0) {
    Rational z = pts[0].x - d0 / rate;
    return z;
  }
  return std::nullopt;
}

/// True when f and g coincide on [x, inf).
inline bool pl_agree_on_right(const PLMap& f, const PLMap& g, const Rational& x) {
  if (f.eval(x) != g.eval(x)) return false;
  for (const PLMap* m : {&f, &g}) {
    for (const PLPoint& p : m->points()) {
      if (p.x > x && f.eval(p.x) != g.eval(p.x)) return false;
    }
  }
  return true;
}

/// Three-piece map: identity on [t1, inf), affine (t2, u) -> (t1, t1) on
/// [t2, t1], and slope (u - v) / (t2 - t3) below t2, so t3 -> v.
inline PLMap make_tau(const Rational& t1, const Rational& t2, const Rational& t3, const Rational& u,
                      const Rational& v) {
  if (!(t3 < t2 && t2 < t1)) throw InvalidTau("make_tau needs t''' < t'' < t'");
  if (!(v < u && u < t1)) throw InvalidTau("make_tau needs v < u < t'");
  Rational slope = (u - v) / (t2 - t3);
  return PLMap::from_points({{t2, u}, {t1, t1}}, slope);
}

/// Random PL map with identity tails outside [lo, hi] up to a left
/// translation, displacement strictly below eps everywhere. Breakpoints sit
/// on the lattice (hi - lo) / 2^denominator_bits.
inline PLMap random_bump(const Rational& eps, const Rational& lo, const Rational& hi, std::mt19937_64& rng,
                         int denominator_bits = 16) {
  if (!(eps > 0)) throw PreconditionError("perturbation size must be positive");
  if (!(lo < hi)) throw PreconditionError("perturbation window must be non-empty");
  const std::uint64_t grid = std::uint64_t{1} << denominator_bits;
  auto unit = [&](std::uint64_t n) {
    Rational r(static_cast<long>(rng() % n), static_cast<long>(n));
    r.canonicalize();
    return r;
  };
  for (;;) {
    const int k = 2 + static_cast<int>(rng() % 4);
    std::vector<Rational> xs;
    for (int i = 0; i < k; ++i) {
      Rational x = lo + (hi - lo) * unit(grid);
      xs.push_back(x);
    }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    std::vector<PLPoint> pts;
    for (const Rational& x : xs) {
      // u in [1/grid, 1 - 1/grid], so |d| <= eps * (1 - 2/grid) < eps.
      Rational u(static_cast<long>(1 + rng() % (grid - 1)), static_cast<long>(grid));
      u.canonicalize();
      Rational d = eps * (2 * u - 1);
      Rational y = x + d;
      pts.push_back({x, y});
    }
    pts.push_back({hi, hi});
    bool increasing = true;
    for (std::size_t i = 1; i < pts.size(); ++i) increasing = increasing && pts[i - 1].y < pts[i].y;
    if (increasing) return PLMap::from_points(std::move(pts));
  }
}

/// psi o f for a seeded random bump psi of norm below eps. The window
/// defaults to the hull of f's breakpoints widened by 1.
inline PLMap perturb(const PLMap& f, const Rational& eps, std::uint64_t seed,
                     std::optional<std::pair<Rational, Rational>> window = std::nullopt) {
  Rational lo = -1;
  Rational hi = 1;
  if (window) {
    lo = window->first;
    hi = window->second;
  } else if (!f.is_identity()) {
    lo = f.points().front().x - 1;
    hi = f.points().back().x + 1;
  }
  std::mt19937_64 rng(seed);
  return pl_compose(random_bump(eps, lo, hi, rng), f);
}

// ---------------------------------------------------------------------------
// Text format: `offset; (x0,y0) (x1,y1) ...`, where the left tail is
// x -> x + offset. A left tail of slope s != 1 is written `offset slope s;`
// with the tail x -> s*x + offset.

inline std::string format_plmap(const PLMap& f) {
  std::string s = to_string(f.left_offset());
  if (f.left_slope() != 1) s += " slope " + to_string(f.left_slope());
  s += ';';
  for (const PLPoint& p : f.points()) s += " (" + to_string(p.x) + ',' + to_string(p.y) + ')';
  return s;
}

inline PLMap parse_plmap(std::string_view text) {
  auto fail = [&](const std::string& why) {
    return ParseError("malformed PL map '" + std::string(text) + "': " + why);
  };
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
  };
  auto semi = text.find(';');
  if (semi == std::string_view::npos) throw fail("missing ';'");
  std::string_view head = trim(text.substr(0, semi));
  Rational slope = 1;
  auto kw = head.find("slope");
  Rational offset;
  if (kw != std::string_view::npos) {
    offset = parse_rational(trim(head.substr(0, kw)));
    slope = parse_rational(trim(head.substr(kw + 5)));
  } else {
    offset = parse_rational(head);
  }
  std::vector<PLPoint> pts;
  std::string_view rest = trim(text.substr(semi + 1));
  while (!rest.empty()) {
    if (rest.front() != '(') throw fail("expected '('");
    auto close = rest.find(')');
    if (close == std::string_view::npos) throw fail("expected ')'");
    std::string_view inner = rest.substr(1, close - 1);
    auto comma = inner.find(',');
    if (comma == std::string_view::npos) throw fail("expected ','");
    pts.push_back({parse_rational(trim(inner.substr(0, comma))), parse_rational(trim(inner.substr(comma + 1)))});
    rest = trim(rest.substr(close + 1));
  }
  PLMap m;
  try {
    m = PLMap::from_points(pts, slope);
  } catch (const PreconditionError& e) {
    throw fail(e.what());
  }
  if (m.left_slope() != slope || m.left_offset() != offset) throw fail("tail does not match the breakpoints");
  return m;
}

}  // namespace biord
