#pragma once

/*
 * Sharp bounds between entropies of two orders, the error probability and
 * the Bhattacharyya parameter, plus sampling of the feasible-region
 * boundaries as curves.
 */

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "renyi/conditional.hpp"
#include "renyi/couplers.hpp"
#include "renyi/extremal.hpp"
#include "renyi/orders.hpp"
#include "renyi/simplex.hpp"

namespace renyi {

enum class BoundKind { Lower, Upper };

enum class TheoremId {
  NormVW,      // unconditional l_r / l_s norms
  EntropyVW,   // unconditional H_a / H_b
  VsInfinity,  // conditional H_a against H_inf
  Binary,      // conditional, binary X
  ST,          // conditional via (S,T)
  UV,          // conditional via (U,V)
  FanoUncond,
  FanoCond,
  PeFromH,
  ZFromPe,
  PeFromZ,
  H2VsHhalf,
};

inline constexpr TheoremId kAllTheorems[] = {
    TheoremId::NormVW,     TheoremId::EntropyVW, TheoremId::VsInfinity, TheoremId::Binary,
    TheoremId::ST,         TheoremId::UV,        TheoremId::FanoUncond, TheoremId::FanoCond,
    TheoremId::PeFromH,    TheoremId::ZFromPe,   TheoremId::PeFromZ,    TheoremId::H2VsHhalf};

inline std::string to_string(TheoremId id) {
  switch (id) {
    case TheoremId::NormVW: return "norm-v-w";
    case TheoremId::EntropyVW: return "entropy-v-w";
    case TheoremId::VsInfinity: return "vs-infinity";
    case TheoremId::Binary: return "binary";
    case TheoremId::ST: return "st";
    case TheoremId::UV: return "uv";
    case TheoremId::FanoUncond: return "fano-uncond";
    case TheoremId::FanoCond: return "fano-cond";
    case TheoremId::PeFromH: return "pe";
    case TheoremId::ZFromPe: return "z-from-pe";
    case TheoremId::PeFromZ: return "pe-from-z";
    case TheoremId::H2VsHhalf: return "h2-vs-hhalf";
  }
  return "?";
}

inline TheoremId parse_theorem(std::string_view s) {
  for (TheoremId id : kAllTheorems)
    if (to_string(id) == s) return id;
  throw DomainError("unknown theorem id '" + std::string(s) + "'");
}

inline std::string to_string(BoundKind k) { return k == BoundKind::Lower ? "lower" : "upper"; }

using Construction = std::variant<ExtremalV, ExtremalW, ExtremalPairST, ExtremalPairUV>;

struct BoundResult {
  BoundKind kind;
  double value;
  std::optional<Construction> witness;
  TheoremId theorem;
};

struct BoundPair {
  BoundResult lower;
  BoundResult upper;
};

namespace detail {

inline int effective_n(size_t support) { return int(std::max<size_t>(support, 2)); }

inline void check_eps(double eps) {
  if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("error probability must be in [0, 1)");
}

inline void check_not_zero(Order a, const char* what) {
  if (a.is_zero()) throw DomainError(std::string(what) + " order must be positive");
}

inline void check_n_value(int n, double value) {
  if (n < 2) throw DomainError("alphabet size must be >= 2");
  if (!(value >= -kRangeSlack && value <= std::log(double(n)) + kRangeSlack))
    throw DomainError("entropy value outside [0, ln n]");
}

}  // namespace detail

/// Bounds on ||P||_s given ||P||_r.
inline BoundPair uncond_norm_bounds(const ProbVec& P, Order r, Order s) {
  if (r.is_zero() || r.is_shannon() || s.is_zero() || s.is_shannon())
    throw DomainError("norm orders must lie in (0,1) or (1,inf]");
  const int n = detail::effective_n(P.support_size());
  const double t = lr_norm(P, r);
  const ExtremalV v{n, inv_norm_v(n, r, t)};
  const ExtremalW w{inv_norm_w(r, t)};
  BoundResult bv{BoundKind::Lower, norm_v(n, v.p, s), v, TheoremId::NormVW};
  BoundResult bw{BoundKind::Upper, norm_w(w.p, s), w, TheoremId::NormVW};
  if (gamma(r, s) >= 1.0) return {bv, bw};
  bv.kind = BoundKind::Upper;
  bw.kind = BoundKind::Lower;
  return {bw, bv};
}

/// Bounds on H_b(P) given H_a(P) for an alphabet of `n` letters.
inline BoundPair uncond_bounds(int n, double h_a, Order a, Order b) {
  detail::check_not_zero(a, "fixed");
  detail::check_n_value(n, h_a);
  const ExtremalV v{n, inv_entropy_v(n, a, h_a)};
  const ExtremalW w{inv_entropy_w(a, h_a)};
  BoundResult bv{BoundKind::Lower, renyi_v(n, v.p, b), v, TheoremId::EntropyVW};
  BoundResult bw{BoundKind::Upper, renyi_w(w.p, b), w, TheoremId::EntropyVW};
  if (a <= b) return {bv, bw};
  bv.kind = BoundKind::Upper;
  bw.kind = BoundKind::Lower;
  return {bw, bv};
}

inline BoundPair uncond_bounds(const ProbVec& P, Order a, Order b) {
  return uncond_bounds(detail::effective_n(P.support_size()), renyi_entropy(P, a), a, b);
}

/// Upper bound on H_a(X|Y) given H_inf(X|Y).
inline BoundResult bound_given_infinity(int n, double h_inf, Order a) {
  detail::check_n_value(n, h_inf);
  if (a.is_zero() || a.is_infinity()) throw DomainError("order must lie in (0, inf)");
  const ExtremalV v{n, std::clamp(std::exp(-h_inf), 1.0 / n, 1.0)};
  return {BoundKind::Upper, renyi_v(n, v.p, a), v, TheoremId::VsInfinity};
}

/// Lower bound on H_inf(X|Y) given H_a(X|Y).
inline BoundResult infinity_given_bound(int n, double h_a, Order a) {
  detail::check_n_value(n, h_a);
  if (a.is_zero() || a.is_infinity()) throw DomainError("order must lie in (0, inf)");
  const ExtremalV v{n, inv_entropy_v(n, a, h_a)};
  return {BoundKind::Lower, -std::log(v.p), v, TheoremId::VsInfinity};
}

struct VsInfinityBounds {
  BoundResult upper_on_ha;
  BoundResult lower_on_hinf;
};

inline VsInfinityBounds cond_bound_vs_infinity(const CondSource& src, Order a) {
  const int n = detail::effective_n(src.support_x());
  return {bound_given_infinity(n, cond_renyi(src, Order::infinity()), a),
          infinity_given_bound(n, cond_renyi(src, a), a)};
}

/// Bound on H_b(X|Y) given H_a(X|Y) for binary X.
inline BoundResult cond_bound_binary(double h_a, Order a, Order b) {
  detail::check_n_value(2, h_a);
  const bool half_up = a.value() >= 0.5 && b.value() >= 0.5;
  const bool extension = a.is_shannon() && b.is_finite() && b.value() < 0.5;
  if (!half_up && !extension) throw DomainError("binary bound needs orders in [1/2, inf]");
  const ExtremalV v{2, inv_entropy_v(2, a, h_a)};
  return {a <= b ? BoundKind::Lower : BoundKind::Upper, renyi_v(2, v.p, b), v, TheoremId::Binary};
}

inline BoundResult cond_bound_st(int n, double h_a, Order a, Order b) {
  detail::check_st_order(a);
  detail::check_st_order(b);
  detail::check_n_value(n, h_a);
  const auto pair = build_st(n, a, b, std::exp(theta(a) * h_a));
  return {a < b ? BoundKind::Lower : BoundKind::Upper, pair_cond_renyi(pair, b), pair, TheoremId::ST};
}

inline BoundResult cond_bound_st(const CondSource& src, Order a, Order b) {
  return cond_bound_st(int(src.support_x()), cond_renyi(src, a), a, b);
}

inline BoundResult cond_bound_uv(double h_a, Order a, Order b) {
  detail::check_not_zero(b, "bounded");
  const auto pair = build_uv_from_entropy(a, h_a);
  return {a <= b ? BoundKind::Upper : BoundKind::Lower, pair_cond_renyi(pair, b), pair, TheoremId::UV};
}

inline BoundResult cond_bound_uv(const CondSource& src, Order a, Order b) {
  return cond_bound_uv(cond_renyi(src, a), a, b);
}

enum class FanoKind { Unconditional, Conditional };

struct FanoBounds {
  BoundResult lower;
  std::optional<BoundResult> upper;
};

/// Lower and (when n is given) upper bounds on H_a given the error
/// probability eps.
inline FanoBounds fano_renyi(FanoKind kind, Order a, double eps, std::optional<int> n = std::nullopt) {
  detail::check_eps(eps);
  if (a.is_zero() || a.is_infinity()) throw DomainError("order must lie in (0, inf)");
  const TheoremId id = kind == FanoKind::Conditional ? TheoremId::FanoCond : TheoremId::FanoUncond;
  const double u = 1.0 - eps;
  const double k = snap_floor(1.0 / u);
  const double head = std::fmax(1.0 - u * k, 0.0);  // 1 - (1-eps) k
  const double tail = eps - u * k;
  double low = 0.0;
  std::optional<Construction> low_witness;
  if (kind == FanoKind::Unconditional) {
    const double rem = detail::w_cell(u).rem;
    if (a.is_shannon()) {
      low = -k * u * std::log(u) - (rem > 0.0 ? rem * std::log(rem) : 0.0);
    } else {
      const double v = a.value();
      low = std::log(k * std::pow(u, v) + std::pow(rem, v)) / (1.0 - v);
    }
    low_witness = ExtremalW{u};
  } else {
    if (a.is_shannon()) {
      low = head * (1.0 + k) * std::log1p(k) - tail * k * std::log(k);
    } else {
      const double v = a.value();
      low = v / (1.0 - v) * std::log(std::pow(1.0 + k, 1.0 / v) * head - std::pow(k, 1.0 / v) * tail);
    }
    low_witness = build_uv(Order::infinity(), u);
  }
  FanoBounds out{{BoundKind::Lower, low, low_witness, id}, std::nullopt};
  if (n) {
    if (*n < 2) throw DomainError("alphabet size must be >= 2");
    const double nn = *n;
    double up;
    if (eps > (nn - 1) / nn) {
      up = std::log(nn);
    } else if (a.is_shannon()) {
      up = binary_entropy(eps) + eps * std::log(nn - 1);
    } else {
      const double v = a.value();
      up = std::log(std::pow(u, v) + std::pow(nn - 1, 1.0 - v) * std::pow(eps, v)) / (1.0 - v);
    }
    out.upper = BoundResult{BoundKind::Upper, up, ExtremalV{*n, std::fmax(u, 1.0 / nn)}, id};
  }
  return out;
}

struct PeBounds {
  BoundResult upper;
  std::optional<BoundResult> lower;
};

/// Bounds on P_e(X|Y) given H_a(X|Y); the lower bound needs n = |supp(P_X)|.
inline PeBounds pe_bounds(Order a, double h_a, std::optional<int> n = std::nullopt) {
  if (a.is_zero()) throw DomainError("order must be positive");
  if (!(h_a >= -kRangeSlack) || !std::isfinite(h_a)) throw DomainError("entropy must be >= 0");
  h_a = std::fmax(h_a, 0.0);
  const double E = std::exp(h_a);
  const double m = snap_floor(E);
  double up;
  std::optional<Construction> up_witness;
  if (std::fabs(E - m) <= 1e-12 * m) {
    up = 1.0 - 1.0 / m;
  } else if (a.is_infinity()) {
    up = 1.0 - 1.0 / E;
  } else if (a.is_shannon()) {
    const double lam = (std::log1p(m) - h_a) / (std::log1p(m) - std::log(m));
    up = 1.0 - (lam / m + (1.0 - lam) / (m + 1));
  } else {
    const double v = a.value();
    const double r1 = std::pow(1.0 + m, 1.0 / v), r0 = std::pow(m, 1.0 / v);
    up = 1.0 - (r1 - r0 - std::exp((1.0 - v) / v * h_a)) / (m * r1 - r0 * (1.0 + m));
  }
  if (!a.is_shannon()) up_witness = build_uv_from_entropy(a, h_a);
  PeBounds out{{BoundKind::Upper, up, up_witness, TheoremId::PeFromH}, std::nullopt};
  if (n) {
    detail::check_n_value(*n, h_a);
    const ExtremalV v{*n, inv_entropy_v(*n, a, h_a)};
    out.lower = BoundResult{BoundKind::Lower, 1.0 - v.p, v, TheoremId::PeFromH};
  }
  return out;
}

enum class BhattDirection { ZFromPe, PeFromZ };

/// Z from eps: bounds on Z(X|Y) given P_e(X|Y) = eps.
/// Pe from Z: bounds on P_e(X|Y) given Z(X|Y). `n` is |X|.
inline BoundPair bhattacharyya_bounds(BhattDirection dir, double x, int n) {
  if (n < 2) throw DomainError("alphabet size must be >= 2");
  const double nn = n;
  if (dir == BhattDirection::ZFromPe) {
    if (!(x >= 0.0 && x <= (nn - 1) / nn + kRangeSlack))
      throw DomainError("error probability must be in [0, (n-1)/n]");
    x = std::fmin(x, (nn - 1) / nn);
    const double u = 1.0 - x;
    const double k = snap_floor(1.0 / u);
    const double low = (k + (1.0 + k) * std::fmax(1.0 - u * k, 0.0) - 1.0) / (nn - 1);
    const double up = (nn - 2) / (nn - 1) * x + 2.0 * std::sqrt(x * u / (nn - 1));
    return {{BoundKind::Lower, low, build_uv(Order::infinity(), u), TheoremId::ZFromPe},
            {BoundKind::Upper, std::fmin(up, 1.0), ExtremalV{n, std::fmax(u, 1.0 / nn)}, TheoremId::ZFromPe}};
  }
  if (!(x >= -kRangeSlack && x <= 1.0 + kRangeSlack)) throw DomainError("Z must be in [0, 1]");
  x = std::clamp(x, 0.0, 1.0);
  const double low =
      (nn - 1) / (nn * nn) * (2.0 + (nn - 2) * x - 2.0 * std::sqrt((1.0 - x) * (1.0 + (nn - 1) * x)));
  const double k = snap_floor(1.0 + (nn - 1) * x);
  const double up = 1.0 + ((nn - 1) * x - 2.0 * k) / (k * (1.0 + k));
  const double h_half = std::log1p((nn - 1) * x);
  return {{BoundKind::Lower, std::fmax(low, 0.0), ExtremalV{n, inv_entropy_v(n, Order::finite(0.5), h_half)},
           TheoremId::PeFromZ},
          {BoundKind::Upper, up, build_uv_from_entropy(Order::finite(0.5), h_half), TheoremId::PeFromZ}};
}

/// Value of H_{1/2}(X|Y) at which the lower bound on H_2(X|Y) switches form.
inline double h2_vs_hhalf_threshold(int n) {
  if (n < 2) throw DomainError("alphabet size must be >= 2");
  return 2.0 * std::log1p(std::sqrt(double(n - 1))) - std::log(2.0);
}

/// Bounds on H_2(X|Y) given H_{1/2}(X|Y); n = |supp(P_X)|.
inline BoundPair h2_vs_hhalf(double h_half, int n) {
  detail::check_n_value(n, h_half);
  h_half = std::clamp(h_half, 0.0, std::log(double(n)));
  const double nn = n;
  const double E = std::exp(h_half);
  const double m = snap_floor(E);
  double up;
  if (std::fabs(E - m) <= 1e-12 * m) {
    up = std::log(m);
  } else {
    up = std::log(m * (1.0 + m)) -
         2.0 * std::log(std::pow(1.0 + m, 1.5) - std::pow(m, 1.5) + E * (std::sqrt(m) - std::sqrt(1.0 + m)));
  }
  BoundResult upper{BoundKind::Upper, up, build_uv_from_entropy(Order::finite(0.5), h_half),
                    TheoremId::H2VsHhalf};
  const Order half = Order::finite(0.5), two = Order::finite(2.0);
  if (n == 2 || h_half <= h2_vs_hhalf_threshold(n)) {
    const double p = inv_entropy_v(n, half, h_half);
    const double low = std::log((nn - 1) / (nn * p * p - 2.0 * p + 1.0));
    return {{BoundKind::Lower, low, ExtremalV{n, p}, TheoremId::H2VsHhalf}, upper};
  }
  const double s = std::sqrt(nn - 1);
  const double low = 2.0 * std::log(nn - 2.0 * s) + std::log(nn * (nn - 1)) -
                     2.0 * std::log(2.0 + E * (2.0 * s - nn) + nn * (nn - s - 2.0));
  const auto pair = build_st(n, half, two, E);
  return {{BoundKind::Lower, low, pair, TheoremId::H2VsHhalf}, upper};
}

// ---------------------------------------------------------------------------
// Feasible-region curves

enum class Region { HVsPe, PeVsH, ZVsPe, H2VsHhalf, HbVsHa };

inline std::string to_string(Region r) {
  switch (r) {
    case Region::HVsPe: return "h-vs-pe";
    case Region::PeVsH: return "pe-vs-h";
    case Region::ZVsPe: return "z-vs-pe";
    case Region::H2VsHhalf: return "h2-vs-hhalf";
    case Region::HbVsHa: return "hb-vs-ha";
  }
  return "?";
}

inline Region parse_region(std::string_view s) {
  for (Region r : {Region::HVsPe, Region::PeVsH, Region::ZVsPe, Region::H2VsHhalf, Region::HbVsHa})
    if (to_string(r) == s) return r;
  throw DomainError("unknown region '" + std::string(s) + "'");
}

struct CurvePoint {
  double x;
  double y_lower;
  double y_upper;
};

struct BoundCurve {
  std::string x_label;
  std::string y_label;
  std::vector<CurvePoint> points;
};

struct CurveParams {
  int n = 2;
  Order a = Order::finite(0.5);
  Order b = Order::finite(2.0);
  bool conditional = true;
  size_t points = 101;
  /// Explicit abscissae; when set, replaces the uniform grid and kinks.
  std::optional<std::vector<double>> xs;
};

/// Lower and upper bound on H_b given H_a on the region's alphabet.
inline std::pair<double, double> hb_vs_ha_bounds(const CurveParams& c, double h_a) {
  const Order a = c.a, b = c.b;
  if (a == b) return {h_a, h_a};
  if (!c.conditional) {
    const auto bp = uncond_bounds(c.n, h_a, a, b);
    return {bp.lower.value, bp.upper.value};
  }
  double v_side;
  if (c.n == 2) {
    v_side = cond_bound_binary(h_a, a, b).value;
  } else if (a.is_infinity()) {
    v_side = bound_given_infinity(c.n, h_a, b).value;
  } else if (b.is_infinity()) {
    v_side = infinity_given_bound(c.n, h_a, a).value;
  } else {
    v_side = cond_bound_st(c.n, h_a, a, b).value;
  }
  const double w_side = cond_bound_uv(h_a, a, b).value;
  return a < b ? std::make_pair(v_side, w_side) : std::make_pair(w_side, v_side);
}

namespace detail {

inline std::vector<double> curve_grid(double x0, double x1, size_t points, std::vector<double> kinks) {
  if (points < 2) throw DomainError("curve needs at least two grid points");
  std::vector<double> xs;
  for (size_t i = 0; i < points; ++i) xs.push_back(x0 + (x1 - x0) * double(i) / double(points - 1));
  xs.back() = x1;
  for (double k : kinks)
    if (k > x0 && k < x1) xs.push_back(k);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

}  // namespace detail

inline BoundCurve sample_curve(Region region, const CurveParams& c) {
  if (c.n < 2) throw DomainError("alphabet size must be >= 2");
  const double nn = c.n;
  const double ln_n = std::log(nn);
  std::vector<double> log_kinks, eps_kinks;
  for (int m = 2; m < c.n; ++m) {
    log_kinks.push_back(std::log(double(m)));
    eps_kinks.push_back(1.0 - 1.0 / m);
  }
  BoundCurve out;
  auto grid = [&](double x0, double x1, std::vector<double> kinks) {
    return c.xs ? *c.xs : detail::curve_grid(x0, x1, c.points, std::move(kinks));
  };
  switch (region) {
    case Region::HVsPe: {
      out.x_label = "Pe";
      out.y_label = "H_" + c.a.to_string();
      const auto kind = c.conditional ? FanoKind::Conditional : FanoKind::Unconditional;
      for (double x : grid(0.0, (nn - 1) / nn, eps_kinks)) {
        const auto f = fano_renyi(kind, c.a, x, c.n);
        out.points.push_back({x, f.lower.value, f.upper->value});
      }
      break;
    }
    case Region::PeVsH: {
      out.x_label = "H_" + c.a.to_string();
      out.y_label = "Pe";
      for (double x : grid(0.0, ln_n, log_kinks)) {
        const auto f = pe_bounds(c.a, x, c.n);
        out.points.push_back({x, f.lower->value, f.upper.value});
      }
      break;
    }
    case Region::ZVsPe: {
      out.x_label = "Pe";
      out.y_label = "Z";
      for (double x : grid(0.0, (nn - 1) / nn, eps_kinks)) {
        const auto f = bhattacharyya_bounds(BhattDirection::ZFromPe, x, c.n);
        out.points.push_back({x, f.lower.value, f.upper.value});
      }
      break;
    }
    case Region::H2VsHhalf: {
      out.x_label = "H_1/2";
      out.y_label = "H_2";
      auto kinks = log_kinks;
      kinks.push_back(h2_vs_hhalf_threshold(c.n));
      for (double x : grid(0.0, ln_n, kinks)) {
        const auto f = h2_vs_hhalf(x, c.n);
        out.points.push_back({x, f.lower.value, f.upper.value});
      }
      break;
    }
    case Region::HbVsHa: {
      out.x_label = "H_" + c.a.to_string();
      out.y_label = "H_" + c.b.to_string();
      auto kinks = log_kinks;
      const bool st = c.conditional && c.n >= 3 && c.a.is_finite() && c.b.is_finite() && !(c.a == c.b);
      if (st) {
        const auto roots = tangency_roots(c.n, c.a, c.b);
        kinks.push_back(renyi_v(c.n, roots.p_star, c.a));
      }
      for (double x : grid(0.0, ln_n, kinks)) {
        const auto [lo, hi] = hb_vs_ha_bounds(c, x);
        out.points.push_back({x, lo, hi});
      }
      break;
    }
  }
  return out;
}

}  // namespace renyi
