#pragma once

/*
 * Root machinery behind the conditional bounds and the two coupled pairs
 * that attain them:
 *   (S,T): a mixture of the uniform v_n(1/n) and a v_n(p) component;
 *   (U,V): a mixture of w(1/m) and w(1/(m+1)).
 */

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <vector>

#include "renyi/conditional.hpp"
#include "renyi/extremal.hpp"
#include "renyi/orders.hpp"

namespace renyi {

namespace detail {

inline double finite_positive(Order r) {
  if (r.is_zero() || r.is_infinity()) throw DomainError("order must be finite and positive");
  return r.value();
}

inline void check_st_order(Order r) {
  if (!r.is_finite() || r.value() < 0.5)
    throw DomainError("(S,T) orders must lie in [1/2,1) or (1,inf)");
}

// ln((z^r + n - 1) / n) with L = ln z, accurate near z = 1 and for large r L.
inline double log_mean_pow(double r, double L, int n) {
  const double x = r * L;
  if (x < 30.0) return std::log1p(std::expm1(x) / n);
  return x - std::log(double(n)) + std::log1p((n - 1) * std::exp(-x));
}

// N_r(v_n(p)) - n^theta(r) in the variable L = ln z, z = (n-1)p/(1-p).
inline double norm_excess(int n, double r, double L) {
  const double phi = log_mean_pow(r, L, n) / r - log_mean_pow(1.0, L, n);
  return std::pow(double(n), (1.0 - r) / r) * std::expm1(phi);
}

// d/dp N_r(v_n(p)) in the same variable.
inline double norm_slope(int n, double r, double L) {
  return -std::pow(1.0 + (n - 1) * std::exp(-r * L), (1.0 - r) / r) * std::expm1((1.0 - r) * L);
}

inline double z_log_of_p(int n, double p) {
  return std::log(double(n - 1)) + std::log(p) - std::log1p(-p);
}

}  // namespace detail

inline double g_fn(int n, double z, Order r, Order s) {
  if (n < 2) throw DomainError("g needs n >= 2");
  if (!(z > 0.0)) throw DomainError("g needs z > 0");
  auto part = [&](double q) { return (std::pow(z, q) + (n - 1)) * q_log(q, z); };
  return part(detail::finite_positive(r)) - part(detail::finite_positive(s));
}

/// The root z > 1 at which g(n, . ; r, s) turns from positive to negative.
inline double zeta_root(int n, Order r, Order s) {
  if (n < 2) throw DomainError("g needs n >= 2");
  double lo_order = detail::finite_positive(r), hi_order = detail::finite_positive(s);
  if (lo_order == hi_order) throw DomainError("zeta needs distinct orders");
  if (std::fmin(lo_order, hi_order) < 0.5) throw DomainError("zeta needs orders >= 1/2");
  const Order a = Order::of(std::fmin(lo_order, hi_order));
  const Order b = Order::of(std::fmax(lo_order, hi_order));
  auto g = [&](double z) { return g_fn(n, z, a, b); };

  double lo = 1.0 + 1e-4;
  if (!(g(lo) > 0.0)) throw ConvergenceError("g has no positive region above z = 1");
  double hi = lo;
  while (true) {
    hi = 1.0 + 2.0 * (hi - 1.0);
    if (hi > 1e12) throw ConvergenceError("no sign change of g below z = 1e12");
    const double v = g(hi);
    if (std::isnan(v)) throw ConvergenceError("g overflowed while bracketing");
    if (v < 0.0) break;
    lo = hi;
  }
  for (int it = 0; it < kBisectCap && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double v = g(mid);
    if (v == 0.0) return mid;
    (v > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Normalized tangency residual at p: zero where the secant from the
/// uniform corner meets the curve p -> (N_r, N_s) tangentially.
inline double tangency_residual(int n, Order r, Order s, double p) {
  const double rv = detail::finite_positive(r), sv = detail::finite_positive(s);
  const double L = detail::z_log_of_p(n, p);
  const double lhs = detail::norm_excess(n, sv, L) * detail::norm_slope(n, rv, L);
  const double rhs = detail::norm_excess(n, rv, L) * detail::norm_slope(n, sv, L);
  const double scale = std::fabs(lhs) + std::fabs(rhs);
  return scale == 0.0 ? 0.0 : (lhs - rhs) / scale;
}

struct RootBundle {
  int n;
  Order r, s;
  double zeta;
  double tau;
  double p_star;
  double t_star;
  double residual_zeta;
  double residual_tangency;
};

namespace detail {

inline double solve_tangency(int n, Order r, Order s) {
  const double lo_edge = 1.0 / n + 1e-9, hi_edge = 1.0 - 1e-9;
  auto f = [&](double p) { return tangency_residual(n, r, s, p); };
  const double sign_hi = f(hi_edge);
  if (sign_hi == 0.0) return hi_edge;
  const int steps = 10000;
  double prev = hi_edge;
  for (int i = 1; i <= steps; ++i) {
    const double p = hi_edge - (hi_edge - lo_edge) * i / steps;
    const double v = f(p);
    if (v == 0.0) return p;
    if ((v > 0.0) != (sign_hi > 0.0)) {
      double lo = p, hi = prev;
      for (int it = 0; it < kBisectCap && hi - lo > kBisectWidth; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double m = f(mid);
        if (m == 0.0) return mid;
        ((m > 0.0) == (sign_hi > 0.0) ? hi : lo) = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev = p;
  }
  throw ConvergenceError("tangency residual has no sign change on (1/n, 1)");
}

inline RootBundle compute_roots(int n, Order r, Order s) {
  RootBundle b{n, r, s, 0, 0, 0, 0, 0, 0};
  b.zeta = zeta_root(n, r, s);
  b.residual_zeta = g_fn(n, b.zeta, r, s);
  b.tau = norm_v(n, b.zeta / (b.zeta + n - 1), r);
  if (r.value() == 0.5 || s.value() == 0.5) {
    const double t = r.value() == 0.5 ? s.value() : r.value();
    b.p_star = 1.0 / (1.0 + std::pow(double(n - 1), (t - 2.0) / t));
  } else {
    b.p_star = solve_tangency(n, r, s);
  }
  b.t_star = norm_v(n, b.p_star, r);
  b.residual_tangency = tangency_residual(n, r, s, b.p_star);
  return b;
}

}  // namespace detail

/// Memoized per (n, r, s); safe to call from several threads.
inline RootBundle tangency_roots(int n, Order r, Order s) {
  if (n < 3) throw DomainError("tangency roots need n >= 3");
  detail::check_st_order(r);
  detail::check_st_order(s);
  if (r == s) throw DomainError("tangency roots need distinct orders");
  static std::mutex mu;
  static std::map<std::tuple<int, double, double>, RootBundle> cache;
  const auto key = std::make_tuple(n, r.value(), s.value());
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  RootBundle b = detail::compute_roots(n, r, s);
  std::lock_guard<std::mutex> lock(mu);
  cache.insert_or_assign(key, b);
  return b;
}

inline CondSource mixture_source(const std::vector<double>& weights, const std::vector<ProbVec>& parts,
                                 size_t width) {
  std::vector<double> py;
  std::vector<ProbVec> channels;
  for (size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    std::vector<double> m = parts[i].masses();
    if (m.size() > width) throw DomainError("component wider than requested alphabet");
    m.resize(width, 0.0);
    py.push_back(weights[i]);
    channels.emplace_back(std::move(m));
  }
  return CondSource(ProbVec(std::move(py)), std::move(channels));
}

enum class StRegime { Mixture, Single };

struct ExtremalPairST {
  int n;
  Order a, b;
  StRegime regime;
  double delta;                      // mixture weight of v_n(p*); 1 in the single regime
  std::array<double, 2> weights;     // (P_T(0), P_T(1))
  std::array<ExtremalV, 2> components;

  CondSource to_source() const {
    return mixture_source({weights[0], weights[1]},
                          {components[0].materialize(), components[1].materialize()}, size_t(n));
  }
};

/// Builds (S,T) from the alphabet size and the value N_a(X|Y).
inline ExtremalPairST build_st(int n, Order a, Order b, double norm_a) {
  const RootBundle roots = tangency_roots(n, a, b);
  const double corner = std::pow(double(n), theta(a));
  const double lo = std::fmin(corner, 1.0), hi = std::fmax(corner, 1.0);
  if (!(norm_a >= lo * (1 - kRangeSlack) && norm_a <= hi * (1 + kRangeSlack)))
    throw DomainError("N_a outside I_n(a)");
  norm_a = std::clamp(norm_a, lo, hi);
  const ExtremalV uniform{n, 1.0 / n};
  if (std::fabs(norm_a - corner) < std::fabs(roots.t_star - corner)) {
    const double delta = (norm_a - corner) / (roots.t_star - corner);
    return {n, a, b, StRegime::Mixture, delta, {1.0 - delta, delta},
            {uniform, ExtremalV{n, roots.p_star}}};
  }
  return {n, a, b, StRegime::Single, 1.0, {0.0, 1.0},
          {uniform, ExtremalV{n, inv_norm_v(n, a, norm_a)}}};
}

inline ExtremalPairST build_st(const CondSource& src, Order a, Order b) {
  return build_st(int(src.support_x()), a, b, expected_norm(src, a));
}

struct ExtremalPairUV {
  Order a;
  int m;
  double lambda;  // weight of w(1/m); w(1/(m+1)) carries 1 - lambda

  std::array<ExtremalW, 2> components() const { return {ExtremalW{1.0 / m}, ExtremalW{1.0 / (m + 1)}}; }

  /// Materializes the pair on an X alphabet of `width` letters (at least m+1
  /// unless lambda = 1).
  CondSource to_source(size_t width = 0) const {
    const auto c = components();
    if (width == 0) width = size_t(lambda < 1.0 ? m + 1 : m);
    return mixture_source({lambda, 1.0 - lambda}, {c[0].materialize(), c[1].materialize()}, width);
  }
};

/// Builds (U,V) from H_a(X|Y).
inline ExtremalPairUV build_uv_from_entropy(Order a, double h_a) {
  if (a.is_zero() || a.is_shannon()) throw DomainError("(U,V) order must be in (0,1) or (1,inf]");
  if (!(h_a >= -kRangeSlack) || !std::isfinite(h_a)) throw DomainError("entropy must be >= 0");
  h_a = std::fmax(h_a, 0.0);
  const double e = std::exp(h_a);
  const double m = snap_floor(e);
  if (m > 1e9) throw DomainError("entropy too large for an explicit (U,V) pair");
  const double th = theta(a);
  const double N = std::exp(th * h_a);
  const double hi = std::pow(m + 1, th), lo = std::pow(m, th);
  double lambda = (hi - N) / (hi - lo);
  if (std::fabs(e - m) <= 1e-12 * m) lambda = 1.0;
  return {a, int(m), std::clamp(lambda, 0.0, 1.0)};
}

/// Builds (U,V) from N_a(X|Y).
inline ExtremalPairUV build_uv(Order a, double norm_a) {
  if (a.is_zero() || a.is_shannon()) throw DomainError("(U,V) order must be in (0,1) or (1,inf]");
  if (!(norm_a > 0.0)) throw DomainError("N_a must be positive");
  return build_uv_from_entropy(a, std::log(norm_a) / theta(a));
}

inline ExtremalPairUV build_uv(const CondSource& src, Order a) {
  return build_uv(a, expected_norm(src, a));
}

inline double pair_cond_renyi(const ExtremalPairST& pair, Order b) {
  const auto& [w0, w1] = pair.weights;
  const int n = pair.n;
  const double p1 = pair.components[1].p;
  switch (b.tag()) {
    case Order::Tag::Zero: {
      const double h1 = renyi_v(n, p1, b);
      return w0 > 0.0 ? std::log(double(n)) : h1;
    }
    case Order::Tag::Shannon: return w0 * std::log(double(n)) + w1 * renyi_v(n, p1, b);
    case Order::Tag::Infinity: return -std::log(w0 / n + w1 * p1);
    case Order::Tag::Finite: break;
  }
  if (w0 == 0.0) return renyi_v(n, p1, b);
  const double N = w0 * std::pow(double(n), theta(b)) + w1 * norm_v(n, p1, b);
  return std::log(N) / theta(b);
}

inline double pair_cond_renyi(const ExtremalPairUV& pair, Order b) {
  const double m = pair.m, lam = pair.lambda;
  switch (b.tag()) {
    case Order::Tag::Zero: return std::log(lam < 1.0 ? m + 1 : m);
    case Order::Tag::Shannon: return lam * std::log(m) + (1.0 - lam) * std::log(m + 1);
    case Order::Tag::Infinity: return -std::log(lam / m + (1.0 - lam) / (m + 1));
    case Order::Tag::Finite: break;
  }
  if (lam == 1.0) return std::log(m);
  const double th = theta(b);
  return std::log(lam * std::pow(m, th) + (1.0 - lam) * std::pow(m + 1, th)) / th;
}

}  // namespace renyi
