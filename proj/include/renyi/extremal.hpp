#pragma once

/*
 * The two extremal families
 *   v_n(p) = (p, (1-p)/(n-1), ..., (1-p)/(n-1))         p in [1/n, 1]
 *   w(p)   = (p, ..., p, 1 - floor(1/p) p)               p in (0, 1]
 * with their norms, entropies and the inverses of p -> H_a.
 */

#include <cmath>
#include <optional>
#include <vector>

#include "renyi/orders.hpp"
#include "renyi/simplex.hpp"

namespace renyi {

inline constexpr double kBisectWidth = 1e-14;
inline constexpr int kBisectCap = 200;
inline constexpr double kRangeSlack = 1e-12;

namespace detail {

inline void check_n(int n) {
  if (n < 2) throw DomainError("v_n needs n >= 2");
}

inline double checked_p_v(int n, double p) {
  check_n(n);
  const double lo = 1.0 / n;
  if (!(p >= lo - kRangeSlack && p <= 1.0 + kRangeSlack))
    throw DomainError("v_n(p) needs p in [1/n, 1]");
  return std::clamp(p, lo, 1.0);
}

inline double checked_p_w(double p) {
  if (!(p > 0.0 && p <= 1.0 + kRangeSlack)) throw DomainError("w(p) needs p in (0, 1]");
  return std::fmin(p, 1.0);
}

struct WCell {
  double k;    // number of masses equal to p
  double rem;  // trailing mass, 0 when 1/p is an integer
};

inline WCell w_cell(double p) {
  const double k = snap_floor(1.0 / p);
  double rem = 1.0 - k * p;
  if (rem < kMassFloor) rem = 0.0;
  return {k, rem};
}

// Bisection for a monotone f on [lo, hi]; `increasing` tells the direction.
template <class F>
double bisect(F&& f, double lo, double hi, double target, bool increasing) {
  for (int it = 0; it < kBisectCap && hi - lo > kBisectWidth; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double v = f(mid);
    if (v == target) return mid;
    if ((v < target) == increasing)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

inline double checked_mu_v(int n, double mu) {
  check_n(n);
  const double top = std::log(double(n));
  if (!(mu >= -kRangeSlack && mu <= top + kRangeSlack))
    throw DomainError("entropy value outside [0, ln n]");
  return std::clamp(mu, 0.0, top);
}

inline double checked_mu_w(double mu) {
  if (!(mu >= -kRangeSlack) || !std::isfinite(mu)) throw DomainError("entropy value must be >= 0");
  return std::fmax(mu, 0.0);
}

}  // namespace detail

struct ExtremalV {
  int n;
  double p;

  ProbVec materialize() const {
    const double p0 = detail::checked_p_v(n, p);
    std::vector<double> m(size_t(n), (1.0 - p0) / (n - 1));
    m[0] = p0;
    return ProbVec(std::move(m));
  }
};

struct ExtremalW {
  double p;

  ProbVec materialize() const {
    const double p0 = detail::checked_p_w(p);
    const auto [k, rem] = detail::w_cell(p0);
    std::vector<double> m(size_t(k), p0);
    if (rem > 0.0) m.push_back(rem);
    return ProbVec(std::move(m));
  }
};

inline double norm_v(int n, double p, Order r) {
  p = detail::checked_p_v(n, p);
  switch (r.tag()) {
    case Order::Tag::Zero: throw DomainError("the l_0 norm is not defined");
    case Order::Tag::Shannon: return 1.0;
    case Order::Tag::Infinity: return p;
    case Order::Tag::Finite: break;
  }
  const double v = r.value();
  const double ratio = (1.0 - p) / ((n - 1) * p);
  return p * std::exp(std::log1p((n - 1) * std::pow(ratio, v)) / v);
}

inline double renyi_v(int n, double p, Order a) {
  p = detail::checked_p_v(n, p);
  const double tail = (1.0 - p) / (n - 1);
  switch (a.tag()) {
    case Order::Tag::Zero: return tail < kMassFloor ? 0.0 : std::log(double(n));
    case Order::Tag::Shannon: return binary_entropy(p) + (1.0 - p) * std::log(double(n - 1));
    case Order::Tag::Infinity: return -std::log(p);
    case Order::Tag::Finite: break;
  }
  const double v = a.value();
  return (v * std::log(p) + std::log1p((n - 1) * std::pow(tail / p, v))) / (1.0 - v);
}

inline double norm_w(double p, Order r) {
  p = detail::checked_p_w(p);
  switch (r.tag()) {
    case Order::Tag::Zero: throw DomainError("the l_0 norm is not defined");
    case Order::Tag::Shannon: return 1.0;
    case Order::Tag::Infinity: return p;
    case Order::Tag::Finite: break;
  }
  const auto [k, rem] = detail::w_cell(p);
  const double v = r.value();
  if (rem == 0.0) return std::pow(k, (1.0 - v) / v);
  return p * std::pow(k + std::pow(rem / p, v), 1.0 / v);
}

inline double renyi_w(double p, Order a) {
  p = detail::checked_p_w(p);
  const auto [k, rem] = detail::w_cell(p);
  switch (a.tag()) {
    case Order::Tag::Zero: return std::log(k + (rem > 0.0 ? 1.0 : 0.0));
    case Order::Tag::Shannon:
      if (rem == 0.0) return std::log(k);
      return -k * p * std::log(p) - rem * std::log(rem);
    case Order::Tag::Infinity: return -std::log(p);
    case Order::Tag::Finite: break;
  }
  if (rem == 0.0) return std::log(k);
  const double v = a.value();
  return (v * std::log(p) + std::log(k + std::pow(rem / p, v))) / (1.0 - v);
}

/// Radical-form inverse of p -> H_a(v_n(p)) for a in {1/2, 2, inf};
/// nullopt for other orders.
inline std::optional<double> closed_form_inv_entropy_v(int n, Order a, double mu) {
  mu = detail::checked_mu_v(n, mu);
  const double E = std::exp(mu);
  const double nn = n;
  const double gap = std::fmax(-nn * std::expm1(mu - std::log(nn)), 0.0);
  if (a.is_infinity()) return std::exp(-mu);
  if (!a.is_finite()) return std::nullopt;
  if (a.value() == 0.5)
    return (nn * (nn - 1) - (nn - 2) * E + 2.0 * std::sqrt(E * (nn - 1) * gap)) / (nn * nn);
  if (a.value() == 2.0) return (1.0 + std::sqrt(std::exp(-mu) * (nn - 1) * gap)) / nn;
  return std::nullopt;
}

inline double bisect_inv_entropy_v(int n, Order a, double mu) {
  mu = detail::checked_mu_v(n, mu);
  if (a.is_zero()) throw DomainError("H_0(v_n(p)) is not invertible");
  if (mu == 0.0) return 1.0;
  return detail::bisect([&](double p) { return renyi_v(n, p, a); }, 1.0 / n, 1.0, mu, false);
}

inline double inv_entropy_v(int n, Order a, double mu) {
  if (a.is_zero()) throw DomainError("H_0(v_n(p)) is not invertible");
  if (auto p = closed_form_inv_entropy_v(n, a, mu)) return std::clamp(*p, 1.0 / n, 1.0);
  return bisect_inv_entropy_v(n, a, mu);
}

inline std::optional<double> closed_form_inv_entropy_w(Order a, double mu) {
  mu = detail::checked_mu_w(mu);
  if (a.is_infinity()) return std::exp(-mu);
  if (!a.is_finite() || (a.value() != 0.5 && a.value() != 2.0)) return std::nullopt;
  const double E = std::exp(mu);
  const double m = snap_floor(E);
  if (E == m || std::fabs(E - m) <= 1e-12 * m) return 1.0 / m;
  const double gap = std::fmax(-(m + 1) * std::expm1(mu - std::log(m + 1)), 0.0);
  if (a.value() == 0.5)
    return ((m + 1) + (m - 1) * E + 2.0 * std::sqrt(E * m * gap)) / (m * (1 + m) * (1 + m));
  return (m + std::sqrt(std::exp(-mu) * m * gap)) / (m * (1 + m));
}

inline double bisect_inv_entropy_w(Order a, double mu) {
  mu = detail::checked_mu_w(mu);
  if (a.is_zero()) throw DomainError("H_0(w(p)) is not invertible");
  const double E = std::exp(mu);
  const double m = snap_floor(E);
  if (std::fabs(E - m) <= 1e-12 * m) return 1.0 / m;
  return detail::bisect([&](double p) { return renyi_w(p, a); }, 1.0 / (m + 1), 1.0 / m, mu, false);
}

inline double inv_entropy_w(Order a, double mu) {
  if (a.is_zero()) throw DomainError("H_0(w(p)) is not invertible");
  if (auto p = closed_form_inv_entropy_w(a, mu)) return *p;
  return bisect_inv_entropy_w(a, mu);
}

inline double inv_norm_v(int n, Order r, double t) {
  detail::check_n(n);
  if (r.is_zero() || r.is_shannon()) throw DomainError("norm order must be in (0,1) or (1,inf]");
  const double corner = std::pow(double(n), theta(r));
  const double lo = std::fmin(corner, 1.0), hi = std::fmax(corner, 1.0);
  if (!(t >= lo * (1 - kRangeSlack) && t <= hi * (1 + kRangeSlack)))
    throw DomainError("norm value outside I_n(r)");
  t = std::clamp(t, lo, hi);
  if (t == 1.0) return 1.0;
  return inv_entropy_v(n, r, std::log(t) / theta(r));
}

inline double inv_norm_w(Order r, double t) {
  if (r.is_zero() || r.is_shannon()) throw DomainError("norm order must be in (0,1) or (1,inf]");
  const bool below_one = r.is_finite() && r.value() < 1.0;
  if (below_one ? !(t >= 1.0 - kRangeSlack) : !(t > 0.0 && t <= 1.0 + kRangeSlack))
    throw DomainError("norm value outside J(r)");
  t = below_one ? std::fmax(t, 1.0) : std::fmin(t, 1.0);
  if (t == 1.0) return 1.0;
  return inv_entropy_w(r, std::log(t) / theta(r));
}

}  // namespace renyi
