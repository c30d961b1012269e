#pragma once

/*
 * Entropy/norm orders and the small order algebra shared by every other
 * header: theta(r) = (1-r)/r, gamma(r,s) = (1-r)/(1-s) and the q-logarithm.
 */

#include <charconv>
#include <cmath>
#include <compare>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace renyi {

class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

class Order {
 public:
  enum class Tag { Zero, Finite, Shannon, Infinity };

  static Order zero() { return Order(Tag::Zero, 0.0); }
  static Order shannon() { return Order(Tag::Shannon, 1.0); }
  static Order infinity() { return Order(Tag::Infinity, kInf); }

  // Rejects values within 1e-12 of 1; those must be requested as shannon().
  static Order finite(double v) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw DomainError("finite order must be a positive real");
    if (std::fabs(v - 1.0) <= 1e-12)
      throw DomainError("order too close to 1; use the Shannon order");
    return Order(Tag::Finite, v);
  }

  // Maps 0, 1 and +inf onto their tags.
  static Order of(double v) {
    if (v == 0.0) return zero();
    if (v == 1.0) return shannon();
    if (v == kInf) return infinity();
    return finite(v);
  }

  // Accepts "0", "1", "inf"/"infinity", decimals and fractions like "1/2".
  static Order parse(std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (s == "inf" || s == "infinity" || s == "Inf" || s == "oo") return infinity();
    auto number = [](std::string_view t) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (ec != std::errc() || ptr != t.data() + t.size() || t.empty())
        throw DomainError("cannot parse order '" + std::string(t) + "'");
      return v;
    };
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
      double num = number(s.substr(0, slash));
      double den = number(s.substr(slash + 1));
      if (den == 0.0) throw DomainError("order has zero denominator");
      return of(num / den);
    }
    double v = number(s);
    if (v < 0.0) throw DomainError("negative orders are not supported");
    return of(v);
  }

  Tag tag() const { return tag_; }
  double value() const { return value_; }
  bool is_zero() const { return tag_ == Tag::Zero; }
  bool is_shannon() const { return tag_ == Tag::Shannon; }
  bool is_infinity() const { return tag_ == Tag::Infinity; }
  bool is_finite() const { return tag_ == Tag::Finite; }

  std::string to_string() const {
    switch (tag_) {
      case Tag::Zero: return "0";
      case Tag::Shannon: return "1";
      case Tag::Infinity: return "inf";
      case Tag::Finite: break;
    }
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value_);
    return std::string(buf, ptr);
  }

  friend bool operator==(const Order& a, const Order& b) {
    return a.tag_ == b.tag_ && a.value_ == b.value_;
  }
  friend std::partial_ordering operator<=>(const Order& a, const Order& b) {
    return a.value_ <=> b.value_;
  }

 private:
  Order(Tag t, double v) : tag_(t), value_(v) {}
  Tag tag_;
  double value_;
};

inline double theta(Order r) {
  switch (r.tag()) {
    case Order::Tag::Zero: throw DomainError("theta(0) diverges");
    case Order::Tag::Shannon: return 0.0;
    case Order::Tag::Infinity: return -1.0;
    case Order::Tag::Finite: break;
  }
  return (1.0 - r.value()) / r.value();
}

// Extended-real limit of (1-a)/(1-b). When s = 1 != r the limit is taken
// with b approaching 1 from below.
inline double gamma(Order r, Order s) {
  if (r == s) return 1.0;
  if (s.is_shannon()) return std::copysign(kInf, 1.0 - r.value());
  if (r.is_infinity()) return s.value() < 1.0 ? -kInf : kInf;
  if (s.is_infinity()) return 0.0;
  return (1.0 - r.value()) / (1.0 - s.value());
}

inline double q_log(double q, double x) {
  if (!(x > 0.0)) throw DomainError("q_log needs x > 0");
  if (q == 1.0) return std::log(x);
  const double e = 1.0 - q;
  return std::expm1(e * std::log(x)) / e;
}

// floor(x), snapping to the nearest integer when x is within 1e-12 of it
// (relative for large x).
inline double snap_floor(double x) {
  const double k = std::nearbyint(x);
  if (std::fabs(x - k) <= 1e-12 * std::fmax(1.0, std::fabs(x))) return k;
  return std::floor(x);
}

}  // namespace renyi
