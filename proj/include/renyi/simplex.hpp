#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <istream>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "renyi/orders.hpp"

namespace renyi {

inline constexpr double kMassFloor = 1e-15;
inline constexpr double kNormalizationTol = 1e-12;

namespace detail {

inline double parse_double(std::string_view t) {
  while (!t.empty() && (t.front() == ' ' || t.front() == '\t')) t.remove_prefix(1);
  while (!t.empty() && (t.back() == ' ' || t.back() == '\t' || t.back() == '\r'))
    t.remove_suffix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size())
    throw DomainError("cannot parse number '" + std::string(t) + "'");
  return v;
}

inline std::vector<double> parse_row(std::string_view line) {
  std::vector<double> out;
  size_t start = 0;
  while (true) {
    size_t comma = line.find(',', start);
    out.push_back(parse_double(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

inline bool is_blank_or_comment(std::string_view line) {
  auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string_view::npos || line[pos] == '#';
}

}  // namespace detail

/// A finitely supported probability vector. Norms and entropies are
/// evaluated over the support sorted in descending order so that results do
/// not depend on the order in which masses were listed.
class ProbVec {
 public:
  explicit ProbVec(std::vector<double> masses) : masses_(std::move(masses)) {
    if (masses_.empty()) throw DomainError("probability vector is empty");
    double total = 0.0;
    for (double& m : masses_) {
      if (!std::isfinite(m) || m < 0.0) throw DomainError("masses must be finite and non-negative");
      if (m < kMassFloor) m = 0.0;
      total += m;
    }
    if (std::fabs(total - 1.0) > kNormalizationTol)
      throw DomainError("masses sum to " + std::to_string(total) + ", not 1");
    if (total != 1.0)
      for (double& m : masses_) m /= total;
    for (double m : masses_)
      if (m > 0.0) support_.push_back(m);
    std::sort(support_.begin(), support_.end(), std::greater<>());
  }

  static ProbVec uniform(size_t n) { return ProbVec(std::vector<double>(n, 1.0 / double(n))); }

  static ProbVec point_mass(size_t n, size_t at = 0) {
    std::vector<double> m(n, 0.0);
    m.at(at) = 1.0;
    return ProbVec(std::move(m));
  }

  /// Parses "0.9,0.1".
  static ProbVec parse_list(std::string_view text) { return ProbVec(detail::parse_row(text)); }

  /// Reads one mass per line; blank lines and '#' comments are skipped.
  static ProbVec read_csv(std::istream& in) {
    std::vector<double> m;
    std::string line;
    while (std::getline(in, line)) {
      if (detail::is_blank_or_comment(line)) continue;
      auto row = detail::parse_row(line);
      if (row.size() != 1) throw DomainError("expected a single-column CSV of masses");
      m.push_back(row[0]);
    }
    return ProbVec(std::move(m));
  }

  const std::vector<double>& masses() const { return masses_; }
  /// Non-zero masses in descending order.
  const std::vector<double>& support() const { return support_; }
  size_t size() const { return masses_.size(); }
  size_t support_size() const { return support_.size(); }
  double max_mass() const { return support_.front(); }
  double operator[](size_t i) const { return masses_[i]; }

 private:
  std::vector<double> masses_;
  std::vector<double> support_;
};

/// (sum p^r)^(1/r) over a descending support, scaled by the largest mass so
/// that large r does not underflow.
inline double norm_of_sorted(const std::vector<double>& desc, double r) {
  const double top = desc.front();
  double acc = 0.0;
  for (double p : desc) acc += std::pow(p / top, r);
  return top * std::pow(acc, 1.0 / r);
}

inline double lr_norm(const ProbVec& P, Order r) {
  switch (r.tag()) {
    case Order::Tag::Zero: throw DomainError("the l_0 norm is not defined");
    case Order::Tag::Shannon: return 1.0;
    case Order::Tag::Infinity: return P.max_mass();
    case Order::Tag::Finite: break;
  }
  return norm_of_sorted(P.support(), r.value());
}

inline double shannon_of_sorted(const std::vector<double>& desc) {
  double h = 0.0;
  for (double p : desc) h -= p * std::log(p);
  return h;
}

inline double renyi_entropy(const ProbVec& P, Order a) {
  const auto& s = P.support();
  switch (a.tag()) {
    case Order::Tag::Zero: return std::log(double(s.size()));
    case Order::Tag::Shannon: return shannon_of_sorted(s);
    case Order::Tag::Infinity: return -std::log(s.front());
    case Order::Tag::Finite: break;
  }
  const double v = a.value();
  const double top = s.front();
  double acc = 0.0;
  for (double p : s) acc += std::pow(p / top, v);
  return (v * std::log(top) + std::log(acc)) / (1.0 - v);
}

inline double binary_entropy(double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("binary entropy needs t in [0,1]");
  if (t == 0.0 || t == 1.0) return 0.0;
  return -t * std::log(t) - (1.0 - t) * std::log1p(-t);
}

}  // namespace renyi
