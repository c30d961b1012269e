#pragma once

#include <cmath>
#include <istream>
#include <string>
#include <vector>

#include "renyi/orders.hpp"
#include "renyi/simplex.hpp"

namespace renyi {

/// A joint law of (X, Y) on finite alphabets: P_Y plus one channel
/// P_{X|Y}(.|y) per y. Every y must carry positive mass.
class CondSource {
 public:
  CondSource(ProbVec py, std::vector<ProbVec> channels)
      : py_(std::move(py)), channels_(std::move(channels)) {
    if (channels_.size() != py_.size())
      throw DomainError("need exactly one channel per y");
    if (py_.support_size() != py_.size())
      throw DomainError("channels attached to zero-mass y values are not allowed");
    n_ = channels_.front().size();
    for (const auto& c : channels_)
      if (c.size() != n_) throw DomainError("channels must share one X alphabet");
  }

  /// A source with a single y, i.e. an unconditional distribution.
  explicit CondSource(ProbVec px) : CondSource(ProbVec({1.0}), {std::move(px)}) {}

  /// Rows "P_Y(y), P(x_1|y), ..., P(x_n|y)"; '#' comments, blank lines and a
  /// non-numeric header row are skipped.
  static CondSource read_csv(std::istream& in) {
    std::vector<double> py;
    std::vector<ProbVec> channels;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
      if (detail::is_blank_or_comment(line)) continue;
      std::vector<double> row;
      try {
        row = detail::parse_row(line);
      } catch (const DomainError&) {
        if (first) {
          first = false;
          continue;
        }
        throw;
      }
      first = false;
      if (row.size() < 2) throw DomainError("source rows need P_Y(y) and at least one channel mass");
      py.push_back(row[0]);
      channels.emplace_back(std::vector<double>(row.begin() + 1, row.end()));
    }
    if (py.empty()) throw DomainError("source file has no rows");
    return CondSource(ProbVec(std::move(py)), std::move(channels));
  }

  const ProbVec& py() const { return py_; }
  const std::vector<ProbVec>& channels() const { return channels_; }
  const ProbVec& channel(size_t y) const { return channels_[y]; }
  size_t x_size() const { return n_; }
  size_t y_size() const { return channels_.size(); }

  ProbVec marginal_x() const {
    std::vector<double> m(n_, 0.0);
    for (size_t y = 0; y < channels_.size(); ++y)
      for (size_t x = 0; x < n_; ++x) m[x] += py_[y] * channels_[y][x];
    double total = 0.0;
    for (double v : m) total += v;
    for (double& v : m) v /= total;
    return ProbVec(std::move(m));
  }

  /// |supp(P_X)|.
  size_t support_x() const {
    size_t count = 0;
    for (size_t x = 0; x < n_; ++x)
      for (const auto& c : channels_)
        if (c[x] > 0.0) {
          ++count;
          break;
        }
    return count;
  }

 private:
  ProbVec py_;
  std::vector<ProbVec> channels_;
  size_t n_ = 0;
};

inline double expected_norm(const CondSource& src, Order r) {
  if (r.is_zero()) throw DomainError("N_0 is not defined");
  double acc = 0.0;
  for (size_t y = 0; y < src.y_size(); ++y) acc += src.py()[y] * lr_norm(src.channel(y), r);
  return acc;
}

inline double cond_renyi(const CondSource& src, Order a) {
  switch (a.tag()) {
    case Order::Tag::Zero: {
      size_t widest = 0;
      for (const auto& c : src.channels()) widest = std::max(widest, c.support_size());
      return std::log(double(widest));
    }
    case Order::Tag::Shannon: {
      double acc = 0.0;
      for (size_t y = 0; y < src.y_size(); ++y)
        acc += src.py()[y] * renyi_entropy(src.channel(y), a);
      return acc;
    }
    case Order::Tag::Infinity: return -std::log(expected_norm(src, a));
    case Order::Tag::Finite: break;
  }
  return std::log(expected_norm(src, a)) / theta(a);
}

inline double min_error(const CondSource& src) {
  return 1.0 - expected_norm(src, Order::infinity());
}

inline double bhattacharyya(const CondSource& src) {
  const size_t n = src.x_size();
  if (n < 2) throw DomainError("Z(X|Y) needs |X| >= 2");
  double acc = 0.0;
  for (size_t y = 0; y < src.y_size(); ++y) {
    const auto& c = src.channel(y).masses();
    double pairs = 0.0;
    for (size_t x = 0; x < n; ++x)
      for (size_t x2 = x + 1; x2 < n; ++x2) pairs += std::sqrt(c[x] * c[x2]);
    acc += src.py()[y] * 2.0 * pairs;
  }
  return acc / double(n - 1);
}

}  // namespace renyi
