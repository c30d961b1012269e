#pragma once

/*
 * Brute-force verification: grid and random sources, exhaustive estimator
 * search, and a scanner that checks every bound against the quantities it
 * constrains and replays the attaining constructions.
 */

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"
#include "renyi/bounds.hpp"
#include "renyi/conditional.hpp"
#include "renyi/couplers.hpp"
#include "renyi/extremal.hpp"
#include "renyi/orders.hpp"
#include "renyi/simplex.hpp"

namespace renyi {

inline constexpr double kViolationTol = 1e-9;
inline constexpr double kWitnessAlphaTol = 1e-9;
inline constexpr double kWitnessBetaTol = 1e-8;

// ---------------------------------------------------------------------------
// Grids

inline int grid_resolution(double step) {
  if (!(step > 0.0 && step <= 1.0)) throw DomainError("grid step must lie in (0, 1]");
  const double m = std::nearbyint(1.0 / step);
  if (std::fabs(m * step - 1.0) > 1e-9) throw DomainError("grid step must be 1/M for an integer M");
  return int(m);
}

inline double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::nearbyint(r);
}

/// All compositions of M into n non-negative parts, in lexicographic order.
inline std::vector<std::vector<int>> compositions(int n, int M) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(size_t(n), 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == n - 1) {
      cur[size_t(pos)] = left;
      out.push_back(cur);
      return;
    }
    for (int c = 0; c <= left; ++c) {
      cur[size_t(pos)] = c;
      rec(pos + 1, left - c);
    }
  };
  rec(0, M);
  return out;
}

inline std::vector<ProbVec> simplex_grid(int n, double step) {
  const int M = grid_resolution(step);
  std::vector<ProbVec> out;
  for (const auto& c : compositions(n, M)) {
    std::vector<double> m;
    for (int v : c) m.push_back(double(v) / M);
    out.emplace_back(std::move(m));
  }
  return out;
}

inline double grid_source_count(int n, int k, double step) {
  return std::pow(binomial(grid_resolution(step) + n - 1, n - 1), k);
}

/// Visits every source with X-alphabet n, k equiprobable y values and
/// channels on the step grid.
template <class Fn>
void for_each_grid_source(int n, int k, double step, Fn&& fn, double cap = 1e7) {
  if (n < 1 || k < 1) throw DomainError("grid needs n, k >= 1");
  if (grid_source_count(n, k, step) > cap) throw ResourceError("grid enumeration exceeds the configured cap");
  const auto channels = simplex_grid(n, step);
  const ProbVec py = ProbVec::uniform(size_t(k));
  std::vector<size_t> idx(size_t(k), 0);
  while (true) {
    std::vector<ProbVec> chosen;
    for (size_t i : idx) chosen.push_back(channels[i]);
    fn(CondSource(py, std::move(chosen)));
    size_t pos = 0;
    while (pos < idx.size() && ++idx[pos] == channels.size()) idx[pos++] = 0;
    if (pos == idx.size()) break;
  }
}

inline std::vector<CondSource> grid_sources(int n, int k, double step, double cap = 1e7) {
  std::vector<CondSource> out;
  for_each_grid_source(n, k, step, [&](CondSource s) { out.push_back(std::move(s)); }, cap);
  return out;
}

/// Grid sources up to relabeling of X and of Y. Every quantity handled here
/// is invariant under both relabelings when P_Y is uniform, so one
/// representative per orbit suffices.
class GridOrbits {
 public:
  GridOrbits(int n, int k, double step) : n_(n), k_(k), M_(grid_resolution(step)) {
    comps_ = compositions(n, M_);
    std::vector<int> perm(static_cast<size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<int>> perms;
    do perms.push_back(perm);
    while (std::next_permutation(perm.begin(), perm.end()));
    const size_t C = comps_.size();
    image_.assign(perms.size(), std::vector<int>(C));
    for (size_t p = 0; p < perms.size(); ++p)
      for (size_t c = 0; c < C; ++c) {
        std::vector<int> v(static_cast<size_t>(n));
        for (int x = 0; x < n; ++x) v[size_t(perms[p][size_t(x)])] = comps_[c][size_t(x)];
        image_[p][c] = index_of(v);
      }
    orbit_min_.assign(C, int(C));
    for (size_t c = 0; c < C; ++c)
      for (size_t p = 0; p < perms.size(); ++p) orbit_min_[c] = std::min(orbit_min_[c], image_[p][c]);
    to_min_.resize(C);
    for (size_t c = 0; c < C; ++c)
      for (size_t p = 0; p < perms.size(); ++p)
        if (image_[p][c] == orbit_min_[c]) to_min_[c].push_back(int(p));
  }

  const std::vector<std::vector<int>>& compositions_list() const { return comps_; }
  int resolution() const { return M_; }

  /// Calls fn(indices) once per orbit, indices sorted ascending. Work is
  /// split by the first index: only first indices congruent to `part` mod
  /// `parts` are visited.
  template <class Fn>
  void for_each(Fn&& fn, size_t part = 0, size_t parts = 1) const {
    const int C = int(comps_.size());
    std::vector<int> t(static_cast<size_t>(k_));
    size_t counter = 0;
    for (int c1 = 0; c1 < C; ++c1) {
      if (orbit_min_[size_t(c1)] != c1) continue;
      if (counter++ % parts != part) continue;
      t[0] = c1;
      rec(1, c1, t, fn);
    }
  }

  /// Number of ordered source tuples represented by an orbit.
  double orbit_size(const std::vector<int>& t) const {
    std::vector<std::vector<int>> seen;
    for (const auto& img : image_) {
      std::vector<int> s;
      for (int c : t) s.push_back(img[size_t(c)]);
      std::sort(s.begin(), s.end());
      if (std::find(seen.begin(), seen.end(), s) == seen.end()) seen.push_back(s);
    }
    double total = 0.0;
    for (const auto& s : seen) {
      double arrangements = std::tgamma(double(s.size()) + 1);
      for (size_t i = 0; i < s.size();) {
        size_t j = i;
        while (j < s.size() && s[j] == s[i]) ++j;
        arrangements /= std::tgamma(double(j - i) + 1);
        i = j;
      }
      total += arrangements;
    }
    return total;
  }

 private:
  int index_of(const std::vector<int>& v) const {
    auto it = std::lower_bound(comps_.begin(), comps_.end(), v);
    return int(it - comps_.begin());
  }

  template <class Fn>
  void rec(int pos, int c1, std::vector<int>& t, Fn& fn) const {
    if (pos == k_) {
      if (canonical(t)) fn(static_cast<const std::vector<int>&>(t));
      return;
    }
    const int C = int(comps_.size());
    for (int c = t[size_t(pos - 1)]; c < C; ++c) {
      if (orbit_min_[size_t(c)] < c1) continue;
      t[size_t(pos)] = c;
      rec(pos + 1, c1, t, fn);
    }
  }

  bool canonical(const std::vector<int>& t) const {
    const int c1 = t[0];
    int img[8];
    for (size_t j = 0; j < t.size(); ++j) {
      if (orbit_min_[size_t(t[j])] != c1) continue;
      for (int p : to_min_[size_t(t[j])]) {
        for (size_t i = 0; i < t.size(); ++i) img[i] = image_[size_t(p)][size_t(t[i])];
        std::sort(img, img + t.size());
        if (std::lexicographical_compare(img, img + t.size(), t.begin(), t.end())) return false;
      }
    }
    return true;
  }

  int n_, k_, M_;
  std::vector<std::vector<int>> comps_;
  std::vector<std::vector<int>> image_;
  std::vector<int> orbit_min_;
  std::vector<std::vector<int>> to_min_;
};

/// Grid sources grouped by the multiset of their channel types (channels up
/// to relabeling of X) and the size of supp(P_X). With uniform P_Y every
/// quantity the scanner evaluates is an average of per-channel quantities, so
/// it is constant on a class; one representative per class is scanned.
class GridClasses {
 public:
  struct Key {
    std::vector<int> types;  // ascending type indices, one per y
    int support;
    auto operator<=>(const Key&) const = default;
  };

  GridClasses(int n, int k, double step) : n_(n), k_(k), M_(grid_resolution(step)) {
    if (n < 1 || k < 1) throw DomainError("grid needs n, k >= 1");
    for (auto c : compositions(n, M_)) {
      std::sort(c.begin(), c.end(), std::greater<>());
      if (std::find(types_.begin(), types_.end(), c) == types_.end()) types_.push_back(c);
    }
    std::sort(types_.begin(), types_.end());
    for (const auto& t : types_) support_.push_back(int(std::count_if(t.begin(), t.end(), [](int v) { return v > 0; })));
  }

  size_t type_count() const { return types_.size(); }
  const std::vector<int>& type_counts(size_t i) const { return types_[i]; }

  /// Type index of a channel given by its counts.
  int type_of(std::vector<int> counts) const {
    std::sort(counts.begin(), counts.end(), std::greater<>());
    return int(std::lower_bound(types_.begin(), types_.end(), counts) - types_.begin());
  }

  /// Class of a grid source.
  Key key_of(const CondSource& src) const {
    Key key;
    for (const auto& c : src.channels()) {
      std::vector<int> counts;
      for (double m : c.masses()) counts.push_back(int(std::nearbyint(m * M_)));
      key.types.push_back(type_of(counts));
    }
    std::sort(key.types.begin(), key.types.end());
    key.support = int(src.support_x());
    return key;
  }

  /// A source of the class. Channels are laid out greedily: the widest
  /// channel takes letters 0.., every other channel reuses a prefix of those
  /// letters and opens as many fresh ones as the target support still needs.
  CondSource representative(const Key& key) const {
    std::vector<size_t> order(key.types.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
      return support_[size_t(key.types[a])] > support_[size_t(key.types[b])];
    });
    std::vector<std::vector<double>> rows(key.types.size(), std::vector<double>(size_t(n_), 0.0));
    int used = 0;
    for (size_t j : order) {
      const auto& t = types_[size_t(key.types[j])];
      const int s = support_[size_t(key.types[j])];
      const int fresh = used == 0 ? s : std::min(s, key.support - used);
      std::vector<int> letters;
      for (int x = 0; x < s - fresh; ++x) letters.push_back(x);
      for (int x = 0; x < fresh; ++x) letters.push_back(used + x);
      for (int i = 0; i < s; ++i) rows[j][size_t(letters[size_t(i)])] = double(t[size_t(i)]) / M_;
      used += fresh;
    }
    std::vector<ProbVec> channels;
    for (auto& r : rows) channels.emplace_back(std::move(r));
    return CondSource(ProbVec::uniform(key.types.size()), std::move(channels));
  }

  /// Calls fn(key) once per class; classes are dealt round-robin over
  /// `parts` workers.
  template <class Fn>
  void for_each(Fn&& fn, size_t part = 0, size_t parts = 1) const {
    Key key;
    key.types.assign(size_t(k_), 0);
    size_t counter = 0;
    rec(0, 0, key, counter, part, parts, fn);
  }

 private:
  template <class Fn>
  void rec(int pos, int from, Key& key, size_t& counter, size_t part, size_t parts, Fn& fn) const {
    if (pos == k_) {
      int widest = 0, total = 0;
      for (int t : key.types) {
        widest = std::max(widest, support_[size_t(t)]);
        total += support_[size_t(t)];
      }
      for (int s = widest; s <= std::min(n_, total); ++s) {
        if (counter++ % parts != part) continue;
        key.support = s;
        fn(static_cast<const Key&>(key));
      }
      return;
    }
    for (int t = from; t < int(types_.size()); ++t) {
      key.types[size_t(pos)] = t;
      rec(pos + 1, t, key, counter, part, parts, fn);
    }
  }

  int n_, k_, M_;
  std::vector<std::vector<int>> types_;
  std::vector<int> support_;
};

// ---------------------------------------------------------------------------
// Random sources

class RandomSources {
 public:
  RandomSources(uint64_t seed, int n_max, int k_max) : rng_(seed), n_max_(n_max), k_max_(k_max) {
    if (n_max < 2 || k_max < 1) throw DomainError("random sources need n_max >= 2, k_max >= 1");
  }

  /// A point drawn uniformly from the simplex of dimension n.
  ProbVec simplex_point(int n) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> m(static_cast<size_t>(n));
    double total = 0.0;
    for (double& v : m) total += (v = e(rng_));
    for (double& v : m) v /= total;
    return ProbVec(std::move(m));
  }

  CondSource next() {
    const int n = std::uniform_int_distribution<int>(2, n_max_)(rng_);
    const int k = std::uniform_int_distribution<int>(1, k_max_)(rng_);
    std::vector<ProbVec> channels;
    for (int y = 0; y < k; ++y) channels.push_back(simplex_point(n));
    return CondSource(simplex_point(k), std::move(channels));
  }

 private:
  std::mt19937_64 rng_;
  int n_max_, k_max_;
};

// ---------------------------------------------------------------------------
// Estimators

/// min over all maps f: Y -> X of Pr(X != f(Y)), by enumeration.
inline double verify_estimator_pe(const CondSource& src) {
  const size_t n = src.x_size(), k = src.y_size();
  if (std::pow(double(n), double(k)) > 1e6) throw ResourceError("too many estimators to enumerate");
  std::vector<size_t> f(k, 0);
  double best = kInf;
  while (true) {
    double correct = 0.0;
    for (size_t y = 0; y < k; ++y) correct += src.py()[y] * src.channel(y)[f[y]];
    best = std::min(best, 1.0 - correct);
    size_t pos = 0;
    while (pos < k && ++f[pos] == n) f[pos++] = 0;
    if (pos == k) break;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Quantities and claims

struct Quantity {
  enum class Kind { Norm, Renyi, Pe, Z } kind;
  Order order = Order::shannon();

  static Quantity norm(Order o) { return {Kind::Norm, o}; }
  static Quantity renyi(Order o) { return {Kind::Renyi, o}; }
  static Quantity pe() { return {Kind::Pe, Order::shannon()}; }
  static Quantity z() { return {Kind::Z, Order::shannon()}; }
};

inline double evaluate(const CondSource& src, const Quantity& q) {
  switch (q.kind) {
    case Quantity::Kind::Norm: return expected_norm(src, q.order);
    case Quantity::Kind::Renyi: return cond_renyi(src, q.order);
    case Quantity::Kind::Pe: return min_error(src);
    case Quantity::Kind::Z: return bhattacharyya(src);
  }
  return 0.0;
}

/// Materializes a construction on an X alphabet of `width` letters (0 means
/// the construction's own width).
inline CondSource witness_source(const Construction& c, size_t width = 0) {
  auto pad = [&](const ProbVec& p) {
    std::vector<double> m = p.masses();
    if (width > m.size()) m.resize(width, 0.0);
    return CondSource(ProbVec(std::move(m)));
  };
  if (auto* v = std::get_if<ExtremalV>(&c)) return pad(v->materialize());
  if (auto* w = std::get_if<ExtremalW>(&c)) return pad(w->materialize());
  if (auto* st = std::get_if<ExtremalPairST>(&c)) {
    if (width <= size_t(st->n)) return st->to_source();
    return mixture_source({st->weights[0], st->weights[1]},
                          {st->components[0].materialize(), st->components[1].materialize()}, width);
  }
  const auto& uv = std::get<ExtremalPairUV>(c);
  const size_t own = size_t(uv.lambda < 1.0 ? uv.m + 1 : uv.m);
  return uv.to_source(std::max(width, own));
}

/// Precomputed quantities of one source.
struct Features {
  size_t n_alpha = 0;
  size_t n_supp = 0;
  std::vector<double> norm;   // per order in the scan's order list
  std::vector<double> renyi;  // per order
  double pe = 0.0;
  double z = 0.0;
};

struct ScanOrders {
  std::vector<Order> list;

  size_t index(Order o) const {
    for (size_t i = 0; i < list.size(); ++i)
      if (list[i] == o) return i;
    throw DomainError("order " + o.to_string() + " missing from the scan");
  }

  void add(Order o) {
    for (const auto& x : list)
      if (x == o) return;
    list.push_back(o);
  }
};

inline Features compute_features(const CondSource& src, const ScanOrders& orders) {
  Features f;
  f.n_alpha = src.x_size();
  f.n_supp = src.support_x();
  for (const auto& o : orders.list) {
    f.norm.push_back(expected_norm(src, o));
    f.renyi.push_back(cond_renyi(src, o));
  }
  f.pe = min_error(src);
  f.z = f.n_alpha >= 2 ? bhattacharyya(src) : 0.0;
  return f;
}

inline double feature(const Features& f, const ScanOrders& orders, const Quantity& q) {
  switch (q.kind) {
    case Quantity::Kind::Norm: return f.norm[orders.index(q.order)];
    case Quantity::Kind::Renyi: return f.renyi[orders.index(q.order)];
    case Quantity::Kind::Pe: return f.pe;
    case Quantity::Kind::Z: return f.z;
  }
  return 0.0;
}

/// A bound on the `beta` quantity of a source in terms of its `alpha`
/// quantity.
struct Claim {
  Quantity alpha;
  Quantity beta;
  BoundResult bound;
  size_t width;  // alphabet the witness lives on
};

inline bool is_norm_order(Order o) { return !o.is_zero() && !o.is_shannon(); }
inline bool is_st_order(Order o) { return o.is_finite() && o.value() >= 0.5; }

using OrderPair = std::pair<Order, Order>;

inline std::vector<OrderPair> default_pairs() {
  const Order half = Order::finite(0.5), two = Order::finite(2.0), three = Order::finite(3.0);
  return {{half, two}, {two, half}, {half, Order::infinity()}, {Order::infinity(), two},
          {three, half}, {Order::infinity(), Order::shannon()}};
}

/// Claims about a conditional source.
inline void conditional_claims(const Features& f, const ScanOrders& orders, const std::vector<OrderPair>& pairs,
                               const std::vector<TheoremId>& enabled, std::vector<Claim>& out) {
  auto on = [&](TheoremId id) { return std::find(enabled.begin(), enabled.end(), id) != enabled.end(); };
  const int n = detail::effective_n(f.n_supp);
  auto H = [&](Order o) { return f.renyi[orders.index(o)]; };
  auto R = Quantity::renyi;
  for (const auto& [a, b] : pairs) {
    if (on(TheoremId::UV) && !a.is_shannon() && !a.is_zero() && !b.is_zero())
      out.push_back({R(a), R(b), cond_bound_uv(H(a), a, b), 0});
    if (on(TheoremId::ST) && f.n_supp >= 3 && is_st_order(a) && is_st_order(b) && !(a == b))
      out.push_back({R(a), R(b), cond_bound_st(n, H(a), a, b), size_t(n)});
    if (on(TheoremId::Binary) && f.n_supp <= 2 && a.value() >= 0.5 && b.value() >= 0.5)
      out.push_back({R(a), R(b), cond_bound_binary(H(a), a, b), 2});
    if (on(TheoremId::VsInfinity) && (a.is_infinity() != b.is_infinity())) {
      const Order o = a.is_infinity() ? b : a;
      if (!o.is_zero()) {
        out.push_back({R(Order::infinity()), R(o), bound_given_infinity(n, H(Order::infinity()), o), size_t(n)});
        out.push_back({R(o), R(Order::infinity()), infinity_given_bound(n, H(o), o), size_t(n)});
      }
    }
  }
  for (const auto& o : orders.list) {
    if (o.is_zero() || o.is_infinity()) continue;
    if (on(TheoremId::FanoCond)) {
      const auto fb = fano_renyi(FanoKind::Conditional, o, f.pe, n);
      out.push_back({Quantity::pe(), R(o), fb.lower, f.n_alpha});
      out.push_back({Quantity::pe(), R(o), *fb.upper, size_t(n)});
    }
    if (on(TheoremId::PeFromH)) {
      const auto pb = pe_bounds(o, H(o), n);
      out.push_back({R(o), Quantity::pe(), pb.upper, 0});
      out.push_back({R(o), Quantity::pe(), *pb.lower, size_t(n)});
    }
  }
  if (f.n_alpha >= 2) {
    const int na = int(f.n_alpha);
    if (on(TheoremId::ZFromPe)) {
      const auto zb = bhattacharyya_bounds(BhattDirection::ZFromPe, f.pe, na);
      out.push_back({Quantity::pe(), Quantity::z(), zb.lower, f.n_alpha});
      out.push_back({Quantity::pe(), Quantity::z(), zb.upper, f.n_alpha});
    }
    if (on(TheoremId::PeFromZ)) {
      const auto pz = bhattacharyya_bounds(BhattDirection::PeFromZ, f.z, na);
      out.push_back({Quantity::z(), Quantity::pe(), pz.lower, f.n_alpha});
      out.push_back({Quantity::z(), Quantity::pe(), pz.upper, f.n_alpha});
    }
  }
  if (on(TheoremId::H2VsHhalf)) {
    const Order half = Order::finite(0.5), two = Order::finite(2.0);
    const auto hb = h2_vs_hhalf(H(half), n);
    out.push_back({R(half), R(two), hb.lower, size_t(n)});
    out.push_back({R(half), R(two), hb.upper, 0});
  }
}

/// Claims about a single distribution (a source with one y value).
inline void unconditional_claims(const Features& f, const ScanOrders& orders, const std::vector<OrderPair>& pairs,
                                 const std::vector<TheoremId>& enabled, const ProbVec& P,
                                 std::vector<Claim>& out) {
  auto on = [&](TheoremId id) { return std::find(enabled.begin(), enabled.end(), id) != enabled.end(); };
  const int n = detail::effective_n(f.n_supp);
  for (const auto& [a, b] : pairs) {
    if (on(TheoremId::NormVW) && is_norm_order(a) && is_norm_order(b) && !(a == b)) {
      const auto bp = uncond_norm_bounds(P, a, b);
      out.push_back({Quantity::norm(a), Quantity::norm(b), bp.lower, 0});
      out.push_back({Quantity::norm(a), Quantity::norm(b), bp.upper, 0});
    }
    if (on(TheoremId::EntropyVW) && !a.is_zero()) {
      const auto bp = uncond_bounds(n, f.renyi[orders.index(a)], a, b);
      out.push_back({Quantity::renyi(a), Quantity::renyi(b), bp.lower, 0});
      out.push_back({Quantity::renyi(a), Quantity::renyi(b), bp.upper, 0});
    }
  }
  if (on(TheoremId::FanoUncond))
    for (const auto& o : orders.list) {
      if (o.is_zero() || o.is_infinity()) continue;
      const auto fb = fano_renyi(FanoKind::Unconditional, o, f.pe, n);
      out.push_back({Quantity::pe(), Quantity::renyi(o), fb.lower, 0});
      out.push_back({Quantity::pe(), Quantity::renyi(o), *fb.upper, 0});
    }
}

// ---------------------------------------------------------------------------
// Reports

struct TheoremReport {
  TheoremId theorem;
  size_t sources_scanned = 0;
  size_t claims_checked = 0;
  double max_violation = -kInf;
  double min_gap = kInf;
  size_t witness_checks = 0;
  double witness_alpha_error = 0.0;  // max |alpha(witness) - alpha(source)|
  double witness_beta_error = 0.0;   // max |beta(witness) - bound|
  std::string worst_case;            // description of the largest violation
  std::string witness;               // description of one attaining construction
  double witness_score = -kInf;      // bound value at that construction
  bool complete = true;

  bool pass() const {
    return complete && claims_checked > 0 && max_violation <= kViolationTol && witness_checks > 0 &&
           witness_alpha_error <= kWitnessAlphaTol && witness_beta_error <= kWitnessBetaTol &&
           min_gap <= kWitnessBetaTol;
  }

  void merge(const TheoremReport& o) {
    sources_scanned += o.sources_scanned;
    claims_checked += o.claims_checked;
    if (o.max_violation > max_violation) {
      max_violation = o.max_violation;
      worst_case = o.worst_case;
    }
    min_gap = std::min(min_gap, o.min_gap);
    witness_checks += o.witness_checks;
    witness_alpha_error = std::max(witness_alpha_error, o.witness_alpha_error);
    witness_beta_error = std::max(witness_beta_error, o.witness_beta_error);
    if (o.witness_score > witness_score) {
      witness_score = o.witness_score;
      witness = o.witness;
    }
    complete = complete && o.complete;
  }
};

inline std::string describe(const Construction& c) {
  nlohmann::json j;
  if (auto* v = std::get_if<ExtremalV>(&c)) {
    j = {{"type", "v"}, {"n", v->n}, {"p", v->p}};
  } else if (auto* w = std::get_if<ExtremalW>(&c)) {
    j = {{"type", "w"}, {"p", w->p}};
  } else if (auto* st = std::get_if<ExtremalPairST>(&c)) {
    j = {{"type", "st"},
         {"n", st->n},
         {"a", st->a.to_string()},
         {"b", st->b.to_string()},
         {"regime", st->regime == StRegime::Mixture ? "mixture" : "single"},
         {"weights", {st->weights[0], st->weights[1]}},
         {"p", st->components[1].p}};
  } else {
    const auto& uv = std::get<ExtremalPairUV>(c);
    j = {{"type", "uv"}, {"a", uv.a.to_string()}, {"m", uv.m}, {"lambda", uv.lambda}};
  }
  return j.dump();
}

inline std::string describe(const CondSource& src) {
  nlohmann::json rows = nlohmann::json::array();
  for (size_t y = 0; y < src.y_size(); ++y) {
    nlohmann::json row = {src.py()[y]};
    for (double m : src.channel(y).masses()) row.push_back(m);
    rows.push_back(row);
  }
  return rows.dump();
}

inline nlohmann::json to_json(const TheoremReport& r) {
  nlohmann::json witness = nlohmann::json::object();
  if (!r.witness.empty()) witness["construction"] = nlohmann::json::parse(r.witness);
  witness["checks"] = r.witness_checks;
  witness["alpha_error"] = r.witness_alpha_error;
  witness["beta_error"] = r.witness_beta_error;
  nlohmann::json j = {{"theorem_id", to_string(r.theorem)},
                      {"sources_scanned", r.sources_scanned},
                      {"claims_checked", r.claims_checked},
                      {"max_violation", r.max_violation},
                      {"min_gap", r.min_gap},
                      {"witness", witness},
                      {"complete", r.complete},
                      {"pass", r.pass()}};
  if (!r.worst_case.empty()) j["worst_case"] = nlohmann::json::parse(r.worst_case);
  return j;
}

// ---------------------------------------------------------------------------
// Scanner

struct VerifyConfig {
  int grid_n_max = 4;
  int grid_k_max = 3;
  double grid_step = 0.05;
  size_t random_budget = 10000;
  int random_n_max = 6;
  int random_k_max = 6;
  uint64_t seed = 0x5EED;
  std::vector<OrderPair> pairs = default_pairs();
  unsigned threads = 0;                      // 0: RENYI_SHARP_THREADS or hardware
  size_t grid_witness_stride = 97;           // replay witnesses on every k-th grid class
  std::optional<double> deadline_seconds;    // stop (and report incomplete) past this
};

struct IdentityReport {
  size_t sources = 0;
  double pe_hinf_residual = 0.0;   // |exp(-H_inf) - (1 - P_e)|
  double z_hhalf_residual = 0.0;   // |H_1/2 - ln(1 + (n-1) Z)|

  void merge(const IdentityReport& o) {
    sources += o.sources;
    pe_hinf_residual = std::max(pe_hinf_residual, o.pe_hinf_residual);
    z_hhalf_residual = std::max(z_hhalf_residual, o.z_hhalf_residual);
  }
};

struct ScanReport {
  std::vector<TheoremReport> theorems;
  IdentityReport identities;
  size_t grid_classes = 0;
  double grid_sources_covered = 0.0;
  size_t random_sources = 0;
  double seconds = 0.0;
  bool complete = true;

  bool pass() const {
    return std::all_of(theorems.begin(), theorems.end(), [](const auto& t) { return t.pass(); });
  }
};

inline unsigned resolve_threads(unsigned requested) {
  unsigned cap = 0;
  if (const char* env = std::getenv("RENYI_SHARP_THREADS")) cap = unsigned(std::strtoul(env, nullptr, 10));
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  unsigned t = requested ? requested : hw;
  if (cap) t = std::min(t, cap);
  return std::max(1u, t);
}

namespace detail {

struct ScanState {
  const ScanOrders* orders;
  const VerifyConfig* cfg;
  std::vector<TheoremId> enabled;
  std::vector<TheoremReport> reports;
  IdentityReport identities;
  std::vector<Claim> claims;

  explicit ScanState(const ScanOrders& o, const VerifyConfig& c, std::vector<TheoremId> ids)
      : orders(&o), cfg(&c), enabled(std::move(ids)) {
    for (auto id : enabled) {
      TheoremReport r;
      r.theorem = id;
      reports.push_back(r);
    }
  }

  TheoremReport& report(TheoremId id) {
    for (auto& r : reports)
      if (r.theorem == id) return r;
    throw DomainError("theorem not enabled");
  }

  void check(const Features& f, const std::function<CondSource()>& materialize, bool replay, size_t x_width) {
    for (const Claim& c : claims) {
      auto& rep = report(c.bound.theorem);
      const double actual = feature(f, *orders, c.beta);
      const double viol = c.bound.kind == BoundKind::Lower ? c.bound.value - actual : actual - c.bound.value;
      ++rep.claims_checked;
      if (!(viol <= rep.max_violation) || std::isnan(viol)) {
        rep.max_violation = std::isnan(viol) ? kInf : viol;
        rep.worst_case = nlohmann::json{{"source", nlohmann::json::parse(describe(materialize()))},
                                        {"alpha", feature(f, *orders, c.alpha)},
                                        {"actual", actual},
                                        {"bound", c.bound.value},
                                        {"kind", to_string(c.bound.kind)}}
                             .dump();
      }
      rep.min_gap = std::min(rep.min_gap, std::fabs(viol));
      if (replay && c.bound.witness) {
        const size_t width = std::max(c.width, c.beta.kind == Quantity::Kind::Z ? x_width : size_t(0));
        const CondSource w = witness_source(*c.bound.witness, width);
        const double ea = std::fabs(evaluate(w, c.alpha) - feature(f, *orders, c.alpha));
        const double eb = std::fabs(evaluate(w, c.beta) - c.bound.value);
        ++rep.witness_checks;
        rep.witness_alpha_error = std::max(rep.witness_alpha_error, ea);
        rep.witness_beta_error = std::max(rep.witness_beta_error, eb);
        rep.min_gap = std::min(rep.min_gap, eb);
        if (eb <= kWitnessBetaTol && c.bound.value > rep.witness_score) {
          rep.witness_score = c.bound.value;
          rep.witness = describe(*c.bound.witness);
        }
      }
    }
  }

  void scan_conditional(const Features& f, const std::function<CondSource()>& materialize, bool replay) {
    claims.clear();
    conditional_claims(f, *orders, cfg->pairs, enabled, claims);
    check(f, materialize, replay, f.n_alpha);
    for (auto& r : reports)
      if (r.theorem != TheoremId::NormVW && r.theorem != TheoremId::EntropyVW &&
          r.theorem != TheoremId::FanoUncond)
        ++r.sources_scanned;
    ++identities.sources;
    const double hinf = f.renyi[orders->index(Order::infinity())];
    identities.pe_hinf_residual = std::max(identities.pe_hinf_residual, std::fabs(std::exp(-hinf) - (1.0 - f.pe)));
    if (f.n_alpha >= 2) {
      const double hh = f.renyi[orders->index(Order::finite(0.5))];
      identities.z_hhalf_residual =
          std::max(identities.z_hhalf_residual, std::fabs(hh - std::log1p(double(f.n_alpha - 1) * f.z)));
    }
  }

  void scan_unconditional(const ProbVec& P, bool replay) {
    const CondSource src(P);
    const Features f = compute_features(src, *orders);
    claims.clear();
    unconditional_claims(f, *orders, cfg->pairs, enabled, P, claims);
    check(f, [&] { return src; }, replay, f.n_alpha);
    for (auto& r : reports)
      if (r.theorem == TheoremId::NormVW || r.theorem == TheoremId::EntropyVW ||
          r.theorem == TheoremId::FanoUncond)
        ++r.sources_scanned;
  }
};

template <class Work>
void run_parallel(unsigned threads, Work&& work) {
  if (threads <= 1) {
    work(0u, 1u);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back([&, t] { work(t, threads); });
  for (auto& th : pool) th.join();
}

}  // namespace detail

inline ScanOrders scan_orders(const std::vector<OrderPair>& pairs) {
  ScanOrders o;
  for (const auto& [a, b] : pairs) {
    o.add(a);
    o.add(b);
  }
  o.add(Order::finite(0.5));
  o.add(Order::finite(2.0));
  o.add(Order::infinity());
  o.add(Order::shannon());
  return o;
}

/// Scans the grid orbits and random sources, checking every enabled bound.
inline ScanReport verify_scan(const std::vector<TheoremId>& enabled, const VerifyConfig& cfg) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const ScanOrders orders = scan_orders(cfg.pairs);
  const unsigned threads = resolve_threads(cfg.threads);
  std::atomic<bool> out_of_time{false};
  auto expired = [&] {
    if (!cfg.deadline_seconds) return false;
    if (out_of_time.load(std::memory_order_relaxed)) return true;
    const double s = std::chrono::duration<double>(clock::now() - start).count();
    if (s > *cfg.deadline_seconds) out_of_time = true;
    return s > *cfg.deadline_seconds;
  };

  ScanReport out;
  detail::ScanState total(orders, cfg, enabled);
  std::mutex merge_mu;
  auto merge = [&](detail::ScanState& s) {
    std::lock_guard<std::mutex> lock(merge_mu);
    for (size_t i = 0; i < s.reports.size(); ++i) total.reports[i].merge(s.reports[i]);
    total.identities.merge(s.identities);
  };

  for (int n = 2; n <= cfg.grid_n_max; ++n) {
    const auto channels = simplex_grid(n, cfg.grid_step);
    // Distributions on the grid, checked as unconditional sources.
    detail::run_parallel(threads, [&](unsigned part, unsigned parts) {
      detail::ScanState s(orders, cfg, enabled);
      for (size_t i = part; i < channels.size(); i += parts) s.scan_unconditional(channels[i], true);
      merge(s);
    });
    for (int k = 1; k <= cfg.grid_k_max; ++k) {
      if (expired()) break;
      GridClasses classes(n, k, cfg.grid_step);
      std::atomic<size_t> class_count{0};
      detail::run_parallel(threads, [&](unsigned part, unsigned parts) {
        detail::ScanState s(orders, cfg, enabled);
        size_t local = 0;
        classes.for_each(
            [&](const GridClasses::Key& key) {
              if ((local & 255) == 0 && expired()) return;
              const CondSource src = classes.representative(key);
              s.scan_conditional(compute_features(src, orders), [&] { return src; },
                                 local % cfg.grid_witness_stride == 0);
              ++local;
            },
            part, parts);
        class_count += local;
        merge(s);
      });
      out.grid_classes += class_count;
      out.grid_sources_covered += grid_source_count(n, k, cfg.grid_step);
    }
  }

  // Random sources: a single generator keeps the stream reproducible.
  RandomSources gen(cfg.seed, cfg.random_n_max, cfg.random_k_max);
  std::vector<CondSource> randoms;
  for (size_t i = 0; i < cfg.random_budget; ++i) randoms.push_back(gen.next());
  detail::run_parallel(threads, [&](unsigned part, unsigned parts) {
    detail::ScanState s(orders, cfg, enabled);
    for (size_t i = part; i < randoms.size(); i += parts) {
      if (expired()) break;
      const auto& src = randoms[i];
      s.scan_conditional(compute_features(src, orders), [&] { return src; }, true);
      s.scan_unconditional(src.marginal_x(), true);
      s.scan_unconditional(src.channel(0), true);
    }
    merge(s);
  });
  out.random_sources = randoms.size();

  out.complete = !out_of_time;
  for (auto& r : total.reports) r.complete = out.complete;
  out.theorems = std::move(total.reports);
  out.identities = total.identities;
  out.seconds = std::chrono::duration<double>(clock::now() - start).count();
  return out;
}

inline TheoremReport verify_bound(TheoremId id, const VerifyConfig& cfg) {
  return verify_scan({id}, cfg).theorems.front();
}

inline nlohmann::json to_json(const ScanReport& r) {
  nlohmann::json theorems = nlohmann::json::array();
  for (const auto& t : r.theorems) theorems.push_back(to_json(t));
  return {{"theorems", theorems},
          {"identities",
           {{"sources", r.identities.sources},
            {"pe_hinf_residual", r.identities.pe_hinf_residual},
            {"z_hhalf_residual", r.identities.z_hhalf_residual}}},
          {"grid_classes", r.grid_classes},
          {"grid_sources_covered", r.grid_sources_covered},
          {"random_sources", r.random_sources},
          {"seconds", r.seconds},
          {"complete", r.complete},
          {"pass", r.pass()}};
}

}  // namespace renyi
