#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <thread>

#include "reference.hpp"
#include "renyi/couplers.hpp"
#include "renyi/oracle.hpp"

using namespace renyi;

namespace {

const Order kHalf = Order::finite(0.5);
const Order kTwo = Order::finite(2.0);

// Tangency of the secant from the uniform corner with the curve
// p -> (||v_n(p)||_r, ||v_n(p)||_s), by finite differences.
ref::LD ref_tangency_p(int n, ref::LD r, ref::LD s) {
  auto Nr = [&](ref::LD p) { return ref::norm(ref::v(n, p), r); };
  auto Ns = [&](ref::LD p) { return ref::norm(ref::v(n, p), s); };
  const ref::LD cr = Nr(1.0L / n), cs = Ns(1.0L / n);
  auto F = [&](ref::LD p) {
    const ref::LD h = 1e-7L;
    const ref::LD dr = (Nr(p + h) - Nr(p - h)) / (2 * h), ds = (Ns(p + h) - Ns(p - h)) / (2 * h);
    return (Ns(p) - cs) * dr - (Nr(p) - cr) * ds;
  };
  ref::LD prev = 1 - 1e-6L, fprev = F(prev);
  for (int i = 1; i <= 4000; ++i) {
    const ref::LD p = 1 - 1e-6L - (1 - 1e-6L - 1.0L / n - 1e-6L) * i / 4000;
    const ref::LD fp = F(p);
    if ((fp > 0) != (fprev > 0)) return ref::root(F, p, prev);
    prev = p;
    fprev = fp;
  }
  throw std::runtime_error("no tangency");
}

}  // namespace

TEST(Couplers, GAntisymmetric) {
  for (int n : {2, 3, 7})
    for (double z : {0.01, 0.5, 1.5, 40.0, 1e5})
      for (auto [r, s] : {std::pair{0.5, 2.0}, {0.3, 0.9}, {3.0, 1.5}})
        EXPECT_EQ(g_fn(n, z, Order::finite(r), Order::finite(s)), -g_fn(n, z, Order::finite(s), Order::finite(r)));
}

TEST(Couplers, GPositiveBelowOne) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ord(0.05, 8.0), zz(1e-6, 1.0 - 1e-6);
  for (int i = 0; i < 2000; ++i) {
    double r = ord(rng), s = ord(rng);
    if (std::fabs(r - s) < 1e-3 || std::fabs(r - 1) < 1e-6 || std::fabs(s - 1) < 1e-6) continue;
    if (r > s) std::swap(r, s);
    const int n = 2 + int(rng() % 9);
    EXPECT_GT(g_fn(n, zz(rng), Order::finite(r), Order::finite(s)), 0.0);
  }
}

TEST(Couplers, GNegativeAboveOneForBinary) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ord(0.5, 6.0), lz(std::log(1.0 + 1e-6), std::log(1e6));
  for (int i = 0; i < 2000; ++i) {
    double r = ord(rng), s = ord(rng);
    if (std::fabs(r - s) < 1e-3 || std::fabs(r - 1) < 1e-6 || std::fabs(s - 1) < 1e-6) continue;
    if (r > s) std::swap(r, s);
    EXPECT_LT(g_fn(2, std::exp(lz(rng)), Order::finite(r), Order::finite(s)), 0.0);
  }
}

TEST(Couplers, ZetaSingleSignChange) {
  for (int n : {3, 5, 8})
    for (auto [r, s] : {std::pair{0.5, 2.0}, {0.5, 3.0}, {2.0, 3.0}, {0.7, 0.9}}) {
      const Order R = Order::finite(r), S = Order::finite(s);
      const double z0 = zeta_root(n, R, S);
      EXPECT_GT(z0, 1.0);
      EXPECT_LE(std::fabs(g_fn(n, z0, R, S)), 1e-9);
      int changes = 0;
      double prev = g_fn(n, 1.0 + 1e-6, R, S);
      EXPECT_GT(prev, 0.0);
      for (int i = 1; i <= 2000; ++i) {
        const double z = std::exp(std::log(1e6) * i / 2000.0);
        const double g = g_fn(n, z, R, S);
        if ((g > 0) != (prev > 0)) ++changes;
        prev = g;
      }
      EXPECT_EQ(changes, 1);
      EXPECT_LT(prev, 0.0);
    }
  EXPECT_THROW(zeta_root(2, kHalf, kTwo), ConvergenceError);
}

TEST(Couplers, TangencyResidualSingleSignChange) {
  for (int n : {3, 5, 8})
    for (auto [r, s] : {std::pair{0.5, 2.0}, {2.0, 0.5}, {3.0, 0.5}, {0.7, 4.0}}) {
      const Order R = Order::finite(r), S = Order::finite(s);
      int changes = 0;
      double prev = 0;
      for (int i = 0; i < 10000; ++i) {
        const double p = 1.0 / n + 1e-9 + (1.0 - 2e-9 - 1.0 / n) * (i + 0.5) / 10000;
        const double v = tangency_residual(n, R, S, p);
        if (i > 0 && (v > 0) != (prev > 0)) ++changes;
        prev = v;
      }
      EXPECT_EQ(changes, 1) << n << " " << r << " " << s;
    }
}

TEST(Couplers, TangencyMatchesReference) {
  for (int n : {3, 5, 8})
    for (auto [r, s] : {std::pair{0.5, 2.0}, {3.0, 0.5}, {0.7, 4.0}, {2.0, 3.0}}) {
      const auto b = tangency_roots(n, Order::finite(r), Order::finite(s));
      EXPECT_NEAR(b.p_star, double(ref_tangency_p(n, r, s)), 1e-7) << n << " " << r << " " << s;
      EXPECT_LE(std::fabs(b.residual_tangency), 1e-11);
      EXPECT_GT(b.p_star, 1.0 / n);
    }
}

TEST(Couplers, HalfOrderClosedFormAgreesWithSolver) {
  for (int n : {3, 5, 8})
    for (double t : {2.0 / 3.0, 3.0, 5.0}) {
      const double closed = tangency_roots(n, kHalf, Order::finite(t)).p_star;
      EXPECT_NEAR(closed, detail::solve_tangency(n, kHalf, Order::finite(t)), 1e-9);
      EXPECT_NEAR(closed, 1.0 / (1.0 + std::pow(n - 1.0, (t - 2.0) / t)), 0);
    }
}

TEST(Couplers, TStarForEight) {
  const auto b = tangency_roots(8, kHalf, kTwo);
  EXPECT_NEAR(b.p_star, 0.5, 1e-15);
  EXPECT_NEAR(b.t_star, double(ref::norm(ref::v(8, 0.5L), 0.5L)), 1e-12);
  EXPECT_NEAR(b.t_star, 6.6457513111, 1e-10);
}

TEST(Couplers, TauIsInflectionOfNormCurve) {
  // t -> ||v_n(N_r^{-1}(t))||_s switches curvature at tau.
  for (int n : {3, 5, 8})
    for (auto [r, s] : {std::pair{0.5, 2.0}, {2.0, 0.5}, {3.0, 0.5}}) {
      const Order R = Order::finite(r), S = Order::finite(s);
      const auto b = tangency_roots(n, R, S);
      const double c = std::pow(double(n), theta(R));
      const double lo = std::fmin(c, 1.0), hi = std::fmax(c, 1.0);
      const int pts = 4000;
      const double h = (hi - lo) / pts;
      std::vector<double> t, f;
      for (int i = 1; i < pts; ++i) {
        t.push_back(lo + h * i);
        f.push_back(norm_v(n, inv_norm_v(n, R, t.back()), S));
      }
      std::vector<double> flips;
      int sign = 0;
      for (size_t i = 1; i + 1 < f.size(); ++i) {
        const double d2 = f[i + 1] - 2 * f[i] + f[i - 1];
        if (std::fabs(d2) < 1e-11 * std::fabs(f[i])) continue;
        const int sg = d2 > 0 ? 1 : -1;
        if (sign != 0 && sg != sign) flips.push_back(t[i]);
        sign = sg;
      }
      ASSERT_EQ(flips.size(), 1u) << n << " " << r << " " << s;
      EXPECT_NEAR(flips[0], b.tau, 5 * h);
      EXPECT_TRUE((b.t_star - b.tau) * (c - b.tau) < 0) << "t* and the corner lie on opposite sides of tau";
    }
}

TEST(Couplers, RootsRejectUnsupportedInput) {
  EXPECT_THROW(tangency_roots(2, kHalf, kTwo), DomainError);
  EXPECT_THROW(tangency_roots(4, Order::shannon(), kTwo), DomainError);
  EXPECT_THROW(tangency_roots(4, Order::finite(0.3), kTwo), DomainError);
  EXPECT_THROW(tangency_roots(4, kTwo, kTwo), DomainError);
}

TEST(Couplers, RootCacheIsThreadSafe) {
  std::vector<double> got(8);
  std::vector<std::thread> pool;
  for (int i = 0; i < 8; ++i)
    pool.emplace_back([&, i] { got[size_t(i)] = tangency_roots(9, Order::finite(0.8), Order::finite(4)).p_star; });
  for (auto& t : pool) t.join();
  for (double g : got) EXPECT_EQ(g, got[0]);
}

TEST(Couplers, StPairConservesAlpha) {
  RandomSources gen(77, 6, 4);
  int built = 0;
  for (int i = 0; i < 400; ++i) {
    const auto src = gen.next();
    if (src.support_x() < 3) continue;
    for (auto [a, b] : {std::pair{kHalf, kTwo}, {kTwo, kHalf}, {Order::finite(3), kHalf}}) {
      const auto pair = build_st(src, a, b);
      EXPECT_NEAR(pair_cond_renyi(pair, a), cond_renyi(src, a), 1e-9);
      EXPECT_NEAR(cond_renyi(pair.to_source(), a), cond_renyi(src, a), 1e-9);
      EXPECT_NEAR(pair.weights[0] + pair.weights[1], 1.0, 1e-15);
      ++built;
    }
  }
  EXPECT_GT(built, 100);
}

TEST(Couplers, StRegimes) {
  const int n = 6;
  const auto roots = tangency_roots(n, kHalf, kTwo);
  const double corner = std::pow(double(n), theta(kHalf));
  const auto at = build_st(n, kHalf, kTwo, roots.t_star);
  EXPECT_EQ(at.regime, StRegime::Single);
  const auto mid = build_st(n, kHalf, kTwo, 0.5 * (corner + roots.t_star));
  EXPECT_EQ(mid.regime, StRegime::Mixture);
  EXPECT_NEAR(mid.delta, 0.5, 1e-12);
  EXPECT_EQ(mid.components[1].p, roots.p_star);
  const auto far = build_st(n, kHalf, kTwo, 1.0 + 0.5 * (roots.t_star - 1.0));
  EXPECT_EQ(far.regime, StRegime::Single);
  EXPECT_THROW(build_st(n, kHalf, kTwo, 0.5), DomainError);
}

TEST(Couplers, UvPairMatchesReferenceMixture) {
  for (Order a : {kHalf, kTwo, Order::finite(3), Order::infinity()})
    for (double h : {0.2, 0.69, 1.0, std::log(3.0), 1.5, 2.2}) {
      const auto uv = build_uv_from_entropy(a, h);
      EXPECT_EQ(uv.m, int(std::floor(std::exp(h) + 1e-12)));
      EXPECT_GE(uv.lambda, 0.0);
      EXPECT_LE(uv.lambda, 1.0);
      EXPECT_NEAR(pair_cond_renyi(uv, a), h, 1e-12);
      EXPECT_NEAR(cond_renyi(uv.to_source(), a), h, 1e-12);
      const ref::LD la = a.is_infinity() ? ref::kInf : ref::LD(a.value());
      for (double b : {0.5, 1.0, 2.0, 3.0})
        EXPECT_NEAR(pair_cond_renyi(uv, Order::of(b)), double(ref::uv_pair_entropy(la, h, b)), 1e-10);
    }
  EXPECT_EQ(build_uv_from_entropy(kTwo, std::log(3.0)).lambda, 1.0);
  EXPECT_THROW(build_uv_from_entropy(Order::shannon(), 1.0), DomainError);
}

TEST(Couplers, MixtureSourceDropsEmptyWeights) {
  const auto s = mixture_source({0.0, 1.0}, {ProbVec({1.0}), ProbVec({0.5, 0.5})}, 3);
  EXPECT_EQ(s.y_size(), 1u);
  EXPECT_EQ(s.x_size(), 3u);
  EXPECT_THROW(mixture_source({1.0}, {ProbVec({0.5, 0.5})}, 1), DomainError);
}
