#include <gtest/gtest.h>

#include <cmath>

#include "reference.hpp"
#include "renyi/extremal.hpp"

using namespace renyi;

namespace {

const Order kHalf = Order::finite(0.5);
const Order kTwo = Order::finite(2.0);

ref::Vec to_ld(const ProbVec& p) { return ref::Vec(p.masses().begin(), p.masses().end()); }

ref::LD ld_order(Order a) { return a.is_infinity() ? ref::kInf : ref::LD(a.value()); }

}  // namespace

TEST(ExtremalV, MaterializeAndDomain) {
  EXPECT_EQ(ExtremalV({3, 0.5}).materialize().masses(), (std::vector<double>{0.5, 0.25, 0.25}));
  EXPECT_THROW(ExtremalV({3, 0.2}).materialize(), DomainError);
  EXPECT_THROW(ExtremalV({1, 1.0}).materialize(), DomainError);
  EXPECT_THROW(norm_v(3, 1.2, kTwo), DomainError);
}

TEST(ExtremalW, Materialize) {
  EXPECT_EQ(ExtremalW({0.5}).materialize().masses(), (std::vector<double>{0.5, 0.5}));
  const auto w = ExtremalW({0.4}).materialize().masses();
  ASSERT_EQ(w.size(), 3u);
  EXPECT_NEAR(w[2], 0.2, 1e-15);
  EXPECT_EQ(ExtremalW({1.0 / 3.0}).materialize().size(), 3u);
  EXPECT_THROW(ExtremalW({0.0}).materialize(), DomainError);
}

TEST(ExtremalV, NormsAndEntropiesMatchReference) {
  for (int n : {2, 3, 5, 9})
    for (double p : {1.0 / n, 0.3, 0.55, 0.9, 0.999, 1.0}) {
      if (p < 1.0 / n) continue;
      const ref::Vec v = ref::v(n, p);
      for (Order a : {kHalf, kTwo, Order::finite(3), Order::finite(0.2), Order::infinity()}) {
        const double expected = double(ref::norm(v, ld_order(a)));
        EXPECT_NEAR(norm_v(n, p, a), expected, 1e-13 * std::fmax(1.0, expected));
        EXPECT_NEAR(renyi_v(n, p, a), double(ref::renyi(v, ld_order(a))), 1e-12);
      }
      EXPECT_NEAR(renyi_v(n, p, Order::shannon()), double(ref::renyi(v, 1)), 1e-13);
    }
}

TEST(ExtremalW, NormsAndEntropiesMatchReference) {
  for (double p : {1.0, 0.7, 0.5, 0.45, 1.0 / 3.0, 0.3, 0.26, 0.1, 0.099}) {
    const ref::Vec w = ref::w(p);
    for (Order a : {kHalf, kTwo, Order::finite(3), Order::finite(0.2), Order::infinity()}) {
      const double expected = double(ref::norm(w, ld_order(a)));
      EXPECT_NEAR(norm_w(p, a), expected, 1e-13 * std::fmax(1.0, expected)) << p;
      EXPECT_NEAR(renyi_w(p, a), double(ref::renyi(w, ld_order(a))), 1e-12) << p;
    }
    EXPECT_NEAR(renyi_w(p, Order::shannon()), double(ref::renyi(w, 1)), 1e-13);
    EXPECT_NEAR(renyi_w(p, Order::zero()), double(ref::renyi(w, 0)), 1e-13);
  }
}

TEST(Extremal, NormMonotoneInP) {
  for (Order r : {Order::finite(0.3), kHalf, kTwo, Order::finite(4), Order::infinity()}) {
    const bool below_one = r.is_finite() && r.value() < 1;
    double prev_v = below_one ? kInf : -kInf, prev_w = prev_v;
    for (int i = 0; i <= 1000; ++i) {
      const double p = 0.2 + 0.8 * i / 1000.0;
      const double nv = norm_v(5, p, r), nw = norm_w(p, r);
      if (i > 0) {
        EXPECT_EQ(below_one ? nv < prev_v : nv > prev_v, true);
        EXPECT_EQ(below_one ? nw < prev_w : nw > prev_w, true);
      }
      prev_v = nv;
      prev_w = nw;
    }
  }
}

TEST(Extremal, ClosedFormInversesMatchReferenceRoots) {
  for (int n : {2, 3, 4, 7, 10})
    for (Order a : {kHalf, kTwo, Order::infinity()})
      for (int i = 0; i < 25; ++i) {
        const double mu = std::log(double(n)) * (i + 0.5) / 25;
        EXPECT_NEAR(*closed_form_inv_entropy_v(n, a, mu), double(ref::inv_v(n, ld_order(a), mu)), 1e-10);
        const double muw = 0.05 + 2.5 * i / 25;
        EXPECT_NEAR(*closed_form_inv_entropy_w(a, muw), double(ref::inv_w(ld_order(a), muw)), 1e-10);
      }
}

TEST(Extremal, BisectionInversesMatchReferenceRoots) {
  for (int n : {2, 3, 6})
    for (Order a : {Order::finite(0.3), Order::shannon(), Order::finite(3)})
      for (int i = 0; i < 20; ++i) {
        const double mu = std::log(double(n)) * (i + 0.5) / 20;
        EXPECT_NEAR(inv_entropy_v(n, a, mu), double(ref::inv_v(n, ld_order(a) == 1 ? 1 : ld_order(a), mu)), 1e-10);
        const double muw = 0.05 + 2.5 * i / 20;
        EXPECT_NEAR(inv_entropy_w(a, muw), double(ref::inv_w(a.is_shannon() ? 1 : ld_order(a), muw)), 1e-10);
      }
}

TEST(Extremal, InverseRoundTrip) {
  for (Order a : {kHalf, kTwo, Order::finite(3), Order::infinity(), Order::shannon()}) {
    for (double p : {0.2, 0.35, 0.6, 0.95}) {
      const double mu = renyi_v(5, p, a);
      EXPECT_NEAR(renyi_v(5, inv_entropy_v(5, a, mu), a), mu, 1e-12);
      if (p > 0.2) EXPECT_NEAR(inv_entropy_v(5, a, mu), p, 1e-9);
      EXPECT_NEAR(inv_entropy_w(a, renyi_w(p, a)), p, 1e-9);
    }
  }
}

TEST(Extremal, InverseEndpointsAndDomain) {
  EXPECT_EQ(inv_entropy_v(4, kTwo, 0.0), 1.0);
  EXPECT_NEAR(inv_entropy_v(4, kTwo, std::log(4.0)), 0.25, 1e-12);
  EXPECT_NEAR(inv_entropy_w(kHalf, std::log(3.0)), 1.0 / 3.0, 1e-15);
  EXPECT_THROW(inv_entropy_v(4, kTwo, 2.0), DomainError);
  EXPECT_THROW(inv_entropy_v(4, Order::zero(), 0.5), DomainError);
  EXPECT_FALSE(closed_form_inv_entropy_v(4, Order::finite(3), 0.5).has_value());
}

TEST(Extremal, NormInverses) {
  for (Order r : {kHalf, kTwo, Order::finite(3), Order::infinity()})
    for (double p : {0.3, 0.5, 0.8}) {
      EXPECT_NEAR(inv_norm_v(4, r, norm_v(4, p, r)), p, 1e-9);
      EXPECT_NEAR(inv_norm_w(r, norm_w(p, r)), p, 1e-9);
    }
  EXPECT_THROW(inv_norm_v(4, kTwo, 0.1), DomainError);
  EXPECT_THROW(inv_norm_w(kHalf, 0.5), DomainError);
}

TEST(Extremal, MuToNormOfWConcaveWithinCells) {
  for (Order r : {kHalf, kTwo, Order::finite(3)})
    for (int m = 1; m <= 4; ++m) {
      const double lo = std::log(double(m)), hi = std::log(double(m + 1));
      const int pts = 1000;
      std::vector<double> f;
      for (int i = 0; i <= pts; ++i) {
        const double mu = lo + (hi - lo) * (i + 0.5) / (pts + 1);
        f.push_back(norm_w(inv_entropy_w(Order::shannon(), mu), r));
      }
      const double scale = std::fabs(f.back() - f.front()) + 1e-300;
      for (size_t i = 1; i + 1 < f.size(); ++i) {
        const double d2 = (f[i + 1] - 2 * f[i] + f[i - 1]) / scale;
        EXPECT_LE(d2, 1e-9);
      }
    }
}

TEST(Extremal, MuToNormOfVHasSingleInflection) {
  for (int n : {3, 5, 8})
    for (Order r : {kHalf, Order::finite(0.7), kTwo, Order::finite(3)}) {
      const int pts = 1000;
      const double top = std::log(double(n));
      std::vector<double> f;
      for (int i = 0; i <= pts; ++i)
        f.push_back(norm_v(n, inv_entropy_v(n, Order::shannon(), top * (i + 0.5) / (pts + 1)), r));
      int changes = 0, sign = 0, first = 0;
      for (size_t i = 1; i + 1 < f.size(); ++i) {
        const double d2 = f[i + 1] - 2 * f[i] + f[i - 1];
        if (std::fabs(d2) < 1e-12) continue;
        const int s = d2 > 0 ? 1 : -1;
        if (sign == 0) first = s;
        if (sign != 0 && s != sign) ++changes;
        sign = s;
      }
      EXPECT_EQ(changes, 1) << "n=" << n << " r=" << r.to_string();
      EXPECT_EQ(first, -1) << "concave part comes first";
    }
}

TEST(Extremal, MuToNormOfBinaryVConcave) {
  for (Order r : {Order::finite(0.3), kHalf, kTwo, Order::finite(5), Order::infinity()}) {
    std::vector<double> f;
    for (int i = 0; i <= 1000; ++i)
      f.push_back(norm_v(2, inv_entropy_v(2, Order::shannon(), std::log(2.0) * (i + 0.5) / 1001), r));
    const double scale = std::fabs(f.back() - f.front());
    for (size_t i = 1; i + 1 < f.size(); ++i) EXPECT_LE((f[i + 1] - 2 * f[i] + f[i - 1]) / scale, 1e-9);
  }
}
