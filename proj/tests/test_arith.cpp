#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "hypertorus/arith.hpp"

using namespace hypertorus;

namespace {

std::int64_t brute_restricted(std::int64_t n, std::int64_t Q) {
  std::int64_t c = 0;
  for (std::int64_t q = 1; q <= n; ++q) {
    if (n % q == 0 && 2 * q >= Q && q <= 2 * Q) ++c;
  }
  return c;
}

std::int64_t brute_divisors(std::int64_t n) {
  std::int64_t c = 0;
  for (std::int64_t q = 1; q <= n; ++q) c += n % q == 0;
  return c;
}

double brute_arc(const ArcFamily& f, double t, ArcMode mode) {
  double s = 0.0;
  for (std::int64_t q = 1; q <= 2 * f.Q; ++q) {
    if (2 * q < f.Q) continue;
    const std::int64_t lo = mode == ArcMode::Lambda ? 0 : static_cast<std::int64_t>(std::floor(t * q)) - 3 * q - 3;
    const std::int64_t hi = mode == ArcMode::Lambda ? q : static_cast<std::int64_t>(std::ceil(t * q)) + 3 * q + 3;
    for (std::int64_t a = lo; a <= hi; ++a) {
      if (mode == ArcMode::Lambda && std::gcd(a, q) != 1) continue;
      s += f.cutoff((t - static_cast<double>(a) / q) / f.T);
    }
  }
  return s;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

}  // namespace

TEST(Divisors, Examples) {
  EXPECT_EQ(divisor_count(1), 1);
  EXPECT_EQ(divisor_count(12), 6);
  EXPECT_EQ(restricted_divisor_count(12, 2), 4);
  EXPECT_THROW(divisor_count(0), std::invalid_argument);
}

TEST(Divisors, AgreeWithEnumeration) {
  const DivisorTable table(3000);
  for (std::int64_t Q : {1, 2, 3, 4, 8, 16, 64}) {
    const auto counts = restricted_counts(3000, Q);
    for (std::int64_t n = 1; n <= 3000; n += (n < 200 ? 1 : 7)) {
      const std::int64_t r = brute_restricted(n, Q);
      ASSERT_EQ(restricted_divisor_count(n, Q), r) << n << " " << Q;
      ASSERT_EQ(counts[static_cast<std::size_t>(n - 1)], r);
      ASSERT_LE(r, divisor_count(n));
    }
  }
  for (std::int64_t n = 1; n <= 3000; ++n) ASSERT_EQ(table(n), n <= 400 ? brute_divisors(n) : divisor_count(n));
  EXPECT_EQ(restricted_divisor_count(0, 4), 7);
}

TEST(Divisors, MomentSum) {
  const DivisorTable table(200);
  for (int B = 1; B <= 3; ++B) {
    double s = 0.0;
    for (std::int64_t l = 1; l <= 150; ++l) s += std::pow(static_cast<double>(brute_divisors(l)), B) / l;
    EXPECT_LE(rel(table.moment_sum(150, B), s), 1e-13);
  }
}

TEST(Distribution, Examples) {
  // R = 100, Q = 2: count n with at least 4 divisors in [1, 4], i.e. 12 | n
  const DistributionCheck c = distribution_check(100, 2, 3.0, 1);
  std::int64_t expect = 0;
  for (std::int64_t n = 1; n <= 100; ++n) expect += brute_restricted(n, 2) > 3;
  EXPECT_EQ(c.lhs, expect);
  EXPECT_EQ(c.lhs, 8);
  EXPECT_TRUE(c.holds());
  EXPECT_EQ(distribution_check(1000, 4, 9.0, 2).lhs, 0);
}

TEST(Distribution, MonotoneInThreshold) {
  for (std::int64_t Q : {1, 2, 4, 8, 16}) {
    std::int64_t prev = distribution_check(5000, Q, 0.5, 1).lhs;
    for (double D = 1.0; D <= 2.0 * Q + 1; D += 0.5) {
      const std::int64_t cur = distribution_check(5000, Q, D, 1).lhs;
      EXPECT_LE(cur, prev);
      prev = cur;
    }
  }
}

TEST(Distribution, HoldsForIntegerThresholds) {
  for (std::int64_t R : {100, 1000, 10000}) {
    for (std::int64_t Q = 1; Q <= 64; Q *= 2) {
      for (int B = 1; B <= 3; ++B) {
        for (std::int64_t D = 1; D <= 2 * Q; ++D) {
          const DistributionCheck c = distribution_check(R, Q, static_cast<double>(D), B);
          EXPECT_TRUE(c.holds()) << R << " " << Q << " " << D << " " << B << ": " << c.lhs << " > " << c.rhs;
        }
      }
    }
  }
}

TEST(Arcs, Examples) {
  const ArcFamily f{1, 0.125, BumpProfile()};
  EXPECT_DOUBLE_EQ(arc_eval(f, 0.5, ArcMode::Lambda), 1.0);
  EXPECT_DOUBLE_EQ(arc_eval(f, 0.25, ArcMode::Lambda), 0.0);
  EXPECT_DOUBLE_EQ(arc_eval(f, 0.25, ArcMode::Theta), 0.0);
  EXPECT_THROW((ArcFamily{0, 0.1, BumpProfile()}).validate(), std::invalid_argument);
  EXPECT_THROW((ArcFamily{2, 1.0, BumpProfile()}).validate(), std::invalid_argument);
  EXPECT_TRUE((ArcFamily{2, 0.1, BumpProfile()}).separated());
  EXPECT_FALSE((ArcFamily{2, 0.2, BumpProfile()}).separated());
}

TEST(Arcs, LambdaBelowThetaAndDirectSums) {
  std::mt19937_64 rng(30);
  std::uniform_real_distribution<double> tt(0.0, 1.0);
  for (std::int64_t Q : {1, 2, 4, 8}) {
    for (double T : {1.0 / 8, 1.0 / 64, 1.0 / 512}) {
      const ArcFamily f{Q, T, BumpProfile()};
      for (int i = 0; i < 250; ++i) {
        const double t = tt(rng);
        const double l = arc_eval(f, t, ArcMode::Lambda);
        const double th = arc_eval(f, t, ArcMode::Theta);
        ASSERT_LE(l, th + 1e-12);
        ASSERT_NEAR(l, brute_arc(f, t, ArcMode::Lambda), 1e-12);
        ASSERT_NEAR(th, brute_arc(f, t, ArcMode::Theta), 1e-12);
        ASSERT_NEAR(th, arc_eval(f, t + 1.0, ArcMode::Theta), 1e-12);
      }
    }
  }
}

TEST(ThetaHat, IdentityAndQuadrature) {
  const ArcFamily f{2, 1.0 / 32, BumpProfile()};
  const double phi0 = f.cutoff.fourier(0.0);
  EXPECT_NEAR(theta_hat(f, 0), f.T * phi0 * (1 + 2 + 3 + 4), 1e-14);
  EXPECT_NEAR(std::abs(theta_hat_quadrature(f, 4, 1 << 16) - theta_hat(f, 4)), 0.0, 1e-6);
  // 37 is prime, so no divisor lies in [4, 16]
  const ArcFamily g{8, 1.0 / 256, BumpProfile()};
  EXPECT_EQ(theta_hat(g, 37), 0.0);
  for (std::int64_t n : {0, 1, 2, 3, 6, 12}) {
    EXPECT_NEAR(theta_hat_quadrature(g, n, 1 << 16), theta_hat(g, n), 1e-9 * theta_hat(g, 0)) << n;
  }
}

TEST(ThetaHat, FourierBoundReport) {
  for (std::int64_t Q : {1, 2, 4, 8}) {
    const ArcFamily f{Q, 1.0 / (4.0 * Q * Q), BumpProfile()};
    const ThetaFourierReport r = theta_fourier_check(f, 400, 1 << 14);
    EXPECT_TRUE(std::isfinite(r.max_ratio));
    EXPECT_LE(r.max_ratio, 2.0 + 1e-12);
    EXPECT_LE(r.quadrature_error, 1e-6);
  }
}

TEST(Partition, DeficitBoundedAndRefinementConsistent) {
  const PartitionReport coarse = partition_check(8, 16, 512);
  const PartitionReport fine = partition_check(8, 16, 1024);
  EXPECT_EQ(coarse.samples.front().deficit, 0.0);
  EXPECT_GE(coarse.samples.front().arc_sum, 1.0);
  for (const PartitionSample& s : fine.samples) {
    EXPECT_GE(s.deficit, 0.0);
    EXPECT_LE(s.deficit, 1.0);
  }
  for (std::size_t i = 0; i < coarse.samples.size(); ++i) {
    EXPECT_NEAR(coarse.samples[i].deficit, fine.samples[2 * i].deficit, 1e-12);
  }
}

TEST(Atomic, ConstantFunction) {
  const std::vector<double> one(1000, 1.0);
  const AtomicDecomposition a = atomic_decompose(one, 2.0);
  std::size_t nonempty = 0;
  for (const Stratum& s : a.strata) nonempty += !s.members.empty();
  EXPECT_EQ(nonempty, 1u);
  EXPECT_EQ(a.strata.front().members.size(), 1000u);
  EXPECT_THROW(atomic_decompose({}, 2.0), std::invalid_argument);
}

TEST(Atomic, HalfIndicator) {
  std::vector<double> f(1024, 0.0);
  std::fill(f.begin(), f.begin() + 512, 1.0);
  const AtomicDecomposition a = atomic_decompose(f, 4.0);
  for (const Stratum& s : a.strata) EXPECT_LE(a.measure(s), std::ldexp(1.0, -s.k));
}

TEST(Atomic, PropertiesOnRandomSamples) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> size(1, 3000);
  std::uniform_int_distribution<int> shape(0, 3);
  std::exponential_distribution<double> ex(1.0);
  std::uniform_real_distribution<double> un(-1.0, 1.0);
  for (double p : {2.0, 8.0 / 3.0, 4.0}) {
    for (int trial = 0; trial < 100; ++trial) {
      std::vector<double> f(static_cast<std::size_t>(size(rng)));
      const int kind = shape(rng);
      for (double& v : f) {
        if (kind == 0) v = un(rng);
        else if (kind == 1) v = std::pow(ex(rng), 3.0);
        else if (kind == 2) v = un(rng) > 0.8 ? un(rng) : 0.0;
        else v = std::round(4 * un(rng));
      }
      if (std::all_of(f.begin(), f.end(), [](double v) { return v == 0.0; })) f[0] = 1.0;
      const AtomicDecomposition a = atomic_decompose(f, p);
      std::vector<int> hits(f.size(), 0);
      for (const Stratum& s : a.strata) {
        ASSERT_LE(a.measure(s), std::ldexp(1.0, -s.k) + 1e-15);
        for (std::size_t i : s.members) {
          ++hits[i];
          ASSERT_LE(std::abs(f[i]), s.lambda * std::pow(2.0, s.k / p) * (1 + 1e-12));
        }
      }
      for (std::size_t i = 0; i < f.size(); ++i) ASSERT_EQ(hits[i], f[i] != 0.0 ? 1 : 0);
      for (double q : {1.0, 2.0, p}) {
        ASSERT_LE(a.weighted_sum(q), 4.0 * sample_lq_power(f, q) * (1 + 1e-12)) << p << " " << q;
      }
    }
  }
}
