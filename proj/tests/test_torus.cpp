#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hypertorus/errors.hpp"
#include "hypertorus/exponents.hpp"
#include "hypertorus/torus.hpp"
#include "oracles.hpp"

using namespace hypertorus;

namespace {

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double max_coef_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (const auto& [xi, v] : a.amplitudes()) m = std::max(m, std::abs(v - b.at(xi)));
  for (const auto& [xi, v] : b.amplitudes()) m = std::max(m, std::abs(v - a.at(xi)));
  return m;
}

TorusSpec random_spec(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dims(1, 2);
  std::uniform_real_distribution<double> th(0.1, 1.0);
  const int d = 2 * dims(rng);
  std::vector<double> t(static_cast<std::size_t>(d));
  for (double& x : t) x = th(rng);
  return TorusSpec(d, t);
}

}  // namespace

TEST(TorusSpec, RejectsBadInput) {
  EXPECT_THROW(TorusSpec(3, {1, 1, 1}), std::invalid_argument);
  EXPECT_THROW(TorusSpec(2, {1}), std::invalid_argument);
  EXPECT_THROW(TorusSpec(2, {1, 0}), std::invalid_argument);
  EXPECT_THROW(TorusSpec(2, {1, -0.5}), std::invalid_argument);
  EXPECT_NO_THROW(TorusSpec(2, {3.0, 0.5}));
}

TEST(Symbol, Examples) {
  const TorusSpec sq = TorusSpec::square(2);
  EXPECT_EQ(symbol_h(sq, FreqPoint{3, 3}), 0.0);
  EXPECT_EQ(symbol_h(sq, FreqPoint{2, 1}), 3.0);
  EXPECT_EQ(symbol_h(TorusSpec(2, {0.25, 1.0}), FreqPoint{2, 1}), 0.0);
  EXPECT_EQ(sq.integer_symbol(FreqPoint{-4, 1}), 15);
  EXPECT_THROW(symbol_h(sq, FreqPoint{1, 2, 3}), std::invalid_argument);
  EXPECT_THROW(TorusSpec(2, {0.5, 1.0}).integer_symbol(FreqPoint{1, 1}), ExactnessUnavailable);
}

TEST(Symbol, FourDimensionalSigns) {
  const TorusSpec s(4, {1.0, 0.5, 0.25, 1.0});
  EXPECT_DOUBLE_EQ(s.symbol(FreqPoint{1, 2, 3, 4}), 1.0 - 2.0 + 2.25 - 16.0);
  EXPECT_DOUBLE_EQ(s.bilinear(FreqPoint{1, 2, 3, 4}, FreqPoint{1, 2, 3, 4}), s.symbol(FreqPoint{1, 2, 3, 4}));
}

TEST(Propagate, IdentityAtZeroAndNullLine) {
  std::mt19937_64 rng(1);
  const TorusSpec sq = TorusSpec::square(2);
  const SpectralField u = oracle::random_field(sq, 3, rng);
  EXPECT_EQ(max_coef_diff(propagate(u, 0.0), u), 0.0);

  SpectralField line(sq);
  for (int n = -5; n <= 5; ++n) line.set(FreqPoint{n, -n}, {1.0 + n, 0.5});
  for (double t : {0.1, 0.37, 2.5, -7.25}) EXPECT_EQ(max_coef_diff(propagate(line, t), line), 0.0);
}

TEST(Propagate, UnitarityAndGroupLaw) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> tt(-3.0, 3.0);
  for (int trial = 0; trial < 100; ++trial) {
    const TorusSpec spec = random_spec(rng);
    const SpectralField u = oracle::random_field(spec, spec.dim() == 2 ? 4 : 2, rng, 0.6);
    const double s = tt(rng);
    const double t = tt(rng);
    EXPECT_LE(rel_diff(propagate(u, t).l2_norm(), u.l2_norm()), 1e-12);
    EXPECT_LE(max_coef_diff(propagate(propagate(u, s), t), propagate(u, s + t)), 1e-12 * u.l1_norm());
  }
}

TEST(Project, IdempotentAndOrthogonal) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> off(-4, 4);
  for (int trial = 0; trial < 100; ++trial) {
    const SpectralField u = oracle::random_field(TorusSpec::square(2), 4, rng, 0.8);
    const FreqBox box{FreqPoint{off(rng), off(rng)}, 3};
    const SpectralField once = project(u, box);
    EXPECT_EQ(max_coef_diff(project(once, box), once), 0.0);

    const std::int64_t cut = off(rng);
    const FreqPredicate left = [cut](const FreqPoint& xi) { return xi[0] < cut; };
    const FreqPredicate right = [cut](const FreqPoint& xi) { return xi[0] >= cut; };
    const double a = project(u, left).l2_norm();
    const double b = project(u, right).l2_norm();
    EXPECT_LE(rel_diff(a * a + b * b, u.l2_norm() * u.l2_norm()), 1e-12);
  }
}

TEST(Project, LineAndShells) {
  std::mt19937_64 rng(4);
  const SpectralField u = oracle::random_field(TorusSpec::square(2), 4, rng);
  const SpectralField p = project(u, LineSpec{1, 1});
  EXPECT_EQ(p.size(), 8u);
  for (const auto& [xi, a] : p.amplitudes()) EXPECT_EQ(xi[0] + xi[1], 1);

  const SpectralField shell = project(u, DyadicShell{2});
  for (const auto& [xi, a] : shell.amplitudes()) {
    EXPECT_GE(xi.norm(), 2.0);
    EXPECT_LT(xi.norm(), 4.0);
  }
  EXPECT_TRUE(FreqBox::centered(2, 3).contains(FreqPoint{-3, 3}));
  EXPECT_FALSE(FreqBox::centered(2, 3).contains(FreqPoint{-4, 0}));
}

TEST(Synthesize, ConstantModeAndAliasing) {
  SpectralField u(TorusSpec::square(2));
  u.set(FreqPoint{0, 0}, 1.0);
  for (const Complex& v : synthesize(u, {1, 5}, 0.3)) EXPECT_NEAR(std::abs(v - Complex(1.0)), 0.0, 1e-15);
  u.set(FreqPoint{3, 0}, 1.0);
  EXPECT_THROW(synthesize(u, {1, 6}, 0.0), AliasingError);
  EXPECT_NO_THROW(synthesize(u, {1, 7}, 0.0));
}

TEST(Synthesize, MatchesDirectEvaluationAndPlancherel) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> tt(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const TorusSpec spec = random_spec(rng);
    const std::int64_t n = spec.dim() == 2 ? 5 : 2;
    const SpectralField u = oracle::random_field(spec, n, rng, 0.7);
    const int nx = 2 * static_cast<int>(n) + 1 + trial % 3;
    const double t = tt(rng);
    const auto vals = synthesize(u, {1, nx}, t);
    double sum2 = 0.0;
    double maxabs = 0.0;
    for (const Complex& v : vals) {
      sum2 += std::norm(v);
      maxabs = std::max(maxabs, std::abs(v));
    }
    EXPECT_LE(rel_diff(sum2 / static_cast<double>(vals.size()), u.l2_norm() * u.l2_norm()), 1e-10);
    EXPECT_LE(maxabs, u.l1_norm() * (1 + 1e-12));
    // spot check a few grid points against direct summation
    for (std::size_t idx : {std::size_t{0}, vals.size() / 3, vals.size() - 1}) {
      std::vector<double> x(static_cast<std::size_t>(spec.dim()));
      std::size_t r = idx;
      for (int j = spec.dim() - 1; j >= 0; --j) {
        x[static_cast<std::size_t>(j)] = static_cast<double>(r % static_cast<std::size_t>(nx)) / nx;
        r /= static_cast<std::size_t>(nx);
      }
      EXPECT_LE(std::abs(vals[idx] - oracle::direct_eval(u, t, x)), 1e-10 * u.l1_norm());
      EXPECT_LE(std::abs(evaluate(u, t, x) - oracle::direct_eval(u, t, x)), 1e-10 * u.l1_norm());
    }
  }
}

TEST(SpacetimeNorm, ConstantModeAndL2) {
  SpectralField u(TorusSpec::square(2));
  u.set(FreqPoint{0, 0}, {0.6, -0.8});
  for (double p : {1.0, 2.0, 3.5, 6.0}) EXPECT_NEAR(spacetime_lp_norm(u, p, {7, 3}), 1.0, 1e-12);

  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    const TorusSpec spec = trial % 2 ? TorusSpec::square(2) : TorusSpec(2, {0.7, 0.3});
    const SpectralField f = oracle::random_field(spec, 4, rng, 0.7);
    EXPECT_LE(rel_diff(spacetime_lp_norm(f, 2.0, {40, 9}), f.l2_norm()), 1e-8);
  }
}

TEST(SpacetimeNorm, MatchesDirectQuadrature) {
  std::mt19937_64 rng(7);
  const SpectralField u = oracle::random_field(TorusSpec::square(2), 2, rng, 0.8);
  for (double p : {3.0, 4.0}) {
    EXPECT_LE(rel_diff(spacetime_lp_norm(u, p, {24, 11}), oracle::direct_lp_2d(u, p, 24, 11)), 1e-10);
  }
}

TEST(SpacetimeNorm, LineDataMatchesDirichletKernel) {
  for (std::int64_t N : {8, 16, 32}) {
    const SpectralField line = make_family(FamilyTag::Line, TorusSpec::square(2), N);
    const double got = spacetime_lp_norm(line, 4.0, {1, 4 * static_cast<int>(N) + 1}) / line.l2_norm();
    EXPECT_LE(rel_diff(got, oracle::dirichlet_ratio(N, 4.0, 1 << 16)), 1e-8) << "N=" << N;
  }
}

TEST(SpacetimeNorm, RefinementConverges) {
  std::mt19937_64 rng(8);
  const SpectralField u = oracle::random_field(TorusSpec(2, {0.9, 0.4}), 3, rng);
  const double coarse = spacetime_lp_norm(u, 3.0, {200, 21});
  const double fine = spacetime_lp_norm(u, 3.0, {800, 41});
  EXPECT_LE(rel_diff(coarse, fine), 1e-3);
}

TEST(Sobolev, Examples) {
  std::mt19937_64 rng(9);
  const SpectralField u = oracle::random_field(TorusSpec::square(2), 3, rng);
  EXPECT_LE(rel_diff(sobolev_norm(u, 0.0), u.l2_norm()), 1e-14);
  SpectralField one(TorusSpec::square(2));
  one.set(FreqPoint{1, 0}, 1.0);
  EXPECT_NEAR(sobolev_norm(one, 1.0), std::sqrt(2.0), 1e-15);
}

TEST(Galilean, ExamplesAndProfiles) {
  const TorusSpec sq = TorusSpec::square(2);
  std::mt19937_64 rng(10);
  const SpectralField u = oracle::random_field(sq, 3, rng, 0.5);
  const GalileanFrame id = galilean_shift(u, FreqPoint::zero(2));
  EXPECT_EQ(max_coef_diff(id.recentered, u), 0.0);
  EXPECT_EQ(id.drift, (std::vector<double>{0.0, 0.0}));

  const GalileanFrame g = galilean_shift(u, FreqPoint{1, 1});
  EXPECT_EQ(g.drift, (std::vector<double>{2.0, -2.0}));
  EXPECT_EQ(g.phase_rate, 0.0);

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> shift(-6, 6);
  for (int trial = 0; trial < 100; ++trial) {
    const TorusSpec spec = trial % 2 ? sq : TorusSpec(2, {0.5, 0.8});
    const SpectralField f = oracle::random_field(spec, 2, rng, 0.7);
    const FreqPoint r0{shift(rng), shift(rng)};
    SpectralField moved(spec);
    for (const auto& [xi, a] : f.amplitudes()) moved.set(xi + r0, a);
    const GalileanFrame fr = galilean_shift(moved, r0);
    const double t = unit(rng);
    const std::vector<double> x{unit(rng), unit(rng)};
    const std::vector<double> xs{x[0] + t * fr.drift[0], x[1] + t * fr.drift[1]};
    EXPECT_NEAR(std::abs(oracle::direct_eval(moved, t, x)), std::abs(oracle::direct_eval(fr.recentered, t, xs)),
                1e-9);
  }
}
