#include "hypertorus/kernel.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include "hypertorus/parallel.hpp"

namespace hypertorus {
namespace {

Complex cis_turns(double turns) {
  const double r = turns - std::nearbyint(turns);
  return std::polar(1.0, 2.0 * std::numbers::pi * r);
}

// n^2 t reduced mod 1 before the multiply keeps large-N phases accurate.
double reduced(double t) { return t - std::floor(t); }

}  // namespace

Complex kernel_1d(std::int64_t N, double t, double x, const BumpProfile& psi) {
  if (N < 1) throw std::invalid_argument("kernel_1d: N must be >= 1");
  const double tr = reduced(t);
  const double xr = reduced(x);
  Complex s{};
  for (std::int64_t n = -2 * N; n <= 2 * N; ++n) {
    const double w = psi(static_cast<double>(n) / static_cast<double>(N));
    if (w == 0.0) continue;
    const auto nd = static_cast<double>(n);
    const double sq = std::fmod(nd * nd * tr, 1.0);
    s += w * cis_turns(nd * xr + sq);
  }
  return s;
}

Complex kernel_full(const TorusSpec& spec, std::int64_t N, double t, std::span<const double> x,
                    const BumpProfile& psi) {
  if (static_cast<int>(x.size()) != spec.dim()) throw std::invalid_argument("kernel_full: point dimension mismatch");
  Complex prod{1.0, 0.0};
  for (int j = 0; j < spec.dim(); ++j) {
    const Complex k = kernel_1d(N, spec.thetas()[static_cast<std::size_t>(j)] * t, x[static_cast<std::size_t>(j)], psi);
    prod *= (j % 2 == 1) ? k : std::conj(k);
  }
  return prod;
}

SpectralField kernel_field(const TorusSpec& spec, std::int64_t N, const BumpProfile& psi) {
  const int d = spec.dim();
  std::vector<double> w(static_cast<std::size_t>(4 * N + 1));
  for (std::int64_t n = -2 * N; n <= 2 * N; ++n) {
    w[static_cast<std::size_t>(n + 2 * N)] = psi(static_cast<double>(n) / static_cast<double>(N));
  }
  SpectralField u(spec);
  FreqPoint xi = FreqPoint::zero(d);
  for (int j = 0; j < d; ++j) xi[j] = -2 * N;
  while (true) {
    double a = 1.0;
    for (int j = 0; j < d; ++j) a *= w[static_cast<std::size_t>(xi[j] + 2 * N)];
    if (a != 0.0) u.set(xi, a);
    int j = d - 1;
    while (j >= 0 && xi[j] == 2 * N) {
      xi[j] = -2 * N;
      --j;
    }
    if (j < 0) break;
    ++xi[j];
  }
  return u;
}

RationalApprox dirichlet_approx(double beta, std::int64_t N) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("dirichlet_approx: beta must lie in [0, 1]");
  if (N < 2) throw std::invalid_argument("dirichlet_approx: N must be >= 2");
  auto ok = [&](std::int64_t a, std::int64_t q) {
    const double err = std::abs(beta - static_cast<double>(a) / static_cast<double>(q));
    return err <= (1.0 + 1e-12) / (static_cast<double>(N) * static_cast<double>(q));
  };

  // convergents p_k / q_k, keeping the last one with q_k < N
  std::int64_t p_prev = 1, q_prev = 0;
  std::int64_t p_cur = 0, q_cur = 1;
  long double rest = beta;
  {
    const auto a0 = static_cast<std::int64_t>(std::floor(rest));
    p_cur = a0;
    rest -= a0;
  }
  while (rest > 1e-9L) {
    const long double inv = 1.0L / rest;
    auto ak = static_cast<std::int64_t>(std::floor(inv));
    long double frac = inv - ak;
    if (1.0L - frac < 1e-9L) {
      ++ak;
      frac = 0.0L;
    }
    const std::int64_t p_next = ak * p_cur + p_prev;
    const std::int64_t q_next = ak * q_cur + q_prev;
    if (q_next >= N) break;
    p_prev = p_cur;
    q_prev = q_cur;
    p_cur = p_next;
    q_cur = q_next;
    rest = frac;
  }
  if (ok(p_cur, q_cur)) return {p_cur, q_cur};

  for (std::int64_t q = 1; q < N; ++q) {
    const auto a = static_cast<std::int64_t>(std::llround(beta * static_cast<double>(q)));
    if (std::gcd(a, q) == 1 && ok(a, q)) return {a, q};
  }
  throw std::logic_error("dirichlet_approx: no admissible fraction found");
}

std::vector<WeylScanRow> weyl_constant_scan(std::span<const std::int64_t> N_list, int samples, std::uint64_t seed,
                                            const BumpProfile& psi) {
  if (samples < 1) throw std::invalid_argument("weyl_constant_scan: samples must be >= 1");
  struct Sample {
    double t;
    double x;
  };
  std::vector<Sample> points;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < samples; ++i) {
    const double t = unit(rng);
    const double x = unit(rng);
    points.push_back({t, x});
  }
  for (std::int64_t q = 1; q <= 8; ++q) {
    for (std::int64_t a = 0; a <= q; ++a) {
      if (std::gcd(a, q) == 1) points.push_back({static_cast<double>(a) / static_cast<double>(q), 0.0});
    }
  }

  std::vector<WeylScanRow> rows;
  for (std::int64_t N : N_list) {
    std::vector<double> ratio(points.size());
    std::vector<RationalApprox> approx(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
      const Sample& s = points[i];
      const RationalApprox r = dirichlet_approx(s.t, N);
      const double dist = std::abs(s.t - static_cast<double>(r.a) / static_cast<double>(r.q));
      const double weight = std::sqrt(static_cast<double>(r.q)) * (1.0 + static_cast<double>(N) * std::sqrt(dist));
      ratio[i] = std::abs(kernel_1d(N, s.t, s.x, psi)) * weight / static_cast<double>(N);
      approx[i] = r;
    });
    WeylScanRow row{N};
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (ratio[i] > row.max_ratio) {
        row.max_ratio = ratio[i];
        row.argmax_t = points[i].t;
        row.argmax_x = points[i].x;
        row.argmax_a = approx[i].a;
        row.argmax_q = approx[i].q;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace hypertorus
