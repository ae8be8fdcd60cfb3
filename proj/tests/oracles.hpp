#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Everything here is deliberately naive: direct sums and exhaustive scans.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <tuple>
#include <vector>

#include "hypertorus/torus.hpp"

namespace oracle {

using hypertorus::Complex;
using hypertorus::FreqPoint;
using hypertorus::SpectralField;
using hypertorus::TorusSpec;

inline constexpr double kPi = std::numbers::pi;

inline Complex cis(double turns) { return std::polar(1.0, 2.0 * kPi * turns); }

// Random field with Gaussian amplitudes on [-n, n]^d, keeping each mode with
// probability `density`.
inline SpectralField random_field(const TorusSpec& spec, std::int64_t n, std::mt19937_64& rng, double density = 1.0) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  SpectralField f(spec);
  const int d = spec.dim();
  FreqPoint xi = FreqPoint::zero(d);
  for (int j = 0; j < d; ++j) xi[j] = -n;
  while (true) {
    const double re = g(rng);
    const double im = g(rng);
    if (u(rng) < density) f.set(xi, {re, im});
    int j = d - 1;
    while (j >= 0 && xi[j] == n) xi[j--] = -n;
    if (j < 0) break;
    ++xi[j];
  }
  return f;
}

// sum_xi a(xi) e^{2 pi i (xi.x + t h(xi))} with h recomputed from scratch.
inline Complex direct_eval(const SpectralField& u, double t, const std::vector<double>& x) {
  Complex s{};
  const auto& th = u.spec().thetas();
  for (const auto& [xi, a] : u.amplitudes()) {
    double ph = 0.0;
    double h = 0.0;
    for (int j = 0; j < xi.dim(); ++j) {
      const double c = static_cast<double>(xi[j]);
      ph += c * x[static_cast<std::size_t>(j)];
      h += (j % 2 == 0 ? 1.0 : -1.0) * th[static_cast<std::size_t>(j)] * c * c;
    }
    s += a * cis(ph + t * h);
  }
  return s;
}

// Space-time L^p norm of a d = 2 free evolution by direct evaluation on an
// nt x nx x nx grid (periodic rule in t and x).
inline double direct_lp_2d(const SpectralField& u, double p, int nt, int nx) {
  double acc = 0.0;
  for (int k = 0; k < nt; ++k) {
    for (int i = 0; i < nx; ++i) {
      for (int j = 0; j < nx; ++j) {
        acc += std::pow(std::abs(direct_eval(u, static_cast<double>(k) / nt, {static_cast<double>(i) / nx,
                                                                              static_cast<double>(j) / nx})),
                        p);
      }
    }
  }
  return std::pow(acc / (static_cast<double>(nt) * nx * nx), 1.0 / p);
}

// ||D_N||_{L^p(T)} / ||D_N||_{L^2(T)} for D_N(y) = sum_{|n| <= N} e^{2 pi i n y},
// by an M-point rectangle rule on the closed form.
inline double dirichlet_ratio(std::int64_t N, double p, int M) {
  double acc = 0.0;
  for (int i = 0; i < M; ++i) {
    const double y = (i + 0.5) / M;
    const double v = std::sin((2.0 * N + 1.0) * kPi * y) / std::sin(kPi * y);
    acc += std::pow(std::abs(v), p);
  }
  return std::pow(acc / M, 1.0 / p) / std::sqrt(2.0 * N + 1.0);
}

// Largest nondegenerate fiber by exhaustive enumeration of (xi~, xi).
struct BruteFiber {
  std::int64_t size = 0;
  std::int64_t x1 = 0, x2 = 0, tau = 0;
};

inline BruteFiber brute_fiber_max(std::int64_t N) {
  BruteFiber best;
  bool have = false;
  for (std::int64_t a = -2 * N; a <= 2 * N; ++a) {
    for (std::int64_t b = -2 * N; b <= 2 * N; ++b) {
      std::map<std::int64_t, std::int64_t> count;  // z -> fiber size
      for (std::int64_t x = -N; x <= N; ++x) {
        for (std::int64_t y = -N; y <= N; ++y) {
          const std::int64_t X = 2 * x - a;
          const std::int64_t Y = 2 * y - b;
          const std::int64_t z = X * X - Y * Y;
          if (z != 0) ++count[z];
        }
      }
      for (const auto& [z, c] : count) {
        const std::int64_t tau = (z + a * a - b * b) / 2;
        const BruteFiber cand{c, a, b, tau};
        const bool better = !have || c > best.size ||
                            (c == best.size && std::tie(a, b, tau) < std::tie(best.x1, best.x2, best.tau));
        if (better) {
          best = cand;
          have = true;
        }
      }
    }
  }
  return best;
}

// Integer points of x^2 - y^2 = z in [-N, N]^2 by scanning the box.
inline std::vector<std::pair<std::int64_t, std::int64_t>> box_scan(std::int64_t z, std::int64_t N) {
  std::vector<std::pair<std::int64_t, std::int64_t>> pts;
  for (std::int64_t x = -N; x <= N; ++x) {
    for (std::int64_t y = -N; y <= N; ++y) {
      if (x * x - y * y == z) pts.emplace_back(x, y);
    }
  }
  return pts;
}

// Bilinear interaction by pairwise loop with a pair filter; the multiplier
// `symbol` is applied at the output frequency.
template <class Keep, class Symbol>
std::map<FreqPoint, Complex> pair_sum(const SpectralField& u1, const SpectralField& u2, bool conj, Keep keep,
                                      Symbol symbol) {
  std::map<FreqPoint, Complex> out;
  for (const auto& [x1, a1] : u1.amplitudes()) {
    for (const auto& [x2, a2] : u2.amplitudes()) {
      if (!keep(x1, x2)) continue;
      const FreqPoint o = conj ? x1 - x2 : x1 + x2;
      out[o] += symbol(o) * (conj ? a1 * std::conj(a2) : a1 * a2);
    }
  }
  return out;
}

// Values of e^{itBox}u (d = 2) on the nx x nx grid, by direct summation with
// per-axis exponential tables.
inline std::vector<Complex> grid_values_2d(const SpectralField& u, double t, int nx) {
  std::vector<Complex> out(static_cast<std::size_t>(nx) * nx);
  for (const auto& [xi, a] : u.amplitudes()) {
    const Complex c = a * cis(t * u.spec().symbol(xi));
    std::vector<Complex> ey(static_cast<std::size_t>(nx));
    for (int j = 0; j < nx; ++j) ey[static_cast<std::size_t>(j)] = cis(static_cast<double>(xi[1] * j % nx) / nx);
    for (int i = 0; i < nx; ++i) {
      const Complex cx = c * cis(static_cast<double>(xi[0] * i % nx) / nx);
      for (int j = 0; j < nx; ++j) out[static_cast<std::size_t>(i * nx + j)] += cx * ey[static_cast<std::size_t>(j)];
    }
  }
  return out;
}

// ||u1 u2|| or ||u1 conj(u2)|| in L^2_{t,x} from pointwise grid products. With
// offdiag, same-line pairs are removed in physical space by inclusion-exclusion:
// subtract the products of the line projections of both families and add back
// the coincident pairs, which both families removed.
inline double spacetime_bilinear_2d(const SpectralField& u1, const SpectralField& u2, bool conj, bool offdiag, int nt,
                                    int nx) {
  const TorusSpec& spec = u1.spec();
  std::map<std::pair<int, std::int64_t>, std::pair<SpectralField, SpectralField>> lines;
  if (offdiag) {
    for (const auto& [xi, a] : u1.amplitudes()) {
      for (int fam = 0; fam < 2; ++fam) {
        const std::int64_t s = fam == 0 ? xi[0] + xi[1] : xi[0] - xi[1];
        auto it = lines.try_emplace({fam, s}, SpectralField(spec), SpectralField(spec)).first;
        it->second.first.set(xi, a);
      }
    }
    for (const auto& [xi, a] : u2.amplitudes()) {
      for (int fam = 0; fam < 2; ++fam) {
        const std::int64_t s = fam == 0 ? xi[0] + xi[1] : xi[0] - xi[1];
        auto it = lines.try_emplace({fam, s}, SpectralField(spec), SpectralField(spec)).first;
        it->second.second.set(xi, a);
      }
    }
  }
  auto combine = [&](const std::vector<Complex>& a, const std::vector<Complex>& b, std::vector<Complex>& acc,
                     double sign) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += sign * (conj ? a[i] * std::conj(b[i]) : a[i] * b[i]);
  };
  double total = 0.0;
  for (int k = 0; k < nt; ++k) {
    const double t = static_cast<double>(k) / nt;
    std::vector<Complex> w(static_cast<std::size_t>(nx) * nx);
    combine(grid_values_2d(u1, t, nx), grid_values_2d(u2, t, nx), w, 1.0);
    if (offdiag) {
      for (const auto& [key, pr] : lines) {
        if (pr.first.empty() || pr.second.empty()) continue;
        combine(grid_values_2d(pr.first, t, nx), grid_values_2d(pr.second, t, nx), w, -1.0);
      }
      SpectralField c1(spec), c2(spec);
      for (const auto& [xi, a] : u1.amplitudes()) {
        const Complex b = u2.at(xi);
        if (b != Complex{}) {
          c1.set(xi, a);
          c2.set(xi, b);
        }
      }
      if (!c1.empty()) {
        for (const auto& [xi, a] : c1.amplitudes()) {
          SpectralField one1(spec), one2(spec);
          one1.set(xi, a);
          one2.set(xi, c2.at(xi));
          combine(grid_values_2d(one1, t, nx), grid_values_2d(one2, t, nx), w, 1.0);
        }
      }
    }
    for (const Complex& v : w) total += std::norm(v);
  }
  return std::sqrt(total / (static_cast<double>(nt) * nx * nx));
}

}  // namespace oracle
