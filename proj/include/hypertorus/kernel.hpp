#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hypertorus/bump.hpp"
#include "hypertorus/torus.hpp"

namespace hypertorus {

// K_N(t, x) = sum_{|n| <= 2N} psi(n/N) e^{2 pi i (n x + n^2 t)}
Complex kernel_1d(std::int64_t N, double t, double x, const BumpProfile& psi = BumpProfile());

// prod_{j even} K_N(theta_j t, x_j) * prod_{j odd} conj K_N(theta_j t, x_j),
// axes counted from 1. With the propagator convention of torus.hpp this is
// the psi-weighted box field evolved to time -t.
Complex kernel_full(const TorusSpec& spec, std::int64_t N, double t, std::span<const double> x,
                    const BumpProfile& psi = BumpProfile());

// The field sum_{|n_j| <= 2N} prod_j psi(n_j / N) e^{2 pi i n.x}.
SpectralField kernel_field(const TorusSpec& spec, std::int64_t N, const BumpProfile& psi = BumpProfile());

struct RationalApprox {
  std::int64_t a = 0;
  std::int64_t q = 1;
};

// a/q with 1 <= q < N, gcd(a, q) = 1 and |beta - a/q| <= 1/(N q), taken from
// the continued fraction convergents of beta in [0, 1].
RationalApprox dirichlet_approx(double beta, std::int64_t N);

struct WeylScanRow {
  std::int64_t N = 0;
  double max_ratio = 0.0;
  double argmax_t = 0.0;
  double argmax_x = 0.0;
  std::int64_t argmax_a = 0;
  std::int64_t argmax_q = 1;
};

// Max over sampled (t, x) of |K_N| sqrt(q) (1 + N |t - a/q|^{1/2}) / N with
// a/q = dirichlet_approx(t, N). Samples are seeded uniform points plus the
// rationals a/q (q <= 8) at x = 0.
std::vector<WeylScanRow> weyl_constant_scan(std::span<const std::int64_t> N_list, int samples, std::uint64_t seed,
                                            const BumpProfile& psi = BumpProfile());

}  // namespace hypertorus
