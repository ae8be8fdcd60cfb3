#include "hypertorus/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "hypertorus/parallel.hpp"

namespace hypertorus {
namespace {

std::int64_t q_low(std::int64_t Q) { return (Q + 1) / 2; }
std::int64_t q_high(std::int64_t Q) { return 2 * Q; }

std::int64_t ipow(std::int64_t b, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

std::int64_t divisor_count(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("divisor_count: n must be >= 1");
  std::int64_t c = 0;
  for (std::int64_t q = 1; q * q <= n; ++q) {
    if (n % q == 0) c += (q * q == n) ? 1 : 2;
  }
  return c;
}

std::int64_t restricted_divisor_count(std::int64_t n, std::int64_t Q) {
  if (Q < 1) throw std::invalid_argument("restricted_divisor_count: Q must be >= 1");
  if (n < 0) n = -n;
  std::int64_t c = 0;
  for (std::int64_t q = q_low(Q); q <= q_high(Q); ++q) {
    if (n % q == 0) ++c;
  }
  return c;
}

DivisorTable::DivisorTable(std::int64_t n_max) : d_(static_cast<std::size_t>(std::max<std::int64_t>(n_max, 0) + 1), 0) {
  for (std::int64_t q = 1; q <= n_max; ++q) {
    for (std::int64_t m = q; m <= n_max; m += q) ++d_[static_cast<std::size_t>(m)];
  }
}

double DivisorTable::moment_sum(std::int64_t L, int B) const {
  if (L > n_max()) throw std::out_of_range("DivisorTable: moment range exceeds table");
  double s = 0.0;
  for (std::int64_t l = 1; l <= L; ++l) {
    s += std::pow(static_cast<double>(d_[static_cast<std::size_t>(l)]), B) / static_cast<double>(l);
  }
  return s;
}

std::vector<std::int64_t> restricted_counts(std::int64_t R, std::int64_t Q) {
  std::vector<std::int64_t> c(static_cast<std::size_t>(std::max<std::int64_t>(R, 0)), 0);
  for (std::int64_t q = q_low(Q); q <= q_high(Q); ++q) {
    for (std::int64_t m = q; m <= R; m += q) ++c[static_cast<std::size_t>(m - 1)];
  }
  return c;
}

DistributionCheck distribution_check(std::int64_t R, std::int64_t Q, double D, int B) {
  if (R < 1 || Q < 1 || B < 1) throw std::invalid_argument("distribution_check: R, Q, B must be >= 1");
  if (!(D > 0.0)) throw std::invalid_argument("distribution_check: D must be positive");
  if (B > 3) throw std::invalid_argument("distribution_check: B > 3 is not supported");
  DistributionCheck out;
  for (std::int64_t c : restricted_counts(R, Q)) {
    if (static_cast<double>(c) > D) ++out.lhs;
  }
  const std::int64_t L = ipow(Q, B);
  const DivisorTable table(L);
  out.rhs = static_cast<double>(R) * std::pow(D, -B) * table.moment_sum(L, B);
  return out;
}

void ArcFamily::validate() const {
  if (Q < 1) throw std::invalid_argument("ArcFamily: Q must be >= 1");
  if (!(T > 0.0 && T < 1.0)) throw std::invalid_argument("ArcFamily: T must lie in (0, 1)");
}

double arc_eval(const ArcFamily& family, double t, ArcMode mode) {
  family.validate();
  const double reach = 2.0 * family.T;
  double s = 0.0;
  for (std::int64_t q = q_low(family.Q); q <= q_high(family.Q); ++q) {
    const auto qd = static_cast<double>(q);
    auto a_lo = static_cast<std::int64_t>(std::ceil(qd * (t - reach)));
    auto a_hi = static_cast<std::int64_t>(std::floor(qd * (t + reach)));
    if (mode == ArcMode::Lambda) {
      a_lo = std::max<std::int64_t>(a_lo, 0);
      a_hi = std::min<std::int64_t>(a_hi, q);
    }
    for (std::int64_t a = a_lo; a <= a_hi; ++a) {
      if (mode == ArcMode::Lambda && std::gcd(a, q) != 1) continue;
      s += family.cutoff((t - static_cast<double>(a) / qd) / family.T);
    }
  }
  return s;
}

double theta_hat(const ArcFamily& family, std::int64_t n) {
  family.validate();
  std::int64_t weight = 0;
  for (std::int64_t q = q_low(family.Q); q <= q_high(family.Q); ++q) {
    if (n % q == 0) weight += q;
  }
  if (weight == 0) return 0.0;
  return family.T * family.cutoff.fourier(family.T * static_cast<double>(n)) * static_cast<double>(weight);
}

double theta_hat_quadrature(const ArcFamily& family, std::int64_t n, int M) {
  if (M < 1) throw std::invalid_argument("theta_hat_quadrature: M must be >= 1");
  std::vector<double> vals(static_cast<std::size_t>(M));
  parallel_for(vals.size(), [&](std::size_t i) {
    const double t = static_cast<double>(i) / M;
    const double turns = static_cast<double>((n % M) * static_cast<std::int64_t>(i) % M) / M;
    vals[i] = arc_eval(family, t, ArcMode::Theta) * std::cos(2.0 * std::numbers::pi * turns);
  });
  double s = 0.0;
  for (double v : vals) s += v;
  return s / M;  // Theta is even about 0, so the sine part vanishes
}

ThetaFourierReport theta_fourier_check(const ArcFamily& family, std::int64_t n_max, int quadrature_points) {
  family.validate();
  ThetaFourierReport rep;
  constexpr double tiny = 1e-300;
  for (std::int64_t n = -n_max; n <= n_max; ++n) {
    const double lhs = std::abs(theta_hat(family, n));
    const double bound = static_cast<double>(family.Q) * family.T *
                         static_cast<double>(restricted_divisor_count(n, family.Q)) *
                         std::abs(family.cutoff.fourier(family.T * static_cast<double>(n)));
    const double r = lhs / (bound + tiny);
    if (r > rep.max_ratio) {
      rep.max_ratio = r;
      rep.argmax_n = n;
    }
  }
  const double scale = std::abs(theta_hat(family, 0));
  for (std::int64_t n = -2; n <= 2; ++n) {
    const double err = std::abs(theta_hat_quadrature(family, n, quadrature_points) - theta_hat(family, n));
    rep.quadrature_error = std::max(rep.quadrature_error, err / scale);
  }
  return rep;
}

PartitionReport partition_check(std::int64_t Q_max, std::int64_t N, int t_samples, const BumpProfile& cutoff) {
  if (Q_max < 1 || N < 1 || t_samples < 1) throw std::invalid_argument("partition_check: bad arguments");
  std::vector<ArcFamily> families;
  const double n2 = static_cast<double>(N) * static_cast<double>(N);
  for (std::int64_t Q = 1; Q <= Q_max; Q *= 2) {
    const double T_max = static_cast<double>(Q_max) / (static_cast<double>(Q) * n2);
    for (double T = 1.0 / n2; T <= T_max && T < 1.0; T *= 2.0) families.push_back({Q, T, cutoff});
  }
  PartitionReport rep;
  rep.samples.resize(static_cast<std::size_t>(t_samples) + 1);
  parallel_for(rep.samples.size(), [&](std::size_t i) {
    const double t = static_cast<double>(i) / t_samples;
    double s = 0.0;
    for (const ArcFamily& f : families) s += arc_eval(f, t, ArcMode::Lambda);
    rep.samples[i] = {t, s, std::max(0.0, 1.0 - s)};
  });
  rep.min_sum = rep.samples.front().arc_sum;
  for (const PartitionSample& s : rep.samples) {
    rep.min_sum = std::min(rep.min_sum, s.arc_sum);
    rep.max_deficit = std::max(rep.max_deficit, s.deficit);
  }
  return rep;
}

double AtomicDecomposition::weighted_sum(double q) const {
  double s = 0.0;
  for (const Stratum& st : strata) {
    s += std::pow(st.lambda, q) * std::pow(2.0, st.k * (q / p - 1.0));
  }
  if (!strata.empty()) {
    // empty strata k > K all have eta_{k+1} = max|f|, so lambda_k^q 2^{k(q/p-1)} = max^q 2^{-k}
    s += std::pow(max_abs, q) * std::pow(2.0, -strata.back().k);
  }
  return s;
}

AtomicDecomposition atomic_decompose(const std::vector<double>& values, double p) {
  if (values.empty()) throw std::invalid_argument("atomic_decompose: empty input");
  if (!(p >= 1.0)) throw std::invalid_argument("atomic_decompose: p must be >= 1");
  const std::size_t M = values.size();
  std::vector<double> sorted(M);
  std::transform(values.begin(), values.end(), sorted.begin(), [](double v) { return std::abs(v); });
  std::sort(sorted.begin(), sorted.end(), std::greater<>());

  // eta_k = inf{eta : #{|f| > eta} < 2^{-k} M}
  auto eta = [&](int k) {
    const double c = std::ldexp(static_cast<double>(M), -k);
    const double m = std::ceil(c) - 1.0;
    return m < static_cast<double>(M) ? sorted[static_cast<std::size_t>(m)] : 0.0;
  };

  AtomicDecomposition out;
  out.p = p;
  out.sample_count = M;
  out.max_abs = sorted.front();
  for (int k = -1;; ++k) {
    Stratum st;
    st.k = k;
    st.eta_low = eta(k);
    st.eta_high = eta(k + 1);
    st.lambda = st.eta_high * std::pow(2.0, -k / p);
    for (std::size_t i = 0; i < M; ++i) {
      const double a = std::abs(values[i]);
      if (a > st.eta_low && a <= st.eta_high) st.members.push_back(i);
    }
    out.strata.push_back(std::move(st));
    if (out.strata.back().eta_high == out.max_abs) break;
  }
  return out;
}

double sample_lq_power(const std::vector<double>& values, double q) {
  double s = 0.0;
  for (double v : values) s += std::pow(std::abs(v), q);
  return s / static_cast<double>(values.size());
}

}  // namespace hypertorus
