#pragma once

#include <cstdint>
#include <vector>

#include "hypertorus/bump.hpp"

namespace hypertorus {

// q ~ Q means Q/2 <= q <= 2Q.
std::int64_t divisor_count(std::int64_t n);
// Number of divisors q ~ Q of n. For n = 0 every q ~ Q divides.
std::int64_t restricted_divisor_count(std::int64_t n, std::int64_t Q);

// Sieved divisor counts d(1..n_max).
class DivisorTable {
 public:
  explicit DivisorTable(std::int64_t n_max);
  std::int64_t n_max() const { return static_cast<std::int64_t>(d_.size()) - 1; }
  std::int64_t operator()(std::int64_t n) const { return d_.at(static_cast<std::size_t>(n)); }

  // sum_{l=1}^{L} d(l)^B / l
  double moment_sum(std::int64_t L, int B) const;

 private:
  std::vector<std::int64_t> d_;
};

// d(n; Q) for n = 1..R (index n - 1).
std::vector<std::int64_t> restricted_counts(std::int64_t R, std::int64_t Q);

struct DistributionCheck {
  std::int64_t lhs = 0;  // #{1 <= n <= R : d(n; Q) > D}
  double rhs = 0.0;      // R D^{-B} sum_{l <= Q^B} d(l)^B / l
  bool holds() const { return static_cast<double>(lhs) <= rhs; }
};

DistributionCheck distribution_check(std::int64_t R, std::int64_t Q, double D, int B);

// Major-arc cutoff family at scale (Q, T).
struct ArcFamily {
  std::int64_t Q = 1;
  double T = 0.125;
  BumpProfile cutoff{};

  void validate() const;
  // T < 1 / (2 Q^2): the regime where the arcs are treated as disjoint.
  bool separated() const { return T < 1.0 / (2.0 * static_cast<double>(Q * Q)); }
};

enum class ArcMode { Lambda, Theta };

// Lambda(t) = sum_{q ~ Q} sum_{0 <= a <= q, gcd(a,q)=1} phi((t - a/q)/T)
// Theta(t)  = sum_{q ~ Q} sum_{a in Z} phi((t - a/q)/T), the 1-periodic
//             version of sum_{a=0}^{q-1}.
double arc_eval(const ArcFamily& family, double t, ArcMode mode);

// Fourier coefficient of Theta on R/Z by T phi_hat(T n) sum_{q ~ Q, q | n} q.
double theta_hat(const ArcFamily& family, std::int64_t n);
// The same coefficient by an M-point rectangle rule on [0, 1).
double theta_hat_quadrature(const ArcFamily& family, std::int64_t n, int M);

struct ThetaFourierReport {
  double max_ratio = 0.0;  // max |Theta_hat(n)| / (Q T d(n;Q) |phi_hat(T n)| + tiny)
  std::int64_t argmax_n = 0;
  double quadrature_error = 0.0;  // max over n in {0, +-1, +-2}, relative to Theta_hat(0)
};

ThetaFourierReport theta_fourier_check(const ArcFamily& family, std::int64_t n_max, int quadrature_points = 1 << 16);

struct PartitionSample {
  double t = 0.0;
  double arc_sum = 0.0;
  double deficit = 0.0;  // max(0, 1 - arc_sum)
};

struct PartitionReport {
  std::vector<PartitionSample> samples;
  double min_sum = 0.0;
  double max_deficit = 0.0;
};

// Sum of Lambda_{Q,T}(t) over dyadic Q <= Q_max and dyadic T in
// [1/N^2, Q_max/(Q N^2)], at t = i / t_samples for i = 0..t_samples.
PartitionReport partition_check(std::int64_t Q_max, std::int64_t N, int t_samples,
                                const BumpProfile& cutoff = BumpProfile());

// Layer-cake splitting of sampled f on [0, 1] with the counting measure.
struct Stratum {
  int k = 0;
  std::vector<std::size_t> members;  // sample indices in E_k
  double eta_low = 0.0;              // eta_k
  double eta_high = 0.0;             // eta_{k+1}
  double lambda = 0.0;               // eta_{k+1} 2^{-k/p}
};

struct AtomicDecomposition {
  double p = 2.0;
  std::size_t sample_count = 0;
  double max_abs = 0.0;
  std::vector<Stratum> strata;  // k = -1, 0, 1, ... up to the first eta_{k+1} = max|f|

  double measure(const Stratum& s) const {
    return static_cast<double>(s.members.size()) / static_cast<double>(sample_count);
  }
  // sum over all k >= -1 of lambda_k^q 2^{k(q/p - 1)}, including the
  // geometric tail of empty strata beyond the stored ones.
  double weighted_sum(double q) const;
};

AtomicDecomposition atomic_decompose(const std::vector<double>& values, double p);

// Mean of |f|^q over the samples.
double sample_lq_power(const std::vector<double>& values, double q);

}  // namespace hypertorus
