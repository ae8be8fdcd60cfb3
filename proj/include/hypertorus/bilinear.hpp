#pragma once

#include <cstdint>
#include <vector>

#include "hypertorus/torus.hpp"

namespace hypertorus {

struct BilinearKind {
  enum class Tag { Product, ConjProduct, DS, SqrtDS };
  Tag tag = Tag::ConjProduct;
  double alpha = 1.0;

  static BilinearKind product() { return {Tag::Product, 1.0}; }
  static BilinearKind conj_product() { return {Tag::ConjProduct, 1.0}; }
  static BilinearKind ds(double alpha) { return {Tag::DS, alpha}; }
  static BilinearKind sqrt_ds(double alpha) { return {Tag::SqrtDS, alpha}; }

  // Every kind except Product pairs u1 with conj(u2).
  bool conjugates() const { return tag != Tag::Product; }
  void validate() const;
};

// m(xi, eta) = (-xi^2 + eta^2) / (alpha xi^2 + eta^2), m(0, 0) = 1.
double mds_symbol(double alpha, const FreqPoint& xi);

// Multiplier of the kind at output frequency xi (1, m_DS or sqrt|m_DS|).
double kind_symbol(const BilinearKind& kind, const FreqPoint& xi);

// Output frequency of the pair (xi1, xi2): xi1 + xi2 or xi1 - xi2.
FreqPoint pair_output(const BilinearKind& kind, const FreqPoint& xi1, const FreqPoint& xi2);

// True when xi1 - xi2 lies on one of the null lines xi_1 = +-xi_2, i.e. both
// inputs sit on a common line l_+^s or l_-^s.
bool same_null_line(const FreqPoint& xi1, const FreqPoint& xi2);

// Exact sparse convolution: Product gives u1 u2, the other kinds apply their
// multiplier to u1 conj(u2).
SpectralField apply_bilinear(const BilinearKind& kind, const SpectralField& u1, const SpectralField& u2);

// Off-diagonal part: every input pair sharing a null line is dropped, so
// apply = offdiag + line_terms - coincident_terms.
SpectralField offdiag(const BilinearKind& kind, const SpectralField& u1, const SpectralField& u2);
// sum_s J(P_{l+^s} u1, P_{l+^s} u2) + J(P_{l-^s} u1, P_{l-^s} u2)
SpectralField line_terms(const BilinearKind& kind, const SpectralField& u1, const SpectralField& u2);
// Pairs with xi1 = xi2, which lie on both families of lines.
SpectralField coincident_terms(const BilinearKind& kind, const SpectralField& u1, const SpectralField& u2);

struct ResonanceQuery {
  BilinearKind kind;
  FreqBox box1;
  FreqBox box2;
  std::int64_t N = 1;
};

struct ResonanceNorm {
  double norm = 0.0;      // sqrt(sum_{xi,tau} |sum_pairs coeff|^2)
  double abs_norm = 0.0;  // same with |coeff| summed inside
};

// Exact L^2_{t,x}([0,1] x T^2) norm of J(e^{itBox} P_{C1} phi1, e^{itBox} P_{C2} phi2)
// (or its off-diagonal part) on the square torus. Throws ExactnessUnavailable
// on other tori.
ResonanceNorm resonance_sum_detailed(const ResonanceQuery& q, const SpectralField& phi1, const SpectralField& phi2,
                                     bool offdiagonal);
double resonance_sum_l2(const ResonanceQuery& q, const SpectralField& phi1, const SpectralField& phi2,
                        bool offdiagonal);

// Time quadrature of ||J(e^{itBox} phi1, e^{itBox} phi2)||_{L^2_x}, exact in x.
// Periodic rectangle rule on integral tori, trapezoid otherwise.
double bilinear_l2_quadrature(const BilinearKind& kind, const SpectralField& phi1, const SpectralField& phi2,
                              bool offdiagonal, int nt);

struct HyperbolaPoints {
  std::vector<std::pair<std::int64_t, std::int64_t>> points;  // sorted
  bool degenerate = false;                                    // z = 0: the lines x = +-y
};

// Integer (x, y) with x^2 - y^2 = z and |x|, |y| <= N.
HyperbolaPoints hyperbola_points(std::int64_t z, std::int64_t N);

struct FiberReport {
  std::int64_t N = 0;
  std::int64_t max_size = 0;        // largest nondegenerate fiber in [-N, N]^2
  FreqPoint xi_tilde;               // lexicographically smallest argmax
  std::int64_t tau_tilde = 0;
  std::int64_t degenerate_size = 0;  // line fiber at xi_tilde = 0, tau_tilde = 0
};

// Fibers A = {xi in [-N,N]^2 : h(2 xi - xi~) = 2 tau~ - h(xi~)} over
// xi~ in [-2N, 2N]^2 and integer tau~, square torus.
FiberReport resonance_fiber_max(std::int64_t N);

// Fraction of the space-time grid (t_k = k/nt) where |e^{itBox} u0| > lambda.
double level_set_measure(const SpectralField& u0, double lambda, const SpaceTimeGrid& grid);
// Same for |e^{itBox} u1 . e^{itBox} u2|.
double level_set_measure(const SpectralField& u1, const SpectralField& u2, double lambda, const SpaceTimeGrid& grid);

struct TrilinearReport {
  double norm = 0.0;   // ||u1 u2 u3||_{L^2_{t,x}} of the free evolutions
  double bound = 0.0;  // N2^{1/2} N3^{1/2} prod ||u_i||_{L^2}
  double ratio = 0.0;
};

struct ShellTriple {
  std::int64_t N1 = 1;
  std::int64_t N2 = 1;
  std::int64_t N3 = 1;
};

// Space-time quadrature; the grid must resolve the triple product.
TrilinearReport trilinear_l2(const SpectralField& u1, const SpectralField& u2, const SpectralField& u3,
                             const ShellTriple& shells, const SpaceTimeGrid& grid);
// Exact resonance sum on the square torus T^2.
TrilinearReport trilinear_l2_exact(const SpectralField& u1, const SpectralField& u2, const SpectralField& u3,
                                   const ShellTriple& shells);

}  // namespace hypertorus
