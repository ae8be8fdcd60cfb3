#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hypertorus/torus.hpp"

namespace hypertorus {

// max{d/2 - (d+2)/p, v/2 - v/p}; p may be +infinity.
double beta_exponent(int d, int v, double p);

// N^{d/2 - (d+2)/p} + N^{d/4 - d/(2p)}
double thm_bound(int d, double p, double N);

enum class FamilyTag { Line, Constant, RandomPhase };

std::string family_name(FamilyTag tag);
FamilyTag parse_family(const std::string& name);

// Data on the box [-N, N]^d of spec:
//   Line:        1 on {(a_1, -a_1, a_2, -a_2, ...)} (the null line l_+^0 when d = 2)
//   Constant:    1 everywhere
//   RandomPhase: e^{2 pi i U} with U uniform, seeded
SpectralField make_family(FamilyTag tag, const TorusSpec& spec, std::int64_t N, std::uint64_t seed = 0);

// Complex Gaussian coefficients on a box, normalized to unit l^2 norm.
SpectralField random_unit_field(const TorusSpec& spec, const FreqBox& box, std::uint64_t seed);
// Line family on [-N, N]^d normalized to unit l^2 norm.
SpectralField unit_line_field(const TorusSpec& spec, std::int64_t N);

// True when the family's support lies on one level set of h.
bool family_is_stationary(FamilyTag tag, const TorusSpec& spec);

// nx = smooth size >= ceil(p) N + 1, nt = nt_per_N2 * N^2.
SpaceTimeGrid default_grid(std::int64_t N, double p, int nt_per_N2 = 4);

// ||e^{itBox} phi||_{L^p_{t,x}} / ||phi||_{L^2}. Non-stationary families need
// nt >= 4 N^2; coarser grids raise ResolutionError.
double strichartz_trial(FamilyTag tag, const TorusSpec& spec, std::int64_t N, double p, const SpaceTimeGrid& grid,
                        std::uint64_t seed = 0);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 1.0;
  double max_residual = 0.0;
};

// Least squares y ~ slope x + intercept.
LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y);

struct GrowthReport {
  std::vector<std::pair<double, double>> pairs;  // (N, value)
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // max |log v - (slope log N + intercept)|
};

// Fit in log-log coordinates; needs >= 3 pairs with positive entries.
GrowthReport fit_growth(const std::vector<std::pair<double, double>>& pairs);

}  // namespace hypertorus
