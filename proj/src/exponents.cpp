#include "hypertorus/exponents.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "hypertorus/errors.hpp"
#include "hypertorus/fft.hpp"

namespace hypertorus {

double beta_exponent(int d, int v, double p) {
  if (!(p >= 2.0)) throw std::invalid_argument("beta_exponent: p must be >= 2");
  if (v < 1 || 2 * v > d) throw std::invalid_argument("beta_exponent: need 1 <= v <= d/2");
  const double dd = d;
  const double vv = v;
  return std::max(dd / 2.0 - (dd + 2.0) / p, vv / 2.0 - vv / p);
}

double thm_bound(int d, double p, double N) {
  if (d < 2 || d % 2 != 0) throw std::invalid_argument("thm_bound: d must be even");
  if (!(p >= 2.0)) throw std::invalid_argument("thm_bound: p must be >= 2");
  const double dd = d;
  return std::pow(N, dd / 2.0 - (dd + 2.0) / p) + std::pow(N, dd / 4.0 - dd / (2.0 * p));
}

std::string family_name(FamilyTag tag) {
  switch (tag) {
    case FamilyTag::Line:
      return "line";
    case FamilyTag::Constant:
      return "constant";
    case FamilyTag::RandomPhase:
      return "random_phase";
  }
  return "unknown";
}

FamilyTag parse_family(const std::string& name) {
  if (name == "line") return FamilyTag::Line;
  if (name == "constant") return FamilyTag::Constant;
  if (name == "random_phase" || name == "random") return FamilyTag::RandomPhase;
  throw std::invalid_argument("unknown family '" + name + "' (expected line, constant or random_phase)");
}

SpectralField make_family(FamilyTag tag, const TorusSpec& spec, std::int64_t N, std::uint64_t seed) {
  if (N < 1) throw std::invalid_argument("make_family: N must be >= 1");
  const int d = spec.dim();
  SpectralField u(spec);
  if (tag == FamilyTag::Line) {
    const int v = d / 2;
    std::vector<std::int64_t> a(static_cast<std::size_t>(v), -N);
    while (true) {
      FreqPoint xi = FreqPoint::zero(d);
      for (int i = 0; i < v; ++i) {
        xi[2 * i] = a[static_cast<std::size_t>(i)];
        xi[2 * i + 1] = -a[static_cast<std::size_t>(i)];
      }
      u.set(xi, 1.0);
      int i = v - 1;
      while (i >= 0 && a[static_cast<std::size_t>(i)] == N) a[static_cast<std::size_t>(i--)] = -N;
      if (i < 0) break;
      ++a[static_cast<std::size_t>(i)];
    }
    return u;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  FreqPoint xi = FreqPoint::zero(d);
  for (int j = 0; j < d; ++j) xi[j] = -N;
  while (true) {
    if (tag == FamilyTag::Constant) {
      u.set(xi, 1.0);
    } else {
      u.set(xi, std::polar(1.0, 2.0 * std::numbers::pi * unit(rng)));
    }
    int j = d - 1;
    while (j >= 0 && xi[j] == N) xi[j--] = -N;
    if (j < 0) break;
    ++xi[j];
  }
  return u;
}

SpectralField random_unit_field(const TorusSpec& spec, const FreqBox& box, std::uint64_t seed) {
  const int d = spec.dim();
  if (box.corner.dim() != d) throw std::invalid_argument("random_unit_field: box dimension mismatch");
  if (box.side < 0) throw std::invalid_argument("random_unit_field: negative side");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  SpectralField u(spec);
  FreqPoint xi = box.corner;
  while (true) {
    const double re = gauss(rng);
    const double im = gauss(rng);
    u.set(xi, {re, im});
    int j = d - 1;
    while (j >= 0 && xi[j] == box.corner[j] + box.side) {
      xi[j] = box.corner[j];
      --j;
    }
    if (j < 0) break;
    ++xi[j];
  }
  return Complex(1.0 / u.l2_norm()) * u;
}

SpectralField unit_line_field(const TorusSpec& spec, std::int64_t N) {
  const SpectralField u = make_family(FamilyTag::Line, spec, N);
  return Complex(1.0 / u.l2_norm()) * u;
}

bool family_is_stationary(FamilyTag tag, const TorusSpec& spec) {
  if (tag != FamilyTag::Line) return false;
  for (int i = 0; i + 1 < spec.dim(); i += 2) {
    if (spec.thetas()[static_cast<std::size_t>(i)] != spec.thetas()[static_cast<std::size_t>(i) + 1]) return false;
  }
  return true;
}

SpaceTimeGrid default_grid(std::int64_t N, double p, int nt_per_N2) {
  const auto nx = smooth_fft_size(static_cast<int>(std::ceil(p) * static_cast<double>(N)) + 1);
  return {static_cast<int>(nt_per_N2 * N * N), nx};
}

double strichartz_trial(FamilyTag tag, const TorusSpec& spec, std::int64_t N, double p, const SpaceTimeGrid& grid,
                        std::uint64_t seed) {
  if (!family_is_stationary(tag, spec) && static_cast<std::int64_t>(grid.nt) < 4 * N * N) {
    throw ResolutionError("strichartz_trial: nt=" + std::to_string(grid.nt) + " cannot resolve the 1/N^2 time scale (need nt >= " +
                          std::to_string(4 * N * N) + " for N=" + std::to_string(N) + ")");
  }
  const SpectralField phi = make_family(tag, spec, N, seed);
  return spacetime_lp_norm(phi, p, grid) / phi.l2_norm();
}

LinearFit fit_linear(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_linear: need >= 2 matching points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_linear: abscissae are all equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.slope * x[i] + f.intercept);
    ss_res += r * r;
    f.max_residual = std::max(f.max_residual, std::abs(r));
  }
  f.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return f;
}

GrowthReport fit_growth(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 3) throw std::invalid_argument("fit_growth: need at least 3 points");
  std::vector<double> lx, ly;
  for (const auto& [N, v] : pairs) {
    if (!(N > 0.0) || !(v > 0.0)) throw std::invalid_argument("fit_growth: values must be positive");
    lx.push_back(std::log(N));
    ly.push_back(std::log(v));
  }
  const LinearFit f = fit_linear(lx, ly);
  if (!std::isfinite(f.slope)) throw std::invalid_argument("fit_growth: slope is not finite");
  return {pairs, f.slope, f.intercept, f.max_residual};
}

}  // namespace hypertorus
