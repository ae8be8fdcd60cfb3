#include "hypertorus/bump.hpp"

#include <cmath>
#include <numbers>

namespace hypertorus {
namespace {

double glue(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

// Trapezoid on [0, 2] for 2 int phi(s) cos(2 pi s xi) ds with step halving.
// The integrand is smooth and flat at both ends, so the rule converges
// spectrally; Richardson extrapolation covers the remaining cases.
double cosine_transform(const BumpProfile& phi, double xi) {
  auto f = [&](double s) { return phi(s) * std::cos(2.0 * std::numbers::pi * s * xi); };
  const double a = 0.0;
  const double b = 2.0;
  int n = 64;
  double h = (b - a) / n;
  double sum = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) sum += f(a + i * h);
  double prev = sum * h;
  for (int level = 0; level < 14; ++level) {
    double mid = 0.0;
    for (int i = 0; i < n; ++i) mid += f(a + (i + 0.5) * h);
    sum += mid;
    n *= 2;
    h *= 0.5;
    const double cur = sum * h;
    const double extrapolated = cur + (cur - prev) / 3.0;
    if (std::abs(cur - prev) <= 1e-13 * (1.0 + std::abs(cur))) return 2.0 * cur;
    if (level >= 6 && std::abs(extrapolated - cur) <= 1e-12 * (1.0 + std::abs(cur))) return 2.0 * extrapolated;
    prev = cur;
  }
  return 2.0 * prev;
}

}  // namespace

double BumpProfile::operator()(double s) const {
  const double a = std::abs(s);
  if (kind_ == Kind::Flat) return a <= 2.0 ? 1.0 : 0.0;
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  const double up = glue(2.0 - a);
  return up / (up + glue(a - 1.0));
}

double BumpProfile::fourier(double xi) const {
  if (kind_ == Kind::Flat) {
    if (xi == 0.0) return 4.0;
    return std::sin(4.0 * std::numbers::pi * xi) / (std::numbers::pi * xi);
  }
  return cosine_transform(*this, xi);
}

}  // namespace hypertorus
