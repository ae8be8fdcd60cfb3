#pragma once

// Frequency-space fields on T^d = (R/Z)^d and the exact free propagator.
//
// Phase convention (used everywhere in the library):
//
//     h(xi)          = sum_j (-1)^(j-1) theta_j xi_j^2        (j counted from 1)
//     e^{it Box} u   : amps(xi) -> e^{2 pi i t h(xi)} amps(xi)
//
// so a single mode e^{2 pi i xi.x} evolves as e^{2 pi i (xi.x + t h(xi))}.

#include <array>
#include <complex>
#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <span>
#include <variant>
#include <vector>

namespace hypertorus {

using Complex = std::complex<double>;

inline constexpr int kMaxDim = 8;

// Integer frequency vector. Coordinates beyond dim() are kept at zero, so the
// defaulted ordering is lexicographic within a dimension.
class FreqPoint {
 public:
  FreqPoint() = default;
  FreqPoint(std::initializer_list<std::int64_t> coords);
  explicit FreqPoint(std::span<const std::int64_t> coords);
  static FreqPoint zero(int d);

  int dim() const { return dim_; }
  std::int64_t operator[](int j) const { return coords_[static_cast<std::size_t>(j)]; }
  std::int64_t& operator[](int j) { return coords_[static_cast<std::size_t>(j)]; }

  std::int64_t max_abs() const;
  double norm() const;  // Euclidean |xi|

  friend FreqPoint operator+(const FreqPoint& a, const FreqPoint& b);
  friend FreqPoint operator-(const FreqPoint& a, const FreqPoint& b);
  friend FreqPoint operator-(const FreqPoint& a);
  friend auto operator<=>(const FreqPoint&, const FreqPoint&) = default;
  friend bool operator==(const FreqPoint&, const FreqPoint&) = default;

 private:
  int dim_ = 0;
  std::array<std::int64_t, kMaxDim> coords_{};
};

// Dimension and anisotropy weights of the torus. The sign of the j-th
// second derivative in Box is (-1)^(j-1), so v = d/2.
class TorusSpec {
 public:
  TorusSpec(int d, std::vector<double> thetas);
  static TorusSpec square(int d);

  int dim() const { return d_; }
  const std::vector<double>& thetas() const { return thetas_; }

  // Signed quadratic symbol h(xi). Throws on dimension mismatch.
  double symbol(const FreqPoint& xi) const;
  // Integer-valued symbol h for integer xi (used when integral()).
  std::int64_t integer_symbol(const FreqPoint& xi) const;
  // grad h(r) = ((-1)^(j-1) 2 theta_j r_j)_j
  std::vector<double> symbol_gradient(const FreqPoint& r) const;
  // Symmetric bilinear form B(a, b) with h(xi) = B(xi, xi).
  double bilinear(const FreqPoint& a, const FreqPoint& b) const;

  // True when every theta_j is an integer: h is then integer valued and the
  // free flow is 1-periodic in time.
  bool integral() const { return integral_; }

  friend bool operator==(const TorusSpec&, const TorusSpec&) = default;

 private:
  int d_;
  std::vector<double> thetas_;
  bool integral_;
};

double symbol_h(const TorusSpec& spec, const FreqPoint& xi);

// Axis-parallel box {corner_j <= xi_j <= corner_j + side}.
struct FreqBox {
  FreqPoint corner;
  std::int64_t side = 0;

  static FreqBox centered(int d, std::int64_t half_width);  // [-N, N]^d
  bool contains(const FreqPoint& xi) const;
};

// Littlewood-Paley shell {N <= |xi| < 2N}.
struct DyadicShell {
  std::int64_t N = 1;
  bool contains(const FreqPoint& xi) const;
};

// Low-pass ball {|xi| < 2N}, i.e. P_{<=N} including the zero mode.
struct LowPass {
  std::int64_t N = 1;
  bool contains(const FreqPoint& xi) const;
};

// Line {xi in Z^2 : xi . (1, sign) = offset}. Only meaningful for d = 2.
struct LineSpec {
  int sign = 1;
  std::int64_t offset = 0;
  bool contains(const FreqPoint& xi) const;
};

using FreqPredicate = std::function<bool(const FreqPoint&)>;
using Region = std::variant<FreqBox, DyadicShell, LowPass, LineSpec, FreqPredicate>;

bool region_contains(const Region& region, const FreqPoint& xi);

// Finitely supported map xi -> amplitude. Value type; every operation below
// returns a new field.
class SpectralField {
 public:
  using AmplitudeMap = std::map<FreqPoint, Complex>;

  explicit SpectralField(TorusSpec spec);
  SpectralField(TorusSpec spec, AmplitudeMap amps);

  const TorusSpec& spec() const { return spec_; }
  const AmplitudeMap& amplitudes() const { return amps_; }
  std::size_t size() const { return amps_.size(); }
  bool empty() const { return amps_.empty(); }

  Complex at(const FreqPoint& xi) const;
  void set(const FreqPoint& xi, Complex value);
  void add(const FreqPoint& xi, Complex value);

  double l2_norm() const;
  double l1_norm() const;
  std::int64_t max_abs_coord() const;

 private:
  void check_dim(const FreqPoint& xi) const;

  TorusSpec spec_;
  AmplitudeMap amps_;
};

SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);
SpectralField operator*(Complex c, const SpectralField& u);

// Uniform quadrature grid: nt time nodes on [0,1], nx points per space axis.
struct SpaceTimeGrid {
  int nt = 1;
  int nx = 1;
  void validate() const;
};

// Throws AliasingError unless nx >= 2 max|xi_j| + 1 over the support.
void require_alias_free(const SpectralField& u, int nx);

SpectralField propagate(const SpectralField& u, double t);
SpectralField project(const SpectralField& u, const Region& region);

// Direct evaluation sum_xi amps(xi) e^{2 pi i (xi.x + t h(xi))}.
Complex evaluate(const SpectralField& u, double t, std::span<const double> x);

// Values of e^{it Box}u on the uniform grid x_k = k / nx, row-major with the
// first axis slowest.
std::vector<Complex> synthesize(const SpectralField& u, const SpaceTimeGrid& grid, double t);

// (int_0^1 int_{T^d} |e^{it Box} u0|^p dx dt)^{1/p} by tensor quadrature.
// Integral tori use the periodic rectangle rule in t; otherwise composite
// trapezoid with nt intervals. Fields whose support lies on one level set
// of h have time-independent modulus and are evaluated on a single slice.
double spacetime_lp_norm(const SpectralField& u0, double p, const SpaceTimeGrid& grid);

double sobolev_norm(const SpectralField& u, double s);

struct GalileanFrame {
  SpectralField recentered;   // amplitudes moved from xi to xi - r0
  std::vector<double> drift;  // grad h(r0)
  double phase_rate;          // h(r0)
};

// e^{itBox} u (t, x) = e^{2 pi i (x.r0 + t h(r0))} (e^{itBox} recentered)(t, x + t drift)
GalileanFrame galilean_shift(const SpectralField& u, const FreqPoint& r0);

}  // namespace hypertorus
