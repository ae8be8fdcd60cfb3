#include "hypertorus/torus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hypertorus/errors.hpp"
#include "hypertorus/fft.hpp"
#include "hypertorus/parallel.hpp"

namespace hypertorus {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int axis_sign(int j) { return (j % 2 == 0) ? 1 : -1; }  // j is 0-based

Complex cis_turns(double turns) {
  const double r = turns - std::nearbyint(turns);
  return std::polar(1.0, kTwoPi * r);
}

void check_same_spec(const SpectralField& a, const SpectralField& b) {
  if (!(a.spec() == b.spec())) throw std::invalid_argument("fields live on different tori");
}

double pow_abs2(double abs2, double p) {
  // |u|^p from |u|^2; integer even p stays on exact multiplications
  if (p == 2.0) return abs2;
  if (p == std::floor(p) && static_cast<long>(p) % 2 == 0 && p <= 64.0) {
    double r = 1.0;
    for (long i = 0; i < static_cast<long>(p) / 2; ++i) r *= abs2;
    return r;
  }
  return std::pow(abs2, 0.5 * p);
}

}  // namespace

// ---------------------------------------------------------------------------
// FreqPoint

FreqPoint::FreqPoint(std::initializer_list<std::int64_t> coords)
    : FreqPoint(std::span<const std::int64_t>(coords.begin(), coords.size())) {}

FreqPoint::FreqPoint(std::span<const std::int64_t> coords) : dim_(static_cast<int>(coords.size())) {
  if (dim_ > kMaxDim) throw std::invalid_argument("FreqPoint: dimension exceeds kMaxDim");
  std::copy(coords.begin(), coords.end(), coords_.begin());
}

FreqPoint FreqPoint::zero(int d) {
  if (d < 0 || d > kMaxDim) throw std::invalid_argument("FreqPoint: bad dimension");
  FreqPoint p;
  p.dim_ = d;
  return p;
}

std::int64_t FreqPoint::max_abs() const {
  std::int64_t m = 0;
  for (int j = 0; j < dim_; ++j) m = std::max(m, std::abs(coords_[static_cast<std::size_t>(j)]));
  return m;
}

double FreqPoint::norm() const {
  double s = 0.0;
  for (int j = 0; j < dim_; ++j) {
    const auto c = static_cast<double>(coords_[static_cast<std::size_t>(j)]);
    s += c * c;
  }
  return std::sqrt(s);
}

FreqPoint operator+(const FreqPoint& a, const FreqPoint& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("FreqPoint: dimension mismatch");
  FreqPoint r = a;
  for (int j = 0; j < a.dim_; ++j) r[j] += b[j];
  return r;
}

FreqPoint operator-(const FreqPoint& a, const FreqPoint& b) {
  if (a.dim_ != b.dim_) throw std::invalid_argument("FreqPoint: dimension mismatch");
  FreqPoint r = a;
  for (int j = 0; j < a.dim_; ++j) r[j] -= b[j];
  return r;
}

FreqPoint operator-(const FreqPoint& a) {
  FreqPoint r = a;
  for (int j = 0; j < a.dim_; ++j) r[j] = -r[j];
  return r;
}

// ---------------------------------------------------------------------------
// TorusSpec

TorusSpec::TorusSpec(int d, std::vector<double> thetas) : d_(d), thetas_(std::move(thetas)) {
  if (d < 2 || d % 2 != 0) throw std::invalid_argument("TorusSpec: d must be even and >= 2");
  if (d > kMaxDim) throw std::invalid_argument("TorusSpec: d exceeds kMaxDim");
  if (static_cast<int>(thetas_.size()) != d) {
    throw std::invalid_argument("TorusSpec: expected " + std::to_string(d) + " weights");
  }
  integral_ = true;
  for (double th : thetas_) {
    if (!(th > 0.0) || !std::isfinite(th)) throw std::invalid_argument("TorusSpec: weights must be positive");
    if (th != std::floor(th)) integral_ = false;
  }
}

TorusSpec TorusSpec::square(int d) { return TorusSpec(d, std::vector<double>(static_cast<std::size_t>(d), 1.0)); }

double TorusSpec::symbol(const FreqPoint& xi) const {
  if (xi.dim() != d_) throw std::invalid_argument("symbol: dimension mismatch");
  double h = 0.0;
  for (int j = 0; j < d_; ++j) {
    const auto x = static_cast<double>(xi[j]);
    h += axis_sign(j) * thetas_[static_cast<std::size_t>(j)] * x * x;
  }
  return h;
}

std::int64_t TorusSpec::integer_symbol(const FreqPoint& xi) const {
  if (!integral_) throw ExactnessUnavailable("integer_symbol: weights are not integers");
  if (xi.dim() != d_) throw std::invalid_argument("symbol: dimension mismatch");
  std::int64_t h = 0;
  for (int j = 0; j < d_; ++j) {
    h += axis_sign(j) * static_cast<std::int64_t>(thetas_[static_cast<std::size_t>(j)]) * xi[j] * xi[j];
  }
  return h;
}

std::vector<double> TorusSpec::symbol_gradient(const FreqPoint& r) const {
  if (r.dim() != d_) throw std::invalid_argument("symbol_gradient: dimension mismatch");
  std::vector<double> g(static_cast<std::size_t>(d_));
  for (int j = 0; j < d_; ++j) {
    g[static_cast<std::size_t>(j)] =
        axis_sign(j) * 2.0 * thetas_[static_cast<std::size_t>(j)] * static_cast<double>(r[j]);
  }
  return g;
}

double TorusSpec::bilinear(const FreqPoint& a, const FreqPoint& b) const {
  if (a.dim() != d_ || b.dim() != d_) throw std::invalid_argument("bilinear: dimension mismatch");
  double s = 0.0;
  for (int j = 0; j < d_; ++j) {
    s += axis_sign(j) * thetas_[static_cast<std::size_t>(j)] * static_cast<double>(a[j]) *
         static_cast<double>(b[j]);
  }
  return s;
}

double symbol_h(const TorusSpec& spec, const FreqPoint& xi) { return spec.symbol(xi); }

// ---------------------------------------------------------------------------
// Regions

FreqBox FreqBox::centered(int d, std::int64_t half_width) {
  FreqBox box{FreqPoint::zero(d), 2 * half_width};
  for (int j = 0; j < d; ++j) box.corner[j] = -half_width;
  return box;
}

bool FreqBox::contains(const FreqPoint& xi) const {
  if (xi.dim() != corner.dim()) return false;
  for (int j = 0; j < xi.dim(); ++j) {
    if (xi[j] < corner[j] || xi[j] > corner[j] + side) return false;
  }
  return true;
}

bool DyadicShell::contains(const FreqPoint& xi) const {
  const double r = xi.norm();
  return r >= static_cast<double>(N) && r < 2.0 * static_cast<double>(N);
}

bool LowPass::contains(const FreqPoint& xi) const { return xi.norm() < 2.0 * static_cast<double>(N); }

bool LineSpec::contains(const FreqPoint& xi) const {
  if (xi.dim() != 2) throw std::invalid_argument("LineSpec: lines are defined on Z^2 only");
  return xi[0] + sign * xi[1] == offset;
}

bool region_contains(const Region& region, const FreqPoint& xi) {
  return std::visit([&](const auto& r) -> bool {
    using R = std::decay_t<decltype(r)>;
    if constexpr (std::is_same_v<R, FreqPredicate>) {
      return r(xi);
    } else {
      return r.contains(xi);
    }
  }, region);
}

// ---------------------------------------------------------------------------
// SpectralField

SpectralField::SpectralField(TorusSpec spec) : spec_(std::move(spec)) {}

SpectralField::SpectralField(TorusSpec spec, AmplitudeMap amps) : spec_(std::move(spec)), amps_(std::move(amps)) {
  for (const auto& [xi, a] : amps_) check_dim(xi);
}

void SpectralField::check_dim(const FreqPoint& xi) const {
  if (xi.dim() != spec_.dim()) throw std::invalid_argument("SpectralField: dimension mismatch");
}

Complex SpectralField::at(const FreqPoint& xi) const {
  const auto it = amps_.find(xi);
  return it == amps_.end() ? Complex{} : it->second;
}

void SpectralField::set(const FreqPoint& xi, Complex value) {
  check_dim(xi);
  amps_[xi] = value;
}

void SpectralField::add(const FreqPoint& xi, Complex value) {
  check_dim(xi);
  amps_[xi] += value;
}

double SpectralField::l2_norm() const {
  double s = 0.0;
  for (const auto& [xi, a] : amps_) s += std::norm(a);
  return std::sqrt(s);
}

double SpectralField::l1_norm() const {
  double s = 0.0;
  for (const auto& [xi, a] : amps_) s += std::abs(a);
  return s;
}

std::int64_t SpectralField::max_abs_coord() const {
  std::int64_t m = 0;
  for (const auto& [xi, a] : amps_) m = std::max(m, xi.max_abs());
  return m;
}

SpectralField operator+(const SpectralField& a, const SpectralField& b) {
  check_same_spec(a, b);
  SpectralField r = a;
  for (const auto& [xi, v] : b.amplitudes()) r.add(xi, v);
  return r;
}

SpectralField operator-(const SpectralField& a, const SpectralField& b) {
  check_same_spec(a, b);
  SpectralField r = a;
  for (const auto& [xi, v] : b.amplitudes()) r.add(xi, -v);
  return r;
}

SpectralField operator*(Complex c, const SpectralField& u) {
  SpectralField r(u.spec());
  for (const auto& [xi, v] : u.amplitudes()) r.set(xi, c * v);
  return r;
}

// ---------------------------------------------------------------------------
// Grids and operations

void SpaceTimeGrid::validate() const {
  if (nt < 1) throw std::invalid_argument("SpaceTimeGrid: nt must be >= 1");
  if (nx < 1) throw std::invalid_argument("SpaceTimeGrid: nx must be >= 1");
}

void require_alias_free(const SpectralField& u, int nx) {
  const std::int64_t m = u.max_abs_coord();
  if (static_cast<std::int64_t>(nx) < 2 * m + 1) {
    throw AliasingError("grid with nx=" + std::to_string(nx) + " aliases frequencies up to " + std::to_string(m) +
                        " (need nx >= " + std::to_string(2 * m + 1) + ")");
  }
}

SpectralField propagate(const SpectralField& u, double t) {
  SpectralField out(u.spec());
  for (const auto& [xi, a] : u.amplitudes()) out.set(xi, a * cis_turns(t * u.spec().symbol(xi)));
  return out;
}

SpectralField project(const SpectralField& u, const Region& region) {
  SpectralField out(u.spec());
  for (const auto& [xi, a] : u.amplitudes()) {
    if (region_contains(region, xi)) out.set(xi, a);
  }
  return out;
}

Complex evaluate(const SpectralField& u, double t, std::span<const double> x) {
  const int d = u.spec().dim();
  if (static_cast<int>(x.size()) != d) throw std::invalid_argument("evaluate: point dimension mismatch");
  Complex s{};
  for (const auto& [xi, a] : u.amplitudes()) {
    double turns = t * u.spec().symbol(xi);
    for (int j = 0; j < d; ++j) turns += static_cast<double>(xi[j]) * x[static_cast<std::size_t>(j)];
    s += a * cis_turns(turns);
  }
  return s;
}

std::vector<Complex> synthesize(const SpectralField& u, const SpaceTimeGrid& grid, double t) {
  grid.validate();
  require_alias_free(u, grid.nx);
  GridTransform tr(u.spec().dim(), grid.nx);
  auto data = tr.data();
  for (const auto& [xi, a] : u.amplitudes()) data[tr.index_of(xi)] += a * cis_turns(t * u.spec().symbol(xi));
  tr.to_space();
  return {data.begin(), data.end()};
}

double spacetime_lp_norm(const SpectralField& u0, double p, const SpaceTimeGrid& grid) {
  if (!(p >= 1.0)) throw std::invalid_argument("spacetime_lp_norm: p must be >= 1");
  grid.validate();
  require_alias_free(u0, grid.nx);
  if (u0.empty()) return 0.0;

  const TorusSpec& spec = u0.spec();
  const int d = spec.dim();

  struct Mode {
    std::size_t index;
    Complex amp;
    double h;
    std::int64_t h_int;
  };
  std::vector<Mode> modes;
  bool stationary = true;
  const double h0 = spec.symbol(u0.amplitudes().begin()->first);
  {
    for (const auto& [xi, a] : u0.amplitudes()) {
      std::size_t idx = 0;
      for (int j = 0; j < d; ++j) {
        std::int64_t k = xi[j] % grid.nx;
        if (k < 0) k += grid.nx;
        idx = idx * static_cast<std::size_t>(grid.nx) + static_cast<std::size_t>(k);
      }
      const double h = spec.symbol(xi);
      if (h != h0) stationary = false;
      modes.push_back({idx, a, h, spec.integral() ? spec.integer_symbol(xi) : 0});
    }
  }

  // time nodes and weights
  std::vector<double> nodes;
  std::vector<double> weights;
  const bool periodic = spec.integral();
  if (stationary) {
    nodes = {0.0};
    weights = {1.0};
  } else if (periodic) {
    nodes.resize(static_cast<std::size_t>(grid.nt));
    weights.assign(static_cast<std::size_t>(grid.nt), 1.0 / grid.nt);
    for (int k = 0; k < grid.nt; ++k) nodes[static_cast<std::size_t>(k)] = static_cast<double>(k) / grid.nt;
  } else {
    nodes.resize(static_cast<std::size_t>(grid.nt) + 1);
    weights.assign(static_cast<std::size_t>(grid.nt) + 1, 1.0 / grid.nt);
    for (int k = 0; k <= grid.nt; ++k) nodes[static_cast<std::size_t>(k)] = static_cast<double>(k) / grid.nt;
    weights.front() *= 0.5;
    weights.back() *= 0.5;
  }

  // exact phase table for the periodic rectangle rule: t_k h = (k h mod nt)/nt turns
  std::vector<Complex> cis_table;
  if (periodic && !stationary) {
    cis_table.resize(static_cast<std::size_t>(grid.nt));
    for (int m = 0; m < grid.nt; ++m) {
      cis_table[static_cast<std::size_t>(m)] = cis_turns(static_cast<double>(m) / grid.nt);
    }
  }

  std::vector<double> slice_means(nodes.size(), 0.0);
  parallel_ranges(nodes.size(), [&](std::size_t begin, std::size_t end) {
    GridTransform tr(d, grid.nx);
    auto data = tr.data();
    for (std::size_t k = begin; k < end; ++k) {
      tr.clear();
      for (const Mode& m : modes) {
        Complex phase;
        if (!cis_table.empty()) {
          std::int64_t r = (static_cast<std::int64_t>(k) * m.h_int) % grid.nt;
          if (r < 0) r += grid.nt;
          phase = cis_table[static_cast<std::size_t>(r)];
        } else {
          phase = cis_turns(nodes[k] * m.h);
        }
        data[m.index] += m.amp * phase;
      }
      tr.to_space();
      double acc = 0.0;
      for (const Complex& v : data) acc += pow_abs2(std::norm(v), p);
      slice_means[k] = acc / static_cast<double>(tr.size());
    }
  });

  double total = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) total += weights[k] * slice_means[k];
  return std::pow(total, 1.0 / p);
}

double sobolev_norm(const SpectralField& u, double s) {
  double acc = 0.0;
  for (const auto& [xi, a] : u.amplitudes()) {
    const double r = xi.norm();
    acc += std::pow(1.0 + r * r, s) * std::norm(a);
  }
  return std::sqrt(acc);
}

GalileanFrame galilean_shift(const SpectralField& u, const FreqPoint& r0) {
  const TorusSpec& spec = u.spec();
  SpectralField centered(spec);
  for (const auto& [xi, a] : u.amplitudes()) centered.set(xi - r0, a);
  return {std::move(centered), spec.symbol_gradient(r0), spec.symbol(r0)};
}

}  // namespace hypertorus
