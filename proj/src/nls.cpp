#include "hypertorus/nls.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "hypertorus/bilinear.hpp"
#include "hypertorus/errors.hpp"

namespace hypertorus {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Complex cis_turns(double turns) {
  const double r = turns - std::nearbyint(turns);
  return std::polar(1.0, kTwoPi * r);
}

bool close_to(double a, double b) { return std::abs(a - b) <= 1e-12; }

}  // namespace

void validate(const NonlinearityKind& kind, int d) {
  if (const auto* p = std::get_if<PowerNonlinearity>(&kind)) {
    if (p->k < 1) throw std::invalid_argument("power nonlinearity: k must be >= 1");
    if (p->sign != 1 && p->sign != -1) throw std::invalid_argument("power nonlinearity: sign must be +1 or -1");
    return;
  }
  if (d != 2) throw std::invalid_argument("DS nonlinearity: requires d = 2");
  const double alpha = std::holds_alternative<DSNonlinearity>(kind) ? std::get<DSNonlinearity>(kind).alpha
                                                                    : std::get<NonlocalDSNonlinearity>(kind).alpha;
  if (!(alpha > 0.0)) throw std::invalid_argument("DS nonlinearity: alpha must be positive");
}

int nonlinearity_degree(const NonlinearityKind& kind) {
  if (const auto* p = std::get_if<PowerNonlinearity>(&kind)) return 2 * p->k + 1;
  return 3;
}

std::vector<double> apply_ds_multiplier(std::span<const double> f, int nx, double alpha) {
  GridTransform tr(2, nx);
  if (f.size() != tr.size()) throw std::invalid_argument("apply_ds_multiplier: sample count does not match nx^2");
  auto data = tr.data();
  std::copy(f.begin(), f.end(), data.begin());
  tr.to_frequency();
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= mds_symbol(alpha, tr.frequency_at(i));
  tr.to_space();
  std::vector<double> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out[i] = data[i].real();
  return out;
}

std::vector<double> nonlinear_potential(const NonlinearityKind& kind, std::span<const Complex> u, int d, int nx) {
  validate(kind, d);
  std::vector<double> abs2(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) abs2[i] = std::norm(u[i]);
  if (const auto* p = std::get_if<PowerNonlinearity>(&kind)) {
    for (double& v : abs2) v = p->sign * std::pow(v, p->k);
    return abs2;
  }
  double c_loc = 0.0;
  double c_nl = 0.0;
  double alpha = 1.0;
  if (const auto* ds = std::get_if<DSNonlinearity>(&kind)) {
    c_nl = ds->gamma / (1.0 + ds->alpha);
    c_loc = ds->sigma2 - c_nl;
    alpha = ds->alpha;
  } else {
    const auto& nl = std::get<NonlocalDSNonlinearity>(kind);
    c_nl = nl.coefficient;
    alpha = nl.alpha;
  }
  const std::vector<double> nonlocal = apply_ds_multiplier(abs2, nx, alpha);
  std::vector<double> v(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) v[i] = c_loc * abs2[i] + c_nl * nonlocal[i];
  return v;
}

std::vector<Complex> nonlinearity_eval(const NonlinearityKind& kind, std::span<const Complex> u, int d, int nx) {
  const std::vector<double> v = nonlinear_potential(kind, u, d, nx);
  std::vector<Complex> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = v[i] * u[i];
  return out;
}

void SolverConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("SolverConfig: dt must be positive");
  if (!(T_end > 0.0)) throw std::invalid_argument("SolverConfig: T_end must be positive");
  if (dt > T_end) throw std::invalid_argument("SolverConfig: dt exceeds T_end");
  if (record_every < 1) throw std::invalid_argument("SolverConfig: record_every must be >= 1");
  grid.validate();
}

SolverState::SolverState(const SpectralField& u0, int nx) : spec_(u0.spec()), transform_(u0.spec().dim(), nx) {
  require_alias_free(u0, nx);
  coeffs_.assign(transform_.size(), Complex{});
  symbol_.resize(transform_.size());
  for (std::size_t i = 0; i < symbol_.size(); ++i) symbol_[i] = spec_.symbol(transform_.frequency_at(i));
  for (const auto& [xi, a] : u0.amplitudes()) coeffs_[transform_.index_of(xi)] = a;
}

double SolverState::mass() const {
  double s = 0.0;
  for (const Complex& c : coeffs_) s += std::norm(c);
  return s;
}

double SolverState::sobolev_norm(double s) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == Complex{}) continue;
    const double r = transform_.frequency_at(i).norm();
    acc += std::pow(1.0 + r * r, s) * std::norm(coeffs_[i]);
  }
  return std::sqrt(acc);
}

SpectralField SolverState::to_field() const {
  SpectralField u(spec_);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] != Complex{}) u.set(transform_.frequency_at(i), coeffs_[i]);
  }
  return u;
}

void SolverState::linear(double dt) {
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] *= cis_turns(dt * symbol_[i]);
}

SolverState& split_step(SolverState& state, const NonlinearityKind& kind, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("split_step: dt must be positive");
  const int d = state.spec_.dim();
  validate(kind, d);
  state.linear(0.5 * dt);
  auto data = state.transform_.data();
  std::copy(state.coeffs_.begin(), state.coeffs_.end(), data.begin());
  state.transform_.to_space();
  const std::vector<double> v = nonlinear_potential(kind, data, d, state.nx());
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= std::polar(1.0, -dt * v[i]);
  state.transform_.to_frequency();
  std::copy(data.begin(), data.end(), state.coeffs_.begin());
  state.linear(0.5 * dt);
  state.t_ += dt;
  for (const Complex& c : state.coeffs_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw NumericalAbort("split_step: non-finite amplitude at t=" + std::to_string(state.t_));
    }
  }
  return state;
}

EvolutionTrace evolve(const SpectralField& u0, const NonlinearityKind& kind, const SolverConfig& config) {
  config.validate();
  validate(kind, u0.spec().dim());
  const std::int64_t cap = config.grid.nx / (2 * nonlinearity_degree(kind));
  if (u0.max_abs_coord() > cap) {
    throw AliasingError("evolve: initial data reaches frequency " + std::to_string(u0.max_abs_coord()) +
                        " above the dealiasing cap " + std::to_string(cap) + " for nx=" + std::to_string(config.grid.nx));
  }
  SolverState state(u0, config.grid.nx);
  EvolutionTrace trace{{}, {}, SpectralField(u0.spec())};
  auto record = [&]() {
    trace.rows.push_back({state.time(), state.mass(), state.sobolev_norm(config.sobolev_s)});
    if (config.keep_snapshots) trace.snapshots.push_back(state.to_field());
  };
  record();
  const auto steps = static_cast<std::int64_t>(std::ceil(config.T_end / config.dt - 1e-9));
  for (std::int64_t n = 1; n <= steps; ++n) {
    const double dt = (n == steps) ? config.T_end - static_cast<double>(steps - 1) * config.dt : config.dt;
    split_step(state, kind, dt);
    if (n % config.record_every == 0 || n == steps) record();
  }
  trace.final_state = state.to_field();
  return trace;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int j = 2; j <= n; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes[static_cast<std::size_t>(i)] = x;
    weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  std::reverse(nodes.begin(), nodes.end());
  std::reverse(weights.begin(), weights.end());
}

SpectralField picard_first_iterate(const SpectralField& phi, const NonlinearityKind& kind, double t, int nquad) {
  if (nquad < 2) throw std::invalid_argument("picard_first_iterate: nquad must be >= 2");
  const TorusSpec& spec = phi.spec();
  const int d = spec.dim();
  validate(kind, d);
  if (phi.empty() || t == 0.0) return SpectralField(spec);

  const std::int64_t reach = nonlinearity_degree(kind) * phi.max_abs_coord();
  const int nx = smooth_fft_size(static_cast<int>(2 * reach + 1));
  double cells = 1.0;
  for (int j = 0; j < d; ++j) cells *= nx;
  if (cells > static_cast<double>(1 << 26)) {
    throw AliasingError("picard_first_iterate: a grid resolving the " + std::to_string(nonlinearity_degree(kind)) +
                        "-fold product needs nx=" + std::to_string(nx) + " per axis, beyond the memory cap");
  }

  std::vector<double> x, w;
  gauss_legendre(nquad, x, w);
  GridTransform tr(d, nx);
  auto data = tr.data();
  std::vector<double> symbol(tr.size());
  for (std::size_t i = 0; i < symbol.size(); ++i) symbol[i] = spec.symbol(tr.frequency_at(i));
  std::vector<Complex> acc(tr.size(), Complex{});
  for (int q = 0; q < nquad; ++q) {
    const double tq = 0.5 * t * (1.0 + x[static_cast<std::size_t>(q)]);
    const double wq = 0.5 * t * w[static_cast<std::size_t>(q)];
    tr.clear();
    for (const auto& [xi, a] : phi.amplitudes()) data[tr.index_of(xi)] += a * cis_turns(tq * spec.symbol(xi));
    tr.to_space();
    const std::vector<double> v = nonlinear_potential(kind, data, d, nx);
    for (std::size_t i = 0; i < data.size(); ++i) data[i] *= v[i];
    tr.to_frequency();
    for (std::size_t i = 0; i < data.size(); ++i) acc[i] += wq * cis_turns((t - tq) * symbol[i]) * data[i];
  }

  // Entries below 1e-13 of the largest are transform roundoff.
  double peak = 0.0;
  for (const Complex& c : acc) peak = std::max(peak, std::abs(c));
  SpectralField out(spec);
  for (std::size_t i = 0; i < acc.size(); ++i) {
    if (std::abs(acc[i]) > 1e-13 * peak) out.set(tr.frequency_at(i), acc[i]);
  }
  return out;
}

namespace {

void check_illposed_case(int d, int k, double s) {
  const bool ok = (d == 2 && k == 2 && close_to(s, 0.5)) || (d == 4 && k == 1 && close_to(s, 1.0)) ||
                  (d == 2 && k == 1 && close_to(s, 0.5));
  if (!ok) {
    throw UnsupportedCase("no ill-posedness witness for (d=" + std::to_string(d) + ", k=" + std::to_string(k) +
                          ", s=" + std::to_string(s) + "); supported: (2,2,1/2), (4,1,1), (2,1,1/2)");
  }
}

}  // namespace

SpectralField illposedness_witness(std::int64_t N, double s, int d, int k) {
  check_illposed_case(d, k, s);
  if (N < 1) throw std::invalid_argument("illposedness_witness: N must be >= 1");
  const TorusSpec spec = TorusSpec::square(d);
  SpectralField u(spec);
  if (d == 2) {
    for (std::int64_t n = 1; n <= N; ++n) {
      const FreqPoint xi{n, n};
      u.set(xi, std::pow(xi.norm(), -2.0 * s));
    }
  } else {
    for (std::int64_t a = 1; a <= N; ++a) {
      for (std::int64_t b = 1; b <= N; ++b) {
        const FreqPoint xi{a, a, b, b};
        u.set(xi, std::pow(xi.norm(), -2.0 * s));
      }
    }
  }
  return u;
}

namespace {

// Coefficient sequence with first frequency `offset`.
struct Seq {
  std::int64_t offset = 0;
  std::vector<double> c;
};

Seq convolve(const Seq& a, const Seq& b) {
  Seq r{a.offset + b.offset, std::vector<double>(a.c.size() + b.c.size() - 1, 0.0)};
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
  }
  return r;
}

}  // namespace

double illposedness_ratio(std::int64_t N, int k, double s, int d) {
  check_illposed_case(d, k, s);
  if (d == 2 && N > (std::int64_t{1} << 14)) throw ResolutionError("illposedness_ratio: N is capped at 2^14 on T^2");
  if (d == 4 && N > (std::int64_t{1} << 10)) throw ResolutionError("illposedness_ratio: N is capped at 2^10 on T^4");
  const SpectralField phi = illposedness_witness(N, s, d, k);
  const double phi_hs = sobolev_norm(phi, s);

  if (d == 2) {
    // everything lives on the diagonal (m, m); work with the 1-d sequence
    Seq f{1, {}};
    Seq fbar{-N, {}};
    for (std::int64_t n = 1; n <= N; ++n) f.c.push_back(phi.at(FreqPoint{n, n}).real());
    fbar.c.assign(f.c.rbegin(), f.c.rend());
    Seq g = f;
    for (int i = 0; i < k; ++i) g = convolve(g, f);
    for (int i = 0; i < k; ++i) g = convolve(g, fbar);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.c.size(); ++i) {
      const auto m = static_cast<double>(g.offset + static_cast<std::int64_t>(i));
      acc += std::pow(1.0 + 2.0 * m * m, s) * g.c[i] * g.c[i];
    }
    return std::sqrt(acc) / std::pow(phi_hs, 2 * k + 1);
  }

  // d = 4, k = 1: the plane (a, a, b, b) as a 2-d problem; f f conj(f) has
  // frequencies in [2 - N, 2N - 1] per axis
  const int L = smooth_fft_size(static_cast<int>(3 * N + 1));
  GridTransform tr(2, L);
  auto data = tr.data();
  for (std::int64_t a = 1; a <= N; ++a) {
    for (std::int64_t b = 1; b <= N; ++b) data[tr.index_of(FreqPoint{a, b})] = phi.at(FreqPoint{a, a, b, b});
  }
  tr.to_space();
  for (Complex& v : data) v = v * v * std::conj(v);
  tr.to_frequency();
  auto freq = [&](std::int64_t idx) { return idx <= 2 * N - 1 ? idx : idx - L; };
  double acc = 0.0;
  for (std::int64_t i = 0; i < L; ++i) {
    for (std::int64_t j = 0; j < L; ++j) {
      const auto m = static_cast<double>(freq(i));
      const auto n = static_cast<double>(freq(j));
      acc += std::pow(1.0 + 2.0 * m * m + 2.0 * n * n, s) * std::norm(data[static_cast<std::size_t>(i * L + j)]);
    }
  }
  return std::sqrt(acc) / std::pow(phi_hs, 3);
}

}  // namespace hypertorus
