#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "hypertorus/fft.hpp"
#include "hypertorus/torus.hpp"

namespace hypertorus {

// i u_t + Box u = F(u), with the time scaling of torus.hpp: the free flow
// multiplies amplitudes by e^{2 pi i t h}, and F = V(u) u for a real V.

// F = sign |u|^{2k} u
struct PowerNonlinearity {
  int k = 1;
  int sign = 1;
};

// F = (sigma2 - gamma/(1+alpha)) |u|^2 u + gamma/(1+alpha) J_DS(|u|^2) u
struct DSNonlinearity {
  double sigma2 = 0.0;
  double alpha = 1.0;
  double gamma = 1.0;
};

// F = coefficient J_DS(|u|^2) u
struct NonlocalDSNonlinearity {
  double alpha = 1.0;
  double coefficient = 1.0;
};

using NonlinearityKind = std::variant<PowerNonlinearity, DSNonlinearity, NonlocalDSNonlinearity>;

void validate(const NonlinearityKind& kind, int d);
// Polynomial degree of F counted as 2k + 1 (3 for the DS kinds).
int nonlinearity_degree(const NonlinearityKind& kind);

// J_DS(f) for real grid samples f on the nx x nx grid.
std::vector<double> apply_ds_multiplier(std::span<const double> f, int nx, double alpha);

// Real potential V with F(u) = V u, from grid samples of u (row-major nx^d).
std::vector<double> nonlinear_potential(const NonlinearityKind& kind, std::span<const Complex> u, int d, int nx);
std::vector<Complex> nonlinearity_eval(const NonlinearityKind& kind, std::span<const Complex> u, int d, int nx);

struct SolverConfig {
  double dt = 1e-3;
  SpaceTimeGrid grid{1, 32};
  double T_end = 1.0;
  int record_every = 1;
  double sobolev_s = 1.0;
  bool keep_snapshots = false;

  void validate() const;
};

// Grid-resident state: nx^d Fourier coefficients.
class SolverState {
 public:
  SolverState(const SpectralField& u0, int nx);

  const TorusSpec& spec() const { return spec_; }
  double time() const { return t_; }
  int nx() const { return transform_.nx(); }
  std::span<const Complex> coefficients() const { return coeffs_; }

  double mass() const;
  double sobolev_norm(double s) const;
  SpectralField to_field() const;

 private:
  friend SolverState& split_step(SolverState& state, const NonlinearityKind& kind, double dt);
  void linear(double dt);

  TorusSpec spec_;
  double t_ = 0.0;
  GridTransform transform_;
  std::vector<Complex> coeffs_;
  std::vector<double> symbol_;
};

// Strang step: half linear, exact phase rotation by e^{-i dt V} with V frozen
// at the start of the substep, half linear. Throws NumericalAbort on NaN/Inf.
SolverState& split_step(SolverState& state, const NonlinearityKind& kind, double dt);

struct TraceRow {
  double t = 0.0;
  double mass = 0.0;
  double sobolev = 0.0;
};

struct EvolutionTrace {
  std::vector<TraceRow> rows;
  std::vector<SpectralField> snapshots;  // parallel to rows when kept
  SpectralField final_state;
};

// Initial data must fit below the dealiasing cap nx / (2 (2k + 1)).
EvolutionTrace evolve(const SpectralField& u0, const NonlinearityKind& kind, const SolverConfig& config);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// int_0^t e^{i(t - t')Box} F(e^{i t' Box} phi) dt' by nquad-point Gauss-Legendre
// in t', with F evaluated on a grid fine enough to be exact.
SpectralField picard_first_iterate(const SpectralField& phi, const NonlinearityKind& kind, double t, int nquad);

// phi_N = sum_{xi in V_N} |xi|^{-2s} e^{2 pi i x.xi} with V = {(n, n)} on T^2 or
// {(a, a, b, b)} on T^4, coordinates in [1, N]. Accepted (d, k, s):
// (2, 2, 1/2), (4, 1, 1), and the cubic DS case (2, 1, 1/2).
SpectralField illposedness_witness(std::int64_t N, double s, int d, int k);

// ||(|phi_N|^{2k} phi_N)||_{H^s} / ||phi_N||_{H^s}^{2k+1}
double illposedness_ratio(std::int64_t N, int k, double s, int d);

}  // namespace hypertorus
