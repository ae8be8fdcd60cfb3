#include "hypertorus/bilinear.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>

#include "hypertorus/errors.hpp"
#include "hypertorus/parallel.hpp"

namespace hypertorus {
namespace {

void require_plane(const SpectralField& u, const char* what) {
  if (u.spec().dim() != 2) throw std::invalid_argument(std::string(what) + ": requires d = 2");
}

void require_square_plane(const TorusSpec& spec, const char* what) {
  if (spec.dim() != 2 || spec.thetas()[0] != 1.0 || spec.thetas()[1] != 1.0) {
    throw ExactnessUnavailable(std::string(what) + ": exact resonance sums need the square torus T^2");
  }
}

std::int64_t h2(std::int64_t x, std::int64_t y) { return x * x - y * y; }

struct Bounds {
  std::int64_t lo[2] = {0, 0};
  std::int64_t hi[2] = {-1, -1};
};

Bounds bounds_of(const SpectralField& u) {
  Bounds b;
  bool first = true;
  for (const auto& [xi, a] : u.amplitudes()) {
    for (int j = 0; j < 2; ++j) {
      if (first) {
        b.lo[j] = b.hi[j] = xi[j];
      } else {
        b.lo[j] = std::min(b.lo[j], xi[j]);
        b.hi[j] = std::max(b.hi[j], xi[j]);
      }
    }
    first = false;
  }
  return b;
}

// Range of x^2 - y^2 over a box.
std::pair<std::int64_t, std::int64_t> symbol_range(const Bounds& b) {
  auto sq_range = [](std::int64_t lo, std::int64_t hi) {
    const std::int64_t m = std::max(lo * lo, hi * hi);
    const std::int64_t n = (lo <= 0 && hi >= 0) ? 0 : std::min(lo * lo, hi * hi);
    return std::pair{n, m};
  };
  const auto [x_min, x_max] = sq_range(b.lo[0], b.hi[0]);
  const auto [y_min, y_max] = sq_range(b.lo[1], b.hi[1]);
  return {x_min - y_max, x_max - y_min};
}

// Dense copy of a d = 2 field over its bounding box.
class Dense2 {
 public:
  explicit Dense2(const SpectralField& u) : b_(bounds_of(u)) {
    w0_ = b_.hi[0] - b_.lo[0] + 1;
    w1_ = b_.hi[1] - b_.lo[1] + 1;
    if (u.empty()) w0_ = w1_ = 0;
    v_.assign(static_cast<std::size_t>(w0_ * w1_), Complex{});
    for (const auto& [xi, a] : u.amplitudes()) v_[idx(xi[0], xi[1])] = a;
  }
  const Bounds& bounds() const { return b_; }
  Complex get(std::int64_t x, std::int64_t y) const {
    if (x < b_.lo[0] || x > b_.hi[0] || y < b_.lo[1] || y > b_.hi[1]) return {};
    return v_[idx(x, y)];
  }

 private:
  std::size_t idx(std::int64_t x, std::int64_t y) const {
    return static_cast<std::size_t>((x - b_.lo[0]) * w1_ + (y - b_.lo[1]));
  }
  Bounds b_;
  std::int64_t w0_ = 0;
  std::int64_t w1_ = 0;
  std::vector<Complex> v_;
};

// Accumulates coefficients indexed by tau and reports sum |c|^2.
class TauBuffer {
 public:
  TauBuffer(std::int64_t lo, std::int64_t hi)
      : lo_(lo), sig_(static_cast<std::size_t>(hi - lo + 1)), abs_(static_cast<std::size_t>(hi - lo + 1)) {}
  void add(std::int64_t tau, Complex c) {
    const auto i = static_cast<std::size_t>(tau - lo_);
    if (sig_[i] == Complex{} && abs_[i] == 0.0) touched_.push_back(i);
    sig_[i] += c;
    abs_[i] += std::abs(c);
  }
  // Returns {sum |sig|^2, sum abs^2} and resets the touched slots.
  std::pair<double, double> flush() {
    double s = 0.0;
    double a = 0.0;
    for (std::size_t i : touched_) {
      s += std::norm(sig_[i]);
      a += abs_[i] * abs_[i];
      sig_[i] = Complex{};
      abs_[i] = 0.0;
    }
    touched_.clear();
    return {s, a};
  }

 private:
  std::int64_t lo_;
  std::vector<Complex> sig_;
  std::vector<double> abs_;
  std::vector<std::size_t> touched_;
};

template <class Keep>
SpectralField pair_convolve(const BilinearKind& kind, const SpectralField& u1, const SpectralField& u2, Keep keep) {
  kind.validate();
  if (!(u1.spec() == u2.spec())) throw std::invalid_argument("bilinear: fields live on different tori");
  if (kind.tag != BilinearKind::Tag::Product && kind.tag != BilinearKind::Tag::ConjProduct) {
    require_plane(u1, "bilinear");
  }
  SpectralField::AmplitudeMap out;
  for (const auto& [x1, a1] : u1.amplitudes()) {
    for (const auto& [x2, a2] : u2.amplitudes()) {
      if (!keep(x1, x2)) continue;
      const Complex c = kind.conjugates() ? a1 * std::conj(a2) : a1 * a2;
      out[pair_output(kind, x1, x2)] += c;
    }
  }
  if (kind.tag == BilinearKind::Tag::DS || kind.tag == BilinearKind::Tag::SqrtDS) {
    for (auto& [xi, c] : out) c *= kind_symbol(kind, xi);
  }
  return SpectralField(u1.spec(), std::move(out));
}

std::vector<double> time_nodes(bool periodic, int nt, std::vector<double>& weights) {
  std::vector<double> nodes;
  if (periodic) {
    for (int k = 0; k < nt; ++k) nodes.push_back(static_cast<double>(k) / nt);
    weights.assign(nodes.size(), 1.0 / nt);
  } else {
    for (int k = 0; k <= nt; ++k) nodes.push_back(static_cast<double>(k) / nt);
    weights.assign(nodes.size(), 1.0 / nt);
    weights.front() *= 0.5;
    weights.back() *= 0.5;
  }
  return nodes;
}

}  // namespace

void BilinearKind::validate() const {
  if ((tag == Tag::DS || tag == Tag::SqrtDS) && !(alpha > 0.0)) {
    throw std::invalid_argument("BilinearKind: ds kinds need alpha > 0");
  }
}

double mds_symbol(double alpha, const FreqPoint& xi) {
  if (xi.dim() != 2) throw std::invalid_argument("mds_symbol: requires d = 2");
  if (xi[0] == 0 && xi[1] == 0) return 1.0;
  const auto a = static_cast<double>(xi[0]);
  const auto b = static_cast<double>(xi[1]);
  return (-a * a + b * b) / (alpha * a * a + b * b);
}

double kind_symbol(const BilinearKind& kind, const FreqPoint& xi) {
  switch (kind.tag) {
    case BilinearKind::Tag::DS:
      return mds_symbol(kind.alpha, xi);
    case BilinearKind::Tag::SqrtDS:
      return std::sqrt(std::abs(mds_symbol(kind.alpha, xi)));
    default:
      return 1.0;
  }
}

FreqPoint pair_output(const BilinearKind& kind, const FreqPoint& xi1, const FreqPoint& xi2) {
  return kind.conjugates() ? xi1 - xi2 : xi1 + xi2;
}

bool same_null_line(const FreqPoint& xi1, const FreqPoint& xi2) {
  if (xi1.dim() != 2 || xi2.dim() != 2) throw std::invalid_argument("same_null_line: requires d = 2");
  const std::int64_t dx = xi1[0] - xi2[0];
  const std::int64_t dy = xi1[1] - xi2[1];
  return dx == dy || dx == -dy;
}

SpectralField apply_bilinear(const BilinearKind& kind, const SpectralField& u1, const SpectralField& u2) {
  return pair_convolve(kind, u1, u2, [](const FreqPoint&, const FreqPoint&) { return true; });
}

SpectralField offdiag(const BilinearKind& kind, const SpectralField& u1, const SpectralField& u2) {
  require_plane(u1, "offdiag");
  return pair_convolve(kind, u1, u2, [](const FreqPoint& a, const FreqPoint& b) { return !same_null_line(a, b); });
}

SpectralField line_terms(const BilinearKind& kind, const SpectralField& u1, const SpectralField& u2) {
  require_plane(u1, "line_terms");
  const auto plus = pair_convolve(kind, u1, u2, [](const FreqPoint& a, const FreqPoint& b) {
    return a[0] + a[1] == b[0] + b[1];
  });
  const auto minus = pair_convolve(kind, u1, u2, [](const FreqPoint& a, const FreqPoint& b) {
    return a[0] - a[1] == b[0] - b[1];
  });
  return plus + minus;
}

SpectralField coincident_terms(const BilinearKind& kind, const SpectralField& u1, const SpectralField& u2) {
  require_plane(u1, "coincident_terms");
  return pair_convolve(kind, u1, u2, [](const FreqPoint& a, const FreqPoint& b) { return a == b; });
}

ResonanceNorm resonance_sum_detailed(const ResonanceQuery& q, const SpectralField& phi1, const SpectralField& phi2,
                                     bool offdiagonal) {
  require_square_plane(phi1.spec(), "resonance_sum_l2");
  if (!(phi1.spec() == phi2.spec())) throw std::invalid_argument("resonance_sum_l2: fields on different tori");
  q.kind.validate();
  const SpectralField p1 = project(phi1, q.box1);
  const SpectralField p2 = project(phi2, q.box2);
  if (p1.empty() || p2.empty()) return {};

  const Dense2 d1(p1);
  const Dense2 d2(p2);
  const Bounds& b1 = d1.bounds();
  const Bounds& b2 = d2.bounds();
  const bool conj = q.kind.conjugates();

  Bounds out;
  for (int j = 0; j < 2; ++j) {
    out.lo[j] = conj ? b1.lo[j] - b2.hi[j] : b1.lo[j] + b2.lo[j];
    out.hi[j] = conj ? b1.hi[j] - b2.lo[j] : b1.hi[j] + b2.hi[j];
  }
  const auto [h1lo, h1hi] = symbol_range(b1);
  const auto [h2lo, h2hi] = symbol_range(b2);
  const std::int64_t tau_lo = conj ? h1lo - h2hi : h1lo + h2lo;
  const std::int64_t tau_hi = conj ? h1hi - h2lo : h1hi + h2hi;

  const std::int64_t wy = out.hi[1] - out.lo[1] + 1;
  const auto n_out = static_cast<std::size_t>((out.hi[0] - out.lo[0] + 1) * wy);
  std::vector<double> sig(n_out, 0.0);
  std::vector<double> absv(n_out, 0.0);

  parallel_ranges(n_out, [&](std::size_t begin, std::size_t end) {
    TauBuffer buf(tau_lo, tau_hi);
    for (std::size_t o = begin; o < end; ++o) {
      const std::int64_t ox = out.lo[0] + static_cast<std::int64_t>(o) / wy;
      const std::int64_t oy = out.lo[1] + static_cast<std::int64_t>(o) % wy;
      if (conj && offdiagonal && (ox == oy || ox == -oy)) continue;
      const double symbol = kind_symbol(q.kind, FreqPoint{ox, oy});
      if (symbol == 0.0) continue;
      // xi2 = xi1 - o (conj) or o - xi1 (product) must land in box 2
      std::int64_t lo[2];
      std::int64_t hi[2];
      const std::int64_t oc[2] = {ox, oy};
      for (int j = 0; j < 2; ++j) {
        lo[j] = std::max(b1.lo[j], conj ? b2.lo[j] + oc[j] : oc[j] - b2.hi[j]);
        hi[j] = std::min(b1.hi[j], conj ? b2.hi[j] + oc[j] : oc[j] - b2.lo[j]);
      }
      for (std::int64_t x = lo[0]; x <= hi[0]; ++x) {
        for (std::int64_t y = lo[1]; y <= hi[1]; ++y) {
          const Complex a1 = d1.get(x, y);
          if (a1 == Complex{}) continue;
          const std::int64_t x2 = conj ? x - ox : ox - x;
          const std::int64_t y2 = conj ? y - oy : oy - y;
          const Complex a2 = d2.get(x2, y2);
          if (a2 == Complex{}) continue;
          if (!conj && offdiagonal) {
            const std::int64_t dx = x - x2;
            const std::int64_t dy = y - y2;
            if (dx == dy || dx == -dy) continue;
          }
          const std::int64_t tau = conj ? h2(x, y) - h2(x2, y2) : h2(x, y) + h2(x2, y2);
          buf.add(tau, symbol * (conj ? a1 * std::conj(a2) : a1 * a2));
        }
      }
      const auto [s, a] = buf.flush();
      sig[o] = s;
      absv[o] = a;
    }
  });

  ResonanceNorm r;
  for (std::size_t o = 0; o < n_out; ++o) {
    r.norm += sig[o];
    r.abs_norm += absv[o];
  }
  r.norm = std::sqrt(r.norm);
  r.abs_norm = std::sqrt(r.abs_norm);
  return r;
}

double resonance_sum_l2(const ResonanceQuery& q, const SpectralField& phi1, const SpectralField& phi2,
                        bool offdiagonal) {
  return resonance_sum_detailed(q, phi1, phi2, offdiagonal).norm;
}

double bilinear_l2_quadrature(const BilinearKind& kind, const SpectralField& phi1, const SpectralField& phi2,
                              bool offdiagonal, int nt) {
  if (nt < 1) throw std::invalid_argument("bilinear_l2_quadrature: nt must be >= 1");
  std::vector<double> weights;
  const std::vector<double> nodes = time_nodes(phi1.spec().integral(), nt, weights);
  std::vector<double> vals(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t k) {
    const SpectralField v1 = propagate(phi1, nodes[k]);
    const SpectralField v2 = propagate(phi2, nodes[k]);
    const SpectralField w = offdiagonal ? offdiag(kind, v1, v2) : apply_bilinear(kind, v1, v2);
    const double n = w.l2_norm();
    vals[k] = n * n;
  });
  double s = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) s += weights[k] * vals[k];
  return std::sqrt(s);
}

HyperbolaPoints hyperbola_points(std::int64_t z, std::int64_t N) {
  HyperbolaPoints out;
  if (N < 0) return out;
  if (z == 0) {
    out.degenerate = true;
    std::set<std::pair<std::int64_t, std::int64_t>> s;
    for (std::int64_t x = -N; x <= N; ++x) {
      s.insert({x, x});
      s.insert({x, -x});
    }
    out.points.assign(s.begin(), s.end());
    return out;
  }
  const std::int64_t m = z < 0 ? -z : z;
  std::set<std::pair<std::int64_t, std::int64_t>> s;
  auto consider = [&](std::int64_t a) {
    const std::int64_t b = z / a;
    if (((a - b) % 2) != 0) return;
    const std::int64_t x = (a + b) / 2;
    const std::int64_t y = (a - b) / 2;
    if (std::abs(x) <= N && std::abs(y) <= N) s.insert({x, y});
  };
  for (std::int64_t a = 1; a * a <= m; ++a) {
    if (m % a != 0) continue;
    for (std::int64_t f : {a, m / a}) {
      consider(f);
      consider(-f);
    }
  }
  out.points.assign(s.begin(), s.end());
  return out;
}

FiberReport resonance_fiber_max(std::int64_t N) {
  if (N < 1) throw std::invalid_argument("resonance_fiber_max: N must be >= 1");
  const std::int64_t R = 4 * N;        // |X|, |Y| <= 4N
  const std::int64_t Zmax = R * R;     // |z| <= 16 N^2
  const std::int64_t span = 4 * N;     // window side for X = 2 xi_1 - xi~_1

  // divisor lists of 1..Zmax in CSR form
  std::vector<std::int64_t> start(static_cast<std::size_t>(Zmax) + 2, 0);
  for (std::int64_t a = 1; a <= Zmax; ++a) {
    for (std::int64_t m = a; m <= Zmax; m += a) ++start[static_cast<std::size_t>(m) + 1];
  }
  std::partial_sum(start.begin(), start.end(), start.begin());
  std::vector<std::int64_t> divs(static_cast<std::size_t>(start.back()));
  {
    std::vector<std::int64_t> fill(start.begin(), start.end() - 1);
    for (std::int64_t a = 1; a <= Zmax; ++a) {
      for (std::int64_t m = a; m <= Zmax; m += a) divs[static_cast<std::size_t>(fill[static_cast<std::size_t>(m)]++)] = a;
    }
  }

  struct Best {
    std::int64_t size = 0;
    std::int64_t x1 = 0, x2 = 0, tau = 0;
  };
  auto better = [](const Best& a, const Best& b) {
    if (a.size != b.size) return a.size > b.size;
    return std::tie(a.x1, a.x2, a.tau) < std::tie(b.x1, b.x2, b.tau);
  };

  std::atomic<std::int64_t> global_best{0};
  const auto n_z = static_cast<std::size_t>(2 * Zmax + 1);
  std::vector<Best> per_z(n_z);

  parallel_for(n_z, [&](std::size_t iz) {
    const std::int64_t z = static_cast<std::int64_t>(iz) - Zmax;
    if (z == 0) return;
    const std::int64_t m = z < 0 ? -z : z;
    std::vector<std::pair<std::int64_t, std::int64_t>> cls[4];
    for (std::int64_t i = start[static_cast<std::size_t>(m)]; i < start[static_cast<std::size_t>(m) + 1]; ++i) {
      const std::int64_t a0 = divs[static_cast<std::size_t>(i)];
      for (std::int64_t a : {a0, -a0}) {
        const std::int64_t b = z / a;
        if (((a - b) & 1) != 0) continue;
        const std::int64_t X = (a + b) / 2;
        const std::int64_t Y = (a - b) / 2;
        if (std::abs(X) > R || std::abs(Y) > R) continue;
        cls[((X & 1) << 1) | (Y & 1)].push_back({X, Y});
      }
    }
    int order[4] = {0, 1, 2, 3};
    std::sort(order, order + 4, [&](int a, int b) { return cls[a].size() > cls[b].size(); });
    Best best;
    for (int c : order) {
      const auto& pts = cls[c];
      const auto k = static_cast<std::int64_t>(pts.size());
      if (k == 0 || k < best.size || k < global_best.load()) break;
      const std::int64_t cap1 = (c >> 1) ? -1 : 0;  // largest admissible lower corner with the class parity
      const std::int64_t cap2 = (c & 1) ? -1 : 0;
      std::vector<std::int64_t> c1, c2;
      for (const auto& [X, Y] : pts) {
        c1.push_back(std::min(X, cap1));
        c2.push_back(std::min(Y, cap2));
      }
      std::sort(c1.begin(), c1.end());
      c1.erase(std::unique(c1.begin(), c1.end()), c1.end());
      std::sort(c2.begin(), c2.end());
      c2.erase(std::unique(c2.begin(), c2.end()), c2.end());
      for (std::int64_t lo1 : c1) {
        for (std::int64_t lo2 : c2) {
          std::int64_t cnt = 0;
          for (const auto& [X, Y] : pts) {
            if (X >= lo1 && X <= lo1 + span && Y >= lo2 && Y <= lo2 + span) ++cnt;
          }
          const std::int64_t x1 = -2 * N - lo1;
          const std::int64_t x2 = -2 * N - lo2;
          const Best cand{cnt, x1, x2, (z + h2(x1, x2)) / 2};
          if (cnt > 0 && (best.size == 0 || better(cand, best))) best = cand;
        }
      }
    }
    per_z[iz] = best;
    std::int64_t cur = global_best.load();
    while (best.size > cur && !global_best.compare_exchange_weak(cur, best.size)) {
    }
  });

  Best best;
  for (const Best& b : per_z) {
    if (b.size > 0 && (best.size == 0 || better(b, best))) best = b;
  }
  FiberReport rep;
  rep.N = N;
  rep.max_size = best.size;
  rep.xi_tilde = FreqPoint{best.x1, best.x2};
  rep.tau_tilde = best.tau;
  for (std::int64_t x = -N; x <= N; ++x) {
    for (std::int64_t y = -N; y <= N; ++y) {
      if (x == y || x == -y) ++rep.degenerate_size;
    }
  }
  return rep;
}

double level_set_measure(const SpectralField& u0, double lambda, const SpaceTimeGrid& grid) {
  if (!(lambda > 0.0)) throw std::invalid_argument("level_set_measure: lambda must be positive");
  grid.validate();
  std::vector<std::size_t> hits(static_cast<std::size_t>(grid.nt), 0);
  std::size_t cells = 1;
  for (int j = 0; j < u0.spec().dim(); ++j) cells *= static_cast<std::size_t>(grid.nx);
  parallel_for(hits.size(), [&](std::size_t k) {
    const auto v = synthesize(u0, grid, static_cast<double>(k) / grid.nt);
    std::size_t c = 0;
    for (const Complex& z : v) c += std::abs(z) > lambda ? 1 : 0;
    hits[k] = c;
  });
  const std::size_t total = std::accumulate(hits.begin(), hits.end(), std::size_t{0});
  return static_cast<double>(total) / (static_cast<double>(cells) * grid.nt);
}

double level_set_measure(const SpectralField& u1, const SpectralField& u2, double lambda, const SpaceTimeGrid& grid) {
  if (!(lambda > 0.0)) throw std::invalid_argument("level_set_measure: lambda must be positive");
  grid.validate();
  std::vector<std::size_t> hits(static_cast<std::size_t>(grid.nt), 0);
  std::size_t cells = 1;
  for (int j = 0; j < u1.spec().dim(); ++j) cells *= static_cast<std::size_t>(grid.nx);
  parallel_for(hits.size(), [&](std::size_t k) {
    const double t = static_cast<double>(k) / grid.nt;
    const auto v1 = synthesize(u1, grid, t);
    const auto v2 = synthesize(u2, grid, t);
    std::size_t c = 0;
    for (std::size_t i = 0; i < v1.size(); ++i) c += std::abs(v1[i] * v2[i]) > lambda ? 1 : 0;
    hits[k] = c;
  });
  const std::size_t total = std::accumulate(hits.begin(), hits.end(), std::size_t{0});
  return static_cast<double>(total) / (static_cast<double>(cells) * grid.nt);
}

namespace {

void check_shells(const SpectralField& u1, const SpectralField& u2, const SpectralField& u3, const ShellTriple& s) {
  if (!(s.N1 >= s.N2 && s.N2 >= s.N3 && s.N3 >= 1)) {
    throw std::invalid_argument("trilinear: shells must satisfy N1 >= N2 >= N3 >= 1");
  }
  const SpectralField* fields[3] = {&u1, &u2, &u3};
  const std::int64_t Ns[3] = {s.N1, s.N2, s.N3};
  for (int i = 0; i < 3; ++i) {
    if (!(fields[i]->spec() == u1.spec())) throw std::invalid_argument("trilinear: fields on different tori");
    for (const auto& [xi, a] : fields[i]->amplitudes()) {
      if (!LowPass{Ns[i]}.contains(xi)) throw std::invalid_argument("trilinear: support exceeds the declared shell");
    }
  }
}

TrilinearReport finish(double norm, const SpectralField& u1, const SpectralField& u2, const SpectralField& u3,
                       const ShellTriple& s) {
  TrilinearReport r;
  r.norm = norm;
  r.bound = std::sqrt(static_cast<double>(s.N2)) * std::sqrt(static_cast<double>(s.N3)) * u1.l2_norm() *
            u2.l2_norm() * u3.l2_norm();
  r.ratio = r.bound > 0.0 ? r.norm / r.bound : 0.0;
  return r;
}

}  // namespace

TrilinearReport trilinear_l2(const SpectralField& u1, const SpectralField& u2, const SpectralField& u3,
                             const ShellTriple& shells, const SpaceTimeGrid& grid) {
  check_shells(u1, u2, u3, shells);
  grid.validate();
  const std::int64_t M = u1.max_abs_coord() + u2.max_abs_coord() + u3.max_abs_coord();
  if (static_cast<std::int64_t>(grid.nx) < 2 * M + 1) {
    throw AliasingError("trilinear_l2: nx=" + std::to_string(grid.nx) + " does not resolve the triple product (need " +
                        std::to_string(2 * M + 1) + ")");
  }
  std::vector<double> weights;
  const std::vector<double> nodes = time_nodes(u1.spec().integral(), grid.nt, weights);
  std::vector<double> vals(nodes.size());
  parallel_for(nodes.size(), [&](std::size_t k) {
    const auto v1 = synthesize(u1, grid, nodes[k]);
    const auto v2 = synthesize(u2, grid, nodes[k]);
    const auto v3 = synthesize(u3, grid, nodes[k]);
    double s = 0.0;
    for (std::size_t i = 0; i < v1.size(); ++i) s += std::norm(v1[i] * v2[i] * v3[i]);
    vals[k] = s / static_cast<double>(v1.size());
  });
  double s = 0.0;
  for (std::size_t k = 0; k < nodes.size(); ++k) s += weights[k] * vals[k];
  return finish(std::sqrt(s), u1, u2, u3, shells);
}

TrilinearReport trilinear_l2_exact(const SpectralField& u1, const SpectralField& u2, const SpectralField& u3,
                                   const ShellTriple& shells) {
  check_shells(u1, u2, u3, shells);
  require_square_plane(u1.spec(), "trilinear_l2_exact");
  if (u1.empty() || u2.empty() || u3.empty()) return finish(0.0, u1, u2, u3, shells);

  // v = u2 u3 as a space-time spectrum (xi, tau) -> coefficient, grouped by xi
  std::map<FreqPoint, std::map<std::int64_t, Complex>> v;
  for (const auto& [x2, a2] : u2.amplitudes()) {
    for (const auto& [x3, a3] : u3.amplitudes()) {
      v[x2 + x3][h2(x2[0], x2[1]) + h2(x3[0], x3[1])] += a2 * a3;
    }
  }
  struct Group {
    std::int64_t x, y;
    std::vector<std::pair<std::int64_t, Complex>> taus;
  };
  std::vector<Group> groups;
  std::int64_t vt_lo = 0, vt_hi = 0;
  Bounds vb;
  bool first = true;
  for (const auto& [xi, row] : v) {
    Group g{xi[0], xi[1], {}};
    for (const auto& [tau, c] : row) {
      if (c == Complex{}) continue;
      g.taus.emplace_back(tau, c);
      if (first) {
        vt_lo = vt_hi = tau;
        vb.lo[0] = vb.hi[0] = xi[0];
        vb.lo[1] = vb.hi[1] = xi[1];
        first = false;
      }
      vt_lo = std::min(vt_lo, tau);
      vt_hi = std::max(vt_hi, tau);
      for (int j = 0; j < 2; ++j) {
        vb.lo[j] = std::min(vb.lo[j], xi[j]);
        vb.hi[j] = std::max(vb.hi[j], xi[j]);
      }
    }
    if (!g.taus.empty()) groups.push_back(std::move(g));
  }
  if (groups.empty()) return finish(0.0, u1, u2, u3, shells);

  const Dense2 d1(u1);
  const Bounds& b1 = d1.bounds();
  const auto [h1lo, h1hi] = symbol_range(b1);
  Bounds out;
  for (int j = 0; j < 2; ++j) {
    out.lo[j] = b1.lo[j] + vb.lo[j];
    out.hi[j] = b1.hi[j] + vb.hi[j];
  }
  const std::int64_t wy = out.hi[1] - out.lo[1] + 1;
  const auto n_out = static_cast<std::size_t>((out.hi[0] - out.lo[0] + 1) * wy);
  std::vector<double> sums(n_out, 0.0);
  parallel_ranges(n_out, [&](std::size_t begin, std::size_t end) {
    TauBuffer buf(h1lo + vt_lo, h1hi + vt_hi);
    for (std::size_t o = begin; o < end; ++o) {
      const std::int64_t ox = out.lo[0] + static_cast<std::int64_t>(o) / wy;
      const std::int64_t oy = out.lo[1] + static_cast<std::int64_t>(o) % wy;
      for (const Group& g : groups) {
        const std::int64_t x = ox - g.x;
        const std::int64_t y = oy - g.y;
        const Complex a1 = d1.get(x, y);
        if (a1 == Complex{}) continue;
        const std::int64_t h = h2(x, y);
        for (const auto& [tau, c] : g.taus) buf.add(h + tau, a1 * c);
      }
      sums[o] = buf.flush().first;
    }
  });
  double s = 0.0;
  for (double x : sums) s += x;
  return finish(std::sqrt(s), u1, u2, u3, shells);
}

}  // namespace hypertorus
