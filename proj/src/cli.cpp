#include "hypertorus/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hypertorus/arith.hpp"
#include "hypertorus/bilinear.hpp"
#include "hypertorus/errors.hpp"
#include "hypertorus/exponents.hpp"
#include "hypertorus/field_io.hpp"
#include "hypertorus/kernel.hpp"
#include "hypertorus/nls.hpp"

namespace hypertorus::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::int64_t> parse_list(const std::string& s) {
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    const long long v = std::stoll(item, &pos);
    if (pos != item.size()) throw std::invalid_argument("bad integer '" + item + "' in list");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty list '" + s + "'");
  return out;
}

std::vector<double> parse_real_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

// Parameters recorded for the manifest, in registration order of the options.
json collect_params(const CLI::App& app) {
  json p = json::object();
  for (const CLI::Option* opt : app.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "config") continue;
    const auto res = opt->results();
    if (!res.empty()) {
      p[name] = res.back();
    } else if (!opt->get_default_str().empty()) {
      p[name] = opt->get_default_str();
    }
  }
  return p;
}

class Run {
 public:
  Run(std::string command, const CLI::App& app, const std::string& out_dir, std::uint64_t seed,
      std::vector<std::string> outputs)
      : dir_(out_dir), outputs_(std::move(outputs)) {
    fs::create_directories(dir_);
    json m;
    m["command"] = std::move(command);
    m["params"] = collect_params(app);
    m["seed"] = seed;
    m["version"] = kVersion;
    m["timestamp"] = timestamp();
    m["outputs"] = outputs_;
    std::ofstream os(dir_ / "manifest.json");
    if (!os) throw std::runtime_error("cannot write manifest in " + dir_.string());
    os << m.dump(2) << '\n';
  }

  std::ofstream open(const std::string& name) const {
    std::ofstream os(dir_ / name);
    if (!os) throw std::runtime_error("cannot write " + (dir_ / name).string());
    return os;
  }
  fs::path path(const std::string& name) const { return dir_ / name; }

 private:
  fs::path dir_;
  std::vector<std::string> outputs_;
};

json growth_json(const GrowthReport& g) {
  json pairs = json::array();
  for (const auto& [N, v] : g.pairs) pairs.push_back({N, v});
  return {{"pairs", pairs}, {"slope", g.slope}, {"intercept", g.intercept}, {"residual", g.residual}};
}

BilinearKind parse_kind(const std::string& name, double alpha) {
  if (name == "conj" || name == "conj_product") return BilinearKind::conj_product();
  if (name == "product") return BilinearKind::product();
  if (name == "ds" || name == "sqrt_ds") {
    if (std::isnan(alpha)) throw CLI::ValidationError("--alpha", "ds kinds require --alpha");
    return name == "ds" ? BilinearKind::ds(alpha) : BilinearKind::sqrt_ds(alpha);
  }
  throw CLI::ValidationError("--kind", "unknown kind '" + name + "' (conj, product, ds, sqrt_ds)");
}

// --config FILE: a flat JSON object or a manifest with "params". Its entries
// become leading flags, so explicit flags given later take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::vector<std::string> injected;
  for (std::size_t i = 0; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      out.push_back(args[i]);
      continue;
    }
    std::ifstream is(path);
    if (!is) throw CLI::ValidationError("--config", "cannot open " + path);
    json cfg = json::parse(is);
    if (cfg.contains("params")) cfg = cfg["params"];
    for (auto it = cfg.begin(); it != cfg.end(); ++it) {
      std::string value;
      if (it->is_string()) {
        value = it->get<std::string>();
      } else if (it->is_array()) {
        for (const auto& e : *it) value += (value.empty() ? "" : ",") + (e.is_string() ? e.get<std::string>() : e.dump());
      } else {
        value = it->dump();
      }
      injected.push_back("--" + it.key());
      injected.push_back(value);
    }
  }
  // keep the subcommand name first
  if (!out.empty()) out.insert(out.begin() + 1, injected.begin(), injected.end());
  return out;
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Spectral laboratory for hyperbolic Schroedinger flows on tori"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  auto setup = [](CLI::App* sub) {
    sub->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    sub->add_option("--config", "JSON parameter file (flags override it)");
  };

  // strichartz
  struct {
    int d = 2;
    double p = 6.0;
    std::string family = "line";
    std::string N_list = "8,16,32,64";
    int nt_per_N2 = 4;
    std::string thetas;
    std::uint64_t seed = 0;
    std::string out;
  } st;
  auto* s_cmd = app.add_subcommand("strichartz", "L^p_{t,x} growth of free evolutions of data families");
  setup(s_cmd);
  s_cmd->add_option("--d", st.d, "dimension (even)")->capture_default_str();
  s_cmd->add_option("--p", st.p, "Lebesgue exponent")->capture_default_str();
  s_cmd->add_option("--family", st.family, "line | constant | random_phase")->capture_default_str();
  s_cmd->add_option("--N-list", st.N_list, "comma separated N values")->capture_default_str();
  s_cmd->add_option("--nt-per-N2", st.nt_per_N2, "time samples per N^2")->capture_default_str();
  s_cmd->add_option("--thetas", st.thetas, "comma separated weights (default all 1)");
  s_cmd->add_option("--seed", st.seed, "random seed")->capture_default_str();
  s_cmd->add_option("--out", st.out, "output directory")->required();

  // bilinear
  struct {
    std::string kind = "conj";
    double alpha = std::nan("");
    std::string N_list = "8,16,32,64";
    int trials = 20;
    bool offdiag = true;
    std::string data = "random";
    std::uint64_t seed = 0;
    std::string out;
  } bl;
  auto* b_cmd = app.add_subcommand("bilinear", "exact L^2_{t,x} norms of bilinear interactions");
  setup(b_cmd);
  b_cmd->add_option("--kind", bl.kind, "conj | product | ds | sqrt_ds")->capture_default_str();
  b_cmd->add_option("--alpha", bl.alpha, "DS parameter (required for ds kinds)");
  b_cmd->add_option("--N-list", bl.N_list, "comma separated N values")->capture_default_str();
  b_cmd->add_option("--trials", bl.trials, "random trials per N")->capture_default_str();
  b_cmd->add_option("--offdiag", bl.offdiag, "drop same-line pairs (true/false)")->capture_default_str();
  b_cmd->add_option("--data", bl.data, "random | line")->capture_default_str();
  b_cmd->add_option("--seed", bl.seed, "random seed")->capture_default_str();
  b_cmd->add_option("--out", bl.out, "output directory")->required();

  // count
  struct {
    std::string N_list = "4";
    std::string out;
  } ct;
  auto* c_cmd = app.add_subcommand("count", "largest nondegenerate resonance fibers");
  setup(c_cmd);
  c_cmd->add_option("--N,--N-list", ct.N_list, "comma separated N values")->capture_default_str();
  c_cmd->add_option("--out", ct.out, "output directory")->required();

  // solve
  struct {
    std::string kind = "power";
    int k = 1;
    int sign = 1;
    double sigma2 = 0.0;
    double alpha = 1.0;
    double gamma = 1.0;
    int d = 2;
    std::int64_t N = 4;
    double amplitude = 0.1;
    std::string data = "random";
    std::string input;
    double dt = 1e-3;
    double T = 1.0;
    int nx = 0;
    int record_every = 10;
    double s = 1.0;
    bool snapshots = false;
    std::uint64_t seed = 0;
    std::string out;
  } sv;
  auto* v_cmd = app.add_subcommand("solve", "split-step evolution of HNLS / DS");
  setup(v_cmd);
  v_cmd->add_option("--kind", sv.kind, "power | ds | nonlocal_ds")->capture_default_str();
  v_cmd->add_option("--k", sv.k, "power: |u|^{2k} u")->capture_default_str();
  v_cmd->add_option("--sign", sv.sign, "power: +1 or -1")->capture_default_str();
  v_cmd->add_option("--sigma2", sv.sigma2, "ds: local coefficient")->capture_default_str();
  v_cmd->add_option("--alpha", sv.alpha, "ds: multiplier parameter")->capture_default_str();
  v_cmd->add_option("--gamma", sv.gamma, "ds: coupling")->capture_default_str();
  v_cmd->add_option("--d", sv.d, "dimension")->capture_default_str();
  v_cmd->add_option("--N", sv.N, "initial data box [-N, N]^d")->capture_default_str();
  v_cmd->add_option("--amplitude", sv.amplitude, "initial L^2 norm")->capture_default_str();
  v_cmd->add_option("--data", sv.data, "random | zero | file")->capture_default_str();
  v_cmd->add_option("--input", sv.input, "field file for --data file");
  v_cmd->add_option("--dt", sv.dt, "time step")->capture_default_str();
  v_cmd->add_option("--T", sv.T, "final time")->capture_default_str();
  v_cmd->add_option("--nx", sv.nx, "grid points per axis (default: dealiased size)")->capture_default_str();
  v_cmd->add_option("--record-every", sv.record_every, "steps between trace rows")->capture_default_str();
  v_cmd->add_option("--s", sv.s, "Sobolev index of the trace")->capture_default_str();
  v_cmd->add_option("--snapshots", sv.snapshots, "write a field file per trace row")->capture_default_str();
  v_cmd->add_option("--seed", sv.seed, "random seed")->capture_default_str();
  v_cmd->add_option("--out", sv.out, "output directory")->required();

  // illposed
  struct {
    std::string which = "quintic-T2";
    std::string N_list;
    std::string out;
  } ip;
  auto* i_cmd = app.add_subcommand("illposed", "first-iterate norm inflation along null data");
  setup(i_cmd);
  i_cmd->add_option("--case", ip.which, "quintic-T2 | cubic-T4 | cubic-T2")->capture_default_str();
  i_cmd->add_option("--N-list", ip.N_list, "comma separated N values (default per case)");
  i_cmd->add_option("--out", ip.out, "output directory")->required();

  // weyl
  struct {
    std::string N_list = "64,128,256";
    int samples = 2000;
    std::string profile = "smooth";
    std::uint64_t seed = 0;
    std::string out;
  } wy;
  auto* w_cmd = app.add_subcommand("weyl", "normalized Weyl-sum kernel scan");
  setup(w_cmd);
  w_cmd->add_option("--N-list", wy.N_list, "comma separated N values")->capture_default_str();
  w_cmd->add_option("--samples", wy.samples, "random (t, x) samples")->capture_default_str();
  w_cmd->add_option("--profile", wy.profile, "smooth | flat")->capture_default_str();
  w_cmd->add_option("--seed", wy.seed, "random seed")->capture_default_str();
  w_cmd->add_option("--out", wy.out, "output directory")->required();

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*s_cmd) {
      const TorusSpec spec = st.thetas.empty() ? TorusSpec::square(st.d) : TorusSpec(st.d, parse_real_list(st.thetas));
      const FamilyTag tag = parse_family(st.family);
      const auto Ns = parse_list(st.N_list);
      Run run("strichartz", *s_cmd, st.out, st.seed, {"strichartz.csv", "growth.json"});
      auto csv = run.open("strichartz.csv");
      csv << "family,d,p,N,ratio,nt,nx,seed\n";
      std::vector<std::pair<double, double>> pairs;
      for (std::int64_t N : Ns) {
        const SpaceTimeGrid grid = default_grid(N, st.p, st.nt_per_N2);
        const double r = strichartz_trial(tag, spec, N, st.p, grid, st.seed);
        csv << family_name(tag) << ',' << st.d << ',' << num(st.p) << ',' << N << ',' << num(r) << ',' << grid.nt << ','
            << grid.nx << ',' << st.seed << '\n';
        pairs.emplace_back(static_cast<double>(N), r);
      }
      json rep = pairs.size() >= 3 ? growth_json(fit_growth(pairs)) : json{{"pairs", pairs}};
      rep["beta"] = beta_exponent(st.d, st.d / 2, st.p);
      run.open("growth.json") << rep.dump(2) << '\n';
      std::cout << "strichartz: wrote " << Ns.size() << " rows to " << run.path("strichartz.csv").string() << '\n';
    } else if (*b_cmd) {
      const BilinearKind kind = parse_kind(bl.kind, bl.alpha);
      if (bl.data != "random" && bl.data != "line") throw CLI::ValidationError("--data", "expected random or line");
      if (bl.trials < 1) throw CLI::ValidationError("--trials", "must be >= 1");
      const auto Ns = parse_list(bl.N_list);
      const TorusSpec spec = TorusSpec::square(2);
      Run run("bilinear", *b_cmd, bl.out, bl.seed, {"bilinear.csv", "growth.json"});
      auto csv = run.open("bilinear.csv");
      csv << "N,kind,norm,bound,ratio,abs_norm\n";
      std::vector<std::pair<double, double>> pairs;
      for (std::int64_t N : Ns) {
        const FreqBox box = FreqBox::centered(2, N);
        const ResonanceQuery q{kind, box, box, N};
        ResonanceNorm best;
        const int trials = bl.data == "line" ? 1 : bl.trials;
        for (int t = 0; t < trials; ++t) {
          const std::uint64_t s1 = bl.seed + 2 * static_cast<std::uint64_t>(t) + 1000003ULL * static_cast<std::uint64_t>(N);
          const SpectralField f1 = bl.data == "line" ? unit_line_field(spec, N) : random_unit_field(spec, box, s1);
          const SpectralField f2 = bl.data == "line" ? unit_line_field(spec, N) : random_unit_field(spec, box, s1 + 1);
          const ResonanceNorm r = resonance_sum_detailed(q, f1, f2, bl.offdiag);
          if (r.norm > best.norm || t == 0) best = r;
        }
        csv << N << ',' << bl.kind << ',' << num(best.norm) << ',' << num(1.0) << ',' << num(best.norm) << ','
            << num(best.abs_norm) << '\n';
        pairs.emplace_back(static_cast<double>(N), best.norm);
      }
      json rep = json{{"pairs", pairs}};
      bool positive = true;
      for (const auto& pr : pairs) positive = positive && pr.second > 0.0;
      if (pairs.size() >= 3 && positive) rep = growth_json(fit_growth(pairs));
      run.open("growth.json") << rep.dump(2) << '\n';
      std::cout << "bilinear: wrote " << Ns.size() << " rows\n";
    } else if (*c_cmd) {
      const auto Ns = parse_list(ct.N_list);
      Run run("count", *c_cmd, ct.out, 0, {"fibers.csv", "fibers.json"});
      auto csv = run.open("fibers.csv");
      csv << "N,max_size,xi1,xi2,tau,degenerate_size,log_ratio\n";
      json all = json::array();
      for (std::int64_t N : Ns) {
        const FiberReport r = resonance_fiber_max(N);
        const double lr = N > 1 ? std::log(static_cast<double>(r.max_size)) / std::log(static_cast<double>(N)) : 0.0;
        csv << N << ',' << r.max_size << ',' << r.xi_tilde[0] << ',' << r.xi_tilde[1] << ',' << r.tau_tilde << ','
            << r.degenerate_size << ',' << num(lr) << '\n';
        all.push_back({{"N", N},
                       {"max_size", r.max_size},
                       {"xi_tilde", {r.xi_tilde[0], r.xi_tilde[1]}},
                       {"tau_tilde", r.tau_tilde},
                       {"degenerate_size", r.degenerate_size},
                       {"log_ratio", lr}});
        std::cout << "N=" << N << " max fiber " << r.max_size << '\n';
      }
      run.open("fibers.json") << all.dump(2) << '\n';
    } else if (*v_cmd) {
      NonlinearityKind kind;
      if (sv.kind == "power") {
        kind = PowerNonlinearity{sv.k, sv.sign};
      } else if (sv.kind == "ds") {
        kind = DSNonlinearity{sv.sigma2, sv.alpha, sv.gamma};
      } else if (sv.kind == "nonlocal_ds") {
        kind = NonlocalDSNonlinearity{sv.alpha, sv.gamma / (1.0 + sv.alpha)};
      } else {
        throw CLI::ValidationError("--kind", "expected power, ds or nonlocal_ds");
      }
      validate(kind, sv.d);
      const TorusSpec spec = TorusSpec::square(sv.d);
      SpectralField u0(spec);
      if (sv.data == "random") {
        u0 = Complex(sv.amplitude) * random_unit_field(spec, FreqBox::centered(sv.d, sv.N), sv.seed);
      } else if (sv.data == "file") {
        if (sv.input.empty()) throw CLI::ValidationError("--input", "--data file needs --input");
        u0 = load_field(sv.input);
      } else if (sv.data != "zero") {
        throw CLI::ValidationError("--data", "expected random, zero or file");
      }
      SolverConfig cfg;
      cfg.dt = sv.dt;
      cfg.T_end = sv.T;
      cfg.record_every = sv.record_every;
      cfg.sobolev_s = sv.s;
      cfg.keep_snapshots = sv.snapshots;
      const std::int64_t reach = std::max<std::int64_t>(u0.max_abs_coord(), sv.N);
      cfg.grid.nx = sv.nx > 0 ? sv.nx : smooth_fft_size(static_cast<int>(2 * nonlinearity_degree(kind) * reach + 1));
      std::vector<std::string> outputs{"trace.csv", "final.jsonl"};
      Run run("solve", *v_cmd, sv.out, sv.seed, outputs);
      const EvolutionTrace tr = evolve(u0, kind, cfg);
      auto csv = run.open("trace.csv");
      csv << "t,mass,hs\n";
      for (std::size_t i = 0; i < tr.rows.size(); ++i) {
        csv << num(tr.rows[i].t) << ',' << num(tr.rows[i].mass) << ',' << num(tr.rows[i].sobolev) << '\n';
        if (sv.snapshots) save_field(run.path("snapshot_" + std::to_string(i) + ".jsonl").string(), tr.snapshots[i]);
      }
      save_field(run.path("final.jsonl").string(), tr.final_state);
      const double m0 = tr.rows.front().mass;
      const double m1 = tr.rows.back().mass;
      std::cout << "solve: " << tr.rows.size() << " trace rows, relative mass drift "
                << (m0 > 0 ? std::abs(m1 - m0) / m0 : 0.0) << '\n';
    } else if (*i_cmd) {
      int d = 2, k = 2;
      double s = 0.5;
      std::string default_list = "16,32,64,128,256,512,1024";
      if (ip.which == "quintic-T2") {
      } else if (ip.which == "cubic-T4") {
        d = 4;
        k = 1;
        s = 1.0;
        default_list = "16,64,256";
      } else if (ip.which == "cubic-T2") {
        k = 1;
      } else {
        throw CLI::ValidationError("--case", "expected quintic-T2, cubic-T4 or cubic-T2");
      }
      const auto Ns = parse_list(ip.N_list.empty() ? default_list : ip.N_list);
      Run run("illposed", *i_cmd, ip.out, 0, {"illposed.csv", "fit.json"});
      auto csv = run.open("illposed.csv");
      csv << "N,ratio,ratio_root_k,logN\n";
      std::vector<double> lx, ly;
      for (std::int64_t N : Ns) {
        const double r = illposedness_ratio(N, k, s, d);
        const double rk = std::pow(r, 1.0 / k);
        csv << N << ',' << num(r) << ',' << num(rk) << ',' << num(std::log(static_cast<double>(N))) << '\n';
        lx.push_back(std::log(static_cast<double>(N)));
        ly.push_back(rk);
      }
      json rep{{"case", ip.which}, {"d", d}, {"k", k}, {"s", s}};
      if (lx.size() >= 2) {
        const LinearFit f = fit_linear(lx, ly);
        rep["slope"] = f.slope;
        rep["intercept"] = f.intercept;
        rep["r_squared"] = f.r_squared;
      }
      run.open("fit.json") << rep.dump(2) << '\n';
      std::cout << "illposed: wrote " << Ns.size() << " rows\n";
    } else if (*w_cmd) {
      const auto Ns = parse_list(wy.N_list);
      BumpProfile psi;
      if (wy.profile == "flat") {
        psi = BumpProfile::flat();
      } else if (wy.profile != "smooth") {
        throw CLI::ValidationError("--profile", "expected smooth or flat");
      }
      Run run("weyl", *w_cmd, wy.out, wy.seed, {"weyl.csv"});
      const auto rows = weyl_constant_scan(Ns, wy.samples, wy.seed, psi);
      auto csv = run.open("weyl.csv");
      csv << "N,max_ratio,argmax_t,argmax_q\n";
      for (const WeylScanRow& r : rows) {
        csv << r.N << ',' << num(r.max_ratio) << ',' << num(r.argmax_t) << ',' << r.argmax_q << '\n';
      }
      std::cout << "weyl: wrote " << rows.size() << " rows\n";
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const ResolutionError& e) {
    std::cerr << "resolution refused: " << e.what() << '\n';
    return 3;
  } catch (const AliasingError& e) {
    std::cerr << "resolution refused: " << e.what() << '\n';
    return 3;
  } catch (const ExactnessUnavailable& e) {
    std::cerr << "resolution refused: " << e.what() << '\n';
    return 3;
  } catch (const NumericalAbort& e) {
    std::cerr << "numerical abort: " << e.what() << '\n';
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace hypertorus::cli
