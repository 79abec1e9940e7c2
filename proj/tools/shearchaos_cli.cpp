// shearchaos: command line front end over the C API.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shearchaos/shearchaos.h"

namespace {

struct Options {
  double alpha = 1.0;
  double b = 2.0;
  double sigma = 1.0;
  std::string coupling = "tent";
  double dt = 1e-3;
  double T = 2000.0;
  int n_traj = 64;
  std::uint64_t seed = 1;
  double tol = 1e-10;
  std::string out = "-";
  std::string format = "csv";
  std::string alpha_grid = "0.25:3:0.05";
  std::string b_grid = "2";
  std::string sigma_grid = "0.1:3:0.05";
  std::string mode = "analytic";
  std::string from_json;
  int grid_n = 2000;
  int n_points = 50;
  double sample_interval = 1.0;
  std::string trajectory;
  int sample_every = 100;
};

// Exit codes: 0 ok, 1 invalid input, 2 numerical failure, 3 I/O.
int exit_code(shc_status s) {
  switch (s) {
    case SHC_OK: return 0;
    case SHC_INVALID_INPUT:
    case SHC_DEGENERATE_NOISE: return 1;
    case SHC_IO_FAILURE: return 3;
    default: return 2;
  }
}

struct Failure {
  shc_status status;
};

void check(shc_status s) {
  if (s != SHC_OK) throw Failure{s};
}

std::string num(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc{} ? std::string(buf, end) : std::string("nan");
}

// "a,b,c" or "start:stop:step" (stop included up to rounding).
std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> out;
  auto to_double = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw CLI::ValidationError("grid", "cannot parse '" + s + "' in '" + text + "'");
    }
  };
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw CLI::ValidationError("grid", "range must be start:stop:step");
    const double a = to_double(parts[0]), z = to_double(parts[1]), h = to_double(parts[2]);
    if (!(h > 0.0) || !(z >= a)) throw CLI::ValidationError("grid", "range needs step > 0 and stop >= start");
    const long n = std::lround(std::floor((z - a) / h + 1e-9));
    for (long k = 0; k <= n; ++k) out.push_back(a + static_cast<double>(k) * h);
  } else {
    std::stringstream ss(text);
    for (std::string p; std::getline(ss, p, ',');) out.push_back(to_double(p));
  }
  return out;
}

shc_coupling coupling_of(const std::string& name) {
  if (name == "tent") return SHC_COUPLING_TENT;
  if (name == "trig") return SHC_COUPLING_TRIG;
  return SHC_COUPLING_SINE4;
}

shc_format format_of(const std::string& name) {
  if (name == "json") return SHC_FORMAT_JSON;
  if (name == "svg") return SHC_FORMAT_SVG;
  return SHC_FORMAT_CSV;
}

shc_mc_config mc_of(const Options& o) { return {o.T, o.dt, o.n_traj, o.seed}; }

// Small key/value records for the single-point commands.
void print_record(const Options& o, const std::vector<std::pair<std::string, std::string>>& kv,
                  const std::vector<bool>& quoted) {
  std::string text;
  if (o.format == "json") {
    text = "{";
    for (std::size_t i = 0; i < kv.size(); ++i) {
      text += (i ? ", \"" : "\"") + kv[i].first + "\": ";
      text += quoted[i] ? "\"" + kv[i].second + "\"" : kv[i].second;
    }
    text += "}\n";
  } else {
    for (std::size_t i = 0; i < kv.size(); ++i) text += (i ? "," : "") + kv[i].first;
    text += "\n";
    for (std::size_t i = 0; i < kv.size(); ++i) text += (i ? "," : "") + kv[i].second;
    text += "\n";
  }
  if (o.out == "-") {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::FILE* f = std::fopen(o.out.c_str(), "wb");
  if (!f || std::fputs(text.c_str(), f) < 0 || std::fclose(f) != 0) {
    std::fprintf(stderr, "error: cannot write '%s'\n", o.out.c_str());
    throw Failure{SHC_IO_FAILURE};
  }
}

std::string json_number(double x) {
  return std::isfinite(x) ? num(x) : "\"" + num(x) + "\"";
}

void run_lyapunov(const Options& o) {
  const shc_params p{o.alpha, o.b, o.sigma};
  double l1 = 0, l2 = 0, err = 0, s0 = 0;
  shc_regime regime{};
  check(shc_lyapunov_pair(p, o.tol, &l1, &l2, &err));
  check(shc_classify(p, 0.0, &regime, nullptr, &s0));
  print_record(o,
               {{"lambda1", num(l1)},
                {"lambda2", num(l2)},
                {"regime", shc_regime_name(regime)},
                {"sigma0", o.format == "json" ? json_number(s0) : num(s0)},
                {"error", num(err)}},
               {false, false, true, false, false});
}

void run_c0(const Options& o) {
  const auto t0 = std::chrono::steady_clock::now();
  double c0 = 0;
  check(shc_c0(o.tol, &c0));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  print_record(o, {{"c0", num(c0)}, {"seconds", num(secs)}}, {false, false});
}

void run_bifurcation(const Options& o) {
  const auto alpha = parse_grid(o.alpha_grid);
  check(shc_bifurcation_write(alpha.data(), alpha.size(), o.b, o.out.c_str(), format_of(o.format)));
}

void run_sweep(const Options& o) {
  shc_sweep* s = nullptr;
  if (!o.from_json.empty()) {
    check(shc_sweep_read_json(o.from_json.c_str(), &s));
  } else {
    const auto a = parse_grid(o.alpha_grid), b = parse_grid(o.b_grid), sg = parse_grid(o.sigma_grid);
    shc_sweep_spec spec{};
    spec.alpha = a.data();
    spec.n_alpha = a.size();
    spec.b = b.data();
    spec.n_b = b.size();
    spec.sigma = sg.data();
    spec.n_sigma = sg.size();
    spec.mode = o.mode == "montecarlo" ? SHC_SWEEP_MONTE_CARLO
                : o.mode == "both"     ? SHC_SWEEP_BOTH
                                       : SHC_SWEEP_ANALYTIC;
    spec.seed = o.seed;
    spec.mc = mc_of(o);
    spec.coupling = coupling_of(o.coupling);
    spec.tol = o.tol;
    check(shc_sweep_run(&spec, &s));
  }
  const shc_status st = shc_sweep_write(s, o.out.c_str(), format_of(o.format));
  size_t violations = 0;
  if (st == SHC_OK && shc_sweep_sign_violations(s, 0.0, &violations) == SHC_OK && violations > 0) {
    std::fprintf(stderr, "warning: %zu (alpha, b) slices break the sign pattern (-)*0?(+)*\n",
                 violations);
  }
  shc_sweep_free(s);
  check(st);
}

void run_simulate(const Options& o) {
  const shc_params p{o.alpha, o.b, o.sigma};
  const shc_mc_config cfg = mc_of(o);
  const shc_coupling c = coupling_of(o.coupling);
  if (!o.trajectory.empty()) {
    check(shc_simulate_trajectory(p, c, 0.0, 0.0, o.T, o.dt, o.sample_every, o.seed,
                                  o.trajectory.c_str()));
  }
  shc_estimate l1{}, sum{}, fk{};
  check(shc_mc_lyapunov(p, c, &cfg, &l1, &sum));
  check(shc_fk_time_average(p, c, &cfg, &fk));
  double exact = NAN, l2 = 0;
  if (shc_lyapunov_pair(p, o.tol, &exact, &l2, nullptr) != SHC_OK) exact = NAN;
  const bool json = o.format == "json";
  auto n = [&](double x) { return json ? json_number(x) : num(x); };
  print_record(o,
               {{"lambda1_mc", n(l1.value)},
                {"lambda1_mc_se", n(l1.std_error)},
                {"sum12_mc", n(sum.value)},
                {"sum12_mc_se", n(sum.std_error)},
                {"lambda1_fk", n(fk.value)},
                {"lambda1_fk_se", n(fk.std_error)},
                {"lambda1_quadrature", n(exact)},
                {"insufficient_horizon", l1.insufficient_horizon || fk.insufficient_horizon ? "true" : "false"}},
               std::vector<bool>(8, false));
}

void run_fp(const Options& o) {
  const shc_params p{o.alpha, o.b, o.sigma};
  shc_density* d = nullptr;
  check(shc_density_solve(p, o.grid_n, &d));
  double l1 = 0;
  shc_status st = shc_density_lambda1(d, &l1);
  if (st == SHC_OK) st = shc_density_write(d, o.out.c_str(), format_of(o.format));
  if (st == SHC_OK) std::fprintf(stderr, "lambda1 = %s  mass = %s\n", num(l1).c_str(), num(shc_density_mass(d)).c_str());
  shc_density_free(d);
  check(st);
}

void run_attractor(const Options& o) {
  const shc_params p{o.alpha, o.b, o.sigma};
  shc_pullback* r = nullptr;
  check(shc_pullback_run(p, coupling_of(o.coupling), o.n_points, o.T, o.dt, o.seed,
                         o.sample_interval, &r));
  const shc_status st = shc_pullback_write(r, o.out.c_str(), format_of(o.format));
  if (st == SHC_OK) std::fprintf(stderr, "final diameter = %s\n", num(shc_pullback_final_diameter(r)).c_str());
  shc_pullback_free(r);
  check(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lyapunov exponents and bifurcation diagnostics for shear-induced chaos"};
  app.set_config("--config", "", "flat key=value file; command-line flags take precedence");
  app.require_subcommand(1);
  Options o;

  app.add_option("--alpha", o.alpha, "dissipation alpha > 0")->capture_default_str();
  app.add_option("--b", o.b, "shear b")->capture_default_str();
  app.add_option("--sigma", o.sigma, "noise amplitude sigma >= 0")->capture_default_str();
  app.add_option("--coupling", o.coupling, "phase coupling")
      ->check(CLI::IsMember({"tent", "trig", "sine4"}))
      ->capture_default_str();
  app.add_option("--dt", o.dt, "time step")->capture_default_str();
  app.add_option("--T", o.T, "simulated time per trajectory")->capture_default_str();
  app.add_option("--n-traj", o.n_traj, "trajectories")->capture_default_str();
  app.add_option("--seed", o.seed, "random seed")->capture_default_str();
  app.add_option("--tol", o.tol, "quadrature tolerance")->capture_default_str();
  app.add_option("--out", o.out, "output path, - for stdout")->capture_default_str();
  app.add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"csv", "json", "svg"}))
      ->capture_default_str();

  auto* lyap = app.add_subcommand("lyapunov", "closed-form lambda1, lambda2, regime and sigma0");
  auto* c0 = app.add_subcommand("c0", "universal constant c0");
  auto* bif = app.add_subcommand("bifurcation", "sigma0(alpha, b) over an alpha grid");
  auto* sweep = app.add_subcommand("sweep", "grid of (alpha, b, sigma)");
  auto* sim = app.add_subcommand("simulate", "Monte Carlo and time-average estimators");
  auto* fp = app.add_subcommand("fp", "stationary density of the projective angle");
  auto* attr = app.add_subcommand("attractor", "pullback cloud diameter");
  for (auto* sub : {lyap, c0, bif, sweep, sim, fp, attr}) sub->fallthrough();

  for (auto* sub : {bif, sweep}) {
    sub->add_option("--alpha-grid", o.alpha_grid, "list a,b,c or range start:stop:step")
        ->capture_default_str();
  }
  sweep->add_option("--b-grid", o.b_grid, "list or range")->capture_default_str();
  sweep->add_option("--sigma-grid", o.sigma_grid, "list or range")->capture_default_str();
  sweep->add_option("--mode", o.mode, "methods per point")
      ->check(CLI::IsMember({"analytic", "montecarlo", "both"}))
      ->capture_default_str();
  sweep->add_option("--from-json", o.from_json, "re-emit a sweep saved as JSON")
      ->check(CLI::ExistingFile);
  sim->add_option("--trajectory", o.trajectory, "also dump one trajectory as CSV here");
  sim->add_option("--sample-every", o.sample_every, "steps between trajectory records")
      ->capture_default_str();
  fp->add_option("--n", o.grid_n, "grid cells on [0, pi]")->capture_default_str();
  attr->add_option("--n-points", o.n_points, "cloud size")->capture_default_str();
  attr->add_option("--sample-interval", o.sample_interval, "time between diameter samples")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*lyap) run_lyapunov(o);
    if (*c0) run_c0(o);
    if (*bif) run_bifurcation(o);
    if (*sweep) run_sweep(o);
    if (*sim) run_simulate(o);
    if (*fp) run_fp(o);
    if (*attr) run_attractor(o);
  } catch (const Failure& f) {
    const char* msg = shc_last_error();
    std::fprintf(stderr, "error: %s%s%s\n", shc_status_name(f.status), *msg ? ": " : "", msg);
    return exit_code(f.status);
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
