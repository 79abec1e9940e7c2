// Acceptance gate. Uses only the public C interface (plus the CLI binary for
// the c0 command); prints one PASS/FAIL line per criterion.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "shearchaos/shearchaos.h"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[1024];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int failures = 0;
std::array<std::string, 13> lines;

// Lines are printed in criterion order once everything has run; progress goes
// to stderr.
void report(int id, bool ok, const std::string& detail) {
  lines[id] = std::string(ok ? "PASS" : "FAIL") + fmt(" [%2d] ", id) + detail;
  std::fprintf(stderr, "criterion %d done\n", id);
  if (!ok) ++failures;
}

bool ok(shc_status s) {
  if (s != SHC_OK) std::printf("  error: %s: %s\n", shc_status_name(s), shc_last_error());
  return s == SHC_OK;
}

double lambda1(shc_params p, bool& good) {
  double l1 = NAN, l2 = NAN;
  good &= ok(shc_lyapunov_pair(p, 0, &l1, &l2, nullptr));
  return l1;
}

double combined(const shc_estimate& a, const shc_estimate& b) {
  return std::hypot(a.std_error, b.std_error);
}

constexpr double kAlphas[] = {0.5, 1, 2, 5};
constexpr double kBs[] = {-5, -2, -0.5, 0.5, 2, 5};

shc_mc_config gate_config(std::uint64_t seed) {
  shc_mc_config c = shc_mc_config_default();
  c.T = 2000;
  c.dt = 1e-3;
  c.n_traj = 64;
  c.seed = seed;
  return c;
}

struct McRun {
  shc_params p;
  const char* coupling;
  shc_estimate l1, sum12;
};

const char* coupling_name(shc_coupling c) {
  return c == SHC_COUPLING_TENT ? "tent" : (c == SHC_COUPLING_TRIG ? "trig" : "sine4");
}
std::vector<McRun> mc_runs;

bool run_mc(shc_params p, shc_coupling c, std::uint64_t seed, shc_estimate& l1) {
  const shc_mc_config cfg = gate_config(seed);
  McRun r{p, coupling_name(c), {}, {}};
  if (!ok(shc_mc_lyapunov(p, c, &cfg, &r.l1, &r.sum12))) return false;
  l1 = r.l1;
  mc_runs.push_back(r);
  return true;
}

// 1: c0 via the CLI command and the library.
void criterion_c0(const char* cli) {
  bool good = true;
  double lib = NAN;
  auto t0 = Clock::now();
  good &= ok(shc_c0(1e-10, &lib));
  const double t_lib = seconds_since(t0);
  double via_cli = NAN, t_cli = 0.0;
  if (cli) {
    const std::string cmd = std::string("\"") + cli + "\" c0";
    t0 = Clock::now();
    FILE* f = popen(cmd.c_str(), "r");
    if (f) {
      // CSV: header line, then c0,seconds
      if (std::fscanf(f, "%*[^\n]\n%lf", &via_cli) != 1) via_cli = NAN;
      good &= pclose(f) == 0;
    } else {
      good = false;
    }
    t_cli = seconds_since(t0);
  }
  good &= std::abs(lib - 0.2823) <= 5e-4 && t_lib < 1.0;
  if (cli) good &= std::abs(via_cli - 0.2823) <= 5e-4 && t_cli < 1.0;
  report(1, good,
         fmt("c0: library %.12f (%.3f s), CLI %.12f (%.3f s); need 0.2823 +- 5e-4, < 1 s", lib,
             t_lib, via_cli, t_cli));
}

// 2, 3: residual at sigma0 and sign pattern around it.
void criteria_sigma0() {
  bool good2 = true, good3 = true;
  double worst = 0.0;
  const auto t0 = Clock::now();
  for (double a : kAlphas) {
    for (double b : kBs) {
      double s0 = NAN;
      good2 &= ok(shc_sigma0(a, b, &s0));
      worst = std::max(worst, std::abs(lambda1({a, b, s0}, good2)));
    }
  }
  const double t2 = seconds_since(t0);
  good2 &= worst < 1e-7 && t2 < 10.0;
  report(2, good2,
         fmt("max |lambda1(sigma0)| = %.3e over 24 (alpha, b) (need < 1e-7), %.2f s (need < 10 s)",
             worst, t2));

  int mismatches = 0;
  const double factors[] = {0.5, 0.9, 1.1, 2.0};
  const int expected[] = {-1, -1, 1, 1};
  for (double a : kAlphas) {
    for (double b : kBs) {
      double s0 = NAN;
      good3 &= ok(shc_sigma0(a, b, &s0));
      for (int k = 0; k < 4; ++k) {
        const double l = lambda1({a, b, factors[k] * s0}, good3);
        const int sign = l > 0 ? 1 : (l < 0 ? -1 : 0);
        if (sign != expected[k]) {
          ++mismatches;
          std::printf("  sign mismatch at alpha=%g b=%g sigma=%g*sigma0: %.3e\n", a, b, factors[k], l);
        }
      }
    }
  }
  good3 &= mismatches == 0;
  report(3, good3, fmt("sign pattern (-,-,+,+) at {0.5,0.9,1.1,2} sigma0: %d of 96 mismatched", mismatches));
}

// 4: trace identity at random parameter points.
void criterion_trace() {
  std::mt19937_64 rng(20240601);
  auto log_uniform = [&](double lo, double hi) {
    return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
  };
  bool good = true;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const shc_params p{log_uniform(0.1, 10), (rng() & 1 ? 1.0 : -1.0) * log_uniform(0.1, 10),
                       log_uniform(0.01, 10)};
    double l1 = NAN, l2 = NAN;
    good &= ok(shc_lyapunov_pair(p, 0, &l1, &l2, nullptr));
    worst = std::max(worst, std::abs(l1 + l2 + p.alpha));
  }
  good &= worst <= 1e-9;
  report(4, good, fmt("max |lambda1 + lambda2 + alpha| = %.3e at 20 random points (need <= 1e-9)", worst));
}

// 5: dependence on |b sigma| only.
void criterion_invariance() {
  bool good = true;
  const double a = lambda1({1, 2, 3}, good), b = lambda1({1, 6, 1}, good), c = lambda1({1, 3, 2}, good);
  const double spread = std::max({std::abs(a - b), std::abs(a - c), std::abs(b - c)});
  good &= spread <= 1e-10;
  report(5, good, fmt("lambda1(1,2,3) = %.15f, (1,6,1) = %.15f, (1,3,2) = %.15f; spread %.2e (need <= 1e-10)",
                      a, b, c, spread));
}

// 6: scaling law.
void criterion_scaling() {
  bool good = true;
  const double base = lambda1({1, 2, 1}, good);
  std::string detail = fmt("lambda1(1,2,1) = %.15f;", base);
  for (double k : {0.5, 2.0, 10.0}) {
    const double scaled = lambda1({k, 2 * k, std::sqrt(k)}, good);
    const double dev = std::abs(scaled - k * base);
    good &= dev <= 1e-9 * k;
    detail += fmt(" k=%g dev %.2e (need <= %.0e)", k, dev, 1e-9 * k);
  }
  report(6, good, detail);
}

// 7: Monte Carlo, time average, Fokker-Planck against quadrature.
void criterion_triangle(shc_estimate& mc_tent_2) {
  bool good = true;
  std::string detail;
  for (double sigma : {0.5, 2.0}) {
    const shc_params p{1, 2, sigma};
    const auto t0 = Clock::now();
    const double exact = lambda1(p, good);
    shc_estimate mc{}, fk{};
    good &= run_mc(p, SHC_COUPLING_TENT, 1, mc);
    const shc_mc_config cfg = gate_config(2);
    good &= ok(shc_fk_time_average(p, SHC_COUPLING_TENT, &cfg, &fk));
    shc_density* d = nullptr;
    double fp = NAN;
    if (ok(shc_density_solve(p, 2000, &d))) {
      good &= ok(shc_density_lambda1(d, &fp));
      shc_density_free(d);
    } else {
      good = false;
    }
    const double z_mc = std::abs(mc.value - exact) / mc.std_error;
    const double z_fk = std::abs(fk.value - exact) / fk.std_error;
    const double z_pair = std::abs(mc.value - fk.value) / combined(mc, fk);
    const double rel_fp = std::abs(fp - exact) / std::abs(exact);
    good &= z_mc <= 3 && z_fk <= 3 && z_pair <= 3 && rel_fp <= 1e-3;
    if (sigma == 2.0) mc_tent_2 = mc;
    detail += fmt(
        "\n       sigma=%g: exact %.6f, MC %.6f +- %.1e (%.2f SE), FK %.6f +- %.1e (%.2f SE), "
        "MC-FK %.2f SE, FP %.6f (rel %.1e, need <= 1e-3); %.0f s",
        sigma, exact, mc.value, mc.std_error, z_mc, fk.value, fk.std_error, z_fk, z_pair, fp, rel_fp,
        seconds_since(t0));
  }
  report(7, good, "estimators vs quadrature within 3 SE / FP 1e-3 relative:" + detail);
}

// 8: degenerate limits, and the trace of every Monte Carlo run so far.
void criterion_degenerate() {
  bool good = true;
  std::string detail;
  for (const shc_params p : {shc_params{1, 2, 0}, shc_params{1, 0, 1}}) {
    shc_estimate l1{};
    good &= run_mc(p, SHC_COUPLING_TENT, 3, l1);
    const bool in = std::abs(l1.value) <= 3 * l1.std_error;
    good &= in;
    detail += fmt("\n       (alpha,b,sigma)=(%g,%g,%g): lambda1 = %.3e +- %.1e", p.alpha, p.b, p.sigma,
                  l1.value, l1.std_error);
  }
  for (const McRun& r : mc_runs) {
    const double dev = std::abs(r.sum12.value + r.p.alpha);
    good &= dev <= 3 * r.sum12.std_error;
    detail += fmt("\n       sum at (%g,%g,%g) %s: %.15f +- %.1e (%.2f SE)", r.p.alpha, r.p.b,
                  r.p.sigma, r.coupling, r.sum12.value, r.sum12.std_error, dev / r.sum12.std_error);
  }
  report(8, good, "degenerate limits and lambda1 + lambda2 = -alpha within 3 SE:" + detail);
}

// 9: small-noise limit.
void criterion_small_noise() {
  bool good = true;
  std::string detail;
  double prev = -INFINITY;
  for (double s : {0.1, 0.05, 0.01}) {
    const double l = lambda1({1, 2, s}, good);
    good &= l < 0 && std::abs(l) < std::abs(prev);
    prev = l;
    detail += fmt(" sigma=%g: %.6e", s, l);
  }
  report(9, good, "negative and shrinking as sigma decreases:" + detail);
}

// 10: coupling independence.
void criterion_couplings(const shc_estimate& tent) {
  bool good = true;
  shc_estimate trig{}, sine{};
  good &= run_mc({1, 2, 2}, SHC_COUPLING_TRIG, 4, trig);
  good &= run_mc({1, 2, 2}, SHC_COUPLING_SINE4, 5, sine);
  const double z1 = std::abs(tent.value - trig.value) / combined(tent, trig);
  const double z2 = std::abs(tent.value - sine.value) / combined(tent, sine);
  const double z3 = std::abs(trig.value - sine.value) / combined(trig, sine);
  good &= z1 <= 3 && z2 <= 3 && z3 <= 3;
  report(10, good,
         fmt("tent %.5f, trig %.5f, sine4 %.5f; pairwise %.2f, %.2f, %.2f SE (need <= 3)", tent.value,
             trig.value, sine.value, z1, z2, z3));
}

// 11: pullback cloud collapse and spread.
void criterion_pullback() {
  bool good = true;
  int collapsed = 0, spread = 0;
  std::string d_calm, d_wild;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    for (double sigma : {0.5, 2.0}) {
      shc_pullback* r = nullptr;
      if (!ok(shc_pullback_run({1, 2, sigma}, SHC_COUPLING_TENT, 50, 200, 1e-3, seed, 1.0, &r))) {
        good = false;
        continue;
      }
      const double d = shc_pullback_final_diameter(r);
      shc_pullback_free(r);
      if (sigma == 0.5) {
        collapsed += d < 1e-4;
        d_calm += fmt(" %.1e", d);
      } else {
        spread += d > 0.1;
        d_wild += fmt(" %.2f", d);
      }
    }
  }
  good &= collapsed >= 9 && spread >= 9;
  report(11, good,
         fmt("sigma=0.5: %d/10 below 1e-4 [%s ]; sigma=2: %d/10 above 0.1 [%s ] (need >= 9 each)",
             collapsed, d_calm.c_str(), spread, d_wild.c_str()));
}

// 12: zero-level set of the sweep against sigma0(alpha, 2).
void criterion_sweep() {
  std::vector<double> alpha, sigma;
  for (int k = 0; k <= 55; ++k) alpha.push_back(0.25 + 0.05 * k);
  for (int k = 0; k <= 58; ++k) sigma.push_back(0.1 + 0.05 * k);
  const double b = 2.0, da = 0.05, ds = 0.05;
  shc_sweep_spec spec{};
  spec.alpha = alpha.data();
  spec.n_alpha = alpha.size();
  spec.b = &b;
  spec.n_b = 1;
  spec.sigma = sigma.data();
  spec.n_sigma = sigma.size();
  spec.mode = SHC_SWEEP_ANALYTIC;
  spec.seed = 1;
  spec.mc = shc_mc_config_default();
  spec.coupling = SHC_COUPLING_TENT;
  const auto t0 = Clock::now();
  shc_sweep* s = nullptr;
  if (!ok(shc_sweep_run(&spec, &s))) {
    report(12, false, "sweep failed");
    return;
  }
  const double elapsed = seconds_since(t0);
  const std::size_t na = alpha.size(), ns = sigma.size();
  std::vector<double> l1(na * ns);
  bool good = shc_sweep_size(s) == na * ns;
  for (std::size_t i = 0; good && i < na * ns; ++i) {
    shc_sweep_row row;
    good &= ok(shc_sweep_get_row(s, i, &row)) && row.error[0] == '\0';
    l1[i] = row.lambda1;
  }
  shc_sweep_free(s);
  auto at = [&](std::size_t i, std::size_t j) { return l1[i * ns + j]; };
  auto s0 = [&](double a) {
    double v = NAN;
    shc_sigma0(a, b, &v);
    return v;
  };

  // Every sign change along sigma must sit within two cells of the curve, and
  // every column whose curve lies inside the grid must have one.
  double worst_sigma = 0.0, worst_alpha = 0.0;
  int missing = 0, crossings = 0;
  for (std::size_t i = 0; i < na; ++i) {
    const double curve = s0(alpha[i]);
    bool found = false;
    for (std::size_t j = 0; j + 1 < ns; ++j) {
      if ((at(i, j) > 0) != (at(i, j + 1) > 0)) {
        found = true;
        ++crossings;
        const double mid = 0.5 * (sigma[j] + sigma[j + 1]);
        worst_sigma = std::max(worst_sigma, std::abs(mid - curve) / ds);
      }
    }
    if (!found && curve > sigma.front() + 2 * ds && curve < sigma.back() - 2 * ds) ++missing;
  }
  // Sign changes along alpha: distance in alpha to where the curve meets that sigma.
  for (std::size_t j = 0; j < ns; ++j) {
    const double a_star = std::pow(sigma[j] / s0(1.0), 2.0 / 3.0);
    for (std::size_t i = 0; i + 1 < na; ++i) {
      if ((at(i, j) > 0) != (at(i + 1, j) > 0)) {
        ++crossings;
        const double mid = 0.5 * (alpha[i] + alpha[i + 1]);
        worst_alpha = std::max(worst_alpha, std::abs(mid - a_star) / da);
      }
    }
  }
  good &= missing == 0 && crossings > 0 && worst_sigma <= 2 && worst_alpha <= 2 && elapsed < 60;
  report(12, good,
         fmt("%zux%zu sweep in %.2f s (need < 60 s); %d sign changes, farthest %.2f sigma cells and "
             "%.2f alpha cells from sigma0(alpha,2) (need <= 2), %d columns missing a crossing",
             na, ns, elapsed, crossings, worst_sigma, worst_alpha, missing));
}

}  // namespace

int main(int argc, char** argv) {
  const char* cli = argc > 1 ? argv[1] : nullptr;
  std::printf("acceptance gate, library %s\n", shc_version());
  criterion_c0(cli);
  criteria_sigma0();
  criterion_trace();
  criterion_invariance();
  criterion_scaling();
  shc_estimate mc_tent_2{};
  criterion_triangle(mc_tent_2);
  criterion_couplings(mc_tent_2);
  criterion_degenerate();
  criterion_small_noise();
  criterion_pullback();
  criterion_sweep();
  for (int i = 1; i <= 12; ++i) std::printf("%s\n", lines[i].c_str());
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
