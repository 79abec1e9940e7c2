#include "harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include "error.hpp"
#include "parallel.hpp"

namespace shc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_grid(const std::vector<double>& g, const char* name) {
  if (g.empty()) fail(ErrorCode::InvalidInput, std::string(name) + " grid is empty");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!std::isfinite(g[i])) fail(ErrorCode::InvalidInput, std::string(name) + " grid has a non-finite entry");
    if (i > 0 && !(g[i] > g[i - 1])) {
      fail(ErrorCode::InvalidInput, std::string(name) + " grid must be strictly increasing");
    }
  }
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double sigma0_or_inf(double alpha, double b) {
  return b == 0.0 ? std::numeric_limits<double>::infinity() : sigma0(alpha, b);
}

RegimeKind regime_of(double lambda1, double tol) {
  if (lambda1 < -tol) return RegimeKind::RandomEquilibrium;
  if (lambda1 > tol) return RegimeKind::RandomStrangeAttractor;
  return RegimeKind::Critical;
}

void mark_failed(SweepRow& row, ErrorCode code) {
  row.error = to_string(code);
  row.regime = "None";
  if (code == ErrorCode::DegenerateNoise) {
    row.regime = to_string(RegimeKind::RandomEquilibrium);
    row.lambda1 = 0.0;
    row.lambda2 = -row.alpha;
  } else {
    row.lambda1 = row.lambda2 = kNaN;
  }
}

SweepRow quadrature_row(const Parameters& p, const QuadratureSpec& q) {
  SweepRow row;
  row.alpha = p.alpha;
  row.b = p.b;
  row.sigma = p.sigma;
  row.method = to_string(Method::Quadrature);
  row.sigma0 = sigma0_or_inf(p.alpha, p.b);
  try {
    const LyapunovPair pair = lyapunov_pair(p, q);
    row.lambda1 = pair.lambda1;
    row.lambda2 = pair.lambda2;
    row.regime = to_string(regime_of(pair.lambda1, kClassifyTolerance));
  } catch (const Error& e) {
    mark_failed(row, e.code());
  }
  return row;
}

SweepRow monte_carlo_row(const Parameters& p, const PhaseCoupling& c, McConfig cfg,
                         std::uint64_t seed) {
  SweepRow row;
  row.alpha = p.alpha;
  row.b = p.b;
  row.sigma = p.sigma;
  row.method = to_string(Method::MonteCarlo);
  row.sigma0 = sigma0_or_inf(p.alpha, p.b);
  cfg.seed = seed;
  try {
    const McLyapunov mc = mc_lyapunov(p, c, cfg);
    row.lambda1 = mc.lambda1.value;
    row.lambda2 = mc.sum12.value - mc.lambda1.value;
    row.regime = to_string(regime_of(mc.lambda1.value, 3.0 * mc.lambda1.std_error));
  } catch (const Error& e) {
    mark_failed(row, e.code());
  }
  return row;
}

}  // namespace

const char* to_string(SweepMode m) noexcept {
  switch (m) {
    case SweepMode::Analytic: return "analytic";
    case SweepMode::MonteCarlo: return "montecarlo";
    case SweepMode::Both: return "both";
  }
  return "unknown";
}

void SweepSpec::validate() const {
  check_grid(alpha_grid, "alpha");
  check_grid(b_grid, "b");
  check_grid(sigma_grid, "sigma");
  if (!(alpha_grid.front() > 0.0)) fail(ErrorCode::InvalidInput, "alpha grid must be positive");
  if (sigma_grid.front() < 0.0) fail(ErrorCode::InvalidInput, "sigma grid must be nonnegative");
  quadrature.validate();
  if (mode != SweepMode::Analytic) {
    if (!(mc.dt > 0.0) || !(mc.T > 0.0) || mc.n_traj < 2) {
      fail(ErrorCode::InvalidInput, "Monte Carlo settings need dt > 0, T > 0, n_traj >= 2");
    }
  }
}

std::uint64_t row_seed(std::uint64_t seed, std::size_t ai, std::size_t bi, std::size_t si) {
  std::uint64_t h = splitmix(seed);
  h = splitmix(h ^ ai);
  h = splitmix(h ^ bi);
  return splitmix(h ^ si);
}

SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  const std::size_t na = spec.alpha_grid.size(), nb = spec.b_grid.size(),
                    ns = spec.sigma_grid.size();
  const bool analytic = spec.mode != SweepMode::MonteCarlo;
  const bool monte_carlo = spec.mode != SweepMode::Analytic;
  const std::size_t per_point = (analytic ? 1 : 0) + (monte_carlo ? 1 : 0);

  SweepResult out;
  out.rows.resize(na * nb * ns * per_point);
  parallel_for(na * nb * ns, [&](std::size_t idx) {
    const std::size_t ai = idx / (nb * ns), bi = (idx / ns) % nb, si = idx % ns;
    const Parameters p{spec.alpha_grid[ai], spec.b_grid[bi], spec.sigma_grid[si]};
    std::size_t slot = idx * per_point;
    if (analytic) out.rows[slot++] = quadrature_row(p, spec.quadrature);
    if (monte_carlo) {
      out.rows[slot] = monte_carlo_row(p, spec.coupling, spec.mc, row_seed(spec.seed, ai, bi, si));
    }
  });
  return out;
}

std::vector<SignViolation> check_sign_structure(const SweepResult& r, double zero_tol) {
  std::map<std::pair<double, double>, std::vector<std::pair<double, double>>> slices;
  const std::string quad = to_string(Method::Quadrature);
  for (const SweepRow& row : r.rows) {
    if (row.method != quad || !row.error.empty()) continue;
    slices[{row.alpha, row.b}].emplace_back(row.sigma, row.lambda1);
  }
  std::vector<SignViolation> bad;
  for (auto& [key, points] : slices) {
    std::sort(points.begin(), points.end());
    std::string pattern;
    for (const auto& [sigma, l1] : points) {
      pattern += std::abs(l1) <= zero_tol ? '0' : (l1 < 0.0 ? '-' : '+');
    }
    // (-)*0?(+)*
    std::size_t i = 0;
    while (i < pattern.size() && pattern[i] == '-') ++i;
    if (i < pattern.size() && pattern[i] == '0') ++i;
    while (i < pattern.size() && pattern[i] == '+') ++i;
    if (i != pattern.size()) bad.push_back({key.first, key.second, pattern});
  }
  return bad;
}

std::vector<CurvePoint> bifurcation_curve(const std::vector<double>& alpha_grid, double b) {
  if (b == 0.0 || !std::isfinite(b)) fail(ErrorCode::InvalidInput, "bifurcation curve needs b != 0");
  std::vector<CurvePoint> curve;
  curve.reserve(alpha_grid.size());
  for (double a : alpha_grid) {
    if (!(a > 0.0) || !std::isfinite(a)) fail(ErrorCode::InvalidInput, "alpha must be positive");
    curve.push_back({a, sigma0(a, b)});
  }
  return curve;
}

}  // namespace shc
