#include "estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "error.hpp"
#include "parallel.hpp"

namespace shc {

namespace {

constexpr double kGolden = 0.6180339887498949;
constexpr double kPlastic = 0.7548776662466927;

double frac(double x) { return x - std::floor(x); }

// Deterministic low-discrepancy start for trajectory i.
struct Start {
  double theta;
  double angle;  // tangent direction in [0, pi)
};

Start start_for(std::size_t i) {
  return {frac(0.5 + kGolden * static_cast<double>(i)),
          std::numbers::pi * frac(0.5 + kPlastic * static_cast<double>(i))};
}

long long steps_for(double t, double dt) { return std::llround(t / dt); }

// Unit roundoff per tangent step, accumulated over the averaging window.
double step_roundoff(long long steps, double window) {
  return std::numeric_limits<double>::epsilon() * static_cast<double>(steps) / window;
}

}  // namespace

Estimate Estimate::from_samples(const std::vector<double>& samples, double horizon, double dt,
                                double rounding) {
  Estimate e;
  e.n_samples = static_cast<long>(samples.size());
  e.horizon = horizon;
  e.dt = dt;
  if (samples.empty()) return e;
  e.value = std::accumulate(samples.begin(), samples.end(), 0.0) / samples.size();
  if (samples.size() >= 2) {
    double ss = 0.0;
    for (double x : samples) ss += (x - e.value) * (x - e.value);
    e.std_error = std::sqrt(ss / (samples.size() - 1) / samples.size());
  }
  // Samples cannot resolve below their last place or the accumulated roundoff.
  double scale = 0.0;
  for (double x : samples) scale = std::max(scale, std::abs(x));
  const double floor = std::numeric_limits<double>::epsilon() * scale;
  e.std_error = std::hypot(e.std_error, floor, rounding);
  e.insufficient_horizon = e.value != 0.0 && e.std_error > std::abs(e.value);
  return e;
}

void McConfig::validate(const Parameters& p) const {
  p.validate();
  if (!(dt > 0.0) || !std::isfinite(dt)) fail(ErrorCode::InvalidInput, "dt must be positive");
  if (!(T >= 100.0 / p.alpha)) {
    fail(ErrorCode::InvalidInput, "horizon T must be at least 100/alpha");
  }
  if (n_traj < 2) fail(ErrorCode::InvalidInput, "n_traj must be at least 2");
  if (T / dt > 1e11) fail(ErrorCode::InvalidInput, "too many steps");
}

double McConfig::burn_in(const Parameters& p) const { return std::max(0.1 * T, 20.0 / p.alpha); }

McLyapunov mc_lyapunov(const Parameters& p, const PhaseCoupling& c, const McConfig& cfg) {
  cfg.validate(p);
  const long long n_burn = steps_for(cfg.burn_in(p), cfg.dt);
  const long long n_total = steps_for(cfg.T, cfg.dt);
  const double window = (n_total - n_burn) * cfg.dt;
  const int m = c.m();

  std::vector<double> top(cfg.n_traj), area(cfg.n_traj);
  parallel_for(cfg.n_traj, [&](std::size_t i) {
    NoiseStream noise(cfg.seed, i, cfg.dt);
    const Start st = start_for(i);
    const Vec2 v{std::cos(st.angle), std::sin(st.angle)};
    CylinderState s = CylinderState::with_tangent(0.0, st.theta, v, Vec2{-v[1], v[0]});
    std::array<double, kMaxDrivers> dW{};
    const std::span<const double> inc(dW.data(), m);
    for (long long k = 0; k < n_total; ++k) {
      if (k == n_burn) {
        renormalize(s);
        s.reset_accumulators();
      }
      noise.fill(std::span(dW.data(), m));
      step_system(s, p, c, inc, cfg.dt);
    }
    renormalize(s);
    top[i] = s.total_log_norm() / window;
    area[i] = s.total_area_log() / window;
  });
  const double rounding = step_roundoff(n_total - n_burn, window);
  return {Estimate::from_samples(top, window, cfg.dt, rounding),
          Estimate::from_samples(area, window, cfg.dt, rounding)};
}

Estimate fk_time_average(const Parameters& p, const PhaseCoupling& c, const McConfig& cfg) {
  cfg.validate(p);
  const long long n_burn = steps_for(cfg.burn_in(p), cfg.dt);
  const long long n_total = steps_for(cfg.T, cfg.dt);
  const double window = (n_total - n_burn) * cfg.dt;
  const int m = c.m();

  std::vector<double> averages(cfg.n_traj);
  parallel_for(cfg.n_traj, [&](std::size_t i) {
    NoiseStream noise(cfg.seed, i, cfg.dt);
    const Start st = start_for(i);
    CylinderState s = CylinderState::point(0.0, st.theta);
    double phi = st.angle;
    double q_prev = q_integrand(phi, p);
    double integral = 0.0;
    std::array<double, kMaxDrivers> dW{};
    const std::span<const double> inc(dW.data(), m);
    for (long long k = 0; k < n_total; ++k) {
      noise.fill(std::span(dW.data(), m));
      const double theta_mid = predictor_midpoint(s, p, cfg.dt);
      step_system(s, p, c, inc, cfg.dt);
      phi = step_phi(phi, theta_mid, p, c, inc, cfg.dt);
      const double q = q_integrand(phi, p);
      if (k >= n_burn) integral += 0.5 * (q_prev + q) * cfg.dt;
      q_prev = q;
    }
    averages[i] = integral / window;
  });
  return Estimate::from_samples(averages, window, cfg.dt);
}

Estimate mc_reduced_lyapunov(const Parameters& p, ReducedCoordinates coords,
                             const McConfig& cfg) {
  cfg.validate(p);
  const long long n_burn = steps_for(cfg.burn_in(p), cfg.dt);
  const long long n_total = steps_for(cfg.T, cfg.dt);
  const double window = (n_total - n_burn) * cfg.dt;
  const int interval = StepConfig{}.renorm_interval;

  std::vector<double> rates(cfg.n_traj);
  parallel_for(cfg.n_traj, [&](std::size_t i) {
    NoiseStream noise(cfg.seed, i, cfg.dt);
    const double angle = start_for(i).angle;
    Vec2 v{std::cos(angle), std::sin(angle)};
    double log_norm = 0.0;
    for (long long k = 0; k < n_total; ++k) {
      if (k == n_burn) log_norm = 0.0;
      v = step_reduced_linear(v, p, noise.next(), cfg.dt, coords);
      if ((k + 1) % interval == 0 || k + 1 == n_burn) {
        const double nv = std::hypot(v[0], v[1]);
        log_norm += std::log(nv);
        v = {v[0] / nv, v[1] / nv};
      }
    }
    rates[i] = (log_norm + std::log(std::hypot(v[0], v[1]))) / window;
  });
  return Estimate::from_samples(rates, window, cfg.dt,
                                step_roundoff(n_total - n_burn, window));
}

}  // namespace shc
