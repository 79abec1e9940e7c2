#include <cmath>

#include "error.hpp"
#include "estimators.hpp"

namespace shc {

double cloud_diameter(const std::vector<CloudPoint>& cloud) {
  double best = 0.0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (std::size_t j = i + 1; j < cloud.size(); ++j) {
      best = std::max(best, cylinder_distance(cloud[i].y, cloud[i].theta, cloud[j].y,
                                              cloud[j].theta));
    }
  }
  return best;
}

PullbackResult pullback_sample(const Parameters& p, const PhaseCoupling& c, int n_points,
                               double T, double dt, std::uint64_t seed,
                               double sample_interval) {
  p.validate();
  if (n_points < 1) fail(ErrorCode::InvalidInput, "pullback cloud needs at least one point");
  if (!(T > 0.0) || !(dt > 0.0) || !(sample_interval > 0.0)) {
    fail(ErrorCode::InvalidInput, "pullback needs T, dt, sample_interval > 0");
  }

  // y spread over two stationary standard deviations of the amplitude.
  const double spread = 2.0 * p.sigma / std::sqrt(2.0 * p.alpha);
  std::vector<CylinderState> states;
  states.reserve(n_points);
  for (int k = 0; k < n_points; ++k) {
    const double y = n_points == 1 ? 0.0 : -spread + 2.0 * spread * k / (n_points - 1);
    const double theta = 0.5 + 0.6180339887498949 * k;
    states.push_back(CylinderState::point(y, theta));
  }

  PullbackResult out;
  auto snapshot = [&](double t) {
    out.cloud.clear();
    for (const auto& s : states) out.cloud.push_back({s.y, s.theta});
    out.times.push_back(t);
    out.diameters.push_back(cloud_diameter(out.cloud));
  };

  const long long n_steps = std::llround(T / dt);
  const long long every = std::max<long long>(1, std::llround(sample_interval / dt));
  NoiseStream noise(seed, 0, dt);
  std::array<double, kMaxDrivers> dW{};
  const std::span<const double> inc(dW.data(), c.m());
  snapshot(0.0);
  for (long long k = 1; k <= n_steps; ++k) {
    noise.fill(std::span(dW.data(), c.m()));
    for (auto& s : states) step_system(s, p, c, inc, dt);
    if (k % every == 0 || k == n_steps) snapshot(k * dt);
  }
  return out;
}

}  // namespace shc
