#pragma once

#include <cstdint>
#include <vector>

#include "analytic.hpp"
#include "sde.hpp"

namespace shc {

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(n_samples)
  long n_samples = 0;
  double horizon = 0.0;  // simulated time per trajectory
  double dt = 0.0;
  // std_error exceeds |value| for a nonzero value
  bool insufficient_horizon = false;

  // rounding: deterministic error bound combined in quadrature with the
  // sample standard error.
  static Estimate from_samples(const std::vector<double>& samples, double horizon, double dt,
                               double rounding = 0.0);
};

struct McConfig {
  double T = 2000.0;
  double dt = 1e-3;
  int n_traj = 64;
  std::uint64_t seed = 1;

  void validate(const Parameters& p) const;
  // max(10% of T, 20/alpha)
  double burn_in(const Parameters& p) const;
};

struct McLyapunov {
  Estimate lambda1;
  Estimate sum12;  // estimates lambda1 + lambda2 from the area growth
};

// Tangent growth along trajectories of the full system.
McLyapunov mc_lyapunov(const Parameters& p, const PhaseCoupling& c, const McConfig& cfg);

// (1/T) int q(phi_t) dt along the joint (y, theta, phi) process.
Estimate fk_time_average(const Parameters& p, const PhaseCoupling& c, const McConfig& cfg);

// Top exponent of the reduced linear system in either coordinate chart.
Estimate mc_reduced_lyapunov(const Parameters& p, ReducedCoordinates coords,
                             const McConfig& cfg);

// Stationary density of the projective angle on [0, pi]. Nodes phi_k = k pi/n for
// k = 0..n, with p_n = p_0 closing the period.
struct DensityGrid {
  int n = 0;
  std::vector<double> phi;
  std::vector<double> p;
  double flux = 0.0;  // constant probability flux through every face

  // Trapezoidal integral of p over the nodes.
  double mass() const;
};

DensityGrid stationary_density_fp(const Parameters& p, int n);

// Trapezoidal int q(phi) p(phi) dphi over the grid nodes.
double lambda1_from_density(const DensityGrid& g, const Parameters& p);

struct CloudPoint {
  double y, theta;
};

struct PullbackResult {
  std::vector<CloudPoint> cloud;
  std::vector<double> times;
  std::vector<double> diameters;

  double final_diameter() const { return diameters.empty() ? 0.0 : diameters.back(); }
};

// Max pairwise cylinder distance.
double cloud_diameter(const std::vector<CloudPoint>& cloud);

// Evolves a cloud of initial conditions under one shared noise path and
// records its diameter every `sample_interval` time units.
PullbackResult pullback_sample(const Parameters& p, const PhaseCoupling& c, int n_points,
                               double T, double dt, std::uint64_t seed,
                               double sample_interval = 1.0);

}  // namespace shc
