#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <vector>

#include "analytic.hpp"

namespace shc {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

inline constexpr int kMaxDrivers = 2;

enum class CouplingKind { Tent, TrigPair, SineApprox4 };
const char* to_string(CouplingKind k) noexcept;

struct CouplingValue {
  int m = 1;
  std::array<double, kMaxDrivers> value{};
  std::array<double, kMaxDrivers> derivative{};
};

// Phase-dependent diffusion functions f_i on S^1 = [0,1) with
// sum_i f_i'(theta)^2 = 1 away from kinks.
class PhaseCoupling {
 public:
  // f(theta) = theta on [0,1/2], 1 - theta on [1/2,1).
  static PhaseCoupling tent(double kink_derivative = 1.0);
  // f_1 = cos(2 pi theta)/(2 pi), f_2 = sin(2 pi theta)/(2 pi).
  static PhaseCoupling trig_pair();
  // Slope +-1 on the quarters of the circle, following the sign of sin(2 pi theta).
  static PhaseCoupling sine_approx4(double kink_derivative = 1.0);

  CouplingKind kind() const { return kind_; }
  int m() const { return kind_ == CouplingKind::TrigPair ? 2 : 1; }
  // Derivative used exactly at interior kinks (theta = 1/2, or 1/4 and 3/4).
  double kink_derivative() const { return kink_; }

  CouplingValue eval(double theta) const;

 private:
  PhaseCoupling(CouplingKind k, double kink) : kind_(k), kink_(kink) {}
  CouplingKind kind_;
  double kink_;
};

CouplingValue coupling_eval(const PhaseCoupling& c, double theta);

// Point on R x S^1, optionally with a tangent frame.
struct CylinderState {
  double y = 0.0;
  double theta = 0.0;  // in [0,1)
  std::optional<Vec2> v;
  std::optional<Vec2> w;  // second tangent vector, used for the area rate
  double log_norm = 0.0;
  double area_log = 0.0;
  int steps_since_renorm = 0;
  // Compensation terms for log_norm/area_log, and the log of the scalar factor
  // exp(tr/2) per step not yet applied to v.
  double log_norm_lo = 0.0;
  double area_log_lo = 0.0;
  double pending_log_scale = 0.0;

  // Accumulated logs including compensation and pending scale.
  double total_log_norm() const;
  double total_area_log() const;
  void reset_accumulators();

  static CylinderState point(double y, double theta);
  // Rejects zero or non-finite tangent vectors and a w parallel to v.
  static CylinderState with_tangent(double y, double theta, Vec2 v,
                                    std::optional<Vec2> w = std::nullopt);
};

struct StepConfig {
  int renorm_interval = 10;
  double norm_low = 1e-6;
  double norm_high = 1e6;
};

// Gaussian increments with variance dt, one engine per (seed, stream_id).
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::uint64_t stream_id, double dt);

  double next() { return normal_(engine_); }
  void fill(std::span<double> out) {
    for (double& x : out) x = normal_(engine_);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  double dt() const { return dt_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  double dt_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

double wrap_phase(double theta);  // into [0,1)
double wrap_angle(double phi);    // into [0,pi)

// Matrix exponential of a 2x2 matrix (Cayley–Hamilton form).
Mat2 expm2(const Mat2& m);
Vec2 mat_vec(const Mat2& m, const Vec2& v);

// One stochastic Heun step of (y, theta). The tangent frame, if present, is
// advanced by the exact flow of the variational equation with coefficients
// frozen at the predictor midpoint, then renormalised per `config`.
void step_system(CylinderState& s, const Parameters& p, const PhaseCoupling& c,
                 std::span<const double> dW, double dt, const StepConfig& config = {});

// Folds the current tangent norm (and frame area) into the accumulators and
// resets the frame to orthonormal. No-op without a tangent.
void renormalize(CylinderState& s);

// Phase at which step_system evaluates f_i' for the tangent update.
double predictor_midpoint(const CylinderState& s, const Parameters& p, double dt);

// Reduced linear variational systems without phase dependence.
enum class ReducedCoordinates {
  Original,     // dv = [[-a,0],[b,0]] v dt + sigma [[0,1],[0,0]] v o dW
  Transformed,  // v^ = (v_2, v_1/sigma): dv = [[0,sigma b],[0,-a]] v dt + [[0,0],[1,0]] v o dW
};

Vec2 step_reduced_linear(const Vec2& v, const Parameters& p, double dW, double dt,
                         ReducedCoordinates coords = ReducedCoordinates::Original);

// Drift of the projective angle.
double phi_drift(double phi, const Parameters& p);

// One Stratonovich–Heun step of the projective angle with theta frozen.
double step_phi(double phi, double theta, const Parameters& p, const PhaseCoupling& c,
                std::span<const double> dW, double dt);

// sqrt(dy^2 + circular(dtheta)^2)
double cylinder_distance(double y1, double theta1, double y2, double theta2);

struct TrajectoryRecord {
  double t, y, theta, v_y, v_theta, log_norm;
};

// Samples a single trajectory with a tangent vector every `sample_every` steps.
std::vector<TrajectoryRecord> simulate_trajectory(const Parameters& p, const PhaseCoupling& c,
                                                  CylinderState start, double T, double dt,
                                                  int sample_every, NoiseStream& noise);

// Columns: t,y,theta,v_y,v_theta,log_norm
void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRecord>& records);

}  // namespace shc
