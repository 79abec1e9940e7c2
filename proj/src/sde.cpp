#include "sde.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "error.hpp"
#include "numfmt.hpp"

namespace shc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double norm(const Vec2& v) { return std::hypot(v[0], v[1]); }

bool finite(const Vec2& v) { return std::isfinite(v[0]) && std::isfinite(v[1]); }

void check_finite(const CylinderState& s) {
  const bool ok = std::isfinite(s.y) && std::isfinite(s.theta) && (!s.v || finite(*s.v)) &&
                  (!s.w || finite(*s.w));
  if (!ok) {
    fail(ErrorCode::NonFiniteState, "state left the representable range (dt too large?)");
  }
}

}  // namespace

namespace {

// Neumaier summation step.
void add_compensated(double& sum, double& lo, double x) {
  const double t = sum + x;
  if (std::abs(sum) >= std::abs(x)) {
    lo += (sum - t) + x;
  } else {
    lo += (x - t) + sum;
  }
  sum = t;
}

}  // namespace

double CylinderState::total_log_norm() const {
  return log_norm + (log_norm_lo + pending_log_scale);
}

double CylinderState::total_area_log() const {
  return area_log + (area_log_lo + 2.0 * pending_log_scale);
}

void CylinderState::reset_accumulators() {
  log_norm = area_log = 0.0;
  log_norm_lo = area_log_lo = 0.0;
  pending_log_scale = 0.0;
}

void renormalize(CylinderState& s) {
  if (!s.v) return;
  Vec2& v = *s.v;
  const double nv = norm(v);
  add_compensated(s.log_norm, s.log_norm_lo, std::log(nv) + s.pending_log_scale);
  v = {v[0] / nv, v[1] / nv};
  if (s.w) {
    Vec2& w = *s.w;
    const double wedge = std::abs(v[0] * w[1] - v[1] * w[0]);  // |v^ x w|
    add_compensated(s.area_log, s.area_log_lo,
                    (std::log(nv) + std::log(wedge)) + 2.0 * s.pending_log_scale);
    const double along = w[0] * v[0] + w[1] * v[1];
    Vec2 perp{w[0] - along * v[0], w[1] - along * v[1]};
    const double np = norm(perp);
    w = {perp[0] / np, perp[1] / np};
  }
  s.pending_log_scale = 0.0;
  s.steps_since_renorm = 0;
}

const char* to_string(CouplingKind k) noexcept {
  switch (k) {
    case CouplingKind::Tent: return "tent";
    case CouplingKind::TrigPair: return "trig";
    case CouplingKind::SineApprox4: return "sine4";
  }
  return "unknown";
}

PhaseCoupling PhaseCoupling::tent(double kink_derivative) {
  return {CouplingKind::Tent, kink_derivative};
}
PhaseCoupling PhaseCoupling::trig_pair() { return {CouplingKind::TrigPair, 1.0}; }
PhaseCoupling PhaseCoupling::sine_approx4(double kink_derivative) {
  return {CouplingKind::SineApprox4, kink_derivative};
}

CouplingValue PhaseCoupling::eval(double theta) const {
  CouplingValue out;
  out.m = m();
  switch (kind_) {
    case CouplingKind::Tent:
      if (theta < 0.5) {
        out.value[0] = theta;
        out.derivative[0] = 1.0;
      } else {
        out.value[0] = 1.0 - theta;
        out.derivative[0] = theta == 0.5 ? kink_ : -1.0;
      }
      break;
    case CouplingKind::TrigPair: {
      const double c = std::cos(kTwoPi * theta), s = std::sin(kTwoPi * theta);
      out.value = {c / kTwoPi, s / kTwoPi};
      out.derivative = {-s, c};
      break;
    }
    case CouplingKind::SineApprox4:
      if (theta < 0.25) {
        out.value[0] = theta;
        out.derivative[0] = 1.0;
      } else if (theta < 0.75) {
        out.value[0] = 0.5 - theta;
        out.derivative[0] = theta == 0.25 ? kink_ : -1.0;
      } else {
        out.value[0] = theta - 1.0;
        out.derivative[0] = theta == 0.75 ? kink_ : 1.0;
      }
      break;
  }
  return out;
}

CouplingValue coupling_eval(const PhaseCoupling& c, double theta) { return c.eval(theta); }

CylinderState CylinderState::point(double y, double theta) {
  CylinderState s;
  s.y = y;
  s.theta = wrap_phase(theta);
  return s;
}

CylinderState CylinderState::with_tangent(double y, double theta, Vec2 v, std::optional<Vec2> w) {
  if (!finite(v) || norm(v) == 0.0) {
    fail(ErrorCode::InvalidInput, "tangent vector must be finite and nonzero");
  }
  CylinderState s = point(y, theta);
  s.v = v;
  if (w) {
    if (!finite(*w) || (v[0] * (*w)[1] - v[1] * (*w)[0]) == 0.0) {
      fail(ErrorCode::InvalidInput, "second tangent vector must be independent of the first");
    }
    s.w = w;
  }
  return s;
}

NoiseStream::NoiseStream(std::uint64_t seed, std::uint64_t stream_id, double dt)
    : seed_(seed), stream_id_(stream_id), dt_(dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) fail(ErrorCode::InvalidInput, "dt must be positive");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32)};
  engine_.seed(seq);
  normal_ = std::normal_distribution<double>(0.0, std::sqrt(dt));
}

double wrap_phase(double theta) {
  double r = theta - std::floor(theta);
  return r >= 1.0 ? 0.0 : r;
}

double wrap_angle(double phi) {
  double r = phi - std::numbers::pi * std::floor(phi / std::numbers::pi);
  return (r >= std::numbers::pi || r < 0.0) ? 0.0 : r;
}

// exp(M) = e^{tr/2} [ C I + S (M - tr/2 I) ], C = cosh(r), S = sinh(r)/r,
// r^2 = tr^2/4 - det.
Mat2 expm2(const Mat2& m) {
  const double tr = m[0][0] + m[1][1];
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  const double x = 0.25 * tr * tr - det;
  double c, s;
  if (std::abs(x) < 1e-2) {
    // Taylor series in x; truncation below 1e-17 relative.
    c = 1.0 + x / 2.0 * (1.0 + x / 12.0 * (1.0 + x / 30.0 * (1.0 + x / 56.0 * (1.0 + x / 90.0))));
    s = 1.0 + x / 6.0 * (1.0 + x / 20.0 * (1.0 + x / 42.0 * (1.0 + x / 72.0 * (1.0 + x / 110.0))));
  } else if (x > 0.0) {
    const double r = std::sqrt(x);
    c = std::cosh(r);
    s = std::sinh(r) / r;
  } else {
    const double r = std::sqrt(-x);
    c = std::cos(r);
    s = std::sin(r) / r;
  }
  const double scale = std::exp(0.5 * tr);
  const double half = 0.5 * tr;
  Mat2 out;
  out[0][0] = scale * (c + s * (m[0][0] - half));
  out[0][1] = scale * s * m[0][1];
  out[1][0] = scale * s * m[1][0];
  out[1][1] = scale * (c + s * (m[1][1] - half));
  return out;
}

Vec2 mat_vec(const Mat2& m, const Vec2& v) {
  return {m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]};
}

double predictor_midpoint(const CylinderState& s, const Parameters& p, double dt) {
  return wrap_phase(s.theta + 0.5 * (1.0 + p.b * s.y) * dt);
}

void step_system(CylinderState& s, const Parameters& p, const PhaseCoupling& c,
                 std::span<const double> dW, double dt, const StepConfig& config) {
  const CouplingValue f0 = c.eval(s.theta);
  double kick0 = 0.0;
  for (int i = 0; i < f0.m; ++i) kick0 += f0.value[i] * dW[i];
  kick0 *= p.sigma;

  const double speed0 = 1.0 + p.b * s.y;
  const double y_pred = s.y - p.alpha * s.y * dt + kick0;
  const double theta_pred = s.theta + speed0 * dt;

  const CouplingValue f1 = c.eval(wrap_phase(theta_pred));
  double kick1 = 0.0;
  for (int i = 0; i < f1.m; ++i) kick1 += f1.value[i] * dW[i];
  kick1 *= p.sigma;

  if (s.v) {
    const CouplingValue fm = c.eval(wrap_phase(s.theta + 0.5 * speed0 * dt));
    double beta = 0.0;
    for (int i = 0; i < fm.m; ++i) beta += fm.derivative[i] * dW[i];
    beta *= p.sigma;
    // exp(X) = exp(tr/2) exp(X - tr/2); the scalar factor is kept in log form.
    const double half = -0.5 * p.alpha * dt;
    const Mat2 flow = expm2({{{-p.alpha * dt - half, beta}, {p.b * dt, -half}}});
    s.pending_log_scale += half;
    s.v = mat_vec(flow, *s.v);
    if (s.w) s.w = mat_vec(flow, *s.w);
  }

  s.y = s.y - 0.5 * p.alpha * (s.y + y_pred) * dt + 0.5 * (kick0 + kick1);
  s.theta = wrap_phase(s.theta + 0.5 * (speed0 + 1.0 + p.b * y_pred) * dt);

  if (s.v) {
    ++s.steps_since_renorm;
    const double nv = norm(*s.v);
    const bool out_of_range = !(nv >= config.norm_low && nv <= config.norm_high) ||
                              (s.w && !(norm(*s.w) >= config.norm_low));
    if (s.steps_since_renorm >= config.renorm_interval || out_of_range) {
      check_finite(s);
      renormalize(s);
    }
  }
  check_finite(s);
}

Vec2 step_reduced_linear(const Vec2& v, const Parameters& p, double dW, double dt,
                         ReducedCoordinates coords) {
  Mat2 m;
  if (coords == ReducedCoordinates::Original) {
    m = {{{-p.alpha * dt, p.sigma * dW}, {p.b * dt, 0.0}}};
  } else {
    m = {{{0.0, p.sigma * p.b * dt}, {dW, -p.alpha * dt}}};
  }
  const Vec2 out = mat_vec(expm2(m), v);
  if (!finite(out)) fail(ErrorCode::NonFiniteState, "reduced tangent left the representable range");
  return out;
}

double phi_drift(double phi, const Parameters& p) {
  const double c = std::cos(phi), s = std::sin(phi);
  return p.alpha * c * s + p.b * c * c;
}

double step_phi(double phi, double theta, const Parameters& p, const PhaseCoupling& c,
                std::span<const double> dW, double dt) {
  const CouplingValue f = c.eval(theta);
  double kick = 0.0;  // sum_i f_i'(theta) dW_i
  for (int i = 0; i < f.m; ++i) kick += f.derivative[i] * dW[i];
  kick *= p.sigma;

  const double s0 = std::sin(phi);
  const double d0 = phi_drift(phi, p);
  const double pred = phi + d0 * dt - s0 * s0 * kick;
  const double s1 = std::sin(pred);
  const double next = phi + 0.5 * (d0 + phi_drift(pred, p)) * dt - 0.5 * (s0 * s0 + s1 * s1) * kick;
  if (!std::isfinite(next)) fail(ErrorCode::NonFiniteState, "angle left the representable range");
  return wrap_angle(next);
}

double cylinder_distance(double y1, double theta1, double y2, double theta2) {
  const double dy = y1 - y2;
  double dth = std::abs(theta1 - theta2);
  dth = std::min(dth, 1.0 - dth);
  return std::sqrt(dy * dy + dth * dth);
}

std::vector<TrajectoryRecord> simulate_trajectory(const Parameters& p, const PhaseCoupling& c,
                                                  CylinderState s, double T, double dt,
                                                  int sample_every, NoiseStream& noise) {
  p.validate();
  if (!(T > 0.0) || !(dt > 0.0) || sample_every < 1) {
    fail(ErrorCode::InvalidInput, "trajectory needs T > 0, dt > 0, sample_every >= 1");
  }
  if (!s.v) s.v = Vec2{1.0, 0.0};
  const auto steps = static_cast<long long>(std::llround(T / dt));
  std::vector<TrajectoryRecord> out;
  std::array<double, kMaxDrivers> dW{};
  auto record = [&](long long k) {
    out.push_back({k * dt, s.y, s.theta, (*s.v)[0], (*s.v)[1], s.total_log_norm() + std::log(norm(*s.v))});
  };
  record(0);
  for (long long k = 1; k <= steps; ++k) {
    noise.fill(std::span(dW.data(), c.m()));
    step_system(s, p, c, std::span<const double>(dW.data(), c.m()), dt);
    if (k % sample_every == 0) record(k);
  }
  return out;
}

void write_trajectory_csv(std::ostream& os, const std::vector<TrajectoryRecord>& records) {
  os << "t,y,theta,v_y,v_theta,log_norm\n";
  for (const auto& r : records) {
    os << format_double(r.t) << ',' << format_double(r.y) << ',' << format_double(r.theta) << ','
       << format_double(r.v_y) << ',' << format_double(r.v_theta) << ','
       << format_double(r.log_norm) << '\n';
  }
}

}  // namespace shc
