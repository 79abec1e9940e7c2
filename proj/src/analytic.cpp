#include "analytic.hpp"

#include <cmath>
#include <optional>
#include <sstream>

#include "error.hpp"
#include "roots.hpp"

namespace shc {

namespace {

// Exponent drop (below the value at the peak) at which the integrand is
// negligible against the quadrature tolerance. The extra 10 covers the
// polynomial prefactors sqrt(v), 1/sqrt(v).
double cutoff_drop(double tolerance) { return std::log(10.0 / tolerance) + 10.0; }

// Smallest x = peak + 2^k * step with drop(x) >= target.
template <class Drop>
double truncation_point(double peak, double step, double target, Drop drop) {
  double delta = step;
  for (int i = 0; i < 200; ++i) {
    const double x = peak + delta;
    if (drop(x) >= target) return x;
    delta *= 2.0;
  }
  fail(ErrorCode::NonConvergence, "could not locate a truncation point");
}

void require_noise(const Parameters& p) {
  p.validate();
  if (p.effective_noise() == 0.0) {
    fail(ErrorCode::DegenerateNoise,
         "closed-form exponents need sigma * b != 0 (use the Monte Carlo route)");
  }
}

}  // namespace

void Parameters::validate() const {
  if (!std::isfinite(alpha) || !std::isfinite(b) || !std::isfinite(sigma)) {
    fail(ErrorCode::InvalidInput, "parameters must be finite");
  }
  if (!(alpha > 0.0)) fail(ErrorCode::InvalidInput, "alpha must be positive");
  if (sigma < 0.0) fail(ErrorCode::InvalidInput, "sigma must be nonnegative");
}

double Parameters::effective_noise() const { return std::abs(b * sigma); }

const char* to_string(Method m) noexcept {
  switch (m) {
    case Method::Quadrature: return "Quadrature";
    case Method::MonteCarlo: return "MonteCarlo";
    case Method::FokkerPlanck: return "FokkerPlanck";
    case Method::TimeAverage: return "TimeAverage";
  }
  return "Unknown";
}

const char* to_string(RegimeKind k) noexcept {
  switch (k) {
    case RegimeKind::RandomEquilibrium: return "RandomEquilibrium";
    case RegimeKind::Critical: return "Critical";
    case RegimeKind::RandomStrangeAttractor: return "RandomStrangeAttractor";
  }
  return "Unknown";
}

// In v the exponent -s v^3/6 + (alpha^2 / 2s) v peaks at v* = alpha/s, and
// after subtracting the peak value it factors as -(s/6)(v - v*)^2 (v + 2v*).
StationaryDensity::StationaryDensity(const Parameters& p, const QuadratureSpec& spec) {
  require_noise(p);
  s_ = p.effective_noise();
  peak_ = p.alpha / s_;
  QuadratureSpec q = spec;
  q.singularity_at_zero = true;
  q.breakpoints = {peak_};
  q.truncation = truncation_point(peak_, 1e-6 * (peak_ + 1.0), cutoff_drop(spec.tolerance),
                                  [this](double v) { return -std::log(shifted_weight(v)); });
  normaliser_ = integrate_half_line(
      [this](double v) { return shifted_weight(v) / std::sqrt(v); }, q);
}

double StationaryDensity::shifted_weight(double v) const {
  const double d = v - peak_;
  return std::exp(-(s_ / 6.0) * d * d * (v + 2.0 * peak_));
}

double StationaryDensity::operator()(double v) const {
  if (!(v > 0.0)) fail(ErrorCode::InvalidInput, "density_m needs v > 0");
  return shifted_weight(v) / (std::sqrt(v) * normaliser_);
}

double density_m(double v, const Parameters& p) {
  thread_local double cached_alpha = -1.0;
  thread_local double cached_noise = -1.0;
  thread_local std::optional<StationaryDensity> cached;
  require_noise(p);
  if (!cached || cached_alpha != p.alpha || cached_noise != p.effective_noise()) {
    cached.emplace(p);
    cached_alpha = p.alpha;
    cached_noise = p.effective_noise();
  }
  return (*cached)(v);
}

LyapunovPair lyapunov_pair(const Parameters& p, const QuadratureSpec& spec) {
  require_noise(p);
  const double s = p.effective_noise();
  const double peak = p.alpha / s;
  auto weight = [s, peak](double v) {
    const double d = v - peak;
    return std::exp(-(s / 6.0) * d * d * (v + 2.0 * peak));
  };

  QuadratureSpec q = spec;
  q.singularity_at_zero = true;
  q.breakpoints = {peak};
  q.truncation = truncation_point(peak, 1e-6 * (peak + 1.0), cutoff_drop(spec.tolerance),
                                  [&](double v) { return -std::log(weight(v)); });

  const QuadratureResult n0 =
      integrate_half_line_detailed([&](double v) { return weight(v) / std::sqrt(v); }, q);
  const QuadratureResult n1 =
      integrate_half_line_detailed([&](double v) { return weight(v) * std::sqrt(v); }, q);

  const double mean = n1.value / n0.value;  // int v m(v) dv
  LyapunovPair out;
  out.lambda1 = -0.5 * p.alpha + 0.5 * s * mean;
  out.lambda2 = -0.5 * p.alpha - 0.5 * s * mean;
  out.method = Method::Quadrature;
  out.error = 0.5 * s * (n1.error + mean * n0.error) / n0.value;
  return out;
}

double lambda1_rescaled(const Parameters& p, const QuadratureSpec& spec) {
  require_noise(p);
  const double c = p.alpha * p.alpha * p.alpha / (p.effective_noise() * p.effective_noise());
  auto weight = [c](double u) {
    const double d = u - 1.0;
    return std::exp(-(c / 6.0) * d * d * (u + 2.0));
  };
  QuadratureSpec q = spec;
  q.singularity_at_zero = true;
  q.breakpoints = {1.0};
  q.truncation = truncation_point(1.0, 1e-6, cutoff_drop(spec.tolerance),
                                  [&](double u) { return -std::log(weight(u)); });
  const double norm =
      integrate_half_line([&](double u) { return weight(u) / std::sqrt(u); }, q);
  // int (u - 1) m~(u) du, integrated as one piece to avoid cancellation
  const double excess = integrate_half_line(
      [&](double u) { return (std::sqrt(u) - 1.0 / std::sqrt(u)) * weight(u); }, q);
  return 0.5 * p.alpha * excess / norm;
}

double sign_function_g(double c, const QuadratureSpec& spec) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    fail(ErrorCode::InvalidInput, "G(c) needs c > 0");
  }
  // exponent - c/3 in factored form; the peak value c/3 is restored at the end.
  auto shifted = [c](double u) {
    const double d = u - 1.0;
    return -(c / 6.0) * d * d * (u + 2.0);
  };
  QuadratureSpec q = spec;
  q.singularity_at_zero = true;
  q.breakpoints = {1.0};
  q.truncation = truncation_point(1.0, 1e-6, cutoff_drop(spec.tolerance),
                                  [&](double u) { return -shifted(u); });
  const double scaled = integrate_half_line(
      [&](double u) { return (std::sqrt(u) - 1.0 / std::sqrt(u)) * std::exp(shifted(u)); }, q);
  // Overflows to +-inf for c beyond ~2000; the sign survives.
  return scaled * std::exp(c / 3.0);
}

double find_c0(double tol) {
  if (!(tol > 0.0)) fail(ErrorCode::InvalidInput, "c0 tolerance must be positive");
  QuadratureSpec q;
  q.tolerance = 1e-13;
  const RootResult r =
      brent_root([&q](double c) { return sign_function_g(c, q); }, 0.05, 1.0, tol);
  return r.root;
}

double c0() {
  static const double value = find_c0(1e-10);
  return value;
}

double sigma0(double alpha, double b) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    fail(ErrorCode::InvalidInput, "sigma0 needs alpha > 0");
  }
  if (b == 0.0 || !std::isfinite(b)) fail(ErrorCode::InvalidInput, "sigma0 needs b != 0");
  return std::pow(alpha, 1.5) / (std::sqrt(c0()) * std::abs(b));
}

Regime classify(const Parameters& p, double tol) {
  if (!(tol > 0.0)) fail(ErrorCode::InvalidInput, "classification tolerance must be positive");
  const LyapunovPair pair = lyapunov_pair(p);
  Regime r;
  r.lambda1 = pair.lambda1;
  r.sigma0 = sigma0(p.alpha, p.b);
  if (pair.lambda1 < -tol) {
    r.kind = RegimeKind::RandomEquilibrium;
  } else if (pair.lambda1 > tol) {
    r.kind = RegimeKind::RandomStrangeAttractor;
  } else {
    r.kind = RegimeKind::Critical;
  }
  return r;
}

double q_integrand(double phi, const Parameters& p) {
  const double c = std::cos(phi), s = std::sin(phi);
  return -p.alpha * c * c + p.b * c * s + 0.5 * p.sigma * p.sigma * (1.0 - 2.0 * c * c) * s * s;
}

}  // namespace shc
