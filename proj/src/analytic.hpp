#pragma once

#include "quadrature.hpp"

namespace shc {

struct Parameters {
  double alpha = 1.0;  // dissipation
  double b = 0.0;      // shear
  double sigma = 0.0;  // noise amplitude

  // alpha > 0, all fields finite.
  void validate() const;
  // |b sigma|, the effective noise amplitude of the closed-form exponents.
  double effective_noise() const;
};

enum class Method { Quadrature, MonteCarlo, FokkerPlanck, TimeAverage };
const char* to_string(Method m) noexcept;

struct LyapunovPair {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  Method method = Method::Quadrature;
  double error = 0.0;
};

enum class RegimeKind { RandomEquilibrium, Critical, RandomStrangeAttractor };
const char* to_string(RegimeKind k) noexcept;

struct Regime {
  RegimeKind kind = RegimeKind::RandomEquilibrium;
  double lambda1 = 0.0;
  double sigma0 = 0.0;
};

inline constexpr double kClassifyTolerance = 1e-7;

// Normalised stationary density m(v) of the closed-form exponent. The
// normalising integral is evaluated once at construction.
class StationaryDensity {
 public:
  explicit StationaryDensity(const Parameters& p, const QuadratureSpec& spec = {});

  double operator()(double v) const;
  // argmax of the shifted exponent, alpha / |b sigma|
  double peak() const { return peak_; }
  double normaliser() const { return normaliser_; }

 private:
  double shifted_weight(double v) const;

  double s_;
  double peak_;
  double normaliser_;
};

// m(v) for p; the normaliser is cached per thread for the last Parameters seen.
double density_m(double v, const Parameters& p);

// lambda_{1,2} = -alpha/2 +- (|b sigma|/2) * int v m(v) dv.
LyapunovPair lyapunov_pair(const Parameters& p, const QuadratureSpec& spec = {});

// Rescaled route: lambda_1 = (alpha/2)(int u m~(u) du - 1) with c = alpha^3/(sigma b)^2.
// Evaluated independently of lyapunov_pair as a transcription cross-check.
double lambda1_rescaled(const Parameters& p, const QuadratureSpec& spec = {});

// G(c) = int_0^inf (sqrt(u) - 1/sqrt(u)) exp(-c (u^3/6 - u/2)) du; same sign as lambda_1.
double sign_function_g(double c, const QuadratureSpec& spec = {});

// Root of G on the bracket [0.05, 1].
double find_c0(double tol);
// find_c0(1e-10), computed once per process.
double c0();

double sigma0(double alpha, double b);

Regime classify(const Parameters& p, double tol = kClassifyTolerance);

// Furstenberg–Khasminskii integrand on the projective angle.
double q_integrand(double phi, const Parameters& p);

}  // namespace shc
