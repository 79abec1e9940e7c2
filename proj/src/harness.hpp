#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "analytic.hpp"
#include "estimators.hpp"
#include "sde.hpp"

namespace shc {

enum class SweepMode { Analytic, MonteCarlo, Both };
const char* to_string(SweepMode m) noexcept;

struct SweepSpec {
  std::vector<double> alpha_grid;
  std::vector<double> b_grid;
  std::vector<double> sigma_grid;
  SweepMode mode = SweepMode::Analytic;
  std::string output_path;
  std::uint64_t seed = 1;
  McConfig mc;  // seed field ignored; rows derive their own
  PhaseCoupling coupling = PhaseCoupling::tent();
  QuadratureSpec quadrature;

  // Grids nonempty and strictly increasing, alpha > 0, sigma >= 0.
  void validate() const;
};

// One grid point evaluated by one method. `error` is empty on success and
// holds the error code name otherwise. DegenerateNoise rows (b sigma = 0)
// carry the deterministic exponents {0, -alpha} and regime RandomEquilibrium;
// other failed rows carry NaN and regime "None".
struct SweepRow {
  double alpha = 0.0;
  double b = 0.0;
  double sigma = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::string regime;
  double sigma0 = 0.0;
  std::string method;
  std::string error;

  bool operator==(const SweepRow&) const = default;
};

struct SweepResult {
  std::vector<SweepRow> rows;

  bool operator==(const SweepResult&) const = default;
};

// Seed for Monte Carlo rows; independent of evaluation order.
std::uint64_t row_seed(std::uint64_t seed, std::size_t ai, std::size_t bi, std::size_t si);

// Rows in lexicographic (alpha, b, sigma) order, quadrature before Monte Carlo.
SweepResult run_sweep(const SweepSpec& spec);

struct SignViolation {
  double alpha;
  double b;
  std::string pattern;  // sign string along sigma, e.g. "--0++"
};

// Per (alpha, b) slice of successful quadrature rows, the signs of lambda1 along
// sigma must read (-)*0?(+)*, with |lambda1| <= zero_tol counted as 0.
std::vector<SignViolation> check_sign_structure(const SweepResult& r,
                                                double zero_tol = kClassifyTolerance);

struct CurvePoint {
  double alpha;
  double sigma0;

  bool operator==(const CurvePoint&) const = default;
};

std::vector<CurvePoint> bifurcation_curve(const std::vector<double>& alpha_grid, double b);

enum class Format { Csv, Json, Svg };
const char* to_string(Format f) noexcept;
Format parse_format(const std::string& name);

inline constexpr const char* kSweepHeader =
    "alpha,b,sigma,lambda1,lambda2,regime,sigma0,method,error";

std::string to_csv(const SweepResult& r);
std::string to_json(const SweepResult& r);
// lambda1 against sigma, one line per (alpha, b, method) slice, zero line and
// a marker at each slice's sigma0.
std::string to_svg(const SweepResult& r);
SweepResult sweep_from_json(const std::string& text);

std::string to_csv(const std::vector<CurvePoint>& curve);
std::string to_json(const std::vector<CurvePoint>& curve);

std::string to_csv(const DensityGrid& g);
std::string to_json(const DensityGrid& g);

std::string to_csv(const PullbackResult& r);
std::string to_json(const PullbackResult& r);

std::string render(const SweepResult& r, Format f);
std::string render(const std::vector<CurvePoint>& curve, Format f);
std::string render(const DensityGrid& g, Format f);
std::string render(const PullbackResult& r, Format f);

// Writes text to path; IoFailure on any error.
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace shc
