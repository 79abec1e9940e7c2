#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace shc {

using Integrand = std::function<double(double)>;

struct QuadratureSpec {
  // Absolute error target.
  double tolerance = 1e-10;
  // Maximum bisection depth of any panel.
  int max_refinements = 30;
  // The integrand carries a u^{-1/2} factor at the origin (half-line only).
  bool singularity_at_zero = false;
  // Upper cut-off for the half line, in the original variable. When absent the
  // cut-off is found by doubling until successive tail pieces are negligible.
  std::optional<double> truncation;
  // Interior points (original variable) that start as panel boundaries, e.g.
  // the location of a sharp peak.
  std::vector<double> breakpoints;
  // Panels per interval before any refinement.
  int initial_panels = 16;

  void validate() const;
};

double integrate_interval(const Integrand& f, double a, double b,
                          const QuadratureSpec& spec = {});

double integrate_half_line(const Integrand& f, const QuadratureSpec& spec = {});

// Same as integrate_interval but also reports the summed step-halving error.
struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
};

QuadratureResult integrate_interval_detailed(const Integrand& f, double a, double b,
                                             const QuadratureSpec& spec = {});
QuadratureResult integrate_half_line_detailed(const Integrand& f,
                                              const QuadratureSpec& spec = {});

}  // namespace shc
