#pragma once

#include <functional>

namespace shc {

struct RootResult {
  double root = 0.0;
  double bracket_width = 0.0;
  int evaluations = 0;
};

// Brent's method: bisection safeguarded inverse quadratic / secant steps.
// Requires f(lo) and f(hi) of opposite sign; stops once the bracket is
// narrower than x_tol or f hits zero exactly.
RootResult brent_root(const std::function<double(double)>& f, double lo, double hi,
                      double x_tol, int max_iter = 200);

}  // namespace shc
