#include "quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

#include "error.hpp"

namespace shc {

namespace {

constexpr int kOrder = 10;
constexpr int kMaxPanels = 1 << 18;
constexpr int kMaxTailPieces = 64;

struct Rule {
  std::array<double, kOrder> nodes{};
  std::array<double, kOrder> weights{};
};

// Gauss–Legendre nodes on [-1, 1] by Newton iteration on P_n.
Rule make_rule() {
  Rule r;
  const int n = kOrder;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[n - 1 - i] = x;
    r.weights[i] = w;
    r.weights[n - 1 - i] = w;
  }
  return r;
}

const Rule& rule() {
  static const Rule r = make_rule();
  return r;
}

struct Sum {
  double value = 0.0;
  double magnitude = 0.0;
};

Sum gauss(const Integrand& f, double a, double b) {
  const Rule& r = rule();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  Sum s;
  for (int i = 0; i < kOrder; ++i) {
    const double x = mid + half * r.nodes[i];
    const double fx = f(x);
    if (!std::isfinite(fx)) {
      std::ostringstream os;
      os << "integrand is not finite at x = " << x;
      fail(ErrorCode::InvalidInput, os.str());
    }
    s.value += r.weights[i] * fx;
    s.magnitude += r.weights[i] * std::abs(fx);
  }
  s.value *= half;
  s.magnitude *= std::abs(half);
  return s;
}

struct Panel {
  double a, b;
  int depth;
  Sum left, right;  // Gauss sums on the two halves
  double estimate;  // left + right
  double error;     // |whole - (left + right)|
};

struct ByError {
  bool operator()(const Panel& x, const Panel& y) const { return x.error < y.error; }
};

Panel make_panel(const Integrand& f, double a, double b, int depth, const Sum& whole) {
  const double m = 0.5 * (a + b);
  Panel p{a, b, depth, gauss(f, a, m), gauss(f, m, b), 0.0, 0.0};
  p.estimate = p.left.value + p.right.value;
  const double roundoff =
      64.0 * std::numeric_limits<double>::epsilon() * (p.left.magnitude + p.right.magnitude);
  const double diff = std::abs(whole.value - p.estimate);
  p.error = diff <= roundoff ? 0.0 : diff;
  return p;
}

QuadratureResult adaptive(const Integrand& f, std::vector<double> cuts,
                          const QuadratureSpec& spec, double tolerance) {
  std::priority_queue<Panel, std::vector<Panel>, ByError> queue;
  double total_error = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    const double h = (b - a) / spec.initial_panels;
    for (int i = 0; i < spec.initial_panels; ++i) {
      const double pa = a + i * h;
      const double pb = (i + 1 == spec.initial_panels) ? b : a + (i + 1) * h;
      Panel p = make_panel(f, pa, pb, 0, gauss(f, pa, pb));
      total_error += p.error;
      queue.push(p);
    }
  }

  while (total_error > tolerance && !queue.empty() && queue.top().error > 0.0) {
    if (static_cast<int>(queue.size()) >= kMaxPanels) {
      fail(ErrorCode::NonConvergence, "quadrature panel budget exhausted");
    }
    Panel p = queue.top();
    queue.pop();
    if (p.depth >= spec.max_refinements) {
      std::ostringstream os;
      os << "quadrature did not reach tolerance " << tolerance << " on [" << p.a << ", "
         << p.b << "] within " << spec.max_refinements << " refinements";
      fail(ErrorCode::NonConvergence, os.str());
    }
    total_error -= p.error;
    const double m = 0.5 * (p.a + p.b);
    Panel l = make_panel(f, p.a, m, p.depth + 1, p.left);
    Panel r = make_panel(f, m, p.b, p.depth + 1, p.right);
    total_error += l.error + r.error;
    queue.push(l);
    queue.push(r);
    // Guard against drift of the running sum.
    if (total_error < 0.0) total_error = 0.0;
  }

  QuadratureResult out;
  out.panels = static_cast<int>(queue.size());
  // Sum in a fixed order so results do not depend on heap layout.
  std::vector<Panel> panels;
  panels.reserve(queue.size());
  while (!queue.empty()) {
    panels.push_back(queue.top());
    queue.pop();
  }
  std::sort(panels.begin(), panels.end(),
            [](const Panel& x, const Panel& y) { return x.a < y.a; });
  for (const Panel& p : panels) {
    out.value += p.estimate;
    out.error += p.error;
  }
  return out;
}

std::vector<double> cut_points(double a, double b, const std::vector<double>& breakpoints) {
  std::vector<double> cuts{a};
  std::vector<double> inner;
  for (double x : breakpoints) {
    if (x > a && x < b) inner.push_back(x);
  }
  std::sort(inner.begin(), inner.end());
  inner.erase(std::unique(inner.begin(), inner.end()), inner.end());
  cuts.insert(cuts.end(), inner.begin(), inner.end());
  cuts.push_back(b);
  return cuts;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(tolerance > 0.0) || !std::isfinite(tolerance)) {
    fail(ErrorCode::InvalidInput, "quadrature tolerance must be positive");
  }
  if (max_refinements < 1) {
    fail(ErrorCode::InvalidInput, "max_refinements must be at least 1");
  }
  if (initial_panels < 1) {
    fail(ErrorCode::InvalidInput, "initial_panels must be at least 1");
  }
  if (truncation && !(*truncation > 0.0 && std::isfinite(*truncation))) {
    fail(ErrorCode::InvalidInput, "truncation must be positive and finite");
  }
}

QuadratureResult integrate_interval_detailed(const Integrand& f, double a, double b,
                                             const QuadratureSpec& spec) {
  spec.validate();
  if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) {
    fail(ErrorCode::InvalidInput, "integration interval must satisfy a < b");
  }
  return adaptive(f, cut_points(a, b, spec.breakpoints), spec, spec.tolerance);
}

double integrate_interval(const Integrand& f, double a, double b, const QuadratureSpec& spec) {
  return integrate_interval_detailed(f, a, b, spec).value;
}

QuadratureResult integrate_half_line_detailed(const Integrand& f, const QuadratureSpec& spec) {
  spec.validate();

  // u = t^2 removes a u^{-1/2} factor: du = 2t dt.
  const bool sub = spec.singularity_at_zero;
  Integrand g = sub ? Integrand([&f](double t) { return 2.0 * t * f(t * t); }) : f;
  auto to_t = [sub](double u) { return sub ? std::sqrt(u) : u; };

  std::vector<double> breaks;
  for (double u : spec.breakpoints) {
    if (u > 0.0) breaks.push_back(to_t(u));
  }

  if (spec.truncation) {
    const double upper = to_t(*spec.truncation);
    return adaptive(g, cut_points(0.0, upper, breaks), spec, spec.tolerance);
  }

  // Unknown decay: integrate [0,1], [1,2], [2,4], ... until two successive
  // pieces fall below a tenth of the tolerance.
  QuadratureResult total;
  double lo = 0.0, hi = 1.0;
  double budget = 0.5 * spec.tolerance;
  int quiet = 0;
  for (int piece = 0; piece < kMaxTailPieces; ++piece) {
    QuadratureResult r = adaptive(g, cut_points(lo, hi, breaks), spec, budget);
    total.value += r.value;
    total.error += r.error;
    total.panels += r.panels;
    const bool negligible = std::abs(r.value) + r.error < 0.1 * spec.tolerance;
    const bool past_breaks =
        std::none_of(breaks.begin(), breaks.end(), [hi](double x) { return x > hi; });
    quiet = (negligible && past_breaks) ? quiet + 1 : 0;
    if (quiet >= 2) return total;
    lo = hi;
    hi *= 2.0;
    budget = std::max(0.5 * budget, 0.01 * spec.tolerance);
  }
  fail(ErrorCode::NonConvergence, "integrand tail did not decay on the half line");
}

double integrate_half_line(const Integrand& f, const QuadratureSpec& spec) {
  return integrate_half_line_detailed(f, spec).value;
}

}  // namespace shc
