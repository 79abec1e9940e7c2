#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "error.hpp"
#include "estimators.hpp"

namespace shc {

namespace {

// Drift of the flux J = rho p - D p' and diffusion D = c~^2/2 of the angle
// process, where c~ = sigma sin^2(phi). rho = d - c~ c~'/2.
double flux_drift(double phi, const Parameters& p) {
  const double c = std::cos(phi), s = std::sin(phi);
  return p.alpha * c * s + p.b * c * c - p.sigma * p.sigma * s * s * s * c;
}

double diffusion(double phi, const Parameters& p) {
  const double s = std::sin(phi);
  return 0.5 * p.sigma * p.sigma * s * s * s * s;
}

// Exponential-fitting weight (coth(Pe/2) - 2/Pe)/2, odd in Pe, |.| < 1/2.
double fitting_weight(double peclet) {
  const double a = std::abs(peclet);
  if (std::isinf(peclet)) return peclet > 0.0 ? 0.5 : -0.5;
  if (a < 1e-3) return peclet / 12.0 * (1.0 - peclet * peclet / 60.0);
  if (a > 700.0) return (peclet > 0.0 ? 0.5 : -0.5) - 1.0 / peclet;
  return 0.5 * (1.0 / std::tanh(0.5 * peclet) - 2.0 / peclet);
}

struct FaceRates {
  std::vector<double> forward;   // a_k: J_{k+1/2} = a_k p_k - c_k p_{k+1}
  std::vector<double> backward;  // c_k
};

// Face flux with the exponential-fitting blend applied to the advective flux
// F = rho p:  J = (1/2 + g) F_k + (1/2 - g) F_{k+1} - D_f (p_{k+1} - p_k)/h.
// Where D_f = 0 this is exact flux upwinding.
FaceRates face_rates(const Parameters& p, int n) {
  const double h = std::numbers::pi / n;
  FaceRates r;
  r.forward.resize(n);
  r.backward.resize(n);
  for (int k = 0; k < n; ++k) {
    const double face = (k + 0.5) * h;
    const double d_face = diffusion(face, p);
    const double rho_face = flux_drift(face, p);
    double peclet;
    if (d_face > 0.0) {
      peclet = rho_face * h / d_face;
    } else {
      peclet = rho_face > 0.0 ? INFINITY : (rho_face < 0.0 ? -INFINITY : 0.0);
    }
    const double g = fitting_weight(peclet);
    const double rho_here = flux_drift(k * h, p);
    const double rho_next = flux_drift((k + 1) * h, p);
    r.forward[k] = (0.5 + g) * rho_here + d_face / h;
    r.backward[k] = d_face / h - (0.5 - g) * rho_next;
  }
  return r;
}

// The discrete chain on the cycle must be strongly connected for a unique
// stationary vector. Faces with no positive rate in a direction break it.
bool strongly_connected(const FaceRates& r) {
  int missing = 0, forward_only = 0, backward_only = 0;
  for (std::size_t k = 0; k < r.forward.size(); ++k) {
    const bool f = r.forward[k] > 0.0, b = r.backward[k] > 0.0;
    if (!f && !b) ++missing;
    if (f && !b) ++forward_only;
    if (!f && b) ++backward_only;
  }
  if (missing >= 2) return false;
  if (missing == 1) return forward_only == 0 && backward_only == 0;
  return forward_only == 0 || backward_only == 0;
}

}  // namespace

double DensityGrid::mass() const {
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < phi.size(); ++k) {
    total += 0.5 * (p[k] + p[k + 1]) * (phi[k + 1] - phi[k]);
  }
  return total;
}

DensityGrid stationary_density_fp(const Parameters& p, int n) {
  p.validate();
  if (n < 200) fail(ErrorCode::InvalidInput, "Fokker-Planck grid needs n >= 200");
  if (!(p.sigma > 0.0)) {
    fail(ErrorCode::DegenerateNoise, "stationary density needs sigma > 0");
  }
  const double h = std::numbers::pi / n;
  const FaceRates rates = face_rates(p, n);
  if (!strongly_connected(rates)) {
    fail(ErrorCode::SingularDiscretization,
         "discrete angle chain is reducible; the stationary density is not unique");
  }

  // dp_k/dt = (J_{k-1/2} - J_{k+1/2}) / h; the 1/h is dropped.
  using SpMat = Eigen::SparseMatrix<double>;
  std::vector<Eigen::Triplet<double>> entries;
  entries.reserve(4 * static_cast<std::size_t>(n));
  double scale = 0.0;
  for (int k = 0; k < n; ++k) {
    const int next = (k + 1) % n;
    const int prev = (k + n - 1) % n;
    entries.emplace_back(k, k, -rates.forward[k] - rates.backward[prev]);
    entries.emplace_back(k, next, rates.backward[k]);
    entries.emplace_back(k, prev, rates.forward[prev]);
    scale = std::max(scale, std::abs(rates.forward[k]) + std::abs(rates.backward[prev]));
  }
  SpMat generator(n, n);
  generator.setFromTriplets(entries.begin(), entries.end());

  // Inverse iteration towards the eigenvalue 0 with a small shift.
  const double shift = 1e-9 * scale;
  SpMat shifted = generator;
  for (int k = 0; k < n; ++k) shifted.coeffRef(k, k) -= shift;
  shifted.makeCompressed();
  Eigen::SparseLU<SpMat> lu;
  lu.compute(shifted);
  if (lu.info() != Eigen::Success) {
    fail(ErrorCode::SingularDiscretization, "shifted Fokker-Planck operator is singular");
  }

  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / std::numbers::pi);
  bool converged = false;
  for (int it = 0; it < 50 && !converged; ++it) {
    Eigen::VectorXd y = lu.solve(x);
    if (!y.allFinite()) break;
    y /= y.sum() * h;
    converged = (y - x).lpNorm<Eigen::Infinity>() <= 1e-13 * y.lpNorm<Eigen::Infinity>();
    x = std::move(y);
  }
  const double residual = (generator * x).lpNorm<Eigen::Infinity>();
  if (!converged || !(residual <= 1e-8 * scale * x.lpNorm<Eigen::Infinity>())) {
    fail(ErrorCode::SingularDiscretization, "inverse iteration did not settle on a null vector");
  }
  const double peak = x.maxCoeff();
  if (x.minCoeff() < -1e-10 * peak) {
    std::ostringstream os;
    os << "stationary density has negative values at n = " << n << " (grid too coarse)";
    fail(ErrorCode::SingularDiscretization, os.str());
  }

  DensityGrid g;
  g.n = n;
  g.phi.resize(n + 1);
  g.p.resize(n + 1);
  for (int k = 0; k < n; ++k) {
    g.phi[k] = k * h;
    g.p[k] = std::max(x[k], 0.0);
  }
  g.phi[n] = std::numbers::pi;
  g.p[n] = g.p[0];
  const double mass = g.mass();
  for (double& v : g.p) v /= mass;

  double flux = 0.0;
  for (int k = 0; k < n; ++k) {
    flux += rates.forward[k] * g.p[k] - rates.backward[k] * g.p[k + 1];
  }
  g.flux = flux / n;
  return g;
}

double lambda1_from_density(const DensityGrid& g, const Parameters& p) {
  if (g.phi.size() != g.p.size() || g.phi.size() < 2) {
    fail(ErrorCode::InvalidInput, "density grid is malformed");
  }
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < g.phi.size(); ++k) {
    const double left = q_integrand(g.phi[k], p) * g.p[k];
    const double right = q_integrand(g.phi[k + 1], p) * g.p[k + 1];
    total += 0.5 * (left + right) * (g.phi[k + 1] - g.phi[k]);
  }
  return total;
}

}  // namespace shc
