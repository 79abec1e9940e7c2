#include "shearchaos/shearchaos.h"

#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <memory>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "analytic.hpp"
#include "error.hpp"
#include "estimators.hpp"
#include "harness.hpp"
#include "sde.hpp"

struct shc_density {
  shc::DensityGrid grid;
  shc::Parameters params;
};

struct shc_pullback {
  shc::PullbackResult result;
};

struct shc_sweep {
  shc::SweepResult result;
};

namespace {

thread_local std::string last_error;

shc_status status_of(shc::ErrorCode code) {
  switch (code) {
    case shc::ErrorCode::InvalidInput: return SHC_INVALID_INPUT;
    case shc::ErrorCode::NonConvergence: return SHC_NON_CONVERGENCE;
    case shc::ErrorCode::DegenerateNoise: return SHC_DEGENERATE_NOISE;
    case shc::ErrorCode::BracketFailure: return SHC_BRACKET_FAILURE;
    case shc::ErrorCode::NonFiniteState: return SHC_NON_FINITE_STATE;
    case shc::ErrorCode::SingularDiscretization: return SHC_SINGULAR_DISCRETIZATION;
    case shc::ErrorCode::IoFailure: return SHC_IO_FAILURE;
  }
  return SHC_INTERNAL;
}

template <class F>
shc_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return SHC_OK;
  } catch (const shc::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return SHC_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return SHC_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return SHC_INTERNAL;
  }
}

void need(const void* ptr, const char* name) {
  if (!ptr) shc::fail(shc::ErrorCode::InvalidInput, std::string(name) + " must not be null");
}

shc::Parameters params(shc_params p) { return {p.alpha, p.b, p.sigma}; }

shc::QuadratureSpec quadrature(double tol) {
  shc::QuadratureSpec q;
  if (tol > 0.0) q.tolerance = tol;
  return q;
}

shc::PhaseCoupling coupling(shc_coupling c) {
  switch (c) {
    case SHC_COUPLING_TENT: return shc::PhaseCoupling::tent();
    case SHC_COUPLING_TRIG: return shc::PhaseCoupling::trig_pair();
    case SHC_COUPLING_SINE4: return shc::PhaseCoupling::sine_approx4();
  }
  shc::fail(shc::ErrorCode::InvalidInput, "unknown coupling");
}

shc::Format format(shc_format f) {
  switch (f) {
    case SHC_FORMAT_CSV: return shc::Format::Csv;
    case SHC_FORMAT_JSON: return shc::Format::Json;
    case SHC_FORMAT_SVG: return shc::Format::Svg;
  }
  shc::fail(shc::ErrorCode::InvalidInput, "unknown output format");
}

shc::McConfig mc_config(const shc_mc_config* c) {
  shc::McConfig cfg;
  if (c) {
    cfg.T = c->T;
    cfg.dt = c->dt;
    cfg.n_traj = c->n_traj;
    cfg.seed = c->seed;
  }
  return cfg;
}

shc_estimate estimate(const shc::Estimate& e) {
  return {e.value, e.std_error, e.n_samples, e.horizon, e.dt, e.insufficient_horizon ? 1 : 0};
}

void emit(const char* path, const std::string& text) {
  if (!path || std::string(path) == "-") {
    if (std::fwrite(text.data(), 1, text.size(), stdout) != text.size() || std::fflush(stdout) != 0) {
      shc::fail(shc::ErrorCode::IoFailure, "write to stdout failed");
    }
    return;
  }
  shc::write_text(path, text);
}

}  // namespace

extern "C" {

const char* shc_version(void) { return "0.1.0"; }

const char* shc_last_error(void) { return last_error.c_str(); }

const char* shc_status_name(shc_status status) {
  switch (status) {
    case SHC_OK: return "Ok";
    case SHC_INVALID_INPUT: return "InvalidInput";
    case SHC_NON_CONVERGENCE: return "NonConvergence";
    case SHC_DEGENERATE_NOISE: return "DegenerateNoise";
    case SHC_BRACKET_FAILURE: return "BracketFailure";
    case SHC_NON_FINITE_STATE: return "NonFiniteState";
    case SHC_SINGULAR_DISCRETIZATION: return "SingularDiscretization";
    case SHC_IO_FAILURE: return "IoFailure";
    case SHC_INTERNAL: return "Internal";
  }
  return "Unknown";
}

shc_mc_config shc_mc_config_default(void) {
  const shc::McConfig d;
  return {d.T, d.dt, d.n_traj, d.seed};
}

shc_status shc_c0(double tol, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = tol > 0.0 ? shc::find_c0(tol) : shc::c0();
  });
}

shc_status shc_sign_function(double c, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = shc::sign_function_g(c);
  });
}

shc_status shc_sigma0(double alpha, double b, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = shc::sigma0(alpha, b);
  });
}

shc_status shc_lyapunov_pair(shc_params p, double tol, double* lambda1, double* lambda2,
                             double* error) {
  return guarded([&] {
    need(lambda1, "lambda1");
    need(lambda2, "lambda2");
    const shc::LyapunovPair r = shc::lyapunov_pair(params(p), quadrature(tol));
    *lambda1 = r.lambda1;
    *lambda2 = r.lambda2;
    if (error) *error = r.error;
  });
}

shc_status shc_lambda1_rescaled(shc_params p, double tol, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = shc::lambda1_rescaled(params(p), quadrature(tol));
  });
}

shc_status shc_density_m(shc_params p, double v, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = shc::density_m(v, params(p));
  });
}

shc_status shc_classify(shc_params p, double tol, shc_regime* regime, double* lambda1,
                        double* sigma0) {
  return guarded([&] {
    need(regime, "regime");
    const shc::Parameters q = params(p);
    q.validate();
    const double s0 = q.b == 0.0 ? std::numeric_limits<double>::infinity()
                                 : shc::sigma0(q.alpha, q.b);
    const shc::Regime r = shc::classify(q, tol > 0.0 ? tol : shc::kClassifyTolerance);
    switch (r.kind) {
      case shc::RegimeKind::RandomEquilibrium: *regime = SHC_RANDOM_EQUILIBRIUM; break;
      case shc::RegimeKind::Critical: *regime = SHC_CRITICAL; break;
      case shc::RegimeKind::RandomStrangeAttractor: *regime = SHC_RANDOM_STRANGE_ATTRACTOR; break;
    }
    if (lambda1) *lambda1 = r.lambda1;
    if (sigma0) *sigma0 = s0;
  });
}

const char* shc_regime_name(shc_regime regime) {
  switch (regime) {
    case SHC_RANDOM_EQUILIBRIUM: return shc::to_string(shc::RegimeKind::RandomEquilibrium);
    case SHC_CRITICAL: return shc::to_string(shc::RegimeKind::Critical);
    case SHC_RANDOM_STRANGE_ATTRACTOR:
      return shc::to_string(shc::RegimeKind::RandomStrangeAttractor);
  }
  return "Unknown";
}

shc_status shc_q_integrand(shc_params p, double phi, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = shc::q_integrand(phi, params(p));
  });
}

shc_status shc_bifurcation_curve(const double* alpha, size_t n, double b, double* out) {
  return guarded([&] {
    if (n > 0) {
      need(alpha, "alpha");
      need(out, "out");
    }
    const auto curve = shc::bifurcation_curve(std::vector<double>(alpha, alpha + n), b);
    for (size_t i = 0; i < n; ++i) out[i] = curve[i].sigma0;
  });
}

shc_status shc_bifurcation_write(const double* alpha, size_t n, double b, const char* path,
                                 shc_format f) {
  return guarded([&] {
    if (n > 0) need(alpha, "alpha");
    const auto curve = shc::bifurcation_curve(std::vector<double>(alpha, alpha + n), b);
    emit(path, shc::render(curve, format(f)));
  });
}

shc_status shc_mc_lyapunov(shc_params p, shc_coupling c, const shc_mc_config* config,
                           shc_estimate* lambda1, shc_estimate* sum12) {
  return guarded([&] {
    need(lambda1, "lambda1");
    const shc::McLyapunov r = shc::mc_lyapunov(params(p), coupling(c), mc_config(config));
    *lambda1 = estimate(r.lambda1);
    if (sum12) *sum12 = estimate(r.sum12);
  });
}

shc_status shc_fk_time_average(shc_params p, shc_coupling c, const shc_mc_config* config,
                               shc_estimate* out) {
  return guarded([&] {
    need(out, "out");
    *out = estimate(shc::fk_time_average(params(p), coupling(c), mc_config(config)));
  });
}

shc_status shc_mc_reduced(shc_params p, int transformed, const shc_mc_config* config,
                          shc_estimate* out) {
  return guarded([&] {
    need(out, "out");
    const auto coords = transformed ? shc::ReducedCoordinates::Transformed
                                    : shc::ReducedCoordinates::Original;
    *out = estimate(shc::mc_reduced_lyapunov(params(p), coords, mc_config(config)));
  });
}

shc_status shc_density_solve(shc_params p, int n, shc_density** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    auto d = std::make_unique<shc_density>();
    d->params = params(p);
    d->grid = shc::stationary_density_fp(d->params, n);
    *out = d.release();
  });
}

void shc_density_free(shc_density* d) { delete d; }

size_t shc_density_size(const shc_density* d) { return d ? d->grid.p.size() : 0; }

const double* shc_density_phi(const shc_density* d) { return d ? d->grid.phi.data() : nullptr; }

const double* shc_density_values(const shc_density* d) { return d ? d->grid.p.data() : nullptr; }

double shc_density_flux(const shc_density* d) {
  return d ? d->grid.flux : std::numeric_limits<double>::quiet_NaN();
}

double shc_density_mass(const shc_density* d) {
  return d ? d->grid.mass() : std::numeric_limits<double>::quiet_NaN();
}

shc_status shc_density_lambda1(const shc_density* d, double* out) {
  return guarded([&] {
    need(d, "density");
    need(out, "out");
    *out = shc::lambda1_from_density(d->grid, d->params);
  });
}

shc_status shc_density_write(const shc_density* d, const char* path, shc_format f) {
  return guarded([&] {
    need(d, "density");
    emit(path, shc::render(d->grid, format(f)));
  });
}

shc_status shc_pullback_run(shc_params p, shc_coupling c, int n_points, double T, double dt,
                            uint64_t seed, double sample_interval, shc_pullback** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    auto r = std::make_unique<shc_pullback>();
    r->result = shc::pullback_sample(params(p), coupling(c), n_points, T, dt, seed,
                                     sample_interval > 0.0 ? sample_interval : 1.0);
    *out = r.release();
  });
}

void shc_pullback_free(shc_pullback* r) { delete r; }

size_t shc_pullback_size(const shc_pullback* r) { return r ? r->result.times.size() : 0; }

const double* shc_pullback_times(const shc_pullback* r) {
  return r ? r->result.times.data() : nullptr;
}

const double* shc_pullback_diameters(const shc_pullback* r) {
  return r ? r->result.diameters.data() : nullptr;
}

double shc_pullback_final_diameter(const shc_pullback* r) {
  return r ? r->result.final_diameter() : std::numeric_limits<double>::quiet_NaN();
}

shc_status shc_pullback_write(const shc_pullback* r, const char* path, shc_format f) {
  return guarded([&] {
    need(r, "pullback");
    emit(path, shc::render(r->result, format(f)));
  });
}

shc_status shc_simulate_trajectory(shc_params p, shc_coupling c, double y0, double theta0,
                                   double T, double dt, int sample_every, uint64_t seed,
                                   const char* path) {
  return guarded([&] {
    const shc::Parameters q = params(p);
    q.validate();
    if (!(dt > 0.0) || !(T > 0.0)) shc::fail(shc::ErrorCode::InvalidInput, "T and dt must be positive");
    if (!(theta0 >= 0.0 && theta0 < 1.0)) {
      shc::fail(shc::ErrorCode::InvalidInput, "theta0 must lie in [0, 1)");
    }
    shc::NoiseStream noise(seed, 0, dt);
    const auto start = shc::CylinderState::with_tangent(y0, theta0, {1.0, 0.0});
    const auto records = shc::simulate_trajectory(q, coupling(c), start, T, dt,
                                                  sample_every > 0 ? sample_every : 1, noise);
    std::ostringstream os;
    shc::write_trajectory_csv(os, records);
    emit(path, os.str());
  });
}

shc_status shc_sweep_run(const shc_sweep_spec* spec, shc_sweep** out) {
  return guarded([&] {
    need(spec, "spec");
    need(out, "out");
    *out = nullptr;
    auto grid = [](const double* v, size_t n, const char* name) {
      if (n > 0) need(v, name);
      return std::vector<double>(v, v + n);
    };
    shc::SweepSpec s;
    s.alpha_grid = grid(spec->alpha, spec->n_alpha, "alpha");
    s.b_grid = grid(spec->b, spec->n_b, "b");
    s.sigma_grid = grid(spec->sigma, spec->n_sigma, "sigma");
    switch (spec->mode) {
      case SHC_SWEEP_ANALYTIC: s.mode = shc::SweepMode::Analytic; break;
      case SHC_SWEEP_MONTE_CARLO: s.mode = shc::SweepMode::MonteCarlo; break;
      case SHC_SWEEP_BOTH: s.mode = shc::SweepMode::Both; break;
      default: shc::fail(shc::ErrorCode::InvalidInput, "unknown sweep mode");
    }
    s.seed = spec->seed;
    s.mc = mc_config(&spec->mc);
    s.coupling = coupling(spec->coupling);
    s.quadrature = quadrature(spec->tol);
    auto r = std::make_unique<shc_sweep>();
    r->result = shc::run_sweep(s);
    *out = r.release();
  });
}

shc_status shc_sweep_read_json(const char* path, shc_sweep** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    auto r = std::make_unique<shc_sweep>();
    r->result = shc::sweep_from_json(shc::read_text(path));
    *out = r.release();
  });
}

void shc_sweep_free(shc_sweep* s) { delete s; }

size_t shc_sweep_size(const shc_sweep* s) { return s ? s->result.rows.size() : 0; }

shc_status shc_sweep_get_row(const shc_sweep* s, size_t i, shc_sweep_row* out) {
  return guarded([&] {
    need(s, "sweep");
    need(out, "out");
    if (i >= s->result.rows.size()) shc::fail(shc::ErrorCode::InvalidInput, "row index out of range");
    const shc::SweepRow& r = s->result.rows[i];
    *out = {r.alpha, r.b, r.sigma, r.lambda1, r.lambda2, r.sigma0,
            r.regime.c_str(), r.method.c_str(), r.error.c_str()};
  });
}

shc_status shc_sweep_sign_violations(const shc_sweep* s, double zero_tol, size_t* count) {
  return guarded([&] {
    need(s, "sweep");
    need(count, "count");
    *count = shc::check_sign_structure(s->result, zero_tol > 0.0 ? zero_tol : shc::kClassifyTolerance)
                 .size();
  });
}

shc_status shc_sweep_write(const shc_sweep* s, const char* path, shc_format f) {
  return guarded([&] {
    need(s, "sweep");
    emit(path, shc::render(s->result, format(f)));
  });
}

}  // extern "C"
