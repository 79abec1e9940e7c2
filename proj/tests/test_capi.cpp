#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "shearchaos/shearchaos.h"

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("version, status names, defaults") {
  CHECK(std::string(shc_version()) == "0.1.0");
  CHECK(std::string(shc_status_name(SHC_OK)) == "Ok");
  CHECK(std::string(shc_status_name(SHC_DEGENERATE_NOISE)) == "DegenerateNoise");
  CHECK(std::string(shc_regime_name(SHC_CRITICAL)) == "Critical");
  const shc_mc_config c = shc_mc_config_default();
  CHECK(c.T == 2000.0);
  CHECK(c.dt == 1e-3);
  CHECK(c.n_traj == 64);
  CHECK(c.seed == 1);
}

TEST_CASE("closed form through the C interface") {
  double c0 = 0;
  REQUIRE(shc_c0(0, &c0) == SHC_OK);
  CHECK(std::abs(c0 - 0.28231658644714586) <= 1e-10);
  double s0 = 0;
  REQUIRE(shc_sigma0(1, 2, &s0) == SHC_OK);
  CHECK(std::abs(s0 - 0.9410263993844497) <= 1e-9);
  double l1 = 0, l2 = 0, err = -1;
  REQUIRE(shc_lyapunov_pair({1, 2, 2}, 0, &l1, &l2, &err) == SHC_OK);
  CHECK(std::abs(l1 - 0.26311597899870087) <= 1e-8);
  CHECK(std::abs(l1 + l2 + 1) <= 1e-9);
  CHECK(err >= 0);
  CHECK(shc_lyapunov_pair({1, 2, 2}, 0, &l1, &l2, nullptr) == SHC_OK);
  double r = 0;
  REQUIRE(shc_lambda1_rescaled({1, 2, 2}, 0, &r) == SHC_OK);
  CHECK(std::abs(r - l1) <= 1e-9);
  double g = 0;
  REQUIRE(shc_sign_function(0.1, &g) == SHC_OK);
  CHECK(g > 0);
  double m = 0;
  REQUIRE(shc_density_m({1, 2, 1}, 1.0, &m) == SHC_OK);
  CHECK(m > 0);
  double q = 0;
  REQUIRE(shc_q_integrand({1, 2, 1}, 0.0, &q) == SHC_OK);
  CHECK(q == -1.0);
  shc_regime reg;
  REQUIRE(shc_classify({1, 2, 2}, 0, &reg, nullptr, nullptr) == SHC_OK);
  CHECK(reg == SHC_RANDOM_STRANGE_ATTRACTOR);
  double curve[2];
  const double alpha[2] = {1.0, 4.0};
  REQUIRE(shc_bifurcation_curve(alpha, 2, 2.0, curve) == SHC_OK);
  CHECK(std::abs(curve[1] / curve[0] - 8.0) <= 1e-12);
}

TEST_CASE("errors map to statuses and set the last error") {
  double l1, l2;
  CHECK(shc_lyapunov_pair({1, 2, 0}, 0, &l1, &l2, nullptr) == SHC_DEGENERATE_NOISE);
  CHECK(std::string(shc_last_error()).size() > 0);
  CHECK(shc_lyapunov_pair({-1, 2, 1}, 0, &l1, &l2, nullptr) == SHC_INVALID_INPUT);
  CHECK(shc_lyapunov_pair({1, 2, 1}, 0, nullptr, &l2, nullptr) == SHC_INVALID_INPUT);
  CHECK(shc_c0(0, nullptr) == SHC_INVALID_INPUT);
  CHECK(shc_sigma0(1, 0, &l1) == SHC_INVALID_INPUT);
  shc_density* d = nullptr;
  CHECK(shc_density_solve({1, 0, 1}, 400, &d) == SHC_SINGULAR_DISCRETIZATION);
  CHECK(d == nullptr);
  CHECK(shc_density_solve({1, 2, 1}, 10, &d) == SHC_INVALID_INPUT);
  CHECK(shc_classify({1, 2, 1}, 0, nullptr, nullptr, nullptr) == SHC_INVALID_INPUT);
  shc_mc_config bad = shc_mc_config_default();
  bad.n_traj = 1;
  shc_estimate e;
  CHECK(shc_mc_lyapunov({1, 2, 1}, SHC_COUPLING_TENT, &bad, &e, nullptr) == SHC_INVALID_INPUT);
  CHECK(shc_mc_lyapunov({1, 2, 1}, static_cast<shc_coupling>(9), nullptr, &e, nullptr) ==
        SHC_INVALID_INPUT);
  REQUIRE(shc_c0(0, &l1) == SHC_OK);
  shc_density_free(nullptr);
  shc_pullback_free(nullptr);
  shc_sweep_free(nullptr);
}

TEST_CASE("estimators through the C interface") {
  shc_mc_config c = shc_mc_config_default();
  c.T = 100;
  c.n_traj = 4;
  shc_estimate l1{}, sum{}, fk{}, red{};
  REQUIRE(shc_mc_lyapunov({1, 2, 1}, SHC_COUPLING_TRIG, &c, &l1, &sum) == SHC_OK);
  CHECK(l1.n_samples == 4);
  CHECK(std::abs(sum.value + 1.0) <= 3 * sum.std_error);
  REQUIRE(shc_fk_time_average({1, 2, 1}, SHC_COUPLING_SINE4, &c, &fk) == SHC_OK);
  CHECK(std::isfinite(fk.value));
  REQUIRE(shc_mc_reduced({1, 2, 1}, 1, &c, &red) == SHC_OK);
  CHECK(std::isfinite(red.value));
}

TEST_CASE("density and pullback handles") {
  shc_density* d = nullptr;
  REQUIRE(shc_density_solve({1, 2, 1}, 400, &d) == SHC_OK);
  CHECK(shc_density_size(d) == 401);
  CHECK(shc_density_phi(d)[0] == 0.0);
  CHECK(std::abs(shc_density_mass(d) - 1.0) <= 1e-8);
  CHECK(shc_density_values(d)[200] > 0);
  CHECK(std::isfinite(shc_density_flux(d)));
  double l1 = 0;
  REQUIRE(shc_density_lambda1(d, &l1) == SHC_OK);
  CHECK(std::abs(l1 - 0.01558326368574714) <= 1e-3);
  const auto path = std::filesystem::temp_directory_path() / "shc_capi_density.json";
  REQUIRE(shc_density_write(d, path.string().c_str(), SHC_FORMAT_JSON) == SHC_OK);
  CHECK(slurp(path).find("\"flux\"") != std::string::npos);
  std::filesystem::remove(path);
  CHECK(shc_density_write(d, path.string().c_str(), SHC_FORMAT_SVG) == SHC_INVALID_INPUT);
  shc_density_free(d);

  shc_pullback* pb = nullptr;
  REQUIRE(shc_pullback_run({1, 2, 1}, SHC_COUPLING_TENT, 5, 10, 1e-3, 3, 0, &pb) == SHC_OK);
  CHECK(shc_pullback_size(pb) >= 10);
  CHECK(shc_pullback_times(pb)[shc_pullback_size(pb) - 1] == doctest::Approx(10.0));
  CHECK(shc_pullback_final_diameter(pb) == shc_pullback_diameters(pb)[shc_pullback_size(pb) - 1]);
  CHECK(shc_pullback_write(pb, "/nonexistent-dir/pb.csv", SHC_FORMAT_CSV) == SHC_IO_FAILURE);
  shc_pullback_free(pb);
}

TEST_CASE("trajectory file") {
  const auto path = std::filesystem::temp_directory_path() / "shc_capi_traj.csv";
  REQUIRE(shc_simulate_trajectory({1, 2, 1}, SHC_COUPLING_TENT, 0, 0.1, 1, 1e-3, 100, 4,
                                  path.string().c_str()) == SHC_OK);
  const std::string text = slurp(path);
  CHECK(text.rfind("t,y,theta,v_y,v_theta,log_norm\n", 0) == 0);
  std::filesystem::remove(path);
}

TEST_CASE("sweep handle: rows, sign check, write and read back") {
  const double alpha[] = {1.0};
  const double b[] = {2.0};
  const double sigma[] = {0.5, 1.0, 1.5};
  shc_sweep_spec spec{};
  spec.alpha = alpha;
  spec.n_alpha = 1;
  spec.b = b;
  spec.n_b = 1;
  spec.sigma = sigma;
  spec.n_sigma = 3;
  spec.mode = SHC_SWEEP_ANALYTIC;
  spec.seed = 1;
  spec.mc = shc_mc_config_default();
  spec.coupling = SHC_COUPLING_TENT;
  shc_sweep* s = nullptr;
  REQUIRE(shc_sweep_run(&spec, &s) == SHC_OK);
  REQUIRE(shc_sweep_size(s) == 3);
  shc_sweep_row row;
  REQUIRE(shc_sweep_get_row(s, 2, &row) == SHC_OK);
  CHECK(row.sigma == 1.5);
  CHECK(std::string(row.method) == "Quadrature");
  CHECK(std::string(row.regime) == "RandomStrangeAttractor");
  CHECK(std::string(row.error).empty());
  CHECK(shc_sweep_get_row(s, 3, &row) == SHC_INVALID_INPUT);
  size_t violations = 99;
  REQUIRE(shc_sweep_sign_violations(s, 0, &violations) == SHC_OK);
  CHECK(violations == 0);

  const auto path = std::filesystem::temp_directory_path() / "shc_capi_sweep.json";
  REQUIRE(shc_sweep_write(s, path.string().c_str(), SHC_FORMAT_JSON) == SHC_OK);
  shc_sweep* back = nullptr;
  REQUIRE(shc_sweep_read_json(path.string().c_str(), &back) == SHC_OK);
  REQUIRE(shc_sweep_size(back) == 3);
  shc_sweep_row r2;
  REQUIRE(shc_sweep_get_row(back, 2, &r2) == SHC_OK);
  CHECK(r2.lambda1 == row.lambda1);
  std::filesystem::remove(path);
  shc_sweep_free(back);
  shc_sweep_free(s);

  CHECK(shc_sweep_read_json("/nonexistent-dir/x.json", &back) == SHC_IO_FAILURE);
  spec.n_sigma = 0;
  CHECK(shc_sweep_run(&spec, &s) == SHC_INVALID_INPUT);
  CHECK(shc_sweep_run(nullptr, &s) == SHC_INVALID_INPUT);
}
