// Copyright 2026 The sparsense Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Exercises the shared library through its C header only.

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "sparsense/sparsense.h"

namespace {

struct MatrixGuard {
  sps_matrix* m = nullptr;
  ~MatrixGuard() { sps_matrix_free(m); }
};

struct ResultGuard {
  sps_result* r = nullptr;
  ~ResultGuard() { sps_result_free(r); }
};

void collect(sps_line_kind kind, const char* line, void* user) {
  auto* out = static_cast<std::vector<std::pair<sps_line_kind, std::string>>*>(user);
  out->emplace_back(kind, line);
}

}  // namespace

TEST_CASE("status names and version") {
  CHECK(std::strlen(sps_version()) > 0);
  CHECK(std::string(sps_status_name(SPS_ERR_INFEASIBLE_TARGET)) == "InfeasibleTarget");
  CHECK(std::string(sps_status_name(SPS_OK)) == "ok");
}

TEST_CASE("matrix handles") {
  MatrixGuard g;
  REQUIRE(sps_matrix_gaussian(32, 64, 5, &g.m) == SPS_OK);
  int64_t rows = 0, cols = 0;
  CHECK(sps_matrix_dims(g.m, &rows, &cols) == SPS_OK);
  CHECK(rows == 32);
  CHECK(cols == 64);
  double mu = 0.0;
  CHECK(sps_matrix_coherence(g.m, 1, &mu) == SPS_OK);
  CHECK(mu > 0.0);
  CHECK(mu < 1.0);

  MatrixGuard bad;
  CHECK(sps_matrix_gaussian(64, 32, 5, &bad.m) == SPS_ERR_INVALID_ARGUMENT);
  CHECK(bad.m == nullptr);
  CHECK(std::string(sps_last_error()).find("M <= N") != std::string::npos);

  const double identity[] = {1, 0, 0, 1};
  MatrixGuard id;
  REQUIRE(sps_matrix_from_data(2, 2, identity, &id.m) == SPS_OK);
  CHECK(sps_matrix_coherence(id.m, 1, &mu) == SPS_OK);
  CHECK(mu == 0.0);
  const double unnormalized[] = {2, 0, 0, 1};
  MatrixGuard un;
  CHECK(sps_matrix_from_data(2, 2, unnormalized, &un.m) == SPS_ERR_INVALID_ARGUMENT);

  const auto path = (std::filesystem::temp_directory_path() / "sparsense_capi.bin").string();
  CHECK(sps_matrix_save(g.m, path.c_str()) == SPS_OK);
  MatrixGuard loaded;
  REQUIRE(sps_matrix_load(path.c_str(), &loaded.m) == SPS_OK);
  CHECK(std::memcmp(sps_matrix_data(g.m), sps_matrix_data(loaded.m), 32 * 64 * sizeof(double)) == 0);
  std::filesystem::remove(path);
  MatrixGuard missing;
  CHECK(sps_matrix_load("/nonexistent/m.bin", &missing.m) == SPS_ERR_IO);
  CHECK(sps_matrix_dims(nullptr, &rows, &cols) == SPS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("synthesize and recover") {
  MatrixGuard g;
  REQUIRE(sps_matrix_gaussian(64, 128, 3, &g.m) == SPS_OK);
  std::vector<double> x(128), y(64);
  double sigma = -1.0;
  REQUIRE(sps_synthesize(g.m, 3, 1.0, 0.01, INFINITY, 11, x.data(), y.data(), &sigma) == SPS_OK);
  CHECK(sigma == 0.0);

  for (sps_algorithm alg : {SPS_ALG_OLS, SPS_ALG_OMP, SPS_ALG_COSAMP, SPS_ALG_MOLS, SPS_ALG_BOLS, SPS_ALG_BOMP}) {
    CAPTURE(sps_algorithm_name(alg));
    sps_recover_options opt;
    sps_recover_options_init(&opt);
    opt.algorithm = alg;
    opt.k = 3;
    opt.omega_star = 1.0;
    ResultGuard r;
    REQUIRE(sps_recover(g.m, y.data(), 64, &opt, &r.r) == SPS_OK);
    REQUIRE(sps_result_length(r.r) == 128);
    double err = 0.0;
    for (int i = 0; i < 128; ++i) err += std::pow(sps_result_x(r.r)[i] - x[static_cast<std::size_t>(i)], 2);
    CHECK(std::sqrt(err) < 1e-8);
    CHECK(sps_result_support_size(r.r) >= 3);
    CHECK(sps_result_history_size(r.r) >= 1);
    CHECK(std::strlen(sps_result_stop_reason(r.r)) > 0);
  }

  sps_recover_options opt;
  sps_recover_options_init(&opt);
  opt.algorithm = SPS_ALG_OLS;
  opt.k = 4;
  ResultGuard r;
  REQUIRE(sps_recover(g.m, y.data(), 64, &opt, &r.r) == SPS_OK);
  CHECK(sps_result_iterations(r.r) <= 4);

  ResultGuard wrong;
  CHECK(sps_recover(g.m, y.data(), 63, &opt, &wrong.r) == SPS_ERR_DIMENSION_MISMATCH);
  CHECK(wrong.r == nullptr);

  sps_algorithm parsed;
  CHECK(sps_algorithm_parse("cosamp", &parsed) == SPS_OK);
  CHECK(parsed == SPS_ALG_COSAMP);
  CHECK(sps_algorithm_parse("lasso", &parsed) == SPS_ERR_INVALID_ARGUMENT);
}

TEST_CASE("blind setup and bounds") {
  MatrixGuard g;
  REQUIRE(sps_matrix_gaussian(256, 512, 1, &g.m) == SPS_OK);
  sps_blind_info info;
  REQUIRE(sps_blind_setup(g.m, 0.95, 0.175, NAN, NAN, &info) == SPS_OK);
  CHECK(info.omega_star == doctest::Approx(info.omega - 0.175));
  CHECK(info.threshold == doctest::Approx(info.omega_star * info.mu));
  CHECK(sps_blind_setup(g.m, 0.99999, 0.175, NAN, NAN, &info) == SPS_ERR_INFEASIBLE_TARGET);
  CHECK(std::string(sps_last_error()).find("ceiling") != std::string::npos);

  double lo = 0, hi = 0, floor = 0;
  CHECK(sps_theory_singular_bounds(4, 1024, 0.15, &lo, &hi, &floor) == SPS_OK);
  CHECK(lo == doctest::Approx(0.7875));
  double v = 0;
  CHECK(sps_theory_mapping_singular(4, 1024, 0.5, 0.15, &v) == SPS_ERR_INFEASIBLE_PARAMS);
  CHECK(sps_theory_reconstructible_sparsity(0.135, &v) == SPS_OK);
  CHECK(v == doctest::Approx(4.2037).epsilon(1e-4));

  sps_theory_params p{1024, 2048, 0.135, 0.175, 4, NAN, 0.95};
  double omega = 0, prob = 0, bound = 0;
  REQUIRE(sps_theory_omega(&p, &omega) == SPS_OK);
  REQUIRE(sps_theory_probability(&p, omega, &prob) == SPS_OK);
  CHECK(std::abs(prob - 0.95) <= 1e-9);
  p.rho = 0.15;
  CHECK(sps_theory_snr_min(&p, 1.2, nullptr, nullptr, &bound) == SPS_OK);
  CHECK(bound > 0.0);
}

TEST_CASE("grids, plots and experiments") {
  double grid[4];
  size_t count = 0;
  CHECK(sps_parse_grid("0:5:30", grid, 4, &count) == SPS_OK);
  CHECK(count == 7);
  CHECK(grid[3] == 15.0);
  CHECK(sps_parse_grid("1:0:2", grid, 4, &count) == SPS_ERR_CONFIG);

  std::vector<std::pair<sps_line_kind, std::string>> lines;
  CHECK(sps_experiment_list(nullptr, collect, &lines) == SPS_OK);
  CHECK(lines.size() >= 7);

  const auto dir = std::filesystem::temp_directory_path() / "sparsense_capi_exp";
  std::filesystem::remove_all(dir);
  const char* overrides[] = {"trials=2", "snr=10"};
  lines.clear();
  REQUIRE(sps_experiment_run("fig3", "desk", nullptr, overrides, 2, dir.string().c_str(), 1, collect, &lines) ==
          SPS_OK);
  bool saw_summary = false, saw_file = false;
  for (const auto& [kind, text] : lines) {
    saw_summary |= kind == SPS_LINE_SUMMARY;
    saw_file |= kind == SPS_LINE_FILE;
  }
  CHECK(saw_summary);
  CHECK(saw_file);
  CHECK(sps_plot_csv((dir / "fig3.csv").string().c_str(), (dir / "again.svg").string().c_str(), "mse", nullptr,
                     nullptr, nullptr, nullptr, 1) == SPS_OK);
  CHECK(std::filesystem::exists(dir / "again.svg"));

  const char* bad[] = {"trials=0"};
  CHECK(sps_experiment_run("fig3", "desk", nullptr, bad, 1, dir.string().c_str(), 1, nullptr, nullptr) ==
        SPS_ERR_CONFIG);
  std::filesystem::remove_all(dir);
}
