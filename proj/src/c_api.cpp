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

#include "sparsense/sparsense.h"

#include <cmath>
#include <cstring>
#include <new>
#include <string>

#include "sparsense/config.hpp"
#include "sparsense/error.hpp"
#include "sparsense/figures.hpp"
#include "sparsense/harness.hpp"
#include "sparsense/matrix.hpp"
#include "sparsense/recovery.hpp"
#include "sparsense/svg_plot.hpp"
#include "sparsense/theory.hpp"

struct sps_matrix {
  sparsense::MeasurementMatrix matrix;
};

struct sps_result {
  sparsense::RecoveryResult result;
  std::vector<int64_t> support;
  std::string stop_reason;
};

namespace {

using namespace sparsense;

thread_local std::string g_last_error;

sps_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return SPS_ERR_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch: return SPS_ERR_DIMENSION_MISMATCH;
    case ErrorCode::RankDeficient: return SPS_ERR_RANK_DEFICIENT;
    case ErrorCode::InfeasibleParams: return SPS_ERR_INFEASIBLE_PARAMS;
    case ErrorCode::InfeasibleTarget: return SPS_ERR_INFEASIBLE_TARGET;
    case ErrorCode::ZeroResidual: return SPS_ERR_ZERO_RESIDUAL;
    case ErrorCode::ZeroSignal: return SPS_ERR_ZERO_SIGNAL;
    case ErrorCode::Io: return SPS_ERR_IO;
    case ErrorCode::Format: return SPS_ERR_FORMAT;
    case ErrorCode::Config: return SPS_ERR_CONFIG;
  }
  return SPS_ERR_INTERNAL;
}

// Runs body and converts any exception into a status plus message.
template <class Body>
sps_status guarded(Body&& body) {
  try {
    body();
    return SPS_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SPS_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SPS_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) fail(ErrorCode::InvalidArgument, what);
}

theory::TheoryParams to_params(const sps_theory_params* p) {
  require(p != nullptr, "theory params must not be NULL");
  theory::TheoryParams out;
  out.M = p->M;
  out.N = p->N;
  out.mu = p->mu;
  out.rho = p->rho;
  out.K = p->K;
  if (!std::isnan(p->C)) out.C_override = p->C;
  out.p_min = p->p_min;
  return out;
}

sps_matrix* wrap(MeasurementMatrix m) { return new sps_matrix{std::move(m)}; }

}  // namespace

extern "C" {

const char* sps_version(void) { return "0.1.0"; }

const char* sps_status_name(sps_status status) {
  switch (status) {
    case SPS_OK: return "ok";
    case SPS_ERR_INTERNAL: return "internal";
    default: break;
  }
  if (status >= SPS_ERR_INVALID_ARGUMENT && status <= SPS_ERR_CONFIG) {
    return error_code_name(static_cast<ErrorCode>(status)).data();
  }
  return "unknown";
}

const char* sps_last_error(void) { return g_last_error.c_str(); }

sps_status sps_matrix_gaussian(int64_t rows, int64_t cols, uint64_t seed, sps_matrix** out) {
  return guarded([&] {
    require(out != nullptr, "output handle pointer must not be NULL");
    *out = wrap(gen_gaussian_normalized(rows, cols, RngSeed{seed}));
  });
}

sps_status sps_matrix_hybrid(int64_t rows, int64_t cols, double offset_max, uint64_t seed, sps_matrix** out) {
  return guarded([&] {
    require(out != nullptr, "output handle pointer must not be NULL");
    *out = wrap(gen_hybrid_normalized(rows, cols, offset_max, RngSeed{seed}));
  });
}

sps_status sps_matrix_from_data(int64_t rows, int64_t cols, const double* column_major, sps_matrix** out) {
  return guarded([&] {
    require(out != nullptr && column_major != nullptr, "pointers must not be NULL");
    require(rows > 0 && cols > 0, "dimensions must be positive");
    *out = wrap(MeasurementMatrix(Eigen::Map<const Eigen::MatrixXd>(column_major, rows, cols)));
  });
}

sps_status sps_matrix_load(const char* path, sps_matrix** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "pointers must not be NULL");
    *out = wrap(load_matrix_binary(path));
  });
}

sps_status sps_matrix_save(const sps_matrix* matrix, const char* path) {
  return guarded([&] {
    require(matrix != nullptr && path != nullptr, "pointers must not be NULL");
    save_matrix_binary(matrix->matrix, path);
  });
}

sps_status sps_matrix_save_csv(const sps_matrix* matrix, const char* path) {
  return guarded([&] {
    require(matrix != nullptr && path != nullptr, "pointers must not be NULL");
    save_matrix_csv(matrix->matrix, path);
  });
}

sps_status sps_matrix_coherence(const sps_matrix* matrix, unsigned threads, double* out) {
  return guarded([&] {
    require(matrix != nullptr && out != nullptr, "pointers must not be NULL");
    const auto& m = matrix->matrix;
    *out = (threads == 0 || m.coherence_cached()) ? m.coherence() : compute_coherence(m.entries(), threads);
  });
}

sps_status sps_matrix_dims(const sps_matrix* matrix, int64_t* rows, int64_t* cols) {
  return guarded([&] {
    require(matrix != nullptr, "matrix must not be NULL");
    if (rows) *rows = matrix->matrix.rows();
    if (cols) *cols = matrix->matrix.cols();
  });
}

const double* sps_matrix_data(const sps_matrix* matrix) {
  return matrix ? matrix->matrix.entries().data() : nullptr;
}

void sps_matrix_free(sps_matrix* matrix) { delete matrix; }

sps_status sps_algorithm_parse(const char* name, sps_algorithm* out) {
  return guarded([&] {
    require(name != nullptr && out != nullptr, "pointers must not be NULL");
    *out = static_cast<sps_algorithm>(parse_algorithm(name));
  });
}

const char* sps_algorithm_name(sps_algorithm algorithm) {
  if (algorithm < SPS_ALG_BOLS || algorithm > SPS_ALG_MOLS) return "unknown";
  return algorithm_name(static_cast<Algorithm>(algorithm)).data();
}

void sps_recover_options_init(sps_recover_options* options) {
  if (!options) return;
  options->algorithm = SPS_ALG_BOLS;
  options->k = 0;
  options->omega_star = 0.0;
  options->mu = -1.0;
  options->max_iterations = 0;
  options->mols_width = kDefaultMolsWidth;
  options->cosamp_max_iterations = kDefaultCoSaMPIterations;
}

sps_status sps_recover(const sps_matrix* matrix, const double* y, int64_t y_len, const sps_recover_options* options,
                       sps_result** out) {
  return guarded([&] {
    require(matrix != nullptr && y != nullptr && options != nullptr && out != nullptr,
            "pointers must not be NULL");
    const auto& d = matrix->matrix;
    if (y_len != d.rows()) fail(ErrorCode::DimensionMismatch, "y length does not match the matrix rows");
    require(options->algorithm >= SPS_ALG_BOLS && options->algorithm <= SPS_ALG_MOLS, "unknown algorithm");

    AlgorithmParams params;
    params.algorithm = static_cast<Algorithm>(options->algorithm);
    params.k = options->k;
    params.blind.omega_star = options->omega_star;
    params.blind.mu = options->mu < 0.0 ? d.coherence() : options->mu;
    params.blind.max_iterations =
        options->max_iterations > 0 ? options->max_iterations : default_blind_max_iterations(d.rows());
    params.mols_width = options->mols_width;
    params.cosamp_max_iterations = options->cosamp_max_iterations;

    const Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y, y_len);
    auto* r = new sps_result{run_algorithm(d, yv, params), {}, {}};
    r->support.assign(r->result.support.begin(), r->result.support.end());
    r->stop_reason = std::string(stop_reason_name(r->result.stop_reason));
    *out = r;
  });
}

int64_t sps_result_length(const sps_result* result) { return result ? result->result.x_hat.size() : 0; }
const double* sps_result_x(const sps_result* result) { return result ? result->result.x_hat.data() : nullptr; }
int64_t sps_result_support_size(const sps_result* result) {
  return result ? static_cast<int64_t>(result->support.size()) : 0;
}
const int64_t* sps_result_support(const sps_result* result) { return result ? result->support.data() : nullptr; }
int sps_result_iterations(const sps_result* result) { return result ? result->result.iterations : 0; }
const char* sps_result_stop_reason(const sps_result* result) {
  return result ? result->stop_reason.c_str() : "";
}
int64_t sps_result_history_size(const sps_result* result) {
  return result ? static_cast<int64_t>(result->result.residual_norm_history.size()) : 0;
}
const double* sps_result_history(const sps_result* result) {
  return result ? result->result.residual_norm_history.data() : nullptr;
}
void sps_result_free(sps_result* result) { delete result; }

sps_status sps_blind_setup(const sps_matrix* matrix, double p_min, double rho, double omega_override,
                           double c_override, sps_blind_info* out) {
  return guarded([&] {
    require(matrix != nullptr && out != nullptr, "pointers must not be NULL");
    ExperimentConfig cfg;
    cfg.M = matrix->matrix.rows();
    cfg.N = matrix->matrix.cols();
    cfg.p_min = p_min;
    cfg.rho = rho;
    if (!std::isnan(omega_override)) cfg.omega = omega_override;
    if (!std::isnan(c_override)) cfg.C_override = c_override;
    const BlindSetup s = derive_blind_setup(matrix->matrix, cfg);
    *out = {s.mu, s.C, s.theta, s.ceiling, s.omega, s.omega_star, s.threshold, s.max_iterations, s.rho_upper,
            s.rho_in_valid_range ? 1 : 0};
  });
}

sps_status sps_theory_singular_bounds(int K, int M, double rho, double* lower, double* upper, double* prob_floor) {
  return guarded([&] {
    const auto b = theory::singular_value_tail_bounds(K, M, rho);
    if (lower) *lower = b.lower;
    if (upper) *upper = b.upper;
    if (prob_floor) *prob_floor = b.prob_floor;
  });
}

sps_status sps_theory_mapping_inflation(int K, int M, double mu, double rho, double* out) {
  return guarded([&] {
    require(out != nullptr, "output pointer must not be NULL");
    *out = theory::mapping_inflation(K, M, mu, rho);
  });
}

sps_status sps_theory_mapping_singular(int K, int M, double mu, double rho, double* out) {
  return guarded([&] {
    require(out != nullptr, "output pointer must not be NULL");
    *out = theory::mapping_factor_lower_singular(K, M, mu, rho);
  });
}

sps_status sps_theory_mapping_coherence(int K, double mu, double* out) {
  return guarded([&] {
    require(out != nullptr, "output pointer must not be NULL");
    *out = theory::mapping_factor_lower_coherence(K, mu);
  });
}

sps_status sps_theory_mapping_gram(int K, double mu, double* out) {
  return guarded([&] {
    require(out != nullptr, "output pointer must not be NULL");
    *out = theory::mapping_factor_lower_gram(K, mu);
  });
}

sps_status sps_theory_tight_slack_limit(int K, int M, double mu, double* out) {
  return guarded([&] {
    require(out != nullptr, "output pointer must not be NULL");
    *out = theory::tight_slack_limit(K, M, mu);
  });
}

sps_status sps_theory_reconstructible_sparsity(double mu, double* out) {
  return guarded([&] {
    require(out != nullptr, "output pointer must not be NULL");
    *out = theory::reconstructible_sparsity(mu);
  });
}

sps_status sps_theory_theta(double M, double C, double* a1, double* a2, double* theta) {
  return guarded([&] {
    const auto t = theory::noise_theta(M, C);
    if (a1) *a1 = t.a1;
    if (a2) *a2 = t.a2;
    if (theta) *theta = t.theta;
  });
}

sps_status sps_theory_ceiling(const sps_theory_params* params, double* out) {
  return guarded([&] {
    require(out != nullptr, "output pointer must not be NULL");
    *out = theory::recovery_probability_ceiling(to_params(params));
  });
}

sps_status sps_theory_probability(const sps_theory_params* params, double omega, double* out) {
  return guarded([&] {
    require(out != nullptr, "output pointer must not be NULL");
    *out = theory::recovery_probability(omega, to_params(params));
  });
}

sps_status sps_theory_omega(const sps_theory_params* params, double* out) {
  return guarded([&] {
    require(out != nullptr, "output pointer must not be NULL");
    const auto p = to_params(params);
    *out = theory::omega_for_probability(p.p_min, p);
  });
}

sps_status sps_theory_snr_min(const sps_theory_params* params, double omega, double* phi1, double* phi2,
                              double* bound) {
  return guarded([&] {
    const auto p = to_params(params);
    const double a = theory::snr_min_selection_bound(p, omega);
    const double b = theory::snr_min_continuation_bound(p, omega);
    if (phi1) *phi1 = a;
    if (phi2) *phi2 = b;
    if (bound) *bound = std::max(a, b);
  });
}

sps_status sps_synthesize(const sps_matrix* matrix, int K, double mean, double var, double snr_db, uint64_t seed,
                          double* x_out, double* y_out, double* sigma_out) {
  return guarded([&] {
    require(matrix != nullptr && x_out != nullptr && y_out != nullptr, "pointers must not be NULL");
    const auto& d = matrix->matrix;
    const SparseSpectrum s = gen_sparse_spectrum(d.cols(), K, mean, var, RngSeed{seed});
    const NoisyMeasurement m = calibrate_noise(d, s.x, snr_db, RngSeed{seed});
    std::memcpy(x_out, s.x.data(), sizeof(double) * static_cast<std::size_t>(s.x.size()));
    std::memcpy(y_out, m.y.data(), sizeof(double) * static_cast<std::size_t>(m.y.size()));
    if (sigma_out) *sigma_out = m.sigma;
  });
}

sps_status sps_experiment_run(const char* figure, const char* scale, const char* config_path,
                              const char* const* overrides, size_t override_count, const char* out_dir,
                              unsigned threads, sps_line_callback callback, void* user) {
  return guarded([&] {
    require(figure != nullptr && out_dir != nullptr, "figure and out_dir must not be NULL");
    require(override_count == 0 || overrides != nullptr, "overrides must not be NULL");
    FigureRequest req;
    req.figure = figure;
    req.scale = scale ? scale : "desk";
    req.out_dir = out_dir;
    req.threads = threads;
    if (config_path) req.config_path = config_path;
    for (size_t i = 0; i < override_count; ++i) {
      const std::string item = overrides[i] ? overrides[i] : "";
      const auto eq = item.find('=');
      if (eq == std::string::npos || eq == 0) fail(ErrorCode::Config, "override '" + item + "' is not key=value");
      req.overrides[item.substr(0, eq)] = item.substr(eq + 1);
    }
    const FigureReport report = run_figure(req);
    if (!callback) return;
    for (const auto& w : report.warnings) callback(SPS_LINE_WARNING, w.c_str(), user);
    for (const auto& s : report.summaries) callback(SPS_LINE_SUMMARY, s.c_str(), user);
    for (const auto& f : report.files) callback(SPS_LINE_FILE, f.string().c_str(), user);
  });
}

sps_status sps_experiment_list(const char* config_path, sps_line_callback callback, void* user) {
  return guarded([&] {
    const ConfigFile file =
        config_path ? ConfigFile::load(config_path) : ConfigFile::parse(builtin_presets(), "figures.conf");
    if (!callback) return;
    for (const auto& name : file.figures()) callback(SPS_LINE_SUMMARY, name.c_str(), user);
  });
}

sps_status sps_plot_csv(const char* csv_path, const char* svg_path, const char* metric, const char* prefix,
                        const char* title, const char* x_label, const char* y_label, int log_y) {
  return guarded([&] {
    require(csv_path != nullptr && svg_path != nullptr, "paths must not be NULL");
    PlotCsvOptions opts;
    if (metric) opts.metric = metric;
    if (prefix) opts.prefix = prefix;
    if (title) opts.spec.title = title;
    if (x_label) opts.spec.x_label = x_label;
    if (y_label) opts.spec.y_label = y_label;
    opts.spec.log_y = log_y != 0;
    plot_csv(csv_path, svg_path, opts);
  });
}

sps_status sps_parse_grid(const char* text, double* out, size_t capacity, size_t* count) {
  return guarded([&] {
    require(text != nullptr && count != nullptr, "pointers must not be NULL");
    require(capacity == 0 || out != nullptr, "output buffer must not be NULL");
    const auto grid = parse_grid("grid", text);
    *count = grid.size();
    for (size_t i = 0; i < grid.size() && i < capacity; ++i) out[i] = grid[i];
  });
}

}  // extern "C"
