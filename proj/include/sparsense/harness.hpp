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

#pragma once

#include <filesystem>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sparsense/linalg.hpp"
#include "sparsense/matrix.hpp"
#include "sparsense/recovery.hpp"
#include "sparsense/rng.hpp"

namespace sparsense {

// ---------------------------------------------------------------------------
// Signals and noise

struct SparseSpectrum {
  Eigen::VectorXd x;
  SupportSet support;  // ascending
  int K = 0;
};

/// K distinct uniformly random support positions, nonzeros i.i.d.
/// 𝒩(mean, var). Deterministic in seed.
SparseSpectrum gen_sparse_spectrum(Index N, int K, double mean, double var, RngSeed seed);

/// Passing this as snr_db means "no noise".
inline constexpr double kNoiselessSnr = std::numeric_limits<double>::infinity();

struct NoisyMeasurement {
  Eigen::VectorXd y;
  double sigma = 0.0;
};

/// σ = ‖Dx‖₂ / √(M·10^{snr_db/10}) from the realized signal energy, then
/// y = Dx + σ·z with z ~ 𝒩(0, I) drawn from seed.
NoisyMeasurement calibrate_noise(const MeasurementMatrix& d, const Eigen::VectorXd& x, double snr_db,
                                 RngSeed seed);

/// Same calibration with a caller-supplied standard normal vector z.
NoisyMeasurement calibrate_noise(const MeasurementMatrix& d, const Eigen::VectorXd& x, double snr_db,
                                 const Eigen::VectorXd& standard_noise);

/// SNR_q = ‖x_q D_q‖₂² / (Mσ²); +∞ when σ = 0.
double snr_component(const MeasurementMatrix& d, const Eigen::VectorXd& x, double sigma, Index q);

/// Smallest SNR_q over the nonzero entries of x.
double snr_min(const MeasurementMatrix& d, const Eigen::VectorXd& x, double sigma);

// ---------------------------------------------------------------------------
// Experiments

struct ExperimentConfig {
  MatrixFamily family = MatrixFamily::Gaussian;
  Index M = 256;
  Index N = 512;
  double offset_max = kDefaultOffsetMax;
  int K = 4;
  std::vector<double> snr_grid_db;
  std::vector<Algorithm> algorithms;
  int trials = 1000;
  RngSeed base_seed{1};
  /// Distinguishes matrices of several panels run under one base seed.
  std::uint64_t matrix_stream = 0;
  double p_min = 0.95;
  double rho = 0.175;
  double vartheta = 0.15;
  double success_tolerance = 0.05;
  double nonzero_mean = 1.0;
  double nonzero_var = 0.01;
  int mols_width = kDefaultMolsWidth;
  int cosamp_max_iterations = kDefaultCoSaMPIterations;
  int blind_max_iterations = 0;  // 0: default_blind_max_iterations(M)
  std::optional<double> omega;   // bypasses the probability inversion
  std::optional<double> C_override;
  unsigned threads = 0;  // 0: hardware concurrency

  /// Throws Config on invalid combinations.
  void validate() const;
};

/// Everything the blind algorithms need, derived once per matrix.
struct BlindSetup {
  double mu = 0.0;
  double C = 0.0;
  double theta = 0.0;
  double ceiling = 0.0;
  double omega = 0.0;
  double omega_star = 0.0;  // omega − rho
  double threshold = 0.0;   // omega_star · mu
  int max_iterations = 0;
  bool omega_from_theory = true;
  bool rho_in_valid_range = true;  // 0 < rho < (C−1)μ − √(C/M)
  double rho_upper = 0.0;

  BlindStopParams stop_params() const { return {omega_star, mu, max_iterations}; }
};

/// Throws InfeasibleParams / InfeasibleTarget before any trial runs.
BlindSetup derive_blind_setup(const MeasurementMatrix& d, const ExperimentConfig& config);

/// The matrix a sweep runs on: one per (base_seed, matrix_stream).
MeasurementMatrix make_experiment_matrix(const ExperimentConfig& config);

/// Ground truth and unit noise for one trial, shared by every algorithm and
/// every grid point.
struct TrialDraw {
  SparseSpectrum spectrum;
  Eigen::VectorXd standard_noise;
};

TrialDraw draw_trial(const ExperimentConfig& config, Index rows, std::size_t trial_index);

struct TrialOutcome {
  Algorithm algorithm = Algorithm::BOls;
  std::size_t trial = 0;
  double grid = 0.0;
  double snr_db = 0.0;
  bool success = false;
  bool exact_support = false;
  double rel_error = 0.0;
  double mse_contrib = 0.0;
  int iterations = 0;
  std::string stop_reason;  // StopReason name, or "error:<code>"
};

/// Runs one algorithm on one trial. Recovery errors become failed outcomes.
TrialOutcome run_trial(const MeasurementMatrix& d, const ExperimentConfig& config,
                       const BlindStopParams& blind, std::size_t trial_index, double snr_db,
                       Algorithm algorithm);

struct MetricsRow {
  double grid = 0.0;  // SNR in dB, or ω for omega sweeps
  Algorithm algorithm = Algorithm::BOls;
  double prob_recovery = 0.0;
  double mse = 0.0;
  double mean_iterations = 0.0;
  int trials = 0;
  int successes = 0;
};

struct SweepResult {
  BlindSetup blind;
  std::vector<MetricsRow> rows;        // sorted by grid, then algorithm name
  std::vector<TrialOutcome> outcomes;  // grid point, trial, algorithm order
};

SweepResult sweep_snr(const MeasurementMatrix& d, const ExperimentConfig& config);
SweepResult sweep_snr(const ExperimentConfig& config);

/// Blind algorithms use threshold ω·μ for every ω in the grid (no slack
/// subtraction); all algorithms run at the single SNR `snr_db`.
SweepResult sweep_omega(const MeasurementMatrix& d, const ExperimentConfig& config,
                        const std::vector<double>& omega_grid, double snr_db);

/// Aggregates outcomes into rows (exposed for independent recounting).
std::vector<MetricsRow> aggregate(const std::vector<TrialOutcome>& outcomes);

inline constexpr const char* kMetricsHeader = "grid,algorithm,prob_recovery,mse,mean_iterations,trials";

std::string format_metrics_csv(const std::vector<MetricsRow>& rows);
std::string format_outcomes_jsonl(const std::vector<TrialOutcome>& outcomes, const ExperimentConfig& config);

}  // namespace sparsense
