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

#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sparsense/linalg.hpp"
#include "sparsense/matrix.hpp"

namespace sparsense {

enum class StopReason {
  BlindThresholdMet,
  ReachedKnownK,
  ReachedMaxIterations,
  ResidualBelowFloor,
  RankDeficient,
  ResidualStagnated,  // CoSaMP only
};

std::string_view stop_reason_name(StopReason reason) noexcept;

enum class Algorithm { BOls, Ols, Omp, BOmp, CoSaMP, MOls };

std::string_view algorithm_name(Algorithm algorithm) noexcept;
Algorithm parse_algorithm(std::string_view name);
bool is_blind(Algorithm algorithm) noexcept;

struct RecoveryResult {
  Eigen::VectorXd x_hat;
  SupportSet support;
  int iterations = 0;
  /// ‖y‖₂ followed by the residual norm after every completed iteration.
  std::vector<double> residual_norm_history;
  StopReason stop_reason = StopReason::ReachedKnownK;
};

/// Blind rule: stop once ‖Dᵀr‖∞ / ‖r‖₂ ≤ omega_star · mu.
struct BlindStopParams {
  double omega_star = 0.0;
  double mu = 0.0;
  int max_iterations = 0;

  double threshold() const noexcept { return omega_star * mu; }
  /// Throws InvalidArgument unless omega_star ≥ 0, mu ∈ [0, 1] and
  /// 1 ≤ max_iterations ≤ rows.
  void validate(Index rows) const;
};

/// Every algorithm stops once ‖r‖₂ ≤ kResidualFloor · ‖y‖₂.
inline constexpr double kResidualFloor = 1e-12;
/// Candidates with ‖P⊥_S D_j‖₂ at or below this are never selected by OLS.
inline constexpr double kMinProjectedNorm = 1e-12;
inline constexpr double kZeroResidualNorm = 1e-300;
inline constexpr int kDefaultCoSaMPIterations = 50;
inline constexpr double kCoSaMPStagnation = 1e-6;
inline constexpr int kDefaultMolsWidth = 2;

/// Safety cap for blind algorithms when the caller gives none: ⌊M/2⌋, the
/// largest sparsity that can be uniquely identified from M measurements.
int default_blind_max_iterations(Index rows) noexcept;

/// ‖Dᵀr‖∞ / ‖r‖₂. Throws ZeroResidual when ‖r‖₂ < 1e-300.
double blind_stop_statistic(const MeasurementMatrix& d, const Eigen::VectorXd& r);

/// argmin_{j∉S} ‖P⊥_{S∪{j}} y‖₂², evaluated through the equivalent
/// argmax_j |⟨D_j, r⟩| / ‖P⊥_S D_j‖₂ with r = P⊥_S y. Lowest index wins ties.
/// Returns -1 when no admissible candidate exists.
Index ols_select(const MeasurementMatrix& d, const Eigen::VectorXd& y, const SupportSet& support);

/// argmax_{j∉S} |⟨D_j, r⟩|, lowest index on ties.
Index omp_select(const MeasurementMatrix& d, const Eigen::VectorXd& r, const SupportSet& support);

RecoveryResult run_bols(const MeasurementMatrix& d, const Eigen::VectorXd& y,
                        const BlindStopParams& params);
RecoveryResult run_bomp(const MeasurementMatrix& d, const Eigen::VectorXd& y,
                        const BlindStopParams& params);
RecoveryResult run_ols_known_k(const MeasurementMatrix& d, const Eigen::VectorXd& y, int k);
RecoveryResult run_omp_known_k(const MeasurementMatrix& d, const Eigen::VectorXd& y, int k);
RecoveryResult run_cosamp(const MeasurementMatrix& d, const Eigen::VectorXd& y, int k,
                          int max_iterations = kDefaultCoSaMPIterations);
RecoveryResult run_mols(const MeasurementMatrix& d, const Eigen::VectorXd& y, int k, int width);

/// Dispatch bundle used by the harness and the C API.
struct AlgorithmParams {
  Algorithm algorithm = Algorithm::BOls;
  int k = 0;  // sparsity for the known-K algorithms
  BlindStopParams blind;
  int mols_width = kDefaultMolsWidth;
  int cosamp_max_iterations = kDefaultCoSaMPIterations;
};

RecoveryResult run_algorithm(const MeasurementMatrix& d, const Eigen::VectorXd& y,
                             const AlgorithmParams& params);

}  // namespace sparsense
