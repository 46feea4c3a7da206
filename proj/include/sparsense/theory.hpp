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

#include <optional>

namespace sparsense::theory {

// Closed-form recovery bounds for OLS with a coherence-based blind stopping
// rule. All logarithms are natural. Preconditions are checked and reported
// as Error{InfeasibleParams} naming the violated condition.

/// Inputs shared by the probability and SNR calculators.
struct TheoryParams {
  int M = 0;
  int N = 0;
  double mu = 0.0;   // coherence of the measurement matrix
  double rho = 0.0;  // singular-value slack
  int K = 0;         // sparsity, where an operation needs it
  std::optional<double> C_override;  // reconstructible sparsity; surrogate if unset
  double p_min = 0.95;

  /// C_override when set, otherwise reconstructible_sparsity(mu).
  double C() const;
};

struct SingularValueBounds {
  double lower = 0.0;       // 1 − √(K/M) − ρ
  double upper = 0.0;       // 1 + √(K/M) + ρ
  double prob_floor = 0.0;  // 1 − exp(−Mρ²/2)
};

/// Concentration bounds for the extreme singular values of an M×K matrix
/// with i.i.d. 𝒩(0, 1/M) entries.
SingularValueBounds singular_value_tail_bounds(int K, int M, double rho);

/// 𝒯 = (1 − Kμ²(1+√(K/M)+ρ)/(1−√(K/M)−ρ)²)⁻¹.
double mapping_inflation(int K, int M, double mu, double rho);

/// Lower bound 1/√𝒯 on ‖P⊥_S D_i‖₂ from the singular-value tails.
/// Requires μ < 1/(K−1), 1 − √(K/M) − ρ > 0 and 𝒯 > 0.
double mapping_factor_lower_singular(int K, int M, double mu, double rho);

/// Classical coherence bound √(1 − Kμ). Requires Kμ < 1.
double mapping_factor_lower_coherence(int K, double mu);

/// Gram-eigenvalue bound √(1 − (1+(K−1)μ)Kμ²/(1−(K−1)μ)²).
/// Requires (K−1)μ < 1 and a nonnegative radicand.
double mapping_factor_lower_gram(int K, double mu);

/// (K−1)μ − √(K/M): slacks ρ below this make the singular-value bound the
/// tightest of the three. Nonpositive means no such ρ exists.
double tight_slack_limit(int K, int M, double mu);

/// Coherence-only reconstructible sparsity (1 + 1/μ)/2.
double reconstructible_sparsity(double mu);

struct NoiseTheta {
  double a1 = 0.0;     // 4(M−C) − 2
  double a2 = 0.0;     // M−C + 2√((M−C) ln(M−C))
  double theta = 0.0;  // √a1 − √a2
};

/// Requires M − C > 1.
NoiseTheta noise_theta(double M, double C);

/// 1 − 2e^{−Mρ²/2} − 1/(M−C) − 1/M: the supremum of recovery_probability.
double recovery_probability_ceiling(const TheoryParams& params);

/// 𝒫(ω) = ceiling − C·N / (e^{ω²μ²θ²/2} √(2π ω²μ²θ²)). Requires ω > 0.
double recovery_probability(double omega, const TheoryParams& params);

inline constexpr double kInversionTolerance = 1e-10;
inline constexpr int kInversionMaxIterations = 200;

/// ω with |𝒫(ω) − p_min| ≤ 1e-10, by bisection. Throws InfeasibleTarget when
/// p_min is not below the ceiling.
double omega_for_probability(double p_min, const TheoryParams& params);

/// SNR_min floor guaranteeing a correct selection at every iteration.
double snr_min_selection_bound(const TheoryParams& params, double omega);

/// SNR_min floor guaranteeing the blind rule does not fire before all K
/// atoms are selected. Requires 1−√(K/M)−ρ−ωμ(1+√(K/M)+ρ)√K > 0.
double snr_min_continuation_bound(const TheoryParams& params, double omega);

/// max of the two floors above (linear scale, not dB).
double snr_min_bound(const TheoryParams& params, double omega);

}  // namespace sparsense::theory
