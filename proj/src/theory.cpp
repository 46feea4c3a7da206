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

#include "sparsense/theory.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "sparsense/error.hpp"

namespace sparsense::theory {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

[[noreturn]] void infeasible(const std::string& what) { fail(ErrorCode::InfeasibleParams, what); }

void require_dims(int K, int M) {
  if (M <= 0) fail(ErrorCode::InvalidArgument, "M must be positive");
  if (K < 0 || K > M) fail(ErrorCode::InvalidArgument, "K must lie in [0, M]");
}

void require_mu(double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) fail(ErrorCode::InvalidArgument, "mu must lie in [0, 1], got " + num(mu));
}

// Lemma-style preconditions shared by the mapping-factor and SNR bounds.
void require_singular_preconditions(int K, int M, double mu, double rho) {
  require_dims(K, M);
  require_mu(mu);
  if (!(rho >= 0.0)) fail(ErrorCode::InvalidArgument, "rho must be nonnegative");
  if (K > 1 && !(mu < 1.0 / (K - 1))) {
    infeasible("precondition mu < 1/(K-1) violated (mu=" + num(mu) + ", K=" + std::to_string(K) + ")");
  }
  if (!(1.0 - std::sqrt(static_cast<double>(K) / M) - rho > 0.0)) {
    infeasible("precondition 1 - sqrt(K/M) - rho > 0 violated (K=" + std::to_string(K) +
               ", M=" + std::to_string(M) + ", rho=" + num(rho) + ")");
  }
}

double inflation_radicand(int K, int M, double mu, double rho) {
  const double a = std::sqrt(static_cast<double>(K) / M);
  const double lo = 1.0 - a - rho;
  return 1.0 - K * mu * mu * (1.0 + a + rho) / (lo * lo);
}

void require_probability_params(const TheoryParams& p) {
  if (p.M <= 0 || p.N <= 0) fail(ErrorCode::InvalidArgument, "M and N must be positive");
  if (!(p.mu > 0.0 && p.mu <= 1.0)) {
    fail(ErrorCode::InvalidArgument, "mu must lie in (0, 1], got " + num(p.mu));
  }
  if (!(p.rho > 0.0)) fail(ErrorCode::InvalidArgument, "rho must be positive, got " + num(p.rho));
}

}  // namespace

double TheoryParams::C() const { return C_override ? *C_override : reconstructible_sparsity(mu); }

SingularValueBounds singular_value_tail_bounds(int K, int M, double rho) {
  require_dims(K, M);
  if (!(rho >= 0.0)) fail(ErrorCode::InvalidArgument, "rho must be nonnegative");
  const double a = std::sqrt(static_cast<double>(K) / M);
  return {1.0 - a - rho, 1.0 + a + rho, 1.0 - std::exp(-M * rho * rho / 2.0)};
}

double mapping_inflation(int K, int M, double mu, double rho) {
  require_singular_preconditions(K, M, mu, rho);
  const double radicand = inflation_radicand(K, M, mu, rho);
  if (!(radicand > 0.0)) {
    infeasible("precondition K*mu^2*(1+sqrt(K/M)+rho) < (1-sqrt(K/M)-rho)^2 violated (T would be "
               "nonpositive)");
  }
  return 1.0 / radicand;
}

double mapping_factor_lower_singular(int K, int M, double mu, double rho) {
  return 1.0 / std::sqrt(mapping_inflation(K, M, mu, rho));
}

double mapping_factor_lower_coherence(int K, double mu) {
  require_mu(mu);
  if (K < 0) fail(ErrorCode::InvalidArgument, "K must be nonnegative");
  if (!(K * mu < 1.0)) infeasible("precondition K*mu < 1 violated (K*mu=" + num(K * mu) + ")");
  return std::sqrt(1.0 - K * mu);
}

double mapping_factor_lower_gram(int K, double mu) {
  require_mu(mu);
  if (K < 1) fail(ErrorCode::InvalidArgument, "K must be positive");
  const double spread = (K - 1) * mu;
  if (!(spread < 1.0)) infeasible("precondition (K-1)*mu < 1 violated ((K-1)*mu=" + num(spread) + ")");
  const double radicand = 1.0 - (1.0 + spread) * K * mu * mu / ((1.0 - spread) * (1.0 - spread));
  if (!(radicand >= 0.0)) {
    infeasible("Gram bound radicand is negative (" + num(radicand) + ") for K=" + std::to_string(K) +
               ", mu=" + num(mu));
  }
  return std::sqrt(radicand);
}

double tight_slack_limit(int K, int M, double mu) {
  require_dims(K, M);
  return (K - 1) * mu - std::sqrt(static_cast<double>(K) / M);
}

double reconstructible_sparsity(double mu) {
  if (!(mu > 0.0 && mu <= 1.0)) {
    fail(ErrorCode::InvalidArgument, "reconstructible sparsity needs mu in (0, 1], got " + num(mu));
  }
  return (1.0 + 1.0 / mu) / 2.0;
}

NoiseTheta noise_theta(double M, double C) {
  const double gap = M - C;
  if (!(gap > 1.0)) {
    infeasible("precondition M - C > 1 violated (M=" + num(M) + ", C=" + num(C) + ")");
  }
  NoiseTheta t;
  t.a1 = 4.0 * gap - 2.0;
  t.a2 = gap + 2.0 * std::sqrt(gap * std::log(gap));
  t.theta = std::sqrt(t.a1) - std::sqrt(t.a2);
  return t;
}

double recovery_probability_ceiling(const TheoryParams& p) {
  require_probability_params(p);
  const double C = p.C();
  noise_theta(p.M, C);  // validates M − C > 1
  return 1.0 - 2.0 * std::exp(-p.M * p.rho * p.rho / 2.0) - 1.0 / (p.M - C) - 1.0 / p.M;
}

double recovery_probability(double omega, const TheoryParams& p) {
  if (!(omega > 0.0)) fail(ErrorCode::InvalidArgument, "omega must be positive, got " + num(omega));
  const double ceiling = recovery_probability_ceiling(p);
  const double C = p.C();
  const double theta = noise_theta(p.M, C).theta;
  const double z2 = omega * omega * p.mu * p.mu * theta * theta;
  // C·N / (e^{z²/2} √(2π z²)) in log space so large ω underflows cleanly.
  const double log_tail =
      std::log(C * p.N) - 0.5 * z2 - 0.5 * std::log(2.0 * std::numbers::pi * z2);
  return ceiling - std::exp(log_tail);
}

double omega_for_probability(double p_min, const TheoryParams& params) {
  const double ceiling = recovery_probability_ceiling(params);
  if (!(p_min < ceiling)) {
    fail(ErrorCode::InfeasibleTarget, "target probability " + num(p_min) +
                                          " is not below the attainable ceiling " + num(ceiling));
  }
  auto p = [&params](double w) { return recovery_probability(w, params); };
  const double theta = noise_theta(params.M, params.C()).theta;

  // The Gaussian-tail term is strictly decreasing in ω on (0, ∞), so any
  // bracket with p(lo) < p_min ≤ p(hi) contains the unique root.
  double lo = 1.0 / (params.mu * theta);
  for (int i = 0; i < kInversionMaxIterations && p(lo) > p_min; ++i) lo /= 2.0;
  double hi = std::max(2.0 * lo, 1.0);
  for (int i = 0; i < kInversionMaxIterations && p(hi) < p_min; ++i) hi *= 2.0;
  double p_lo = p(lo);
  double p_hi = p(hi);
  if (!(p_lo <= p_min && p_min <= p_hi)) {
    fail(ErrorCode::InfeasibleTarget, "could not bracket target probability " + num(p_min));
  }

  double best = hi;
  double best_err = std::abs(p_hi - p_min);
  for (int i = 0; i < kInversionMaxIterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double p_mid = p(mid);
    if (p_mid < p_lo || p_mid > p_hi) {
      fail(ErrorCode::InfeasibleParams, "recovery probability is not monotone on the bisection bracket");
    }
    const double err = std::abs(p_mid - p_min);
    if (err < best_err) {
      best = mid;
      best_err = err;
    }
    if (err <= 0.1 * kInversionTolerance || mid == lo || mid == hi) break;
    if (p_mid < p_min) {
      lo = mid;
      p_lo = p_mid;
    } else {
      hi = mid;
      p_hi = p_mid;
    }
  }
  if (best_err > kInversionTolerance) {
    fail(ErrorCode::InfeasibleTarget, "bisection did not reach tolerance (residual " + num(best_err) + ")");
  }
  return best;
}

double snr_min_selection_bound(const TheoryParams& params, double omega) {
  const int K = params.K;
  const double mu = params.mu;
  const double T = mapping_inflation(K, params.M, mu, params.rho);
  const double theta = noise_theta(params.M, params.C()).theta;
  const double lead = 2.0 - (K - T) * mu;
  const double gap = lead - 2.0 * K * T * mu;
  const double spread = 1.0 - (K - 1) * mu;
  if (gap == 0.0) infeasible("selection bound factor 2-(K-T)mu-2KTmu is zero");
  if (spread == 0.0) infeasible("selection bound factor 1-(K-1)mu is zero");
  return 4.0 * lead * lead * omega * omega * mu * mu * theta * theta /
         (params.M * gap * gap * spread * spread);
}

double snr_min_continuation_bound(const TheoryParams& params, double omega) {
  const int K = params.K;
  const int M = params.M;
  const double mu = params.mu;
  mapping_inflation(K, M, mu, params.rho);  // shared preconditions
  const double theta = noise_theta(M, params.C()).theta;
  const double a = std::sqrt(static_cast<double>(K) / M);
  const double base = 1.0 - a - params.rho - omega * mu * (1.0 + a + params.rho) * std::sqrt(K);
  if (!(base > 0.0)) {
    infeasible("continuation bound factor 1-sqrt(K/M)-rho-omega*mu*(1+sqrt(K/M)+rho)*sqrt(K) must be "
               "positive (got " + num(base) + ")");
  }
  const double noise = theta + std::sqrt(M + 2.0 * std::sqrt(M * std::log(static_cast<double>(M))));
  return omega * omega * mu * mu * noise * noise / (M * base * base);
}

double snr_min_bound(const TheoryParams& params, double omega) {
  return std::max(snr_min_selection_bound(params, omega), snr_min_continuation_bound(params, omega));
}

}  // namespace sparsense::theory
