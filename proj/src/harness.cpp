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

#include "sparsense/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "sparsense/error.hpp"
#include "sparsense/theory.hpp"

namespace sparsense {

namespace {

constexpr std::uint64_t kMatrixRole = 0;
constexpr std::uint64_t kSpectrumRole = 1;
constexpr std::uint64_t kNoiseRole = 2;

// Runs body(i) for i in [0, count) on up to `threads` workers. Results must
// be written by index so the outcome does not depend on scheduling.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(count);
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

bool any_blind(const std::vector<Algorithm>& algorithms) {
  return std::any_of(algorithms.begin(), algorithms.end(), is_blind);
}

TrialOutcome evaluate(const MeasurementMatrix& d, const ExperimentConfig& config, const BlindStopParams& blind,
                      const SparseSpectrum& truth, const Eigen::VectorXd& y, Algorithm algorithm) {
  TrialOutcome out;
  out.algorithm = algorithm;
  AlgorithmParams params;
  params.algorithm = algorithm;
  params.k = config.K;
  params.blind = blind;
  params.mols_width = config.mols_width;
  params.cosamp_max_iterations = config.cosamp_max_iterations;

  RecoveryResult result;
  try {
    result = run_algorithm(d, y, params);
  } catch (const Error& e) {
    out.stop_reason = "error:" + std::string(error_code_name(e.code()));
    out.rel_error = std::numeric_limits<double>::infinity();
    out.mse_contrib = truth.x.squaredNorm() / static_cast<double>(d.cols());
    return out;
  }

  const double err_sq = (result.x_hat - truth.x).squaredNorm();
  const double truth_norm = truth.x.norm();
  out.rel_error = truth_norm > 0.0 ? std::sqrt(err_sq) / truth_norm : std::sqrt(err_sq);
  out.success = out.rel_error <= config.success_tolerance;
  out.exact_support = result.support.sorted() == truth.support.sorted();
  out.mse_contrib = err_sq / static_cast<double>(d.cols());
  out.iterations = result.iterations;
  out.stop_reason = std::string(stop_reason_name(result.stop_reason));
  return out;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
  auto bad = [](const std::string& what) { fail(ErrorCode::Config, what); };
  if (M <= 0 || N <= 0) bad("m and n must be positive");
  if (M > N) bad("m must not exceed n");
  if (K < 1 || K > M) bad("k must lie in [1, m]");
  if (trials < 1) bad("trials must be at least 1");
  if (snr_grid_db.empty()) bad("the SNR grid must not be empty");
  if (algorithms.empty()) bad("at least one algorithm is required");
  if (!(success_tolerance > 0.0)) bad("success_tolerance must be positive");
  if (!(nonzero_var >= 0.0)) bad("nonzero_var must be nonnegative");
  if (!(offset_max >= 0.0)) bad("offset_max must be nonnegative");
  if (mols_width < 1) bad("mols_width must be at least 1");
  if (cosamp_max_iterations < 1) bad("cosamp_max_iterations must be at least 1");
  if (blind_max_iterations < 0) bad("blind_max_iterations must be nonnegative");
  if (!(p_min > 0.0 && p_min < 1.0)) bad("pmin must lie in (0, 1)");
  if (!(rho > 0.0)) bad("rho must be positive");
  if (omega && !(*omega > 0.0)) bad("omega must be positive");
}

MeasurementMatrix make_experiment_matrix(const ExperimentConfig& config) {
  const RngSeed seed = derive_seed(config.base_seed, {config.matrix_stream, kMatrixRole});
  return config.family == MatrixFamily::Gaussian
             ? gen_gaussian_normalized(config.M, config.N, seed)
             : gen_hybrid_normalized(config.M, config.N, config.offset_max, seed);
}

BlindSetup derive_blind_setup(const MeasurementMatrix& d, const ExperimentConfig& config) {
  BlindSetup s;
  s.mu = d.coherence();
  theory::TheoryParams tp;
  tp.M = static_cast<int>(d.rows());
  tp.N = static_cast<int>(d.cols());
  tp.mu = s.mu;
  tp.rho = config.rho;
  tp.K = config.K;
  tp.C_override = config.C_override;
  tp.p_min = config.p_min;
  s.C = tp.C();

  if (config.omega) {
    s.omega = *config.omega;
    s.omega_from_theory = false;
  } else {
    s.theta = theory::noise_theta(tp.M, s.C).theta;
    s.ceiling = theory::recovery_probability_ceiling(tp);
    s.omega = theory::omega_for_probability(config.p_min, tp);
  }
  if (s.theta == 0.0 && tp.M - s.C > 1.0) s.theta = theory::noise_theta(tp.M, s.C).theta;

  s.omega_star = s.omega - config.rho;
  if (!(s.omega_star >= 0.0)) {
    fail(ErrorCode::InfeasibleParams, "omega - rho must be nonnegative (omega=" + fmt_double(s.omega) +
                                          ", rho=" + fmt_double(config.rho) + ")");
  }
  s.threshold = s.omega_star * s.mu;
  s.max_iterations = config.blind_max_iterations > 0
                         ? static_cast<int>(std::min<Index>(config.blind_max_iterations, d.rows()))
                         : default_blind_max_iterations(d.rows());
  s.rho_upper = (s.C - 1.0) * s.mu - std::sqrt(s.C / static_cast<double>(d.rows()));
  s.rho_in_valid_range = config.rho > 0.0 && config.rho < s.rho_upper;
  return s;
}

TrialDraw draw_trial(const ExperimentConfig& config, Index rows, std::size_t trial_index) {
  TrialDraw draw;
  const auto t = static_cast<std::uint64_t>(trial_index);
  draw.spectrum = gen_sparse_spectrum(config.N, config.K, config.nonzero_mean, config.nonzero_var,
                                      derive_seed(config.base_seed, {t, kSpectrumRole}));
  auto engine = make_engine(config.base_seed, {t, kNoiseRole});
  std::normal_distribution<double> normal(0.0, 1.0);
  draw.standard_noise.resize(rows);
  for (Index i = 0; i < rows; ++i) draw.standard_noise(i) = normal(engine);
  return draw;
}

TrialOutcome run_trial(const MeasurementMatrix& d, const ExperimentConfig& config,
                       const BlindStopParams& blind, std::size_t trial_index, double snr_db,
                       Algorithm algorithm) {
  const TrialDraw draw = draw_trial(config, d.rows(), trial_index);
  const auto meas = calibrate_noise(d, draw.spectrum.x, snr_db, draw.standard_noise);
  TrialOutcome out = evaluate(d, config, blind, draw.spectrum, meas.y, algorithm);
  out.trial = trial_index;
  out.grid = snr_db;
  out.snr_db = snr_db;
  return out;
}

SweepResult sweep_snr(const MeasurementMatrix& d, const ExperimentConfig& config) {
  config.validate();
  if (d.rows() != config.M || d.cols() != config.N) {
    fail(ErrorCode::DimensionMismatch, "matrix shape does not match the experiment config");
  }
  SweepResult result;
  if (any_blind(config.algorithms)) {
    result.blind = derive_blind_setup(d, config);
  } else {
    result.blind.mu = d.coherence();
  }
  const BlindStopParams blind = result.blind.stop_params();

  const std::size_t grid = config.snr_grid_db.size();
  const auto trials = static_cast<std::size_t>(config.trials);
  const std::size_t algs = config.algorithms.size();
  result.outcomes.resize(grid * trials * algs);

  parallel_for(grid * trials, config.threads, [&](std::size_t item) {
    const std::size_t g = item / trials;
    const std::size_t t = item % trials;
    const double snr = config.snr_grid_db[g];
    const TrialDraw draw = draw_trial(config, d.rows(), t);
    const auto meas = calibrate_noise(d, draw.spectrum.x, snr, draw.standard_noise);
    for (std::size_t a = 0; a < algs; ++a) {
      TrialOutcome o = evaluate(d, config, blind, draw.spectrum, meas.y, config.algorithms[a]);
      o.trial = t;
      o.grid = snr;
      o.snr_db = snr;
      result.outcomes[item * algs + a] = std::move(o);
    }
  });
  result.rows = aggregate(result.outcomes);
  return result;
}

SweepResult sweep_snr(const ExperimentConfig& config) {
  config.validate();
  return sweep_snr(make_experiment_matrix(config), config);
}

SweepResult sweep_omega(const MeasurementMatrix& d, const ExperimentConfig& config,
                        const std::vector<double>& omega_grid, double snr_db) {
  config.validate();
  if (omega_grid.empty()) fail(ErrorCode::Config, "the omega grid must not be empty");
  for (double w : omega_grid) {
    if (!(w >= 0.0)) fail(ErrorCode::Config, "omega grid values must be nonnegative");
  }
  SweepResult result;
  result.blind.mu = d.coherence();
  result.blind.max_iterations = config.blind_max_iterations > 0
                                    ? static_cast<int>(std::min<Index>(config.blind_max_iterations, d.rows()))
                                    : default_blind_max_iterations(d.rows());

  const std::size_t grid = omega_grid.size();
  const auto trials = static_cast<std::size_t>(config.trials);
  const std::size_t algs = config.algorithms.size();
  result.outcomes.resize(grid * trials * algs);

  parallel_for(trials, config.threads, [&](std::size_t t) {
    const TrialDraw draw = draw_trial(config, d.rows(), t);
    const auto meas = calibrate_noise(d, draw.spectrum.x, snr_db, draw.standard_noise);
    for (std::size_t g = 0; g < grid; ++g) {
      const BlindStopParams blind{omega_grid[g], result.blind.mu, result.blind.max_iterations};
      for (std::size_t a = 0; a < algs; ++a) {
        TrialOutcome o = evaluate(d, config, blind, draw.spectrum, meas.y, config.algorithms[a]);
        o.trial = t;
        o.grid = omega_grid[g];
        o.snr_db = snr_db;
        result.outcomes[(g * trials + t) * algs + a] = std::move(o);
      }
    }
  });
  result.rows = aggregate(result.outcomes);
  return result;
}

std::vector<MetricsRow> aggregate(const std::vector<TrialOutcome>& outcomes) {
  struct Acc {
    Algorithm algorithm;
    int trials = 0;
    int successes = 0;
    double mse = 0.0;
    double iterations = 0.0;
  };
  std::map<std::pair<double, std::string_view>, Acc> groups;
  for (const auto& o : outcomes) {
    auto [it, inserted] = groups.try_emplace({o.grid, algorithm_name(o.algorithm)}, Acc{o.algorithm});
    Acc& acc = it->second;
    ++acc.trials;
    acc.successes += o.success ? 1 : 0;
    acc.mse += o.mse_contrib;
    acc.iterations += o.iterations;
  }
  std::vector<MetricsRow> rows;
  rows.reserve(groups.size());
  for (const auto& [key, acc] : groups) {
    MetricsRow r;
    r.grid = key.first;
    r.algorithm = acc.algorithm;
    r.trials = acc.trials;
    r.successes = acc.successes;
    r.prob_recovery = static_cast<double>(acc.successes) / acc.trials;
    r.mse = acc.mse / acc.trials;
    r.mean_iterations = acc.iterations / acc.trials;
    rows.push_back(r);
  }
  return rows;
}

std::string format_metrics_csv(const std::vector<MetricsRow>& rows) {
  std::string out = std::string(kMetricsHeader) + "\n";
  for (const auto& r : rows) {
    out += fmt_double(r.grid) + "," + std::string(algorithm_name(r.algorithm)) + "," +
           fmt_double(r.prob_recovery) + "," + fmt_double(r.mse) + "," + fmt_double(r.mean_iterations) + "," +
           std::to_string(r.trials) + "\n";
  }
  return out;
}

std::string format_outcomes_jsonl(const std::vector<TrialOutcome>& outcomes, const ExperimentConfig& config) {
  std::string out;
  for (const auto& o : outcomes) {
    nlohmann::ordered_json j;
    j["algorithm"] = algorithm_name(o.algorithm);
    j["seed"] = config.base_seed.value;
    j["trial"] = o.trial;
    j["K"] = config.K;
    j["M"] = config.M;
    j["N"] = config.N;
    j["grid"] = o.grid;
    if (std::isfinite(o.snr_db)) {
      j["snr_db"] = o.snr_db;
    } else {
      j["snr_db"] = "inf";
    }
    j["success"] = o.success;
    j["exact_support"] = o.exact_support;
    j["rel_error"] = std::isfinite(o.rel_error) ? nlohmann::ordered_json(o.rel_error) : nlohmann::ordered_json();
    j["mse_contrib"] = o.mse_contrib;
    j["iterations"] = o.iterations;
    j["stop_reason"] = o.stop_reason;
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace sparsense
