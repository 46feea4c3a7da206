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

#include "sparsense/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <string>

#include "sparsense/error.hpp"

namespace sparsense {

namespace {

using Eigen::VectorXd;

// Shared state of the single- and multi-atom greedy algorithms: support,
// least-squares fit, residual r, correlations Dᵀr and, for the OLS family,
// the squared projected column norms ‖P⊥_S D_j‖₂² kept current through an
// orthonormal basis of span(D_S).
class GreedyState {
 public:
  GreedyState(const MeasurementMatrix& d, const VectorXd& y, bool track_projections)
      : d_(d), y_(y), track_(track_projections), selected_(static_cast<std::size_t>(d.cols()), 0) {
    if (y.size() != d.rows()) {
      fail(ErrorCode::DimensionMismatch, "measurement length " + std::to_string(y.size()) +
                                             " does not match M=" + std::to_string(d.rows()));
    }
    r_ = y;
    r_norm_ = y.norm();
    y_norm_ = r_norm_;
    c_.noalias() = d.entries().transpose() * r_;
    if (track_) {
      proj_sq_ = d.entries().colwise().squaredNorm().transpose();
      basis_.resize(d.rows(), 0);
    }
  }

  const SupportSet& support() const noexcept { return support_; }
  double residual_norm() const noexcept { return r_norm_; }
  double floor() const noexcept { return kResidualFloor * y_norm_; }
  bool below_floor() const noexcept { return r_norm_ <= floor(); }
  double statistic() const { return c_.cwiseAbs().maxCoeff() / r_norm_; }
  const VectorXd& residual() const noexcept { return r_; }

  Index select_omp() const {
    Index best = -1;
    double best_value = -1.0;
    for (Index j = 0; j < c_.size(); ++j) {
      if (selected_[static_cast<std::size_t>(j)]) continue;
      const double v = std::abs(c_(j));
      if (v > best_value) {
        best_value = v;
        best = j;
      }
    }
    return best;
  }

  Index select_ols() const {
    Index best = -1;
    double best_score = -1.0;
    for (Index j = 0; j < c_.size(); ++j) {
      const double score = ols_score(j);
      if (score > best_score) {
        best_score = score;
        best = j;
      }
    }
    return best;
  }

  // The `width` admissible candidates with the smallest augmented projection
  // residuals, best first.
  std::vector<Index> select_ols_top(int width) const {
    std::vector<std::pair<double, Index>> scored;
    for (Index j = 0; j < c_.size(); ++j) {
      const double score = ols_score(j);
      if (score >= 0.0) scored.emplace_back(score, j);
    }
    const auto take = std::min<std::size_t>(static_cast<std::size_t>(width), scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(take), scored.end(),
                      [](const auto& a, const auto& b) {
                        return a.first > b.first || (a.first == b.first && a.second < b.second);
                      });
    std::vector<Index> out;
    for (std::size_t k = 0; k < take; ++k) out.push_back(scored[k].second);
    return out;
  }

  // Adds the given columns and refits. Leaves the state untouched and returns
  // false when the enlarged D_S would be rank deficient.
  bool try_extend(std::span<const Index> columns) {
    SupportSet grown = support_;
    for (Index j : columns) grown.add(j);
    VectorXd coef;
    try {
      coef = least_squares_coefficients(d_, y_, grown);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::RankDeficient) return false;
      throw;
    }

    Eigen::MatrixXd basis;
    if (track_) {
      basis = basis_;
      for (Index j : columns) {
        VectorXd v = d_.column(j);
        for (int pass = 0; pass < 2; ++pass) {
          if (basis.cols() > 0) v -= basis * (basis.transpose() * v);
        }
        const double norm = v.norm();
        if (norm <= kMinProjectedNorm) return false;
        basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
        basis.col(basis.cols() - 1) = v / norm;
      }
    }

    const Index old_rank = track_ ? basis_.cols() : 0;
    support_ = std::move(grown);
    for (Index j : columns) selected_[static_cast<std::size_t>(j)] = 1;
    coef_ = std::move(coef);
    r_ = y_ - gather_columns(d_, support_) * coef_;
    r_norm_ = r_.norm();
    c_.noalias() = d_.entries().transpose() * r_;
    if (track_) {
      basis_ = std::move(basis);
      for (Index k = old_rank; k < basis_.cols(); ++k) {
        const VectorXd w = d_.entries().transpose() * basis_.col(k);
        proj_sq_ = (proj_sq_ - w.cwiseAbs2()).cwiseMax(0.0);
      }
    }
    return true;
  }

  bool try_extend(Index column) { return try_extend(std::span<const Index>(&column, 1)); }

  VectorXd x_hat() const {
    VectorXd x = VectorXd::Zero(d_.cols());
    for (std::size_t k = 0; k < support_.size(); ++k) x(support_[k]) = coef_(static_cast<Index>(k));
    return x;
  }

  const VectorXd& coefficients() const noexcept { return coef_; }

 private:
  // |⟨D_j, r⟩| / ‖P⊥_S D_j‖₂, or -1 for selected / inadmissible columns.
  double ols_score(Index j) const {
    if (selected_[static_cast<std::size_t>(j)]) return -1.0;
    const double p = proj_sq_(j);
    if (!(p > kMinProjectedNorm * kMinProjectedNorm)) return -1.0;
    return std::abs(c_(j)) / std::sqrt(p);
  }

  const MeasurementMatrix& d_;
  const VectorXd& y_;
  bool track_;
  std::vector<char> selected_;
  SupportSet support_;
  VectorXd coef_;
  VectorXd r_;
  VectorXd c_;
  double r_norm_ = 0.0;
  double y_norm_ = 0.0;
  VectorXd proj_sq_;
  Eigen::MatrixXd basis_;
};

enum class Selection { Ols, Omp };

RecoveryResult finish(const GreedyState& state, int iterations, std::vector<double> history,
                      StopReason reason) {
  RecoveryResult out;
  out.x_hat = state.x_hat();
  out.support = state.support();
  out.iterations = iterations;
  out.residual_norm_history = std::move(history);
  out.stop_reason = reason;
  return out;
}

void check_k(const MeasurementMatrix& d, int k) {
  if (k < 0 || k > d.rows()) {
    fail(ErrorCode::InvalidArgument, "sparsity K=" + std::to_string(k) + " must lie in [0, M=" +
                                         std::to_string(d.rows()) + "]");
  }
}

RecoveryResult run_known_k(const MeasurementMatrix& d, const VectorXd& y, int k, Selection sel) {
  check_k(d, k);
  GreedyState state(d, y, sel == Selection::Ols);
  std::vector<double> history{state.residual_norm()};
  int iterations = 0;
  while (true) {
    if (iterations == k) return finish(state, iterations, std::move(history), StopReason::ReachedKnownK);
    if (state.below_floor()) {
      return finish(state, iterations, std::move(history), StopReason::ResidualBelowFloor);
    }
    const Index j = sel == Selection::Ols ? state.select_ols() : state.select_omp();
    if (j < 0 || !state.try_extend(j)) {
      return finish(state, iterations, std::move(history), StopReason::RankDeficient);
    }
    ++iterations;
    history.push_back(state.residual_norm());
  }
}

RecoveryResult run_blind(const MeasurementMatrix& d, const VectorXd& y, const BlindStopParams& params,
                         Selection sel) {
  params.validate(d.rows());
  GreedyState state(d, y, sel == Selection::Ols);
  std::vector<double> history{state.residual_norm()};
  const double threshold = params.threshold();
  int iterations = 0;
  while (true) {
    if (state.below_floor()) {
      return finish(state, iterations, std::move(history), StopReason::ResidualBelowFloor);
    }
    if (state.statistic() <= threshold) {
      return finish(state, iterations, std::move(history), StopReason::BlindThresholdMet);
    }
    if (iterations >= params.max_iterations) {
      return finish(state, iterations, std::move(history), StopReason::ReachedMaxIterations);
    }
    const Index j = sel == Selection::Ols ? state.select_ols() : state.select_omp();
    if (j < 0 || !state.try_extend(j)) {
      return finish(state, iterations, std::move(history), StopReason::RankDeficient);
    }
    ++iterations;
    history.push_back(state.residual_norm());
  }
}

// Indices of the `count` largest |v| entries, lowest index first on ties.
std::vector<Index> largest_magnitudes(const VectorXd& v, std::size_t count) {
  std::vector<Index> idx(static_cast<std::size_t>(v.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  count = std::min(count, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(count), idx.end(),
                    [&v](Index a, Index b) {
                      const double va = std::abs(v(a));
                      const double vb = std::abs(v(b));
                      return va > vb || (va == vb && a < b);
                    });
  idx.resize(count);
  return idx;
}

}  // namespace

std::string_view stop_reason_name(StopReason reason) noexcept {
  switch (reason) {
    case StopReason::BlindThresholdMet: return "BlindThresholdMet";
    case StopReason::ReachedKnownK: return "ReachedKnownK";
    case StopReason::ReachedMaxIterations: return "ReachedMaxIterations";
    case StopReason::ResidualBelowFloor: return "ResidualBelowFloor";
    case StopReason::RankDeficient: return "RankDeficient";
    case StopReason::ResidualStagnated: return "ResidualStagnated";
  }
  return "Unknown";
}

std::string_view algorithm_name(Algorithm algorithm) noexcept {
  switch (algorithm) {
    case Algorithm::BOls: return "bols";
    case Algorithm::Ols: return "ols";
    case Algorithm::Omp: return "omp";
    case Algorithm::BOmp: return "bomp";
    case Algorithm::CoSaMP: return "cosamp";
    case Algorithm::MOls: return "mols";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  for (auto a : {Algorithm::BOls, Algorithm::Ols, Algorithm::Omp, Algorithm::BOmp, Algorithm::CoSaMP,
                 Algorithm::MOls}) {
    if (name == algorithm_name(a)) return a;
  }
  fail(ErrorCode::InvalidArgument, "unknown algorithm '" + std::string(name) +
                                       "' (expected bols, ols, omp, bomp, cosamp or mols)");
}

bool is_blind(Algorithm algorithm) noexcept {
  return algorithm == Algorithm::BOls || algorithm == Algorithm::BOmp;
}

void BlindStopParams::validate(Index rows) const {
  if (!(omega_star >= 0.0) || !std::isfinite(omega_star)) {
    fail(ErrorCode::InvalidArgument, "omega_star must be finite and nonnegative (got " +
                                         std::to_string(omega_star) + ")");
  }
  if (!(mu >= 0.0 && mu <= 1.0)) {
    fail(ErrorCode::InvalidArgument, "mu must lie in [0, 1] (got " + std::to_string(mu) + ")");
  }
  if (max_iterations < 1 || max_iterations > rows) {
    fail(ErrorCode::InvalidArgument, "max_iterations must lie in [1, M=" + std::to_string(rows) +
                                         "] (got " + std::to_string(max_iterations) + ")");
  }
}

int default_blind_max_iterations(Index rows) noexcept {
  return static_cast<int>(std::max<Index>(1, rows / 2));
}

double blind_stop_statistic(const MeasurementMatrix& d, const Eigen::VectorXd& r) {
  if (r.size() != d.rows()) {
    fail(ErrorCode::DimensionMismatch, "residual length does not match M=" + std::to_string(d.rows()));
  }
  const double norm = r.norm();
  if (norm < kZeroResidualNorm) fail(ErrorCode::ZeroResidual, "residual is zero");
  return (d.entries().transpose() * r).cwiseAbs().maxCoeff() / norm;
}

Index ols_select(const MeasurementMatrix& d, const Eigen::VectorXd& y, const SupportSet& support) {
  GreedyState state(d, y, true);
  if (!support.empty() && !state.try_extend(std::span<const Index>(support.indices()))) {
    fail(ErrorCode::RankDeficient, "D_S is numerically rank deficient");
  }
  return state.select_ols();
}

Index omp_select(const MeasurementMatrix& d, const Eigen::VectorXd& r, const SupportSet& support) {
  if (r.size() != d.rows()) {
    fail(ErrorCode::DimensionMismatch, "residual length does not match M=" + std::to_string(d.rows()));
  }
  const VectorXd c = d.entries().transpose() * r;
  Index best = -1;
  double best_value = -1.0;
  for (Index j = 0; j < c.size(); ++j) {
    if (support.contains(j)) continue;
    if (std::abs(c(j)) > best_value) {
      best_value = std::abs(c(j));
      best = j;
    }
  }
  return best;
}

RecoveryResult run_bols(const MeasurementMatrix& d, const Eigen::VectorXd& y,
                        const BlindStopParams& params) {
  return run_blind(d, y, params, Selection::Ols);
}

RecoveryResult run_bomp(const MeasurementMatrix& d, const Eigen::VectorXd& y,
                        const BlindStopParams& params) {
  return run_blind(d, y, params, Selection::Omp);
}

RecoveryResult run_ols_known_k(const MeasurementMatrix& d, const Eigen::VectorXd& y, int k) {
  return run_known_k(d, y, k, Selection::Ols);
}

RecoveryResult run_omp_known_k(const MeasurementMatrix& d, const Eigen::VectorXd& y, int k) {
  return run_known_k(d, y, k, Selection::Omp);
}

RecoveryResult run_cosamp(const MeasurementMatrix& d, const Eigen::VectorXd& y, int k,
                          int max_iterations) {
  check_k(d, k);
  if (max_iterations < 1) fail(ErrorCode::InvalidArgument, "CoSaMP max_iterations must be positive");
  if (y.size() != d.rows()) {
    fail(ErrorCode::DimensionMismatch, "measurement length " + std::to_string(y.size()) +
                                           " does not match M=" + std::to_string(d.rows()));
  }

  RecoveryResult out;
  out.x_hat = VectorXd::Zero(d.cols());
  const double y_norm = y.norm();
  out.residual_norm_history.push_back(y_norm);
  if (k == 0) {
    out.stop_reason = StopReason::ReachedKnownK;
    return out;
  }

  const double floor = kResidualFloor * y_norm;
  VectorXd v = y;
  double v_norm = y_norm;
  std::vector<Index> current;  // support of the current estimate
  VectorXd current_coef;
  out.stop_reason = StopReason::ReachedMaxIterations;

  for (int it = 0; it < max_iterations; ++it) {
    if (v_norm <= floor) {
      out.stop_reason = StopReason::ResidualBelowFloor;
      break;
    }
    const VectorXd proxy = d.entries().transpose() * v;
    std::vector<Index> merged = largest_magnitudes(proxy, 2 * static_cast<std::size_t>(k));
    merged.insert(merged.end(), current.begin(), current.end());
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());

    VectorXd b;
    try {
      b = least_squares_coefficients(d, y, SupportSet(merged));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RankDeficient) throw;
      out.stop_reason = StopReason::RankDeficient;
      break;
    }

    // Prune to the K largest coefficients.
    const auto keep = largest_magnitudes(b, static_cast<std::size_t>(k));
    std::vector<Index> next;
    VectorXd next_coef(static_cast<Index>(keep.size()));
    for (std::size_t t = 0; t < keep.size(); ++t) {
      next.push_back(merged[static_cast<std::size_t>(keep[t])]);
      next_coef(static_cast<Index>(t)) = b(keep[t]);
    }
    current = std::move(next);
    current_coef = std::move(next_coef);

    v = y;
    for (std::size_t t = 0; t < current.size(); ++t) {
      v -= current_coef(static_cast<Index>(t)) * d.column(current[t]);
    }
    const double previous = v_norm;
    v_norm = v.norm();
    ++out.iterations;
    out.residual_norm_history.push_back(v_norm);
    if (v_norm <= floor) {
      out.stop_reason = StopReason::ResidualBelowFloor;
      break;
    }
    if (std::abs(previous - v_norm) < kCoSaMPStagnation * previous) {
      out.stop_reason = StopReason::ResidualStagnated;
      break;
    }
  }

  out.support = SupportSet(current);
  for (std::size_t t = 0; t < current.size(); ++t) out.x_hat(current[t]) = current_coef(static_cast<Index>(t));
  return out;
}

RecoveryResult run_mols(const MeasurementMatrix& d, const Eigen::VectorXd& y, int k, int width) {
  check_k(d, k);
  if (width < 1) fail(ErrorCode::InvalidArgument, "MOLS width L must be at least 1");
  const long rounds = (k + width - 1) / width;
  if (rounds * width > d.rows()) {
    fail(ErrorCode::InvalidArgument, "MOLS requires L*ceil(K/L) <= M");
  }

  GreedyState state(d, y, true);
  std::vector<double> history{state.residual_norm()};
  int iterations = 0;
  StopReason reason = StopReason::ReachedKnownK;
  while (static_cast<int>(state.support().size()) < k) {
    if (state.below_floor()) {
      reason = StopReason::ResidualBelowFloor;
      break;
    }
    const auto picks = state.select_ols_top(width);
    if (picks.empty() || !state.try_extend(std::span<const Index>(picks))) {
      reason = StopReason::RankDeficient;
      break;
    }
    ++iterations;
    history.push_back(state.residual_norm());
  }

  RecoveryResult out;
  out.iterations = iterations;
  out.residual_norm_history = std::move(history);
  out.stop_reason = reason;
  if (static_cast<int>(state.support().size()) <= k) {
    out.x_hat = state.x_hat();
    out.support = state.support();
    return out;
  }

  // Overshoot from the last batch: keep the K largest coefficients (in
  // selection order) and refit on them.
  const auto keep = largest_magnitudes(state.coefficients(), static_cast<std::size_t>(k));
  std::vector<Index> order(keep.begin(), keep.end());
  std::sort(order.begin(), order.end());
  SupportSet pruned;
  for (Index pos : order) pruned.add(state.support()[static_cast<std::size_t>(pos)]);
  out.x_hat = least_squares_on_support(d, y, pruned);
  out.support = std::move(pruned);
  return out;
}

RecoveryResult run_algorithm(const MeasurementMatrix& d, const Eigen::VectorXd& y,
                             const AlgorithmParams& params) {
  switch (params.algorithm) {
    case Algorithm::BOls: return run_bols(d, y, params.blind);
    case Algorithm::BOmp: return run_bomp(d, y, params.blind);
    case Algorithm::Ols: return run_ols_known_k(d, y, params.k);
    case Algorithm::Omp: return run_omp_known_k(d, y, params.k);
    case Algorithm::CoSaMP: return run_cosamp(d, y, params.k, params.cosamp_max_iterations);
    case Algorithm::MOls: return run_mols(d, y, params.k, params.mols_width);
  }
  fail(ErrorCode::InvalidArgument, "unknown algorithm");
}

}  // namespace sparsense
