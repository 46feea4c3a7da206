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

#include "sparsense/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>
#include <vector>

#include "sparsense/error.hpp"

namespace sparsense {

namespace {

constexpr std::uint64_t kGaussianStream = 1;
constexpr std::uint64_t kHybridStream = 2;
constexpr Index kCoherenceBlock = 256;

void check_shape(Index rows, Index cols) {
  if (rows <= 0 || cols <= 0) {
    fail(ErrorCode::InvalidArgument, "matrix dimensions must be positive (M=" +
                                         std::to_string(rows) + ", N=" + std::to_string(cols) + ")");
  }
  if (rows > cols) {
    fail(ErrorCode::InvalidArgument, "measurement matrix requires M <= N (M=" +
                                         std::to_string(rows) + ", N=" + std::to_string(cols) + ")");
  }
}

void normalize_columns(Eigen::MatrixXd& m) {
  for (Index j = 0; j < m.cols(); ++j) {
    const double norm = m.col(j).norm();
    if (norm == 0.0) {
      fail(ErrorCode::InvalidArgument, "column " + std::to_string(j) + " is identically zero");
    }
    m.col(j) /= norm;
  }
}

double block_max(const Eigen::MatrixXd& d, Index begin, Index end) {
  double best = 0.0;
  const Index n = d.cols();
  Eigen::MatrixXd gram;
  for (Index b0 = begin; b0 < end; b0 += kCoherenceBlock) {
    const Index bs = std::min(kCoherenceBlock, end - b0);
    gram.noalias() = d.middleCols(b0, bs).transpose() * d.rightCols(n - b0);
    for (Index i = 0; i < bs; ++i) {
      // Column b0+i against columns b0+i+1 .. n-1.
      const Index tail = gram.cols() - (i + 1);
      if (tail > 0) {
        best = std::max(best, gram.row(i).tail(tail).cwiseAbs().maxCoeff());
      }
    }
  }
  return best;
}

}  // namespace

std::string_view family_name(MatrixFamily family) noexcept {
  return family == MatrixFamily::Gaussian ? "gaussian" : "hybrid";
}

MatrixFamily parse_family(std::string_view name) {
  if (name == "gaussian") return MatrixFamily::Gaussian;
  if (name == "hybrid") return MatrixFamily::Hybrid;
  fail(ErrorCode::InvalidArgument, "unknown matrix family '" + std::string(name) +
                                       "' (expected gaussian or hybrid)");
}

MeasurementMatrix::MeasurementMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  check_shape(entries_.rows(), entries_.cols());
  for (Index j = 0; j < entries_.cols(); ++j) {
    const double norm = entries_.col(j).norm();
    if (!(std::abs(norm - 1.0) <= kUnitNormTolerance)) {
      fail(ErrorCode::InvalidArgument, "column " + std::to_string(j) +
                                           " is not unit-norm (norm " + std::to_string(norm) + ")");
    }
  }
}

MeasurementMatrix::MeasurementMatrix(const MeasurementMatrix& other)
    : entries_(other.entries_), coherence_(other.coherence_.load()) {}

MeasurementMatrix& MeasurementMatrix::operator=(const MeasurementMatrix& other) {
  if (this != &other) {
    entries_ = other.entries_;
    coherence_.store(other.coherence_.load());
  }
  return *this;
}

MeasurementMatrix::MeasurementMatrix(MeasurementMatrix&& other) noexcept
    : entries_(std::move(other.entries_)), coherence_(other.coherence_.load()) {}

MeasurementMatrix& MeasurementMatrix::operator=(MeasurementMatrix&& other) noexcept {
  entries_ = std::move(other.entries_);
  coherence_.store(other.coherence_.load());
  return *this;
}

double MeasurementMatrix::coherence() const {
  double cached = coherence_.load(std::memory_order_acquire);
  if (cached >= 0.0) return cached;
  const double value = compute_coherence(entries_, 0);
  coherence_.store(value, std::memory_order_release);
  return value;
}

bool MeasurementMatrix::coherence_cached() const noexcept {
  return coherence_.load(std::memory_order_acquire) >= 0.0;
}

double compute_coherence(const Eigen::MatrixXd& entries, unsigned threads) {
  const Index n = entries.cols();
  if (n < 2) return 0.0;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  const Index blocks = (n + kCoherenceBlock - 1) / kCoherenceBlock;
  threads = static_cast<unsigned>(std::min<Index>(threads, blocks));
  if (threads <= 1) return std::min(1.0, block_max(entries, 0, n));

  // Later blocks touch fewer columns, so interleave block ownership.
  std::vector<double> partial(threads, 0.0);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      double best = 0.0;
      for (Index b = t; b < blocks; b += threads) {
        const Index b0 = b * kCoherenceBlock;
        best = std::max(best, block_max(entries, b0, std::min(n, b0 + kCoherenceBlock)));
      }
      partial[t] = best;
    });
  }
  for (auto& th : pool) th.join();
  return std::min(1.0, *std::max_element(partial.begin(), partial.end()));
}

MeasurementMatrix gen_gaussian_normalized(Index rows, Index cols, RngSeed seed) {
  check_shape(rows, cols);
  Eigen::MatrixXd m(rows, cols);
  const double stddev = 1.0 / std::sqrt(static_cast<double>(rows));
  for (Index j = 0; j < cols; ++j) {
    auto engine = make_engine(seed, {kGaussianStream, static_cast<std::uint64_t>(j)});
    std::normal_distribution<double> normal(0.0, stddev);
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(engine);
  }
  normalize_columns(m);
  return MeasurementMatrix(std::move(m));
}

MeasurementMatrix gen_hybrid_normalized(Index rows, Index cols, double offset_max, RngSeed seed) {
  check_shape(rows, cols);
  if (!(offset_max >= 0.0) || !std::isfinite(offset_max)) {
    fail(ErrorCode::InvalidArgument, "offset_max must be a finite nonnegative number");
  }
  Eigen::MatrixXd m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    auto engine = make_engine(seed, {kHybridStream, static_cast<std::uint64_t>(j)});
    std::uniform_real_distribution<double> uniform(0.0, offset_max);
    std::normal_distribution<double> normal(0.0, 1.0);
    const double offset = offset_max > 0.0 ? uniform(engine) : 0.0;
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(engine) + offset;
  }
  normalize_columns(m);
  return MeasurementMatrix(std::move(m));
}

}  // namespace sparsense
