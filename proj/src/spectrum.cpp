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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sparsense/error.hpp"
#include "sparsense/harness.hpp"

namespace sparsense {

namespace {

constexpr std::uint64_t kSpectrumStream = 3;
constexpr std::uint64_t kNoiseStream = 4;

Eigen::VectorXd sparse_product(const MeasurementMatrix& d, const Eigen::VectorXd& x) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(d.rows());
  for (Index j = 0; j < x.size(); ++j) {
    if (x(j) != 0.0) out += x(j) * d.column(j);
  }
  return out;
}

}  // namespace

SparseSpectrum gen_sparse_spectrum(Index N, int K, double mean, double var, RngSeed seed) {
  if (N <= 0) fail(ErrorCode::InvalidArgument, "spectrum length N must be positive");
  if (K < 0 || K > N) {
    fail(ErrorCode::InvalidArgument, "sparsity K=" + std::to_string(K) + " must lie in [0, N=" +
                                         std::to_string(N) + "]");
  }
  if (!(var >= 0.0) || !std::isfinite(mean)) {
    fail(ErrorCode::InvalidArgument, "nonzero variance must be nonnegative and mean finite");
  }

  auto engine = make_engine(seed, {kSpectrumStream});
  std::vector<Index> population(static_cast<std::size_t>(N));
  std::iota(population.begin(), population.end(), Index{0});
  std::vector<Index> picked;
  picked.reserve(static_cast<std::size_t>(K));
  std::sample(population.begin(), population.end(), std::back_inserter(picked), K, engine);

  SparseSpectrum s;
  s.K = K;
  s.x = Eigen::VectorXd::Zero(N);
  s.support = SupportSet(picked);
  const double stddev = std::sqrt(var);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Index j : picked) s.x(j) = mean + stddev * normal(engine);
  return s;
}

NoisyMeasurement calibrate_noise(const MeasurementMatrix& d, const Eigen::VectorXd& x, double snr_db,
                                 const Eigen::VectorXd& standard_noise) {
  if (x.size() != d.cols()) {
    fail(ErrorCode::DimensionMismatch, "spectrum length does not match N=" + std::to_string(d.cols()));
  }
  NoisyMeasurement out;
  out.y = sparse_product(d, x);
  if (snr_db == kNoiselessSnr) return out;
  if (std::isnan(snr_db) || snr_db == -kNoiselessSnr) {
    fail(ErrorCode::InvalidArgument, "snr_db must be finite or +inf");
  }
  if (standard_noise.size() != d.rows()) {
    fail(ErrorCode::DimensionMismatch, "noise length does not match M=" + std::to_string(d.rows()));
  }
  const double energy = out.y.squaredNorm();
  if (energy == 0.0) fail(ErrorCode::ZeroSignal, "cannot calibrate a finite SNR for a zero signal");
  const double ratio = std::pow(10.0, snr_db / 10.0);
  out.sigma = std::sqrt(energy / (static_cast<double>(d.rows()) * ratio));
  out.y += out.sigma * standard_noise;
  return out;
}

NoisyMeasurement calibrate_noise(const MeasurementMatrix& d, const Eigen::VectorXd& x, double snr_db,
                                 RngSeed seed) {
  auto engine = make_engine(seed, {kNoiseStream});
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(d.rows());
  for (Index i = 0; i < z.size(); ++i) z(i) = normal(engine);
  return calibrate_noise(d, x, snr_db, z);
}

double snr_component(const MeasurementMatrix& d, const Eigen::VectorXd& x, double sigma, Index q) {
  if (q < 0 || q >= d.cols() || x.size() != d.cols()) {
    fail(ErrorCode::InvalidArgument, "component index or spectrum length out of range");
  }
  const double energy = (x(q) * d.column(q)).squaredNorm();
  if (sigma == 0.0) return energy > 0.0 ? kNoiselessSnr : 0.0;
  return energy / (static_cast<double>(d.rows()) * sigma * sigma);
}

double snr_min(const MeasurementMatrix& d, const Eigen::VectorXd& x, double sigma) {
  double best = kNoiselessSnr;
  bool any = false;
  for (Index q = 0; q < x.size(); ++q) {
    if (x(q) == 0.0) continue;
    any = true;
    best = std::min(best, snr_component(d, x, sigma, q));
  }
  if (!any) fail(ErrorCode::ZeroSignal, "SNR_min is undefined for a zero spectrum");
  return best;
}

}  // namespace sparsense
