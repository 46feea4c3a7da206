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


#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "sparsense/error.hpp"
#include "sparsense/matrix.hpp"
#include "sparsense/theory.hpp"
#include "test_util.hpp"

using namespace sparsense;

namespace {

double pairwise_coherence(const Eigen::MatrixXd& d) {
  double best = 0.0;
  for (Index i = 0; i < d.cols(); ++i) {
    for (Index j = i + 1; j < d.cols(); ++j) {
      double dot = 0.0;
      for (Index r = 0; r < d.rows(); ++r) dot += d(r, i) * d(r, j);
      best = std::max(best, std::abs(dot));
    }
  }
  return best;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("sparsense_test_" + name);
}

void write_bytes(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("coherence of two columns at 45 degrees") {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2, 2);
  m(0, 0) = 1.0;
  m(0, 1) = m(1, 1) = 1.0 / std::sqrt(2.0);
  MeasurementMatrix d(m);
  CHECK(d.coherence() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("identity and orthonormal matrices have zero coherence") {
  CHECK(MeasurementMatrix(Eigen::MatrixXd::Identity(6, 6)).coherence() == 0.0);
  CHECK(testing::orthonormal_matrix(4, 11).coherence() < 1e-14);
}

TEST_CASE("blocked coherence matches an exhaustive pairwise loop") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto d = testing::random_matrix(8, 16, seed);
    CHECK(d.coherence() == doctest::Approx(pairwise_coherence(d.entries())).epsilon(1e-14));
  }
  const auto big = testing::random_matrix(40, 700, 3);
  const double oracle = pairwise_coherence(big.entries());
  CHECK(compute_coherence(big.entries(), 1) == doctest::Approx(oracle).epsilon(1e-14));
  CHECK(compute_coherence(big.entries(), 4) == compute_coherence(big.entries(), 1));
}

TEST_CASE("gaussian matrices are normalized and deterministic") {
  const auto a = gen_gaussian_normalized(32, 64, RngSeed{9});
  const auto b = gen_gaussian_normalized(32, 64, RngSeed{9});
  const auto c = gen_gaussian_normalized(32, 64, RngSeed{10});
  CHECK(a.entries() == b.entries());
  CHECK(a.entries() != c.entries());
  for (Index j = 0; j < a.cols(); ++j) CHECK(std::abs(a.column(j).norm() - 1.0) < 1e-14);
}

TEST_CASE("hybrid coherence exceeds gaussian coherence") {
  int wins = 0;
  const int seeds = 20;
  for (int s = 1; s <= seeds; ++s) {
    const auto g = gen_gaussian_normalized(256, 512, RngSeed{static_cast<std::uint64_t>(s)});
    const auto h = gen_hybrid_normalized(256, 512, 10.0, RngSeed{static_cast<std::uint64_t>(s)});
    if (h.coherence() > g.coherence()) ++wins;
  }
  CHECK(wins >= 19);
}

TEST_CASE("hybrid coherence is bit-identical on re-run") {
  const double a = gen_hybrid_normalized(256, 512, 10.0, RngSeed{5}).coherence();
  const double b = gen_hybrid_normalized(256, 512, 10.0, RngSeed{5}).coherence();
  CHECK(a == b);
}

TEST_CASE("hybrid without offsets has gaussian column statistics") {
  // Both families produce uniformly distributed unit columns when the offset
  // is zero, so the squared inner products average 1/M in each.
  const Index m = 8;
  auto stats = [&](const MeasurementMatrix& d) {
    double mean = 0.0, sq_dot = 0.0;
    int pairs = 0;
    for (Index j = 0; j < d.cols(); ++j) mean += d.column(j).sum();
    for (Index j = 0; j + 1 < d.cols(); j += 2, ++pairs) sq_dot += std::pow(d.column(j).dot(d.column(j + 1)), 2);
    return std::pair{mean / static_cast<double>(d.cols() * m), sq_dot / pairs};
  };
  const auto [gm, gs] = stats(gen_gaussian_normalized(m, 20000, RngSeed{2}));
  const auto [hm, hs] = stats(gen_hybrid_normalized(m, 20000, 0.0, RngSeed{2}));
  CHECK(std::abs(gm) < 0.01);
  CHECK(std::abs(hm) < 0.01);
  CHECK(gs == doctest::Approx(1.0 / m).epsilon(0.05));
  CHECK(hs == doctest::Approx(1.0 / m).epsilon(0.05));
}

TEST_CASE("matrix construction rejects bad shapes and columns") {
  CHECK(code_of([] { gen_gaussian_normalized(8, 4, RngSeed{1}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { gen_hybrid_normalized(4, 8, -1.0, RngSeed{1}); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { MeasurementMatrix(Eigen::MatrixXd::Ones(2, 3)); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { parse_family("bernoulli"); }) == ErrorCode::InvalidArgument);
  CHECK(parse_family("hybrid") == MatrixFamily::Hybrid);
  CHECK(family_name(MatrixFamily::Gaussian) == "gaussian");
}

TEST_CASE("binary round trip is exact") {
  const auto d = testing::random_matrix(5, 9, 4);
  const auto path = temp_path("roundtrip.bin");
  save_matrix_binary(d, path);
  const auto e = load_matrix_binary(path);
  CHECK(e.entries() == d.entries());
  CHECK(std::filesystem::file_size(path) == 8 + 16 + 5 * 9 * 8);
  std::filesystem::remove(path);
}

TEST_CASE("malformed binary files name byte offsets") {
  const auto d = testing::random_matrix(3, 4, 4);
  const auto good = temp_path("good.bin");
  save_matrix_binary(d, good);
  const std::string bytes = read_bytes(good);
  const auto bad = temp_path("bad.bin");

  auto message_for = [&](const std::string& content) {
    write_bytes(bad, content);
    try {
      load_matrix_binary(bad);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Format);
      return std::string(e.what());
    }
    FAIL("load should fail");
    return std::string();
  };

  CHECK(message_for("XXXXXXXX" + bytes.substr(8)).find("byte offset 0") != std::string::npos);
  CHECK(message_for(bytes.substr(0, 12)).find("byte offset 12") != std::string::npos);
  CHECK(message_for(bytes.substr(0, bytes.size() - 8)).find("byte offset") != std::string::npos);

  std::string scaled = bytes;
  scaled[24 + 7] ^= 0x10;  // perturb the exponent of the first entry
  CHECK(message_for(scaled).find("byte offset 24") != std::string::npos);

  CHECK(code_of([] { load_matrix_binary(temp_path("does_not_exist.bin")); }) == ErrorCode::Io);
  std::filesystem::remove(good);
  std::filesystem::remove(bad);
}

TEST_CASE("csv export has one line per row") {
  const auto d = testing::random_matrix(3, 5, 8);
  const auto path = temp_path("m.csv");
  save_matrix_csv(d, path);
  std::ifstream in(path);
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) {
    ++lines;
    CHECK(std::count(line.begin(), line.end(), ',') == 4);
  }
  CHECK(lines == 3);
  std::filesystem::remove(path);
}

TEST_CASE("smallest singular value of gaussian submatrices meets its tail floor") {
  const int M = 256, K = 8, samples = 10000;
  const double rho = 0.2;
  const auto bounds = theory::singular_value_tail_bounds(K, M, rho);
  std::mt19937_64 engine(2024);
  std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(M)));
  int covered = 0;
  Eigen::MatrixXd a(M, K);
  for (int s = 0; s < samples; ++s) {
    for (Index j = 0; j < K; ++j)
      for (Index i = 0; i < M; ++i) a(i, j) = normal(engine);
    const auto sv = Eigen::JacobiSVD<Eigen::MatrixXd>(a).singularValues();
    if (sv(K - 1) >= bounds.lower) ++covered;
  }
  CHECK(static_cast<double>(covered) / samples >= bounds.prob_floor);
}
