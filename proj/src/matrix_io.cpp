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

#include <array>
#include <cmath>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "sparsense/error.hpp"
#include "sparsense/matrix.hpp"

namespace sparsense {

namespace {

constexpr std::array<char, 8> kMagic = {'S', 'P', 'R', 'S', 'M', 'A', 'T', '1'};
constexpr std::size_t kHeaderBytes = 8 + 8 + 8;

void put_u64(std::vector<unsigned char>& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.push_back(static_cast<unsigned char>(v >> (8 * b)));
}

std::uint64_t get_u64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int b = 7; b >= 0; --b) v = (v << 8) | p[b];
  return v;
}

}  // namespace

void save_matrix_binary(const MeasurementMatrix& matrix, const std::filesystem::path& path) {
  const auto& d = matrix.entries();
  std::vector<unsigned char> bytes;
  bytes.reserve(kHeaderBytes + 8 * static_cast<std::size_t>(d.size()));
  bytes.insert(bytes.end(), kMagic.begin(), kMagic.end());
  put_u64(bytes, static_cast<std::uint64_t>(d.rows()));
  put_u64(bytes, static_cast<std::uint64_t>(d.cols()));
  // Eigen storage is column-major already.
  for (Index k = 0; k < d.size(); ++k) put_u64(bytes, std::bit_cast<std::uint64_t>(d.data()[k]));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

MeasurementMatrix load_matrix_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open '" + path.string() + "' for reading");
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::string where = "'" + path.string() + "'";

  if (bytes.size() < kMagic.size() || std::memcmp(bytes.data(), kMagic.data(), kMagic.size()) != 0) {
    fail(ErrorCode::Format, where + ": bad magic at byte offset 0 (expected SPRSMAT1)");
  }
  if (bytes.size() < kHeaderBytes) {
    fail(ErrorCode::Format, where + ": header truncated at byte offset " + std::to_string(bytes.size()) +
                                " (need " + std::to_string(kHeaderBytes) + " bytes)");
  }
  const std::uint64_t rows = get_u64(bytes.data() + 8);
  const std::uint64_t cols = get_u64(bytes.data() + 16);
  if (rows == 0 || cols == 0 || rows > cols) {
    fail(ErrorCode::Format, where + ": invalid dimensions M=" + std::to_string(rows) + " N=" +
                                std::to_string(cols) + " at byte offset 8");
  }
  if (rows > (1ull << 31) || cols > (1ull << 31) || rows * cols > (1ull << 40) / 8) {
    fail(ErrorCode::Format, where + ": dimensions at byte offset 8 are implausibly large");
  }
  const std::uint64_t expected = kHeaderBytes + 8 * rows * cols;
  if (bytes.size() != expected) {
    fail(ErrorCode::Format, where + ": payload size mismatch at byte offset " + std::to_string(bytes.size()) +
                                " (expected file length " + std::to_string(expected) + ")");
  }

  Eigen::MatrixXd m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::uint64_t k = 0; k < rows * cols; ++k) {
    m.data()[k] = std::bit_cast<double>(get_u64(bytes.data() + kHeaderBytes + 8 * k));
  }
  for (Index j = 0; j < m.cols(); ++j) {
    if (std::abs(m.col(j).norm() - 1.0) > kUnitNormTolerance) {
      const std::uint64_t offset = kHeaderBytes + 8 * static_cast<std::uint64_t>(j) * rows;
      fail(ErrorCode::Format, where + ": column " + std::to_string(j) + " starting at byte offset " +
                                  std::to_string(offset) + " is not unit-norm");
    }
  }
  return MeasurementMatrix(std::move(m));
}

void save_matrix_csv(const MeasurementMatrix& matrix, const std::filesystem::path& path) {
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f) fail(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  const auto& d = matrix.entries();
  for (Index i = 0; i < d.rows(); ++i) {
    for (Index j = 0; j < d.cols(); ++j) {
      std::fprintf(f, j == 0 ? "%.17g" : ",%.17g", d(i, j));
    }
    std::fputc('\n', f);
  }
  const bool ok = std::ferror(f) == 0;
  std::fclose(f);
  if (!ok) fail(ErrorCode::Io, "write failed for '" + path.string() + "'");
}

}  // namespace sparsense
