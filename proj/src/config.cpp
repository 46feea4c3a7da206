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

#include "sparsense/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "sparsense/error.hpp"

namespace sparsense {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_value(std::string_view key, std::string_view value, std::string_view expected) {
  fail(ErrorCode::Config, "key '" + std::string(key) + "': expected " + std::string(expected) + ", got '" +
                              std::string(value) + "'");
}

}  // namespace

ConfigFile ConfigFile::parse(std::string_view text, std::string_view source) {
  ConfigFile out;
  std::string current;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto where = [&] { return std::string(source) + ":" + std::to_string(line_no) + ": "; };

  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(ErrorCode::Config, where() + "unterminated section header");
      current = std::string(trim(line.substr(1, line.size() - 2)));
      if (current.empty()) fail(ErrorCode::Config, where() + "empty section name");
      if (out.sections_.contains(current)) {
        fail(ErrorCode::Config, where() + "duplicate section [" + current + "]");
      }
      out.sections_[current];
      out.order_.push_back(current);
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(ErrorCode::Config, where() + "expected 'key = value'");
    if (current.empty()) fail(ErrorCode::Config, where() + "key outside of any section");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) fail(ErrorCode::Config, where() + "empty key");
    auto& sec = out.sections_[current];
    if (sec.contains(key)) fail(ErrorCode::Config, where() + "duplicate key '" + key + "'");
    sec[key] = value;
  }
  return out;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

bool ConfigFile::has_section(std::string_view name) const { return sections_.find(name) != sections_.end(); }

const KeyValues& ConfigFile::section(std::string_view name) const {
  const auto it = sections_.find(name);
  if (it == sections_.end()) fail(ErrorCode::Config, "no section [" + std::string(name) + "]");
  return it->second;
}

std::vector<std::string> ConfigFile::figures() const {
  std::vector<std::string> out;
  for (const auto& name : order_) {
    if (name.find('.') == std::string::npos) out.push_back(name);
  }
  return out;
}

KeyValues resolve(const ConfigFile& file, std::string_view figure, std::string_view scale,
                  const KeyValues& overrides) {
  if (!file.has_section(figure)) fail(ErrorCode::Config, "unknown figure '" + std::string(figure) + "'");
  KeyValues out = file.section(figure);
  const std::string scaled = std::string(figure) + "." + std::string(scale);
  if (file.has_section(scaled)) {
    for (const auto& [k, v] : file.section(scaled)) out[k] = v;
  }
  for (const auto& [k, v] : overrides) out[k] = v;
  return out;
}

double parse_double(std::string_view key, std::string_view value) {
  const auto v = trim(value);
  if (v == "inf" || v == "+inf") return std::numeric_limits<double>::infinity();
  if (v == "-inf") return -std::numeric_limits<double>::infinity();
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty() || std::isnan(out)) {
    bad_value(key, value, "a real number");
  }
  return out;
}

int parse_int(std::string_view key, std::string_view value) {
  const auto v = trim(value);
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) bad_value(key, value, "an integer");
  return out;
}

std::uint64_t parse_u64(std::string_view key, std::string_view value) {
  const auto v = trim(value);
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    bad_value(key, value, "an unsigned 64-bit integer");
  }
  return out;
}

std::vector<std::string> parse_list(std::string_view value) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= value.size()) {
    const auto comma = value.find(',', pos);
    const auto item = trim(value.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::vector<double> parse_grid(std::string_view key, std::string_view value) {
  const auto v = trim(value);
  if (v.empty()) bad_value(key, value, "a nonempty grid");
  if (v.find(':') != std::string_view::npos) {
    const auto c1 = v.find(':');
    const auto c2 = v.find(':', c1 + 1);
    if (c2 == std::string_view::npos || v.find(':', c2 + 1) != std::string_view::npos) {
      bad_value(key, value, "start:step:stop");
    }
    const double start = parse_double(key, v.substr(0, c1));
    const double step = parse_double(key, v.substr(c1 + 1, c2 - c1 - 1));
    const double stop = parse_double(key, v.substr(c2 + 1));
    if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop) || stop < start) {
      bad_value(key, value, "start:step:stop with step > 0 and stop >= start");
    }
    // Index-based so accumulated rounding never drops the endpoint.
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (count > 1'000'000) bad_value(key, value, "a grid with at most 1e6 points");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) {
      // Snap to 12 decimal places so 0.9 + 3*0.01 prints as 0.93.
      const double raw = start + static_cast<double>(i) * step;
      out.push_back(std::round(raw * 1e12) / 1e12);
    }
    return out;
  }
  std::vector<double> out;
  for (const auto& item : parse_list(v)) out.push_back(parse_double(key, item));
  if (out.empty()) bad_value(key, value, "a nonempty grid");
  return out;
}

}  // namespace sparsense
