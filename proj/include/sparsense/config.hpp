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

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace sparsense {

// Line-oriented experiment configuration:
//
//   # comment
//   [fig3]            base keys of a figure
//   key = value
//   [fig3.desk]       keys layered on top for one scale
//
// Later layers win: base section, then scale section, then overrides.

using KeyValues = std::map<std::string, std::string>;

class ConfigFile {
 public:
  /// Throws Error{Config} with "<source>:<line>: ..." on malformed input.
  static ConfigFile parse(std::string_view text, std::string_view source = "<config>");
  static ConfigFile load(const std::filesystem::path& path);

  bool has_section(std::string_view name) const;
  const KeyValues& section(std::string_view name) const;
  /// Base sections (no scale suffix) in file order.
  std::vector<std::string> figures() const;

 private:
  std::map<std::string, KeyValues, std::less<>> sections_;
  std::vector<std::string> order_;
};

KeyValues resolve(const ConfigFile& file, std::string_view figure, std::string_view scale,
                  const KeyValues& overrides);

/// The presets compiled in from configs/figures.conf.
std::string_view builtin_presets();

// Typed accessors. All throw Error{Config} naming the key on bad input.
double parse_double(std::string_view key, std::string_view value);
int parse_int(std::string_view key, std::string_view value);
std::uint64_t parse_u64(std::string_view key, std::string_view value);
std::vector<std::string> parse_list(std::string_view value);

/// "a:step:b" (inclusive, MATLAB style), a comma list, or a single value.
/// "inf" is accepted as +∞.
std::vector<double> parse_grid(std::string_view key, std::string_view value);

}  // namespace sparsense
