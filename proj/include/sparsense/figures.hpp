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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sparsense/config.hpp"
#include "sparsense/harness.hpp"

namespace sparsense {

// Figure presets come in four kinds:
//   snr_sweep       recovery probability and MSE against SNR, one panel per
//                   (m, n, k) combination
//   omega_sweep     the same against the blind threshold multiplier ω
//   mapping_bounds  the three mapping-factor lower bounds against K
//   snr_min_bounds  ω and the SNR_min floor against the target probability

struct FigureRequest {
  std::string figure;
  std::string scale = "desk";
  KeyValues overrides;
  std::filesystem::path out_dir = ".";
  unsigned threads = 0;
  std::optional<std::filesystem::path> config_path;  // builtin presets if unset
};

struct FigureReport {
  std::vector<std::string> summaries;  // one line per curve
  std::vector<std::string> warnings;
  std::vector<std::filesystem::path> files;
};

/// Resolves the preset, validates every key and all theory preconditions,
/// then runs and writes CSV, JSONL, SVG and a metadata JSON file.
FigureReport run_figure(const FigureRequest& request);

/// Builds a sweep config for one panel from resolved keys.
ExperimentConfig experiment_config_from(const KeyValues& keys, Index M, Index N, int K);

}  // namespace sparsense
