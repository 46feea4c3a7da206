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
#include <string>
#include <vector>

#include "sparsense/csv.hpp"

namespace sparsense {

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;  // NaN (or ≤ 0 on a log axis) breaks the line
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
  int width = 720;
  int height = 460;
};

/// Self-contained SVG line chart with axes, ticks, grid and a legend.
std::string render_svg(const std::vector<PlotSeries>& series, const PlotSpec& spec);

/// One series per algorithm from a file with grid and algorithm columns.
std::vector<PlotSeries> series_from_long_csv(const CsvTable& table, const std::string& metric);

/// First column is x; every other column (optionally only those starting
/// with prefix) becomes a series.
std::vector<PlotSeries> series_from_wide_csv(const CsvTable& table, const std::string& prefix = {});

struct PlotCsvOptions {
  std::string metric = "prob_recovery";  // long format only
  std::string prefix;                    // wide format only
  PlotSpec spec;
};

/// Re-plots a CSV written by this project; never re-runs anything.
void plot_csv(const std::filesystem::path& csv, const std::filesystem::path& svg, const PlotCsvOptions& options);

}  // namespace sparsense
