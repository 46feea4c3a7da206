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

#include "sparsense/svg_plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "sparsense/error.hpp"

namespace sparsense {

namespace {

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};
constexpr std::array<const char*, 4> kDashes = {"", "6,3", "2,3", "8,3,2,3"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fmt(double v, const char* pattern = "%.2f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string tick_label(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", std::abs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

// Step of 1, 2 or 5 times a power of ten giving about `target` intervals.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  const double nice = norm < 1.5 ? 1.0 : norm < 3.0 ? 2.0 : norm < 7.0 ? 5.0 : 10.0;
  return nice * mag;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool valid() const { return lo <= hi; }
};

}  // namespace

std::string render_svg(const std::vector<PlotSeries>& series, const PlotSpec& spec) {
  const double left = 72, right = 170, top = 40, bottom = 56;
  const double pw = spec.width - left - right;
  const double ph = spec.height - top - bottom;

  auto usable = [&](double x, double y) {
    return std::isfinite(x) && std::isfinite(y) && (!spec.log_y || y > 0.0);
  };
  Range xr, yr;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!usable(s.x[i], s.y[i])) continue;
      xr.add(s.x[i]);
      yr.add(spec.log_y ? std::log10(s.y[i]) : s.y[i]);
    }
  }
  if (!xr.valid()) {
    xr = {0.0, 1.0};
    yr = {0.0, 1.0};
  }
  if (xr.hi == xr.lo) {
    xr.lo -= 0.5;
    xr.hi += 0.5;
  }
  if (spec.log_y) {
    yr.lo = std::floor(yr.lo);
    yr.hi = std::ceil(yr.hi);
    if (yr.hi == yr.lo) yr.hi += 1.0;
  } else {
    if (yr.hi == yr.lo) {
      yr.lo -= 0.5;
      yr.hi += 0.5;
    }
    const double pad = 0.05 * (yr.hi - yr.lo);
    yr.lo -= pad;
    yr.hi += pad;
  }

  auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) {
    const double v = spec.log_y ? std::log10(y) : y;
    return top + ph - (v - yr.lo) / (yr.hi - yr.lo) * ph;
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) + "\" height=\"" +
         std::to_string(spec.height) + "\" viewBox=\"0 0 " + std::to_string(spec.width) + " " +
         std::to_string(spec.height) + "\" font-family=\"Helvetica,Arial,sans-serif\" font-size=\"12\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + fmt(left + pw / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" +
         escape(spec.title) + "</text>\n";

  // Grid and ticks.
  const double xstep = nice_step(xr.hi - xr.lo, 8);
  for (double t = std::ceil(xr.lo / xstep) * xstep; t <= xr.hi + 1e-9 * xstep; t += xstep) {
    const double x = px(t);
    svg += "<line x1=\"" + fmt(x) + "\" y1=\"" + fmt(top) + "\" x2=\"" + fmt(x) + "\" y2=\"" + fmt(top + ph) +
           "\" stroke=\"#e5e5e5\"/>\n";
    svg += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(top + ph + 18) + "\" text-anchor=\"middle\">" +
           tick_label(t) + "</text>\n";
  }
  if (spec.log_y) {
    for (double e = yr.lo; e <= yr.hi + 1e-9; e += 1.0) {
      const double y = top + ph - (e - yr.lo) / (yr.hi - yr.lo) * ph;
      svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(left + pw) + "\" y2=\"" + fmt(y) +
             "\" stroke=\"#e5e5e5\"/>\n";
      svg += "<text x=\"" + fmt(left - 8) + "\" y=\"" + fmt(y + 4) + "\" text-anchor=\"end\">1e" +
             tick_label(e) + "</text>\n";
    }
  } else {
    const double ystep = nice_step(yr.hi - yr.lo, 6);
    for (double t = std::ceil(yr.lo / ystep) * ystep; t <= yr.hi + 1e-9 * ystep; t += ystep) {
      const double y = py(t);
      svg += "<line x1=\"" + fmt(left) + "\" y1=\"" + fmt(y) + "\" x2=\"" + fmt(left + pw) + "\" y2=\"" + fmt(y) +
             "\" stroke=\"#e5e5e5\"/>\n";
      svg += "<text x=\"" + fmt(left - 8) + "\" y=\"" + fmt(y + 4) + "\" text-anchor=\"end\">" + tick_label(t) +
             "</text>\n";
    }
  }
  svg += "<rect x=\"" + fmt(left) + "\" y=\"" + fmt(top) + "\" width=\"" + fmt(pw) + "\" height=\"" + fmt(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  svg += "<text x=\"" + fmt(left + pw / 2) + "\" y=\"" + fmt(spec.height - 14.0) + "\" text-anchor=\"middle\">" +
         escape(spec.x_label) + "</text>\n";
  svg += "<text transform=\"translate(18," + fmt(top + ph / 2) + ") rotate(-90)\" text-anchor=\"middle\">" +
         escape(spec.y_label) + "</text>\n";

  // Curves, broken wherever a point is unusable.
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const std::string color = kPalette[k % kPalette.size()];
    const std::string dash = kDashes[(k / kPalette.size()) % kDashes.size()];
    std::string path;
    bool pen_down = false;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!usable(s.x[i], s.y[i])) {
        pen_down = false;
        continue;
      }
      path += (pen_down ? " L" : " M") + fmt(px(s.x[i])) + "," + fmt(py(s.y[i]));
      pen_down = true;
      svg += "<circle cx=\"" + fmt(px(s.x[i])) + "\" cy=\"" + fmt(py(s.y[i])) + "\" r=\"2.5\" fill=\"" + color +
             "\"/>\n";
    }
    if (!path.empty()) {
      svg += "<path d=\"" + path.substr(1) + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.6\"" +
             (dash.empty() ? std::string() : " stroke-dasharray=\"" + dash + "\"") + "/>\n";
    }
    const double ly = top + 14 + 18.0 * static_cast<double>(k);
    const double lx = left + pw + 14;
    svg += "<line x1=\"" + fmt(lx) + "\" y1=\"" + fmt(ly) + "\" x2=\"" + fmt(lx + 24) + "\" y2=\"" + fmt(ly) +
           "\" stroke=\"" + color + "\" stroke-width=\"1.6\"" +
           (dash.empty() ? std::string() : " stroke-dasharray=\"" + dash + "\"") + "/>\n";
    svg += "<text x=\"" + fmt(lx + 30) + "\" y=\"" + fmt(ly + 4) + "\">" + escape(s.label) + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

std::vector<PlotSeries> series_from_long_csv(const CsvTable& table, const std::string& metric) {
  const auto grid = table.column("grid");
  const auto alg = table.column("algorithm");
  const auto val = table.column(metric);
  if (!grid || !alg) fail(ErrorCode::Format, "csv has no grid/algorithm columns");
  if (!val) fail(ErrorCode::Format, "csv has no column '" + metric + "'");
  std::map<std::string, PlotSeries> by_alg;
  std::vector<std::string> order;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& name = table.rows[r][*alg];
    auto [it, inserted] = by_alg.try_emplace(name);
    if (inserted) {
      it->second.label = name;
      order.push_back(name);
    }
    it->second.x.push_back(table.number(r, *grid));
    it->second.y.push_back(table.number(r, *val));
  }
  std::vector<PlotSeries> out;
  for (const auto& name : order) out.push_back(std::move(by_alg[name]));
  return out;
}

std::vector<PlotSeries> series_from_wide_csv(const CsvTable& table, const std::string& prefix) {
  if (table.header.size() < 2) fail(ErrorCode::Format, "wide csv needs at least two columns");
  std::vector<PlotSeries> out;
  for (std::size_t c = 1; c < table.header.size(); ++c) {
    if (!table.header[c].starts_with(prefix)) continue;
    PlotSeries s;
    s.label = table.header[c].substr(prefix.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
      s.x.push_back(table.number(r, 0));
      s.y.push_back(table.number(r, c));
    }
    out.push_back(std::move(s));
  }
  if (out.empty()) fail(ErrorCode::Format, "no csv columns match prefix '" + prefix + "'");
  return out;
}

void plot_csv(const std::filesystem::path& csv, const std::filesystem::path& svg, const PlotCsvOptions& options) {
  const CsvTable table = read_csv(csv);
  const bool long_format = table.column("algorithm").has_value();
  const auto series = long_format ? series_from_long_csv(table, options.metric)
                                  : series_from_wide_csv(table, options.prefix);
  PlotSpec spec = options.spec;
  if (spec.x_label.empty()) spec.x_label = table.header.front();
  if (spec.y_label.empty()) spec.y_label = long_format ? options.metric : "value";
  write_text_file(svg, render_svg(series, spec));
}

}  // namespace sparsense
