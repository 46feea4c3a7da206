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

#include "sparsense/figures.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include <json.hpp>

#include "sparsense/csv.hpp"
#include "sparsense/error.hpp"
#include "sparsense/svg_plot.hpp"
#include "sparsense/theory.hpp"

namespace sparsense {

namespace {

using nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const std::set<std::string>& common_keys() {
  static const std::set<std::string> keys = {"kind", "title", "seed"};
  return keys;
}

const std::set<std::string>& sweep_keys() {
  static const std::set<std::string> keys = {
      "family", "m", "n", "k", "offset_max", "snr", "trials", "algorithms", "pmin", "rho", "vartheta",
      "success_tolerance", "nonzero_mean", "nonzero_var", "mols_width", "cosamp_max_iterations",
      "blind_max_iterations", "omega", "c"};
  return keys;
}

const std::set<std::string>& allowed_keys(const std::string& kind) {
  static const std::set<std::string> snr = [] {
    auto k = sweep_keys();
    return k;
  }();
  static const std::set<std::string> omega = [] {
    auto k = sweep_keys();
    k.insert("omega_grid");
    return k;
  }();
  static const std::set<std::string> mapping = {"family", "m", "n", "mu", "mu_source", "k", "vartheta"};
  static const std::set<std::string> snr_min = {"family", "m", "n", "mu", "mu_source", "k", "vartheta",
                                                "pmin", "c"};
  if (kind == "snr_sweep") return snr;
  if (kind == "omega_sweep") return omega;
  if (kind == "mapping_bounds") return mapping;
  if (kind == "snr_min_bounds") return snr_min;
  fail(ErrorCode::Config, "unknown figure kind '" + kind +
                              "' (expected snr_sweep, omega_sweep, mapping_bounds or snr_min_bounds)");
}

void check_keys(const KeyValues& keys, const std::string& kind) {
  const auto& allowed = allowed_keys(kind);
  for (const auto& [k, v] : keys) {
    if (!common_keys().contains(k) && !allowed.contains(k)) {
      fail(ErrorCode::Config, "unknown key '" + k + "' for a figure of kind " + kind);
    }
  }
}

const std::string& require(const KeyValues& keys, const std::string& key) {
  const auto it = keys.find(key);
  if (it == keys.end()) fail(ErrorCode::Config, "missing required key '" + key + "'");
  return it->second;
}

std::string get(const KeyValues& keys, const std::string& key, const std::string& fallback) {
  const auto it = keys.find(key);
  return it == keys.end() ? fallback : it->second;
}

std::vector<int> int_list(const KeyValues& keys, const std::string& key) {
  std::vector<int> out;
  for (double v : parse_grid(key, require(keys, key))) {
    if (v != std::floor(v) || !std::isfinite(v)) fail(ErrorCode::Config, "key '" + key + "' must hold integers");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::string compact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string prob_list(const std::vector<double>& values) {
  std::string out;
  for (double v : values) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    out += (out.empty() ? "" : " ") + std::string(buf);
  }
  return out;
}

RngSeed seed_of(const KeyValues& keys) { return RngSeed{parse_u64("seed", get(keys, "seed", "1"))}; }

ordered_json blind_json(const BlindSetup& b, bool has_blind) {
  ordered_json j;
  j["mu"] = b.mu;
  if (!has_blind) return j;
  j["C"] = b.C;
  j["theta"] = b.theta;
  j["ceiling"] = b.ceiling;
  j["omega"] = b.omega;
  j["omega_source"] = b.omega_from_theory ? "probability inversion" : "configured";
  j["omega_star"] = b.omega_star;
  j["threshold"] = b.threshold;
  j["max_iterations"] = b.max_iterations;
  j["rho_upper"] = b.rho_upper;
  j["rho_in_valid_range"] = b.rho_in_valid_range;
  j["bomp_threshold"] = "same omega_star * mu as bols";
  return j;
}

struct Panel {
  Index M;
  Index N;
  int K;
  std::string label;
};

std::vector<Panel> sweep_panels(const KeyValues& keys, const std::string& figure) {
  const auto ms = int_list(keys, "m");
  const auto ns = int_list(keys, "n");
  const auto ks = int_list(keys, "k");
  std::vector<Panel> out;
  const bool single = ms.size() * ns.size() * ks.size() == 1;
  for (int m : ms) {
    for (int n : ns) {
      for (int k : ks) {
        Panel p{m, n, k, figure};
        if (!single) p.label += "_m" + std::to_string(m) + "_n" + std::to_string(n) + "_k" + std::to_string(k);
        out.push_back(p);
      }
    }
  }
  return out;
}

void write_plots(const std::vector<MetricsRow>& rows, const std::filesystem::path& base, const std::string& title,
                 const std::string& x_label, FigureReport& report) {
  const CsvTable table = parse_csv(format_metrics_csv(rows));
  PlotSpec prob{title, x_label, "Probability of recovery", false};
  PlotSpec mse{title, x_label, "MSE", true};
  auto prob_path = base;
  prob_path += "_prob.svg";
  auto mse_path = base;
  mse_path += "_mse.svg";
  write_text_file(prob_path, render_svg(series_from_long_csv(table, "prob_recovery"), prob));
  write_text_file(mse_path, render_svg(series_from_long_csv(table, "mse"), mse));
  report.files.push_back(prob_path);
  report.files.push_back(mse_path);
}

void summarize(const std::string& label, const std::string& grid_name, const SweepResult& sweep,
               const ExperimentConfig& cfg, FigureReport& report) {
  for (Algorithm a : cfg.algorithms) {
    std::vector<double> probs;
    double mse = 0.0;
    int count = 0;
    for (const auto& r : sweep.rows) {
      if (r.algorithm != a) continue;
      probs.push_back(r.prob_recovery);
      mse += r.mse;
      ++count;
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", count ? mse / count : kNaN);
    report.summaries.push_back(label + " " + std::string(algorithm_name(a)) + ": prob_recovery over " + grid_name +
                               " [" + prob_list(probs) + "], mean mse " + buf);
  }
}

void blind_warnings(const std::string& label, const SweepResult& sweep, const ExperimentConfig& cfg,
                    FigureReport& report) {
  const auto& b = sweep.blind;
  if (!b.rho_in_valid_range) {
    report.warnings.push_back(label + ": rho=" + compact(cfg.rho) + " lies outside the valid interval (0, " +
                              compact(b.rho_upper) + ") for mu=" + compact(b.mu) + ", C=" + compact(b.C));
  }
}

void write_meta(const std::filesystem::path& path, const FigureRequest& req, const KeyValues& keys,
                ordered_json panels, FigureReport& report) {
  ordered_json meta;
  meta["figure"] = req.figure;
  meta["scale"] = req.scale;
  ordered_json k = ordered_json::object();
  for (const auto& [key, value] : keys) k[key] = value;
  meta["keys"] = k;
  meta["panels"] = std::move(panels);
  write_text_file(path, meta.dump(2) + "\n");
  report.files.push_back(path);
}

FigureReport run_sweep(const FigureRequest& req, const KeyValues& keys, bool omega_kind) {
  FigureReport report;
  ordered_json panels = ordered_json::array();
  const auto all = sweep_panels(keys, req.figure);
  const std::string title = get(keys, "title", req.figure);
  std::vector<double> omega_grid;
  if (omega_kind) omega_grid = parse_grid("omega_grid", require(keys, "omega_grid"));

  // Validate every panel, including theory preconditions, before any trial.
  std::vector<ExperimentConfig> configs;
  std::vector<MeasurementMatrix> matrices;
  std::vector<BlindSetup> setups;
  for (std::size_t p = 0; p < all.size(); ++p) {
    ExperimentConfig cfg = experiment_config_from(keys, all[p].M, all[p].N, all[p].K);
    cfg.matrix_stream = p;
    cfg.threads = req.threads;
    if (omega_kind && cfg.snr_grid_db.size() != 1) {
      fail(ErrorCode::Config, "omega sweeps need exactly one snr value");
    }
    cfg.validate();
    matrices.push_back(make_experiment_matrix(cfg));
    const bool blind = std::any_of(cfg.algorithms.begin(), cfg.algorithms.end(), is_blind);
    setups.push_back(blind && !omega_kind ? derive_blind_setup(matrices.back(), cfg) : BlindSetup{});
    configs.push_back(std::move(cfg));
  }

  for (std::size_t p = 0; p < all.size(); ++p) {
    const auto& cfg = configs[p];
    const auto& d = matrices[p];
    const SweepResult sweep =
        omega_kind ? sweep_omega(d, cfg, omega_grid, cfg.snr_grid_db.front()) : sweep_snr(d, cfg);
    const auto base = req.out_dir / all[p].label;
    auto csv_path = base;
    csv_path += ".csv";
    auto jsonl_path = base;
    jsonl_path += ".jsonl";
    write_text_file(csv_path, format_metrics_csv(sweep.rows));
    write_text_file(jsonl_path, format_outcomes_jsonl(sweep.outcomes, cfg));
    report.files.push_back(csv_path);
    report.files.push_back(jsonl_path);

    std::string panel_title = title + " (M=" + std::to_string(all[p].M) + ", N=" + std::to_string(all[p].N) +
                              ", K=" + std::to_string(all[p].K) + ")";
    write_plots(sweep.rows, base, panel_title, omega_kind ? "omega" : "SNR (dB)", report);

    const bool blind = std::any_of(cfg.algorithms.begin(), cfg.algorithms.end(), is_blind);
    ordered_json pj;
    pj["label"] = all[p].label;
    pj["M"] = all[p].M;
    pj["N"] = all[p].N;
    pj["K"] = all[p].K;
    pj["matrix_stream"] = cfg.matrix_stream;
    if (omega_kind) {
      pj["mu"] = sweep.blind.mu;
      pj["threshold"] = "omega * mu (no slack subtraction)";
      pj["snr_db"] = cfg.snr_grid_db.front();
    } else {
      pj["blind"] = blind_json(sweep.blind, blind);
      if (blind) blind_warnings(all[p].label, sweep, cfg, report);
    }
    panels.push_back(pj);
    summarize(all[p].label, omega_kind ? "omega" : "snr", sweep, cfg, report);
  }
  auto meta_path = req.out_dir / req.figure;
  meta_path += "_meta.json";
  write_meta(meta_path, req, keys, std::move(panels), report);
  return report;
}

struct Curve {
  int M;
  int N;
  double mu;
  std::string label;
};

std::vector<Curve> bound_curves(const KeyValues& keys, unsigned threads) {
  const auto ms = int_list(keys, "m");
  const std::string source = get(keys, "mu_source", "nominal");
  std::vector<Curve> out;
  if (source == "nominal") {
    const auto mus = parse_grid("mu", require(keys, "mu"));
    if (mus.size() != ms.size()) fail(ErrorCode::Config, "keys 'm' and 'mu' must have the same length");
    std::vector<int> ns(ms.size(), 0);
    if (keys.contains("n")) {
      ns = int_list(keys, "n");
      if (ns.size() != ms.size()) fail(ErrorCode::Config, "keys 'm' and 'n' must have the same length");
    }
    for (std::size_t i = 0; i < ms.size(); ++i) out.push_back({ms[i], ns[i], mus[i], ""});
  } else if (source == "matrix") {
    const auto ns = int_list(keys, "n");
    if (ns.size() != ms.size()) fail(ErrorCode::Config, "keys 'm' and 'n' must have the same length");
    for (std::size_t i = 0; i < ms.size(); ++i) {
      ExperimentConfig cfg;
      cfg.family = parse_family(get(keys, "family", "gaussian"));
      cfg.M = ms[i];
      cfg.N = ns[i];
      cfg.base_seed = seed_of(keys);
      cfg.matrix_stream = i;
      const MeasurementMatrix d = make_experiment_matrix(cfg);
      out.push_back({ms[i], ns[i], compute_coherence(d.entries(), threads), ""});
    }
  } else {
    fail(ErrorCode::Config, "mu_source must be 'nominal' or 'matrix', got '" + source + "'");
  }
  for (auto& c : out) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", c.mu);
    c.label = "m" + std::to_string(c.M) + "_mu" + buf;
  }
  return out;
}

template <class F>
double or_nan(F&& f) {
  try {
    return f();
  } catch (const Error&) {
    return kNaN;
  }
}

FigureReport run_mapping_bounds(const FigureRequest& req, const KeyValues& keys) {
  FigureReport report;
  const auto curves = bound_curves(keys, req.threads);
  const auto ks = int_list(keys, "k");
  const double rho = parse_double("vartheta", get(keys, "vartheta", "0.15"));

  std::string csv = "k";
  for (const auto& c : curves) csv += ",singular_" + c.label + ",coherence_" + c.label + ",gram_" + c.label;
  csv += "\n";
  std::vector<std::vector<double>> cols(curves.size() * 3);
  for (int k : ks) {
    csv += std::to_string(k);
    for (std::size_t i = 0; i < curves.size(); ++i) {
      const auto& c = curves[i];
      const double a = or_nan([&] { return theory::mapping_factor_lower_singular(k, c.M, c.mu, rho); });
      const double b = or_nan([&] { return theory::mapping_factor_lower_coherence(k, c.mu); });
      const double g = or_nan([&] { return theory::mapping_factor_lower_gram(k, c.mu); });
      csv += "," + csv_number(a) + "," + csv_number(b) + "," + csv_number(g);
      cols[3 * i].push_back(a);
      cols[3 * i + 1].push_back(b);
      cols[3 * i + 2].push_back(g);
    }
    csv += "\n";
  }
  const auto csv_path = req.out_dir / (req.figure + ".csv");
  write_text_file(csv_path, csv);
  report.files.push_back(csv_path);

  const CsvTable table = parse_csv(csv);
  const auto svg_path = req.out_dir / (req.figure + ".svg");
  write_text_file(svg_path, render_svg(series_from_wide_csv(table),
                                       {get(keys, "title", req.figure), "K", "Mapping factor lower bound"}));
  report.files.push_back(svg_path);

  ordered_json panels = ordered_json::array();
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& c = curves[i];
    panels.push_back({{"label", c.label}, {"M", c.M}, {"mu", c.mu}, {"rho", rho},
                      {"tight_slack_limit_per_k", ordered_json::array()}});
    for (int k : ks) panels.back()["tight_slack_limit_per_k"].push_back(theory::tight_slack_limit(k, c.M, c.mu));
    const char* names[] = {"singular", "coherence", "gram"};
    for (int j = 0; j < 3; ++j) {
      std::string values;
      for (double v : cols[3 * i + j]) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4f", v);
        values += (values.empty() ? "" : " ") + std::string(buf);
      }
      report.summaries.push_back(req.figure + " " + names[j] + "_" + c.label + ": [" + values + "] over k");
    }
  }
  write_meta(req.out_dir / (req.figure + "_meta.json"), req, keys, std::move(panels), report);
  return report;
}

FigureReport run_snr_min_bounds(const FigureRequest& req, const KeyValues& keys) {
  FigureReport report;
  const auto curves = bound_curves(keys, req.threads);
  const int K = parse_int("k", require(keys, "k"));
  const double rho = parse_double("vartheta", get(keys, "vartheta", "0.15"));
  const auto pmins = parse_grid("pmin", get(keys, "pmin", "0.9:0.01:0.99"));
  std::optional<double> c_override;
  if (keys.contains("c")) c_override = parse_double("c", keys.at("c"));
  for (const auto& c : curves) {
    if (c.N <= 0) fail(ErrorCode::Config, "snr_min_bounds needs key 'n'");
  }

  std::string csv = "pmin";
  for (const auto& c : curves) csv += ",omega_" + c.label + ",snr_min_db_" + c.label;
  csv += "\n";
  std::vector<std::vector<double>> db(curves.size());
  for (double p : pmins) {
    csv += csv_number(p);
    for (std::size_t i = 0; i < curves.size(); ++i) {
      const auto& c = curves[i];
      theory::TheoryParams tp;
      tp.M = c.M;
      tp.N = c.N;
      tp.mu = c.mu;
      tp.rho = rho;
      tp.K = K;
      tp.C_override = c_override;
      tp.p_min = p;
      const double omega = or_nan([&] { return theory::omega_for_probability(p, tp); });
      const double floor = std::isnan(omega) ? kNaN : or_nan([&] { return theory::snr_min_bound(tp, omega); });
      const double floor_db = floor > 0.0 ? 10.0 * std::log10(floor) : kNaN;
      csv += "," + csv_number(omega) + "," + csv_number(floor_db);
      db[i].push_back(floor_db);
    }
    csv += "\n";
  }
  const auto csv_path = req.out_dir / (req.figure + ".csv");
  write_text_file(csv_path, csv);
  report.files.push_back(csv_path);

  const CsvTable table = parse_csv(csv);
  const auto svg_path = req.out_dir / (req.figure + ".svg");
  write_text_file(svg_path, render_svg(series_from_wide_csv(table, "snr_min_db_"),
                                       {get(keys, "title", req.figure), "Target probability of recovery",
                                        "SNR_min lower bound (dB)"}));
  report.files.push_back(svg_path);

  ordered_json panels = ordered_json::array();
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto& c = curves[i];
    panels.push_back({{"label", c.label}, {"M", c.M}, {"N", c.N}, {"mu", c.mu}, {"K", K}, {"rho", rho}});
    std::string values;
    for (double v : db[i]) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.2f", v);
      values += (values.empty() ? "" : " ") + std::string(buf);
    }
    report.summaries.push_back(req.figure + " snr_min_db_" + c.label + ": [" + values + "] over pmin");
  }
  write_meta(req.out_dir / (req.figure + "_meta.json"), req, keys, std::move(panels), report);
  return report;
}

}  // namespace

ExperimentConfig experiment_config_from(const KeyValues& keys, Index M, Index N, int K) {
  ExperimentConfig cfg;
  cfg.family = parse_family(get(keys, "family", "gaussian"));
  cfg.M = M;
  cfg.N = N;
  cfg.K = K;
  cfg.offset_max = parse_double("offset_max", get(keys, "offset_max", "10"));
  cfg.snr_grid_db = parse_grid("snr", require(keys, "snr"));
  cfg.algorithms.clear();
  for (const auto& name : parse_list(require(keys, "algorithms"))) {
    try {
      cfg.algorithms.push_back(parse_algorithm(name));
    } catch (const Error& e) {
      fail(ErrorCode::Config, e.what());
    }
  }
  cfg.trials = parse_int("trials", get(keys, "trials", "1000"));
  cfg.base_seed = seed_of(keys);
  cfg.p_min = parse_double("pmin", get(keys, "pmin", "0.95"));
  cfg.rho = parse_double("rho", get(keys, "rho", "0.175"));
  cfg.vartheta = parse_double("vartheta", get(keys, "vartheta", "0.15"));
  cfg.success_tolerance = parse_double("success_tolerance", get(keys, "success_tolerance", "0.05"));
  cfg.nonzero_mean = parse_double("nonzero_mean", get(keys, "nonzero_mean", "1"));
  cfg.nonzero_var = parse_double("nonzero_var", get(keys, "nonzero_var", "0.01"));
  cfg.mols_width = parse_int("mols_width", get(keys, "mols_width", std::to_string(kDefaultMolsWidth)));
  cfg.cosamp_max_iterations =
      parse_int("cosamp_max_iterations", get(keys, "cosamp_max_iterations", std::to_string(kDefaultCoSaMPIterations)));
  cfg.blind_max_iterations = parse_int("blind_max_iterations", get(keys, "blind_max_iterations", "0"));
  if (keys.contains("omega")) cfg.omega = parse_double("omega", keys.at("omega"));
  if (keys.contains("c")) cfg.C_override = parse_double("c", keys.at("c"));
  return cfg;
}

FigureReport run_figure(const FigureRequest& request) {
  const ConfigFile file = request.config_path ? ConfigFile::load(*request.config_path)
                                              : ConfigFile::parse(builtin_presets(), "figures.conf");
  const KeyValues keys = resolve(file, request.figure, request.scale, request.overrides);
  const std::string kind = require(keys, "kind");
  check_keys(keys, kind);

  std::error_code ec;
  std::filesystem::create_directories(request.out_dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create output directory " + request.out_dir.string() + ": " + ec.message());

  if (kind == "snr_sweep") return run_sweep(request, keys, false);
  if (kind == "omega_sweep") return run_sweep(request, keys, true);
  if (kind == "mapping_bounds") return run_mapping_bounds(request, keys);
  return run_snr_min_bounds(request, keys);
}

}  // namespace sparsense
