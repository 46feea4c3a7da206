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

// Command-line front end. Talks to the library only through the C API.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 domain error
// (infeasible parameters, unattainable target, recovery failure).

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sparsense/sparsense.h"

namespace {

using nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct CliFailure {
  int exit_code;
  std::string message;
};

int exit_code_for(sps_status status) {
  switch (status) {
    case SPS_ERR_RANK_DEFICIENT:
    case SPS_ERR_INFEASIBLE_PARAMS:
    case SPS_ERR_INFEASIBLE_TARGET:
    case SPS_ERR_ZERO_RESIDUAL:
    case SPS_ERR_ZERO_SIGNAL:
    case SPS_ERR_INTERNAL:
      return 2;
    default:
      return 1;
  }
}

void check(sps_status status) {
  if (status != SPS_OK) {
    throw CliFailure{exit_code_for(status), std::string(sps_status_name(status)) + ": " + sps_last_error()};
  }
}

[[noreturn]] void usage(const std::string& message) { throw CliFailure{1, message}; }

struct MatrixDeleter {
  void operator()(sps_matrix* m) const { sps_matrix_free(m); }
};
struct ResultDeleter {
  void operator()(sps_result* r) const { sps_result_free(r); }
};
using MatrixPtr = std::unique_ptr<sps_matrix, MatrixDeleter>;
using ResultPtr = std::unique_ptr<sps_result, ResultDeleter>;

std::vector<double> grid(const std::string& text) {
  std::size_t count = 0;
  check(sps_parse_grid(text.c_str(), nullptr, 0, &count));
  std::vector<double> out(count);
  check(sps_parse_grid(text.c_str(), out.data(), out.size(), &count));
  return out;
}

std::string number(double v) {
  if (std::isnan(v)) return {};
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ordered_json json_number(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(); }

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw CliFailure{1, "cannot open " + out_path + " for writing"};
  out << text;
}

std::vector<double> read_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) usage("cannot open " + path);
  std::vector<double> out;
  std::string token;
  std::stringstream all;
  all << in.rdbuf();
  std::string text = all.str();
  for (char& c : text) {
    if (c == ',' || c == ';') c = ' ';
  }
  std::istringstream tokens(text);
  while (tokens >> token) {
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end == token.c_str() || *end != '\0') usage(path + ": not a number: '" + token + "'");
    out.push_back(v);
  }
  return out;
}

// Options shared by commands that either load or generate a matrix.
struct MatrixSource {
  std::string path;
  std::string family = "gaussian";
  int64_t m = 0;
  int64_t n = 0;
  double offset_max = 10.0;

  void add(CLI::App* cmd, bool allow_path = true) {
    if (allow_path) cmd->add_option("--matrix", path, "Matrix file in the SPRSMAT1 binary format");
    cmd->add_option("--family", family, "gaussian or hybrid (when generating)")
        ->check(CLI::IsMember({"gaussian", "hybrid"}));
    cmd->add_option("--m", m, "Rows (when generating)");
    cmd->add_option("--n", n, "Columns (when generating)");
    cmd->add_option("--offset-max", offset_max, "Hybrid column offset range");
  }

  MatrixPtr make(uint64_t matrix_seed) const {
    sps_matrix* raw = nullptr;
    if (!path.empty()) {
      check(sps_matrix_load(path.c_str(), &raw));
    } else {
      if (m <= 0 || n <= 0) usage("give --matrix or both --m and --n");
      check(family == "hybrid" ? sps_matrix_hybrid(m, n, offset_max, matrix_seed, &raw)
                               : sps_matrix_gaussian(m, n, matrix_seed, &raw));
    }
    return MatrixPtr(raw);
  }
};

uint64_t default_seed() {
  if (const char* env = std::getenv("SPARSENSE_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') usage("SPARSENSE_SEED must be an unsigned integer");
    return v;
  }
  return 1;
}

// ---------------------------------------------------------------------------

int cmd_gen_matrix(const MatrixSource& src, uint64_t seed, const std::string& out, const std::string& csv,
                   bool with_coherence, unsigned threads) {
  if (out.empty() && csv.empty()) usage("gen-matrix needs --out and/or --csv");
  MatrixPtr d = src.make(seed);
  if (!out.empty()) check(sps_matrix_save(d.get(), out.c_str()));
  if (!csv.empty()) check(sps_matrix_save_csv(d.get(), csv.c_str()));
  int64_t rows = 0, cols = 0;
  check(sps_matrix_dims(d.get(), &rows, &cols));
  ordered_json j{{"family", src.family}, {"rows", rows}, {"cols", cols}, {"seed", seed}};
  if (with_coherence) {
    double mu = 0.0;
    check(sps_matrix_coherence(d.get(), threads, &mu));
    j["coherence"] = mu;
  }
  std::cout << j.dump() << "\n";
  return 0;
}

int cmd_coherence(const MatrixSource& src, uint64_t seed, unsigned threads) {
  MatrixPtr d = src.make(seed);
  int64_t rows = 0, cols = 0;
  check(sps_matrix_dims(d.get(), &rows, &cols));
  double mu = 0.0;
  check(sps_matrix_coherence(d.get(), threads, &mu));
  double c = kNaN;
  if (mu > 0.0) check(sps_theory_reconstructible_sparsity(mu, &c));
  std::cout << ordered_json{{"rows", rows}, {"cols", cols}, {"coherence", mu}, {"C", json_number(c)}}.dump()
            << "\n";
  return 0;
}

struct RecoverArgs {
  std::string algorithm = "bols";
  int k = 0;
  std::string y_path;
  int k_true = 4;
  double snr_db = std::numeric_limits<double>::infinity();
  double mean = 1.0;
  double var = 0.01;
  double pmin = 0.95;
  double rho = 0.175;
  double omega = kNaN;
  double c = kNaN;
  int max_iterations = 0;
  int mols_width = 2;
  int cosamp_iterations = 50;
  std::string out;
};

int cmd_recover(const MatrixSource& src, uint64_t seed, const RecoverArgs& a) {
  MatrixPtr d = src.make(seed);
  int64_t rows = 0, cols = 0;
  check(sps_matrix_dims(d.get(), &rows, &cols));

  sps_algorithm alg{};
  check(sps_algorithm_parse(a.algorithm.c_str(), &alg));
  const bool blind = alg == SPS_ALG_BOLS || alg == SPS_ALG_BOMP;
  if (!blind && a.k <= 0) usage("--k is required for algorithm " + a.algorithm);

  std::vector<double> y;
  std::vector<double> x_true;
  double sigma = kNaN;
  if (!a.y_path.empty()) {
    y = read_vector(a.y_path);
  } else {
    y.resize(static_cast<std::size_t>(rows));
    x_true.resize(static_cast<std::size_t>(cols));
    check(sps_synthesize(d.get(), a.k_true, a.mean, a.var, a.snr_db, seed, x_true.data(), y.data(), &sigma));
  }

  ordered_json out;
  out["algorithm"] = a.algorithm;
  out["M"] = rows;
  out["N"] = cols;
  out["seed"] = seed;

  sps_recover_options opts;
  sps_recover_options_init(&opts);
  opts.algorithm = alg;
  opts.k = a.k;
  opts.mols_width = a.mols_width;
  opts.cosamp_max_iterations = a.cosamp_iterations;
  if (blind) {
    sps_blind_info info{};
    check(sps_blind_setup(d.get(), a.pmin, a.rho, a.omega, a.c, &info));
    opts.omega_star = info.omega_star;
    opts.mu = info.mu;
    opts.max_iterations = a.max_iterations > 0 ? a.max_iterations : info.max_iterations;
    out["blind"] = ordered_json{{"mu", info.mu},         {"C", info.C},
                                {"omega", info.omega},   {"omega_star", info.omega_star},
                                {"threshold", info.threshold}, {"max_iterations", opts.max_iterations}};
    if (!info.rho_in_valid_range) {
      std::cerr << "warning: rho=" << a.rho << " lies outside the valid interval (0, " << info.rho_upper << ")\n";
    }
  }

  sps_result* raw = nullptr;
  check(sps_recover(d.get(), y.data(), static_cast<int64_t>(y.size()), &opts, &raw));
  ResultPtr result(raw);

  const int64_t* support = sps_result_support(result.get());
  std::vector<int64_t> sel(support, support + sps_result_support_size(result.get()));
  std::vector<int64_t> sorted = sel;
  std::sort(sorted.begin(), sorted.end());
  const double* x_hat = sps_result_x(result.get());
  out["iterations"] = sps_result_iterations(result.get());
  out["stop_reason"] = sps_result_stop_reason(result.get());
  out["support"] = sorted;
  out["selection_order"] = sel;
  ordered_json coeffs = ordered_json::array();
  for (int64_t j : sorted) coeffs.push_back(ordered_json{{"index", j}, {"value", x_hat[j]}});
  out["x_hat"] = coeffs;
  const double* hist = sps_result_history(result.get());
  out["residual_norm_history"] =
      std::vector<double>(hist, hist + sps_result_history_size(result.get()));

  if (!x_true.empty()) {
    std::vector<int64_t> truth;
    double err = 0.0, norm = 0.0;
    for (int64_t j = 0; j < cols; ++j) {
      if (x_true[static_cast<std::size_t>(j)] != 0.0) truth.push_back(j);
      const double diff = x_hat[j] - x_true[static_cast<std::size_t>(j)];
      err += diff * diff;
      norm += x_true[static_cast<std::size_t>(j)] * x_true[static_cast<std::size_t>(j)];
    }
    out["synthetic"] = ordered_json{{"k", a.k_true},
                                    {"snr_db", std::isfinite(a.snr_db) ? ordered_json(a.snr_db) : ordered_json("inf")},
                                    {"sigma", json_number(sigma)},
                                    {"true_support", truth},
                                    {"exact_support", truth == sorted},
                                    {"rel_error", json_number(norm > 0 ? std::sqrt(err / norm) : std::sqrt(err))}};
  }
  const std::string text = out.dump(2) + "\n";
  std::cout << text;
  if (!a.out.empty()) emit(text, a.out);
  return 0;
}

struct BoundsArgs {
  std::string kind;
  int m = 1024;
  int n = 8192;
  double mu = 0.135;
  double rho = 0.15;
  std::string k = "2:1:10";
  std::string pmin = "0.9:0.01:0.99";
  std::string omega = "0.5:0.1:3";
  double c = kNaN;
  std::string out;
};

int cmd_bounds(const BoundsArgs& a) {
  std::string csv;
  auto value = [](auto&& call) {
    double v = kNaN;
    return call(&v) == SPS_OK ? v : kNaN;
  };
  if (a.kind == "singular") {
    csv = "k,lower,upper,prob_floor\n";
    for (double kd : grid(a.k)) {
      const int k = static_cast<int>(kd);
      double lo = kNaN, hi = kNaN, pf = kNaN;
      check(sps_theory_singular_bounds(k, a.m, a.rho, &lo, &hi, &pf));
      csv += std::to_string(k) + "," + number(lo) + "," + number(hi) + "," + number(pf) + "\n";
    }
  } else if (a.kind == "mapping") {
    csv = "k,singular,coherence,gram,tight_slack_limit\n";
    for (double kd : grid(a.k)) {
      const int k = static_cast<int>(kd);
      csv += std::to_string(k) + "," +
             number(value([&](double* v) { return sps_theory_mapping_singular(k, a.m, a.mu, a.rho, v); })) + "," +
             number(value([&](double* v) { return sps_theory_mapping_coherence(k, a.mu, v); })) + "," +
             number(value([&](double* v) { return sps_theory_mapping_gram(k, a.mu, v); })) + "," +
             number(value([&](double* v) { return sps_theory_tight_slack_limit(k, a.m, a.mu, v); })) + "\n";
    }
  } else if (a.kind == "probability") {
    sps_theory_params p{a.m, a.n, a.mu, a.rho, 0, a.c, 0.95};
    double ceiling = 0.0;
    check(sps_theory_ceiling(&p, &ceiling));
    csv = "omega,probability,ceiling\n";
    for (double w : grid(a.omega)) {
      csv += number(w) + "," + number(value([&](double* v) { return sps_theory_probability(&p, w, v); })) + "," +
             number(ceiling) + "\n";
    }
  } else if (a.kind == "snr-min") {
    const auto ks = grid(a.k);
    if (ks.size() != 1) usage("bounds snr-min needs a single --k");
    csv = "pmin,omega,phi1,phi2,snr_min,snr_min_db\n";
    for (double pm : grid(a.pmin)) {
      sps_theory_params p{a.m, a.n, a.mu, a.rho, static_cast<int>(ks[0]), a.c, pm};
      double omega = kNaN, phi1 = kNaN, phi2 = kNaN, bound = kNaN;
      if (sps_theory_omega(&p, &omega) != SPS_OK ||
          sps_theory_snr_min(&p, omega, &phi1, &phi2, &bound) != SPS_OK) {
        bound = kNaN;
      }
      csv += number(pm) + "," + number(omega) + "," + number(phi1) + "," + number(phi2) + "," + number(bound) +
             "," + number(bound > 0 ? 10.0 * std::log10(bound) : kNaN) + "\n";
    }
  } else {
    usage("unknown bound kind '" + a.kind + "'");
  }
  emit(csv, a.out);
  return 0;
}

struct InvertArgs {
  double mu = kNaN;
  double rho = 0.175;
  double pmin = 0.95;
  double c = kNaN;
};

int cmd_invert_omega(const MatrixSource& src, uint64_t seed, const InvertArgs& a, unsigned threads) {
  int64_t M = src.m, N = src.n;
  double mu = a.mu;
  if (std::isnan(mu)) {
    MatrixPtr d = src.make(seed);
    check(sps_matrix_dims(d.get(), &M, &N));
    check(sps_matrix_coherence(d.get(), threads, &mu));
  } else if (!src.path.empty()) {
    usage("give either --mu or --matrix, not both");
  } else if (M <= 0 || N <= 0) {
    usage("--mu needs --m and --n");
  }
  sps_theory_params p{static_cast<int>(M), static_cast<int>(N), mu, a.rho, 0, a.c, a.pmin};
  double C = a.c;
  if (std::isnan(C)) check(sps_theory_reconstructible_sparsity(mu, &C));
  double a1 = 0, a2 = 0, theta = 0, ceiling = 0;
  check(sps_theory_theta(static_cast<double>(M), C, &a1, &a2, &theta));
  check(sps_theory_ceiling(&p, &ceiling));

  // Valid slack interval (0, (C−1)μ − √(C/M)) on the real-valued C.
  const double rho_upper = (C - 1.0) * mu - std::sqrt(C / static_cast<double>(M));
  if (!(a.rho > 0.0 && a.rho < rho_upper)) {
    std::cerr << "warning: rho=" << a.rho << " lies outside the valid interval (0, " << rho_upper
              << ") for mu=" << mu << ", C=" << C << "\n";
  }

  double omega = 0.0;
  const sps_status st = sps_theory_omega(&p, &omega);
  if (st != SPS_OK) {
    std::cerr << "error: " << sps_last_error() << " (ceiling " << ceiling << ")\n";
    return exit_code_for(st);
  }
  ordered_json j;
  j["M"] = M;
  j["N"] = N;
  j["mu"] = mu;
  j["rho"] = a.rho;
  j["pmin"] = a.pmin;
  j["C"] = C;
  j["theta"] = theta;
  j["A1"] = a1;
  j["A2"] = a2;
  j["ceiling"] = ceiling;
  j["omega"] = omega;
  j["omega_star"] = omega - a.rho;
  j["Q"] = omega * mu;
  j["blind_threshold"] = (omega - a.rho) * mu;
  j["rho_upper"] = rho_upper;
  j["rho_in_valid_range"] = a.rho > 0.0 && a.rho < rho_upper;
  std::cout << j.dump() << "\n";
  return 0;
}

struct ExperimentArgs {
  std::string figure;
  std::string scale = "desk";
  std::string config;
  std::string out = "results";
  std::vector<std::string> set;
  int trials = -1;
  bool list = false;
};

void print_line(sps_line_kind kind, const char* line, void*) {
  switch (kind) {
    case SPS_LINE_WARNING: std::cerr << "warning: " << line << "\n"; break;
    case SPS_LINE_SUMMARY: std::cout << line << "\n"; break;
    case SPS_LINE_FILE: std::cerr << "wrote " << line << "\n"; break;
  }
}

int cmd_experiment(const ExperimentArgs& a, bool seed_given, uint64_t seed, unsigned threads) {
  const char* config = a.config.empty() ? nullptr : a.config.c_str();
  if (a.list) {
    check(sps_experiment_list(config, print_line, nullptr));
    return 0;
  }
  if (a.figure.empty()) usage("--figure is required");
  std::vector<std::string> overrides;
  if (seed_given || std::getenv("SPARSENSE_SEED")) overrides.push_back("seed=" + std::to_string(seed));
  if (a.trials >= 0) overrides.push_back("trials=" + std::to_string(a.trials));
  for (const auto& s : a.set) overrides.push_back(s);
  std::vector<const char*> ptrs;
  for (const auto& s : overrides) ptrs.push_back(s.c_str());
  check(sps_experiment_run(a.figure.c_str(), a.scale.c_str(), config, ptrs.data(), ptrs.size(), a.out.c_str(),
                           threads, print_line, nullptr));
  return 0;
}

struct PlotArgs {
  std::string csv;
  std::string out;
  std::string metric = "prob_recovery";
  std::string prefix;
  std::string title;
  std::string x_label;
  std::string y_label;
  bool log_y = false;
};

int cmd_plot(const PlotArgs& a) {
  check(sps_plot_csv(a.csv.c_str(), a.out.c_str(), a.metric.c_str(), a.prefix.c_str(), a.title.c_str(),
                     a.x_label.c_str(), a.y_label.c_str(), a.log_y ? 1 : 0));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blind OLS sparse recovery, bounds and figure reproduction"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(sps_version()));

  unsigned threads = 0;
  uint64_t seed = 1;
  app.add_option("--threads", threads, "Worker threads (0 = all cores)");
  CLI::Option* seed_opt = app.add_option("--seed", seed, "Base seed (default: $SPARSENSE_SEED or 1)");

  MatrixSource gen_src;
  std::string gen_out, gen_csv;
  bool gen_coherence = false;
  auto* gen = app.add_subcommand("gen-matrix", "Generate a normalized measurement matrix");
  gen_src.add(gen, false);
  gen->add_option("--out", gen_out, "Binary output path");
  gen->add_option("--csv", gen_csv, "CSV output path");
  gen->add_flag("--coherence", gen_coherence, "Also report the coherence");

  MatrixSource coh_src;
  auto* coh = app.add_subcommand("coherence", "Coherence of a stored or generated matrix");
  coh_src.add(coh);

  MatrixSource rec_src;
  RecoverArgs rec;
  auto* recover = app.add_subcommand("recover", "Recover a sparse vector from y = Dx + noise");
  rec_src.add(recover);
  recover->add_option("--alg", rec.algorithm, "bols, ols, omp, bomp, cosamp or mols")
      ->check(CLI::IsMember({"bols", "ols", "omp", "bomp", "cosamp", "mols"}));
  recover->add_option("--k", rec.k, "Sparsity for the known-K algorithms");
  recover->add_option("--y", rec.y_path, "Measurement vector file (numbers separated by whitespace or commas)");
  recover->add_option("--k-true", rec.k_true, "Sparsity of the synthetic spectrum when --y is absent");
  recover->add_option("--snr", rec.snr_db, "SNR in dB of the synthetic measurement (inf = noiseless)");
  recover->add_option("--mean", rec.mean, "Mean of the synthetic nonzeros");
  recover->add_option("--var", rec.var, "Variance of the synthetic nonzeros");
  recover->add_option("--pmin", rec.pmin, "Target recovery probability for the blind rule");
  recover->add_option("--rho", rec.rho, "Singular-value slack");
  recover->add_option("--omega", rec.omega, "Use this omega instead of inverting the probability bound");
  recover->add_option("--c", rec.c, "Override the reconstructible sparsity surrogate");
  recover->add_option("--max-iter", rec.max_iterations, "Blind iteration cap (0 = floor(M/2))");
  recover->add_option("--mols-width", rec.mols_width, "Atoms per MOLS round");
  recover->add_option("--cosamp-iter", rec.cosamp_iterations, "CoSaMP iteration cap");
  recover->add_option("--out", rec.out, "Also write the JSON result here");

  BoundsArgs bnd;
  auto* bounds = app.add_subcommand("bounds", "Closed-form bound sweeps as CSV");
  bounds->add_option("kind", bnd.kind, "singular, mapping, probability or snr-min")
      ->required()
      ->check(CLI::IsMember({"singular", "mapping", "probability", "snr-min"}));
  bounds->add_option("--m", bnd.m, "Rows M");
  bounds->add_option("--n", bnd.n, "Columns N");
  bounds->add_option("--mu", bnd.mu, "Coherence");
  bounds->add_option("--rho", bnd.rho, "Singular-value slack");
  bounds->add_option("--k", bnd.k, "Sparsity grid (start:step:stop or list)");
  bounds->add_option("--pmin", bnd.pmin, "Target probability grid (snr-min)");
  bounds->add_option("--omega", bnd.omega, "Omega grid (probability)");
  bounds->add_option("--c", bnd.c, "Override the reconstructible sparsity surrogate");
  bounds->add_option("--out", bnd.out, "Output CSV path (default stdout)");

  MatrixSource inv_src;
  InvertArgs inv;
  auto* invert = app.add_subcommand("invert-omega", "Solve the probability bound for omega");
  inv_src.add(invert);
  invert->add_option("--mu", inv.mu, "Coherence (otherwise measured on the matrix)");
  invert->add_option("--rho", inv.rho, "Singular-value slack");
  invert->add_option("--pmin", inv.pmin, "Target recovery probability");
  invert->add_option("--c", inv.c, "Override the reconstructible sparsity surrogate");

  ExperimentArgs exp;
  auto* experiment = app.add_subcommand("experiment", "Run a figure preset and write CSV, JSONL and SVG");
  experiment->add_option("--figure", exp.figure, "Preset name, e.g. fig3");
  experiment->add_option("--scale", exp.scale, "desk or paper")->check(CLI::IsMember({"desk", "paper"}));
  experiment->add_option("--config", exp.config, "Config file (default: built-in presets)");
  experiment->add_option("--out", exp.out, "Output directory");
  experiment->add_option("--set", exp.set, "Override a preset key, key=value (repeatable)");
  experiment->add_option("--trials", exp.trials, "Shorthand for --set trials=N");
  experiment->add_flag("--list", exp.list, "List the available presets");

  PlotArgs plt;
  auto* plot = app.add_subcommand("plot", "Re-plot a CSV written by this tool as SVG");
  plot->add_option("--csv", plt.csv, "Input CSV")->required();
  plot->add_option("--out", plt.out, "Output SVG")->required();
  plot->add_option("--metric", plt.metric, "Column to plot from long-format files");
  plot->add_option("--prefix", plt.prefix, "Column prefix to plot from wide-format files");
  plot->add_option("--title", plt.title, "Plot title");
  plot->add_option("--xlabel", plt.x_label, "x-axis label");
  plot->add_option("--ylabel", plt.y_label, "y-axis label");
  plot->add_flag("--log-y", plt.log_y, "Logarithmic y axis");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const bool seed_given = seed_opt->count() > 0;
  try {
    if (!seed_given) seed = default_seed();
    if (*gen) return cmd_gen_matrix(gen_src, seed, gen_out, gen_csv, gen_coherence, threads);
    if (*coh) return cmd_coherence(coh_src, seed, threads);
    if (*recover) return cmd_recover(rec_src, seed, rec);
    if (*bounds) return cmd_bounds(bnd);
    if (*invert) return cmd_invert_omega(inv_src, seed, inv, threads);
    if (*experiment) return cmd_experiment(exp, seed_given, seed, threads);
    if (*plot) return cmd_plot(plt);
  } catch (const CliFailure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.exit_code;
  }
  return 1;
}
