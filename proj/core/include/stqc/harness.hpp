#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "stqc/grid.hpp"
#include "stqc/solver.hpp"
#include "stqc/synthesis.hpp"

namespace stqc {

/// Toolkit version reported in manifests.
const char* toolkit_version();

struct GridConfig {
  std::size_t n = 2048;
  double half_width = 12.0;
};

/// One experiment: a named suite plus its overrides.
struct ExperimentConfig {
  std::string suite;
  GridConfig grid;
  PotentialBindings pots;
  /// Named sweep axes (tau, t, n, draw, ...); every axis must be nonempty.
  std::map<std::string, std::vector<double>> sweep;
  std::vector<std::uint64_t> seeds{1};
  std::string output_dir = "stqc_out";
  /// Threshold overrides by name.
  std::map<std::string, double> tolerances;
  /// Suite-specific parameters.
  nlohmann::json params = nlohmann::json::object();

  /// Throws ConfigError for an unknown suite, an empty axis or bad grid values.
  void validate() const;
  double tolerance(const std::string& name) const;
  double param(const std::string& name) const;
  const std::vector<double>& axis(const std::string& name) const;

  nlohmann::json to_json() const;
  /// Starts from the suite defaults and applies the fields present in j.
  static ExperimentConfig from_json(const nlohmann::json& j);
  /// SHA-256 of the canonical JSON serialization.
  std::string hash() const;
};

/// Defaults of a registered suite; throws ConfigError for an unknown id.
ExperimentConfig default_config(const std::string& suite);

using Cell = std::variant<double, std::int64_t, std::string>;

/// Fixed-column table; doubles are written with 17 significant digits.
struct MetricTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
  std::string to_csv() const;
  nlohmann::json to_json() const;
};

std::string format_double(double v);

/// A log-log convergence series for plotting.
struct PlotSeries {
  std::string name;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;
  std::vector<double> y;

  nlohmann::json to_json() const;
  static PlotSeries from_json(const nlohmann::json& j);
};

struct SuiteResult {
  MetricTable metrics;
  /// Wall seconds per metric row; kept out of the metric table.
  std::vector<double> wall_seconds;
  bool passed = true;
  /// Human-readable reasons for failure, one per violated threshold.
  std::vector<std::string> failures;
  std::vector<SynthesisReport> reports;
  std::vector<PlotSeries> series;
  /// Key measured quantities by name.
  nlohmann::json summary = nlohmann::json::object();

  void fail(const std::string& why);
};

struct SuiteContext {
  const ExperimentConfig& config;
  std::size_t workers;
};

struct SuiteInfo {
  std::string id;
  int criterion;
  std::string title;
  std::function<ExperimentConfig()> defaults;
  std::function<SuiteResult(const SuiteContext&)> run;
};

const std::vector<SuiteInfo>& suite_registry();
/// Throws ConfigError for an unknown id.
const SuiteInfo& find_suite(const std::string& id);

/// Runs a suite in memory without writing files; workers = 0 uses worker_count().
SuiteResult execute_suite(const ExperimentConfig& config, std::size_t workers = 0);

struct FileDigest {
  std::string path;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  std::string suite;
  std::string config_hash;
  std::string version;
  std::string started;
  std::string finished;
  nlohmann::json config;
  nlohmann::json rows = nlohmann::json::array();
  nlohmann::json environment = nlohmann::json::object();
  std::vector<FileDigest> files;
  std::vector<PlotSeries> series;
  nlohmann::json summary = nlohmann::json::object();
  std::vector<std::string> failures;
  bool passed = false;
  std::string output_dir;

  nlohmann::json to_json() const;
  static RunManifest from_json(const nlohmann::json& j);
};

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

/// Executes the suite and writes metrics.csv, timing.csv, the synthesis
/// reports and manifest.json into config.output_dir.
RunManifest run_suite(const ExperimentConfig& config, SuiteResult* result = nullptr);

/// Writes one CSV (x, y) per series plus plot.json into dir (default: the
/// manifest's output directory). Throws InvalidArgument without metric rows.
std::vector<std::string> emit_plot_data(const RunManifest& manifest, const std::string& dir = "");

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace stqc
