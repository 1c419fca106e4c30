#include "stqc/harness.hpp"

#include <sys/utsname.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "stqc/errors.hpp"
#include "stqc/parallel.hpp"

namespace stqc {

namespace fs = std::filesystem;
using nlohmann::json;

const char* toolkit_version() { return STQC_VERSION; }

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(fmt::format("cannot write {}", path.string()));
  out << text;
  if (!out) throw ConfigError(fmt::format("write failed for {}", path.string()));
}

std::string digest_hex(const unsigned char* data, std::size_t len) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int md_len = 0;
  if (EVP_Digest(data, len, md, &md_len, EVP_sha256(), nullptr) != 1)
    throw Error("SHA-256 digest failed");
  std::string hex;
  hex.reserve(2 * md_len);
  for (unsigned int i = 0; i < md_len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

std::string cell_text(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
  const auto& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + "\"";
}

json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (std::isfinite(*d)) return *d;
    return format_double(*d);
  }
  if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
  return std::get<std::string>(c);
}

json environment_json(std::size_t workers) {
  json env;
  utsname u{};
  if (uname(&u) == 0) env["system"] = fmt::format("{} {} {}", u.sysname, u.release, u.machine);
#if defined(__VERSION__)
  env["compiler"] = __VERSION__;
#endif
  env["workers"] = workers;
  const char* threads = std::getenv("STQC_THREADS");
  env["STQC_THREADS"] = threads ? json(threads) : json(nullptr);
  return env;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

void MetricTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw InvalidArgument(
        fmt::format("metric row has {} cells for {} columns", row.size(), columns.size()));
  rows.push_back(std::move(row));
}

std::string MetricTable::to_csv() const {
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out += ',';
    out += columns[c];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += cell_text(row[c]);
    }
    out += '\n';
  }
  return out;
}

json MetricTable::to_json() const {
  json arr = json::array();
  for (const auto& row : rows) {
    json obj = json::object();
    for (std::size_t c = 0; c < row.size(); ++c) obj[columns[c]] = cell_json(row[c]);
    arr.push_back(std::move(obj));
  }
  return arr;
}

json PlotSeries::to_json() const {
  return {{"name", name}, {"x_label", x_label}, {"y_label", y_label}, {"x", x}, {"y", y}};
}

PlotSeries PlotSeries::from_json(const json& j) {
  PlotSeries s;
  s.name = j.at("name").get<std::string>();
  s.x_label = j.value("x_label", "x");
  s.y_label = j.value("y_label", "y");
  s.x = j.at("x").get<std::vector<double>>();
  s.y = j.at("y").get<std::vector<double>>();
  return s;
}

void SuiteResult::fail(const std::string& why) {
  passed = false;
  failures.push_back(why);
}

void ExperimentConfig::validate() const {
  find_suite(suite);
  if (grid.n < 16 || (grid.n & (grid.n - 1)) != 0)
    throw ConfigError(fmt::format("grid.n must be a power of two >= 16, got {}", grid.n));
  if (!(grid.half_width > 0.0) || !std::isfinite(grid.half_width))
    throw ConfigError("grid.L must be positive and finite");
  for (const auto& [name, values] : sweep) {
    if (values.empty()) throw ConfigError(fmt::format("sweep axis '{}' is empty", name));
    for (double v : values)
      if (!std::isfinite(v)) throw ConfigError(fmt::format("sweep axis '{}' has a non-finite value", name));
  }
  if (seeds.empty()) throw ConfigError("seeds must be nonempty");
  if (output_dir.empty()) throw ConfigError("output_dir must be nonempty");
  for (const auto& [name, v] : tolerances)
    if (!std::isfinite(v)) throw ConfigError(fmt::format("tolerance '{}' must be finite", name));
  try {
    validate_potential(pots.drift);
    validate_potential(pots.w2);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

double ExperimentConfig::tolerance(const std::string& name) const {
  const auto it = tolerances.find(name);
  if (it == tolerances.end()) throw ConfigError(fmt::format("missing tolerance '{}'", name));
  return it->second;
}

double ExperimentConfig::param(const std::string& name) const {
  if (!params.contains(name) || !params.at(name).is_number())
    throw ConfigError(fmt::format("missing numeric parameter '{}'", name));
  return params.at(name).get<double>();
}

const std::vector<double>& ExperimentConfig::axis(const std::string& name) const {
  const auto it = sweep.find(name);
  if (it == sweep.end()) throw ConfigError(fmt::format("missing sweep axis '{}'", name));
  if (it->second.empty()) throw ConfigError(fmt::format("sweep axis '{}' is empty", name));
  return it->second;
}

json ExperimentConfig::to_json() const {
  json sw = json::object();
  for (const auto& [k, v] : sweep) sw[k] = v;
  json tol = json::object();
  for (const auto& [k, v] : tolerances) tol[k] = v;
  return {{"suite", suite},
          {"grid", {{"n", grid.n}, {"L", grid.half_width}}},
          {"potentials", pots.to_json()},
          {"sweep", sw},
          {"seeds", seeds},
          {"output_dir", output_dir},
          {"tolerances", tol},
          {"params", params}};
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  try {
    if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
    if (!j.contains("suite")) throw ConfigError("experiment config needs 'suite'");
    ExperimentConfig c = default_config(j.at("suite").get<std::string>());
    if (j.contains("grid")) {
      const auto& g = j.at("grid");
      if (g.contains("n")) {
        const auto n = g.at("n").get<long long>();
        if (n <= 0) throw ConfigError("grid.n must be positive");
        c.grid.n = static_cast<std::size_t>(n);
      }
      if (g.contains("L")) c.grid.half_width = g.at("L").get<double>();
    }
    if (j.contains("potentials")) c.pots = PotentialBindings::from_json(j.at("potentials"));
    if (j.contains("sweep")) {
      for (const auto& [k, v] : j.at("sweep").items()) {
        if (!v.is_array()) throw ConfigError(fmt::format("sweep axis '{}' must be an array", k));
        c.sweep[k] = v.get<std::vector<double>>();
      }
    }
    if (j.contains("seeds")) {
      const auto& s = j.at("seeds");
      c.seeds = s.is_array() ? s.get<std::vector<std::uint64_t>>()
                             : std::vector<std::uint64_t>{s.get<std::uint64_t>()};
    }
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    if (j.contains("tolerances"))
      for (const auto& [k, v] : j.at("tolerances").items()) c.tolerances[k] = v.get<double>();
    if (j.contains("params"))
      for (const auto& [k, v] : j.at("params").items()) c.params[k] = v;
    c.validate();
    return c;
  } catch (const ConfigError&) {
    throw;
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("malformed experiment config: {}", e.what()));
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

std::string ExperimentConfig::hash() const { return sha256_hex(to_json().dump()); }

ExperimentConfig default_config(const std::string& suite) {
  ExperimentConfig c = find_suite(suite).defaults();
  c.suite = suite;
  return c;
}

const SuiteInfo& find_suite(const std::string& id) {
  for (const auto& s : suite_registry())
    if (s.id == id) return s;
  std::string known;
  for (const auto& s : suite_registry()) known += (known.empty() ? "" : ", ") + s.id;
  throw ConfigError(fmt::format("unknown suite '{}' (known: {})", id, known));
}

SuiteResult execute_suite(const ExperimentConfig& config, std::size_t workers) {
  config.validate();
  const SuiteInfo& info = find_suite(config.suite);
  SuiteContext ctx{config, workers > 0 ? workers : worker_count()};
  SuiteResult r = info.run(ctx);
  if (r.metrics.rows.empty()) r.fail("suite produced no metric rows");
  return r;
}

json RunManifest::to_json() const {
  json f = json::array();
  for (const auto& d : files) f.push_back({{"path", d.path}, {"sha256", d.sha256}, {"bytes", d.bytes}});
  json s = json::array();
  for (const auto& p : series) s.push_back(p.to_json());
  return {{"suite", suite},       {"config_hash", config_hash}, {"version", version},
          {"started", started},   {"finished", finished},       {"config", config},
          {"rows", rows},         {"environment", environment}, {"files", f},
          {"series", s},          {"summary", summary},         {"failures", failures},
          {"passed", passed},     {"output_dir", output_dir}};
}

RunManifest RunManifest::from_json(const json& j) {
  RunManifest m;
  m.suite = j.at("suite").get<std::string>();
  m.config_hash = j.at("config_hash").get<std::string>();
  m.version = j.at("version").get<std::string>();
  m.started = j.value("started", "");
  m.finished = j.value("finished", "");
  m.config = j.value("config", json::object());
  m.rows = j.value("rows", json::array());
  m.environment = j.value("environment", json::object());
  for (const auto& f : j.value("files", json::array()))
    m.files.push_back({f.at("path").get<std::string>(), f.at("sha256").get<std::string>(),
                       f.at("bytes").get<std::uintmax_t>()});
  for (const auto& s : j.value("series", json::array())) m.series.push_back(PlotSeries::from_json(s));
  m.summary = j.value("summary", json::object());
  m.failures = j.value("failures", std::vector<std::string>{});
  m.passed = j.value("passed", false);
  m.output_dir = j.value("output_dir", "");
  return m;
}

std::string sha256_hex(const std::string& bytes) {
  return digest_hex(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size());
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot read {}", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

RunManifest run_suite(const ExperimentConfig& config, SuiteResult* result) {
  config.validate();
  RunManifest m;
  m.suite = config.suite;
  m.config = config.to_json();
  m.config_hash = config.hash();
  m.version = toolkit_version();
  m.started = utc_now();
  m.environment = environment_json(worker_count());
  m.output_dir = config.output_dir;

  SuiteResult r = execute_suite(config);

  const fs::path dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError(fmt::format("cannot create {}: {}", dir.string(), ec.message()));

  std::vector<std::string> written;
  write_text(dir / "metrics.csv", r.metrics.to_csv());
  written.push_back("metrics.csv");

  std::string timing = "row,wall_seconds\n";
  for (std::size_t i = 0; i < r.wall_seconds.size(); ++i)
    timing += fmt::format("{},{}\n", i, format_double(r.wall_seconds[i]));
  write_text(dir / "timing.csv", timing);
  written.push_back("timing.csv");

  for (std::size_t i = 0; i < r.reports.size(); ++i) {
    const std::string name = fmt::format("report_{:03d}.json", i);
    write_text(dir / name, r.reports[i].to_json().dump(2) + "\n");
    written.push_back(name);
  }

  for (const auto& name : written) {
    const fs::path p = dir / name;
    m.files.push_back({name, sha256_file(p.string()), fs::file_size(p)});
  }
  m.rows = r.metrics.to_json();
  m.series = r.series;
  m.summary = r.summary;
  m.failures = r.failures;
  m.passed = r.passed;
  m.finished = utc_now();
  write_text(dir / "manifest.json", m.to_json().dump(2) + "\n");
  if (result) *result = std::move(r);
  return m;
}

std::vector<std::string> emit_plot_data(const RunManifest& manifest, const std::string& dir) {
  if (!manifest.rows.is_array() || manifest.rows.empty())
    throw InvalidArgument("emit_plot_data needs a manifest with at least one metric row");
  const fs::path out(dir.empty() ? manifest.output_dir : dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw ConfigError(fmt::format("cannot create {}: {}", out.string(), ec.message()));

  std::vector<PlotSeries> series = manifest.series;
  if (series.empty()) {
    PlotSeries s;
    s.name = "rows";
    s.x_label = "row";
    s.y_label = "value";
    for (std::size_t i = 0; i < manifest.rows.size(); ++i) {
      const json& row = manifest.rows[i];
      double y = std::nan("");
      for (const auto& [k, v] : row.items())
        if (v.is_number() && k.find("error") != std::string::npos) {
          y = v.get<double>();
          break;
        }
      s.x.push_back(static_cast<double>(i));
      s.y.push_back(y);
    }
    series.push_back(std::move(s));
  }

  std::vector<std::string> files;
  json desc = {{"suite", manifest.suite}, {"config_hash", manifest.config_hash}, {"series", json::array()}};
  for (const auto& s : series) {
    if (s.x.size() != s.y.size()) throw InvalidArgument(fmt::format("series '{}' has mismatched sizes", s.name));
    const std::string file = fmt::format("plot_{}.csv", s.name);
    std::string csv = fmt::format("{},{}\n", s.x_label, s.y_label);
    for (std::size_t i = 0; i < s.x.size(); ++i)
      csv += fmt::format("{},{}\n", format_double(s.x[i]), format_double(s.y[i]));
    write_text(out / file, csv);
    files.push_back((out / file).string());
    desc["series"].push_back({{"name", s.name},
                              {"file", file},
                              {"x_label", s.x_label},
                              {"y_label", s.y_label},
                              {"points", s.x.size()},
                              {"scale", "loglog"}});
  }
  write_text(out / "plot.json", desc.dump(2) + "\n");
  files.push_back((out / "plot.json").string());
  return files;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("loglog_slope needs >= 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) throw InvalidArgument("loglog_slope needs positive data");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw InvalidArgument("loglog_slope needs distinct x values");
  return (n * sxy - sx * sy) / den;
}

}  // namespace stqc
