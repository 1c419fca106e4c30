#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "stqc/errors.hpp"
#include "stqc/gaussian.hpp"
#include "stqc/gaussian_fit.hpp"
#include "stqc/harness.hpp"
#include "stqc/parallel.hpp"
#include "stqc/solver.hpp"
#include "stqc/state_io.hpp"
#include "stqc/states.hpp"
#include "stqc/synthesis.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace stqc;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kConfig = 2;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open {}", path));
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("{}: {}", path, e.what()));
  }
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(fmt::format("cannot write {}", path.string()));
  out << text;
}

/// A JSON value given inline or as the path of a JSON file.
json inline_or_file(const json& v) { return v.is_string() ? read_json(v.get<std::string>()) : v; }

GridPtr grid_from(const json& cfg, std::optional<std::size_t> n, std::optional<double> L) {
  const json g = cfg.value("grid", json::object());
  const std::size_t nn = n.value_or(g.value("n", std::size_t{2048}));
  const double ll = L.value_or(g.value("L", 12.0));
  if (nn < 16 || (nn & (nn - 1)) != 0) throw ConfigError(fmt::format("grid n must be a power of two >= 16, got {}", nn));
  if (!(ll > 0.0)) throw ConfigError("grid L must be positive");
  return Grid::make(nn, ll);
}

DtPolicy dt_from(const json& cfg, std::optional<double> max_phase) {
  DtPolicy d;
  const json j = cfg.value("dt", json::object());
  d.max_phase = j.value("max_phase", d.max_phase);
  if (j.contains("phase_radius")) d.phase_radius = j.at("phase_radius").get<double>();
  d.min_substeps = j.value("min_substeps", d.min_substeps);
  d.max_substeps = j.value("max_substeps", d.max_substeps);
  if (j.contains("max_dt")) d.max_dt = j.at("max_dt").get<double>();
  if (max_phase) d.max_phase = *max_phase;
  if (!(d.max_phase > 0.0)) throw ConfigError("dt.max_phase must be positive");
  return d;
}

WaveFunction initial_state(const json& spec, const GridPtr& grid) {
  const std::string type = spec.value("type", "ground");
  if (type == "ground") return ground_gaussian(grid);
  if (type == "hermite") return hermite_function(grid, spec.at("k").get<int>());
  if (type == "boosted") return boosted_gaussian(grid, spec.value("p", 2.0));
  if (type == "two_hump") return two_hump(grid, spec.value("center", 3.0), spec.value("a", 2.0));
  if (type == "gaussian") {
    auto g = GaussianState::from_json(spec.at("state"));
    g.validate();
    return sample_gaussian(grid, g);
  }
  if (type == "file") {
    auto psi = load_state(spec.at("path").get<std::string>());
    if (!(psi.grid() == *grid)) throw ConfigError("state file grid differs from the configured grid");
    return psi;
  }
  throw ConfigError(fmt::format("unknown initial state type '{}'", type));
}

double residual_or_nan(const WaveFunction& psi, std::optional<GaussianState>& hint) {
  try {
    FitOptions fo;
    fo.hint = hint;
    const auto fit = gaussian_fit(psi, fo);
    hint = fit.state;
    return fit.residual;
  } catch (const Error&) {
    return std::nan("");
  }
}

struct Common {
  std::string config;
  std::string out;
  std::optional<std::size_t> n;
  std::optional<double> L;
  std::optional<double> max_phase;
};

int cmd_simulate(const Common& o, std::optional<double> sample_interval, bool limiting) {
  const json cfg = read_json(o.config);
  const auto grid = grid_from(cfg, o.n, o.L);
  if (!cfg.contains("schedule")) throw ConfigError("simulate needs 'schedule'");
  const auto schedule = ControlSchedule::from_json(inline_or_file(cfg.at("schedule")));
  const auto pots = PotentialBindings::from_json(cfg.value("potentials", json::object()));
  const auto psi0 = initial_state(cfg.value("initial", json{{"type", "ground"}}), grid);
  const fs::path out = o.out.empty() ? fs::path(cfg.value("output_dir", std::string("stqc_simulate"))) : fs::path(o.out);

  PropagateOptions po;
  po.dt = dt_from(cfg, o.max_phase);
  po.sample_interval = sample_interval.value_or(cfg.value("sample_interval", 0.0));
  std::string traj = "t,norm,boundary_mass,gaussian_residual\n";
  std::optional<GaussianState> hint;
  po.sink = [&](double t, const WaveFunction& psi) {
    traj += fmt::format("{},{},{},{}\n", format_double(t), format_double(psi.norm()),
                        format_double(psi.boundary_mass()), format_double(residual_or_nan(psi, hint)));
  };
  PropagateStats stats;
  const bool lim = limiting || cfg.value("limiting", false);
  const auto psi = lim ? propagate_limiting(psi0, schedule, po, &stats) : propagate(psi0, schedule, pots, po, &stats);

  fs::create_directories(out);
  write_file(out / "trajectory.csv", traj);
  save_state((out / "final_state.bin").string(), psi);
  const json summary = {{"duration", schedule.total_duration()},
                        {"segments", schedule.size()},
                        {"substeps", stats.substeps},
                        {"max_boundary_mass", stats.max_boundary_mass},
                        {"final_norm", psi.norm()},
                        {"trajectory_sha256", sha256_file((out / "trajectory.csv").string())},
                        {"final_state_sha256", sha256_file((out / "final_state.bin").string())}};
  write_file(out / "summary.json", summary.dump(2) + "\n");
  std::cout << fmt::format("simulated {} segments ({} sub-steps), final norm {}\n", schedule.size(), stats.substeps,
                           format_double(psi.norm()));
  return kPass;
}

int cmd_synthesize(const Common& o, std::optional<double> knob, bool allow_shortfall) {
  const json cfg = read_json(o.config);
  SynthesisRequest req;
  try {
    req = SynthesisRequest::from_json(cfg.contains("request") ? cfg.at("request") : cfg);
    req.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  } catch (const json::exception& e) {
    throw ConfigError(e.what());
  }
  PlanOptions po;
  po.grid = grid_from(cfg, o.n, o.L);
  po.dt = dt_from(cfg, o.max_phase);
  const json plan_cfg = cfg.value("plan", json::object());
  if (plan_cfg.contains("initial_knob")) po.initial_knob = plan_cfg.at("initial_knob").get<double>();
  po.max_rounds = plan_cfg.value("max_rounds", po.max_rounds);
  po.inner_ratio_scale = plan_cfg.value("inner_ratio_scale", po.inner_ratio_scale);
  po.free_dilation_scale = plan_cfg.value("free_dilation_scale", po.free_dilation_scale);
  po.compensate = plan_cfg.value("compensate", po.compensate);
  po.trotter_harmonic_share = plan_cfg.value("trotter_harmonic_share", po.trotter_harmonic_share);
  po.trotter_w2_share = plan_cfg.value("trotter_w2_share", po.trotter_w2_share);
  po.allow_shortfall = allow_shortfall || plan_cfg.value("allow_shortfall", false);

  SynthesisReport rep;
  try {
    rep = knob ? synthesize_at(req, *knob, po) : plan(req, po);
  } catch (const ToleranceNotMet& e) {
    std::cerr << "synthesize: " << e.what() << "\n";
    return kFail;
  } catch (const BudgetExceeded& e) {
    std::cerr << "synthesize: " << e.what() << "\n";
    return kFail;
  }
  const std::string text = rep.to_json().dump(2) + "\n";
  if (o.out.empty())
    std::cout << text;
  else
    write_file(o.out, text);
  std::cerr << fmt::format("synthesize: {} segments, duration {}, max error {}{}\n", rep.schedule.size(),
                           format_double(rep.total_duration), format_double(rep.max_error()),
                           rep.shortfall ? " (shortfall)" : "");
  return rep.shortfall ? kFail : kPass;
}

int report_manifest(const RunManifest& m) {
  std::cout << fmt::format("{}: {} ({} rows) -> {}\n", m.suite, m.passed ? "PASS" : "FAIL", m.rows.size(),
                           m.output_dir);
  for (const auto& f : m.failures) std::cout << "  " << f << "\n";
  return m.passed ? kPass : kFail;
}

ExperimentConfig load_experiment(const std::string& suite, const Common& o, std::optional<std::uint64_t> seed) {
  json j = o.config.empty() ? json::object() : read_json(o.config);
  if (!suite.empty()) {
    if (j.contains("suite") && j.at("suite") != suite)
      throw ConfigError(fmt::format("config names suite '{}' but '{}' was requested", j.at("suite").get<std::string>(), suite));
    j["suite"] = suite;
  }
  if (o.n) j["grid"]["n"] = *o.n;
  if (o.L) j["grid"]["L"] = *o.L;
  if (o.max_phase) j["params"]["max_phase"] = *o.max_phase;
  if (seed) j["seeds"] = json::array({*seed});
  if (!o.out.empty()) j["output_dir"] = o.out;
  else if (!j.contains("output_dir")) j["output_dir"] = fmt::format("stqc_out/{}", j.value("suite", std::string("suite")));
  return ExperimentConfig::from_json(j);
}

int cmd_verify(const std::string& suite, const Common& o, std::optional<std::uint64_t> seed, bool plot) {
  const auto cfg = load_experiment(suite, o, seed);
  const auto m = run_suite(cfg);
  if (plot) emit_plot_data(m);
  return report_manifest(m);
}

int cmd_sweep(const Common& o, const std::vector<std::string>& axes, std::optional<std::uint64_t> seed) {
  if (o.config.empty()) throw ConfigError("sweep needs --config");
  auto cfg = load_experiment("", o, seed);
  for (const auto& a : axes) {
    const auto eq = a.find('=');
    if (eq == std::string::npos) throw ConfigError(fmt::format("axis override '{}' must be name=v1,v2,...", a));
    std::vector<double> values;
    std::stringstream ss(a.substr(eq + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      try {
        values.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw ConfigError(fmt::format("bad axis value '{}'", item));
      }
    }
    cfg.sweep[a.substr(0, eq)] = values;
  }
  cfg.validate();
  const auto m = run_suite(cfg);
  for (const auto& f : emit_plot_data(m)) std::cout << "  wrote " << f << "\n";
  return report_manifest(m);
}

void add_common(CLI::App* app, Common& o, bool config_required) {
  auto* c = app->add_option("-c,--config", o.config, "JSON configuration file");
  if (config_required) c->required();
  app->add_option("-o,--out", o.out, "Output path");
  app->add_option("--grid-n", o.n, "Override the number of grid points");
  app->add_option("--grid-L", o.L, "Override the box half-width");
  app->add_option("--max-phase", o.max_phase, "Override the sub-step phase bound");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"stqc: small-time quadratic control toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(toolkit_version()));

  Common sim_o, syn_o, ver_o, sw_o;
  std::optional<double> sample_interval, knob;
  std::optional<std::uint64_t> ver_seed, sw_seed;
  bool limiting = false, allow_shortfall = false, plot = false;
  std::string suite;
  std::vector<std::string> axes;

  auto* sim = app.add_subcommand("simulate", "Propagate one schedule and write its trajectory");
  add_common(sim, sim_o, true);
  sim->add_option("--sample-interval", sample_interval, "Trajectory sampling interval");
  sim->add_flag("--limiting", limiting, "Use the limiting system (u1 as u0, ux as u)");

  auto* syn = app.add_subcommand("synthesize", "Synthesize one request and write its report");
  add_common(syn, syn_o, true);
  syn->add_option("--knob", knob, "Build at this knob instead of refining");
  syn->add_flag("--allow-shortfall", allow_shortfall, "Return the best report when tol is not met");

  auto* ver = app.add_subcommand("verify", "Run a named acceptance suite");
  ver->add_option("suite", suite, "Suite id")->required();
  add_common(ver, ver_o, false);
  ver->add_option("--seed", ver_seed, "Random seed");
  ver->add_flag("--plot", plot, "Also write plot-ready series");

  auto* sw = app.add_subcommand("sweep", "Run a suite over custom sweep axes");
  add_common(sw, sw_o, true);
  sw->add_option("--axis", axes, "Axis override name=v1,v2,...");
  sw->add_option("--seed", sw_seed, "Random seed");

  auto* list = app.add_subcommand("list", "List the named suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfig;
  }

  try {
    worker_count();
    if (*sim) return cmd_simulate(sim_o, sample_interval, limiting);
    if (*syn) return cmd_synthesize(syn_o, knob, allow_shortfall);
    if (*ver) return cmd_verify(suite, ver_o, ver_seed, plot);
    if (*sw) return cmd_sweep(sw_o, axes, sw_seed);
    if (*list) {
      for (const auto& s : suite_registry()) std::cout << fmt::format("{:2d}  {:24s} {}\n", s.criterion, s.id, s.title);
      return kPass;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid argument: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kConfig;
}
