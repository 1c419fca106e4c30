#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "stqc/abz.hpp"
#include "stqc/control.hpp"
#include "stqc/errors.hpp"
#include "stqc/factor.hpp"
#include "stqc/fft.hpp"
#include "stqc/gaussian.hpp"
#include "stqc/gaussian_fit.hpp"
#include "stqc/harness.hpp"
#include "stqc/parallel.hpp"
#include "stqc/primitives.hpp"
#include "stqc/states.hpp"

namespace stqc {

namespace {

using nlohmann::json;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

/// Independent stream per (seed, suite salt, draw index).
std::mt19937_64 draw_rng(const ExperimentConfig& c, std::uint32_t salt, std::size_t index) {
  const std::uint64_t seed = c.seeds.front();
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), salt,
                    static_cast<std::uint32_t>(index)};
  return std::mt19937_64(seq);
}

GridPtr main_grid(const ExperimentConfig& c) { return Grid::make(c.grid.n, c.grid.half_width); }

GridPtr named_grid(const ExperimentConfig& c, const std::string& name) {
  const std::string key = name + "_n";
  const std::size_t n = c.params.contains(key) ? c.params.at(key).get<std::size_t>() : c.grid.n;
  if (n < 16 || (n & (n - 1)) != 0) throw ConfigError(fmt::format("{} must be a power of two >= 16", key));
  return Grid::make(n, c.grid.half_width);
}

DtPolicy dt_policy(const ExperimentConfig& c) {
  DtPolicy d;
  if (c.params.contains("max_phase")) d.max_phase = c.param("max_phase");
  if (c.params.contains("phase_radius")) d.phase_radius = c.param("phase_radius");
  if (c.params.contains("min_substeps")) d.min_substeps = static_cast<std::size_t>(c.param("min_substeps"));
  if (!(d.max_phase > 0.0)) throw ConfigError("max_phase must be positive");
  return d;
}

std::size_t as_index(double v, const char* axis) {
  if (v < 0.0 || v != std::floor(v)) throw ConfigError(fmt::format("axis '{}' needs nonnegative integers", axis));
  return static_cast<std::size_t>(v);
}

std::vector<double> iota_axis(int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = i;
  return v;
}

double max_of(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::isnan(x) ? x : std::max(m, x);
  return m;
}

/// Result of one sweep point: its cells (without status and note), and
/// whether it met the suite thresholds.
struct Row {
  Row() = default;
  explicit Row(std::vector<Cell> c) : cells(std::move(c)) {}
  std::vector<Cell> cells;
  bool ok = true;
  std::string note;
};

/// Runs f(i) for every sweep point on the worker pool, appends the rows in
/// index order with status and note columns, and turns failing rows and
/// exceptions into annotated failures.
template <class F>
void collect_rows(SuiteResult& r, std::size_t n, F&& f, std::size_t workers) {
  struct Timed {
    Row row;
    double wall;
  };
  const std::size_t width = r.metrics.columns.size() - 2;
  auto out = parallel_map<Timed>(
      n,
      [&](std::size_t i) {
        const auto t0 = std::chrono::steady_clock::now();
        Row row;
        try {
          row = f(i);
        } catch (const Error& e) {
          row.cells.assign(width, Cell{kNaN});
          row.cells[0] = static_cast<std::int64_t>(i);
          row.ok = false;
          row.note = e.what();
        }
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        return Timed{std::move(row), dt.count()};
      },
      workers);
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto& row = out[i].row;
    row.cells.push_back(std::string(row.ok ? "ok" : "fail"));
    row.cells.push_back(row.note);
    r.metrics.add_row(std::move(row.cells));
    r.wall_seconds.push_back(out[i].wall);
    if (!row.ok) r.fail(fmt::format("row {}: {}", i, row.note.empty() ? "threshold exceeded" : row.note));
  }
}

void set_columns(SuiteResult& r, std::vector<std::string> cols) {
  cols.push_back("status");
  cols.push_back("note");
  r.metrics.columns = std::move(cols);
}

double cell_double(const SuiteResult& r, std::size_t row, const std::string& col) {
  const auto it = std::find(r.metrics.columns.begin(), r.metrics.columns.end(), col);
  const auto& c = r.metrics.rows.at(row).at(static_cast<std::size_t>(it - r.metrics.columns.begin()));
  if (const auto* d = std::get_if<double>(&c)) return *d;
  if (const auto* i = std::get_if<std::int64_t>(&c)) return static_cast<double>(*i);
  return kNaN;
}

std::vector<double> column(const SuiteResult& r, const std::string& col) {
  std::vector<double> v;
  for (std::size_t i = 0; i < r.metrics.rows.size(); ++i) v.push_back(cell_double(r, i, col));
  return v;
}

std::string threshold_note(const std::string& what, double value, double limit) {
  return fmt::format("{} {} exceeds {}", what, format_double(value), format_double(limit));
}

/// Random piecewise-constant schedule with n pieces over [0, T].
ControlSchedule random_schedule(std::mt19937_64& rng, double T, int pieces, double u0_lo, double u0_hi,
                                double u_max) {
  ControlSchedule s;
  for (int i = 0; i < pieces; ++i) {
    const double u0 = uniform(rng, u0_lo, u0_hi);
    const double u = u_max > 0.0 ? uniform(rng, -u_max, u_max) : 0.0;
    s.append(Segment{T / pieces, u0, 0.0, u, {}});
  }
  return s;
}

ControlSchedule without_linear(const ControlSchedule& s) {
  ControlSchedule out;
  for (auto seg : s.segments()) {
    seg.ux = 0.0;
    out.append(seg);
  }
  return out;
}

const RandomStateOptions kCalm{3, 1.0, 0.5, 1.0, 0.5};
const RandomStateOptions kLocalized{3, 1.0, 0.3, 0.6, 0.3};

// ---------------------------------------------------------------- suite 1

ExperimentConfig eigenphase_defaults() {
  ExperimentConfig c;
  c.sweep["k"] = iota_axis(11);
  c.sweep["tau"] = {0.5};
  c.tolerances["phase_error"] = 1e-6;
  c.tolerances["eigen_residual"] = 1e-8;
  return c;
}

double eigen_residual(const WaveFunction& h, int k) {
  const Grid& g = h.grid();
  std::vector<complex> v(h.values().begin(), h.values().end());
  fft_forward(v);
  const double n = static_cast<double>(g.size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] *= g.wavenumbers_squared()[j] / n;
  fft_backward(v);
  WaveFunction r(h.grid_ptr());
  for (std::size_t j = 0; j < v.size(); ++j)
    r[j] = v[j] + (g.x(j) * g.x(j) - (2.0 * k + 1.0)) * h[j];
  return r.norm();
}

SuiteResult run_eigenphase(const SuiteContext& ctx) {
  const auto& c = ctx.config;
  const auto grid = main_grid(c);
  const auto& ks = c.axis("k");
  const auto& taus = c.axis("tau");
  const double tol = c.tolerance("phase_error");
  const double tol_eig = c.tolerance("eigen_residual");
  PropagateOptions po;
  po.dt = dt_policy(c);
  SuiteResult r;
  set_columns(r, {"k", "tau", "eigen_residual", "phase_error", "norm_drift"});
  collect_rows(
      r, ks.size() * taus.size(),
      [&](std::size_t i) {
        const int k = static_cast<int>(as_index(ks[i / taus.size()], "k"));
        const double tau = taus[i % taus.size()];
        const auto h = hermite_function(grid, k);
        const double res = eigen_residual(h, k);
        ControlSchedule s;
        s.append(Segment{tau, 1.0, 0.0, 0.0, {}});
        const auto out = propagate_limiting(h, s, po);
        const auto ref = h.scaled(std::polar(1.0, -tau * (2.0 * k + 1.0)));
        const double err = out.distance(ref);
        Row row{{static_cast<std::int64_t>(k), tau, res, err, std::abs(out.norm() - h.norm())}};
        if (res > tol_eig) {
          row.ok = false;
          row.note = threshold_note("eigen residual", res, tol_eig);
        } else if (!(err <= tol)) {
          row.ok = false;
          row.note = threshold_note("phase error", err, tol);
        }
        return row;
      },
      ctx.workers);
  const auto errs = column(r, "phase_error");
  r.summary["max_phase_error"] = max_of(errs);
  r.summary["max_eigen_residual"] = max_of(column(r, "eigen_residual"));
  PlotSeries s{"phase_error_vs_energy", "energy", "phase_error", {}, {}};
  for (std::size_t i = 0; i < errs.size(); ++i) {
    s.x.push_back(2.0 * cell_double(r, i, "k") + 1.0);
    s.y.push_back(errs[i]);
  }
  r.series.push_back(std::move(s));
  return r;
}

// ---------------------------------------------------------------- suite 2

ExperimentConfig representation_defaults() {
  ExperimentConfig c;
  c.grid = {4096, 24.0};
  c.sweep["draw"] = iota_axis(10);
  c.params = {{"T", 0.5}, {"pieces", 4}, {"l1_min", 0.3}, {"l1_max", 0.9}, {"phase_radius", 12.0}};
  c.tolerances["error"] = 1e-4;
  return c;
}

SuiteResult run_representation(const SuiteContext& ctx) {
  const auto& c = ctx.config;
  const auto grid = main_grid(c);
  const auto& draws = c.axis("draw");
  const double T = c.param("T");
  const int pieces = static_cast<int>(c.param("pieces"));
  const double l1_min = c.param("l1_min"), l1_max = c.param("l1_max");
  if (!(T > 0.0) || pieces < 1 || !(0.0 < l1_min && l1_min <= l1_max && l1_max < 1.0))
    throw ConfigError("representation-formula needs T > 0, pieces >= 1, 0 < l1_min <= l1_max < 1");
  const double tol = c.tolerance("error");
  PropagateOptions po;
  po.dt = dt_policy(c);
  SuiteResult r;
  set_columns(r, {"draw", "T", "l1_bound", "a", "b", "zeta", "error"});
  collect_rows(
      r, draws.size(),
      [&](std::size_t i) {
        const std::size_t d = as_index(draws[i], "draw");
        auto rng = draw_rng(c, 2, d);
        std::vector<double> u(static_cast<std::size_t>(pieces));
        double l1 = 0.0;
        for (auto& v : u) {
          v = uniform(rng, -1.0, 1.0);
          l1 += std::abs(v) * T / pieces;
        }
        const double target = uniform(rng, l1_min, l1_max);
        ControlSchedule s;
        for (double v : u) s.append(Segment{T / pieces, v * target / (4.0 * T * l1), 0.0, 0.0, {}});
        const double bound = 4.0 * T * ControlSignal(s, ControlSlot::Quad).l1_norm(0.0, T);
        const auto psi0 = random_smooth_state(grid, rng, kCalm);

        AbzOptions ao;
        ao.tol = 1e-12;
        const auto abz = solve_abz(ControlSignal(s, ControlSlot::Quad), T, ao);
        if (abz.blow_up_time) throw BlowUp(*abz.blow_up_time);
        const double a = abz.a.back(), b = abz.b.back(), zeta = abz.zeta.back();
        const auto grid_sol = propagate_limiting(psi0, s, po);
        const auto ref = apply_quadratic_phase(apply_dilation(apply_harmonic_reference(psi0, zeta), 1.0 / b), a);
        const double err = grid_sol.distance(ref);
        Row row{{static_cast<std::int64_t>(d), T, bound, a, b, zeta, err}};
        if (!(bound < 1.0)) {
          row.ok = false;
          row.note = threshold_note("4T|u|_L1", bound, 1.0);
        } else if (!(err <= tol)) {
          row.ok = false;
          row.note = threshold_note("error", err, tol);
        }
        return row;
      },
      ctx.workers);
  const auto errs = column(r, "error");
  r.summary["max_error"] = max_of(errs);
  r.summary["max_l1_bound"] = max_of(column(r, "l1_bound"));
  PlotSeries s{"error_vs_l1_bound", "l1_bound", "error", column(r, "l1_bound"), errs};
  r.series.push_back(std::move(s));
  return r;
}

// ---------------------------------------------------------------- suite 3

ExperimentConfig reduction_defaults() {
  ExperimentConfig c;
  c.grid = {4096, 24.0};
  c.sweep["draw"] = iota_axis(10);
  c.params = {{"T", 1.0}, {"pieces", 4}, {"u0_min", -0.5}, {"u0_max", 2.0}, {"u_max", 1.5}, {"phase_radius", 12.0}};
  c.tolerances["error"] = 1e-4;
  return c;
}

SuiteResult run_reduction(const SuiteContext& ctx) {
  const auto& c = ctx.config;
  const auto grid = main_grid(c);
  const auto& draws = c.axis("draw");
  const double T = c.param("T");
  const int pieces = static_cast<int>(c.param("pieces"));
  if (!(T > 0.0) || pieces < 1) throw ConfigError("reduction-formula needs T > 0 and pieces >= 1");
  const double tol = c.tolerance("error");
  PropagateOptions po;
  po.dt = dt_policy(c);
  SuiteResult r;
  set_columns(r, {"draw", "T", "q", "p", "theta", "error"});
  collect_rows(
      r, draws.size(),
      [&](std::size_t i) {
        const std::size_t d = as_index(draws[i], "draw");
        auto rng = draw_rng(c, 3, d);
        const auto s = random_schedule(rng, T, pieces, c.param("u0_min"), c.param("u0_max"), c.param("u_max"));
        const auto psi0 = random_smooth_state(grid, rng, kCalm);
        const auto cls = solve_classical(ControlSignal(s, ControlSlot::Quad), ControlSignal(s, ControlSlot::Linear),
                                         T, 1e-12);
        const double q = cls.q.back(), p = cls.p.back(), theta = cls.theta.back();
        const auto full = propagate_limiting(psi0, s, po);
        const auto trap = propagate_limiting(psi0, without_linear(s), po);
        const auto ref = apply_plane_wave_and_translation(trap, 0.5 * p, q, theta);
        const double err = full.distance(ref);
        Row row{{static_cast<std::int64_t>(d), T, q, p, theta, err}};
        if (!(err <= tol)) {
          row.ok = false;
          row.note = threshold_note("error", err, tol);
        }
        return row;
      },
      ctx.workers);
  r.summary["max_error"] = max_of(column(r, "error"));
  std::vector<double> x;
  for (std::size_t i = 0; i < r.metrics.rows.size(); ++i) x.push_back(static_cast<double>(i + 1));
  r.series.push_back({"error_by_draw", "draw", "error", x, column(r, "error")});
  return r;
}

// ---------------------------------------------------------------- suite 4

ExperimentConfig lemcom_defaults() {
  ExperimentConfig c;
  c.grid = {4096, 24.0};
  c.sweep["draw"] = iota_axis(50);
  c.params = {{"s_min", 0.01}, {"s_max", 0.1}, {"a_max", 3.0}, {"min_gap", 0.1}, {"states", 3}};
  c.tolerances["error"] = 1e-6;
  return c;
}

SuiteResult run_lemcom(const SuiteContext& ctx) {
  const auto& c = ctx.config;
  const auto grid = main_grid(c);
  const auto& draws = c.axis("draw");
  const double s_min = c.param("s_min"), s_max = c.param("s_max"), a_max = c.param("a_max");
  const double min_gap = c.param("min_gap");
  const int n_states = static_cast<int>(c.param("states"));
  if (!(0.0 < s_min && s_min <= s_max) || !(a_max > 0.0) || n_states < 1)
    throw ConfigError("lemcom-identity needs 0 < s_min <= s_max, a_max > 0, states >= 1");
  const double tol = c.tolerance("error");
  SuiteResult r;
  set_columns(r, {"draw", "s", "a", "one_plus_4as", "error"});
  collect_rows(
      r, draws.size(),
      [&](std::size_t i) {
        const std::size_t d = as_index(draws[i], "draw");
        auto rng = draw_rng(c, 4, d);
        double s = 0.0, a = 0.0;
        for (int attempt = 0;; ++attempt) {
          if (attempt > 1000) throw ConfigError("lemcom-identity cannot draw a pair with the required gap");
          s = uniform(rng, s_min, s_max) * (uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0);
          a = uniform(rng, -a_max, a_max);
          if (std::abs(1.0 + 4.0 * a * s) > min_gap) break;
        }
        const auto t = commute_free_past_phase(s, a);
        const FactorWord lhs{factor::FreeProp{s}, factor::QuadPhase{a}};
        const FactorWord rhs{factor::GlobalPhase{t.theta}, factor::QuadPhase{t.a}, factor::Dilate{t.beta},
                             factor::FreeProp{t.sigma}};
        double err = 0.0;
        for (int k = 0; k < n_states; ++k) {
          const auto psi = random_smooth_state(grid, rng, kCalm);
          err = std::max(err, evaluate_word(lhs, psi).distance(evaluate_word(rhs, psi)));
        }
        Row row{{static_cast<std::int64_t>(d), s, a, 1.0 + 4.0 * a * s, err}};
        if (!(err <= tol)) {
          row.ok = false;
          row.note = threshold_note("error", err, tol);
        }
        return row;
      },
      ctx.workers);
  r.summary["max_error"] = max_of(column(r, "error"));
  double gap = std::numeric_limits<double>::infinity();
  for (double g : column(r, "one_plus_4as")) gap = std::min(gap, std::abs(g));
  r.summary["min_gap"] = gap;
  std::vector<double> x;
  for (double g : column(r, "one_plus_4as")) x.push_back(std::abs(g));
  r.series.push_back({"error_vs_gap", "abs_one_plus_4as", "error", x, column(r, "error")});
  return r;
}

// ---------------------------------------------------------------- suite 5

ExperimentConfig kernel_defaults() {
  ExperimentConfig c;
  c.grid = {4096, 24.0};
  c.sweep["s"] = {0.25, 0.5, 1.0};
  c.params = {{"states", 5}};
  c.tolerances["error"] = 1e-6;
  return c;
}

SuiteResult run_kernel(const SuiteContext& ctx) {
  const auto& c = ctx.config;
  const auto grid = main_grid(c);
  const auto& ss = c.axis("s");
  const int n_states = static_cast<int>(c.param("states"));
  if (n_states < 1) throw ConfigError("kernel-formula needs states >= 1");
  const double tol = c.tolerance("error");
  std::vector<WaveFunction> states;
  auto rng = draw_rng(c, 5, 0);
  for (int k = 0; k < n_states; ++k) states.push_back(random_smooth_state(grid, rng, kLocalized));
  SuiteResult r;
  set_columns(r, {"s", "error"});
  collect_rows(
      r, ss.size(),
      [&](std::size_t i) {
        const double s = ss[i];
        double err = 0.0;
        for (const auto& psi : states)
          err = std::max(err, apply_exp_isDelta_kernel(psi, s).distance(apply_free_propagator(psi, s)));
        Row row{{s, err}};
        if (!(err <= tol)) {
          row.ok = false;
          row.note = threshold_note("error", err, tol);
        }
        return row;
      },
      ctx.workers);
  r.summary["max_error"] = max_of(column(r, "error"));
  r.series.push_back({"error_vs_s", "s", "error", column(r, "s"), column(r, "error")});
  return r;
}

// ---------------------------------------------------------------- suites 6 to 8

/// One schedule request of a synthesis suite: the request, its knob and the
/// plan options used to build and validate it.
struct PlannedRequest {
  std::string label;
  SynthesisRequest request;
  double knob;
  PlanOptions options;
};

PlanOptions synthesis_options(const ExperimentConfig& c, GridPtr grid) {
  PlanOptions o;
  o.grid = std::move(grid);
  o.dt = dt_policy(c);
  return o;
}

ExperimentConfig exact_harmonic_defaults() {
  ExperimentConfig c;
  c.grid = {16384, 12.0};
  c.sweep["T"] = {0.01};
  c.params = {{"sigma", 0.3}, {"budget", 0.05}, {"max_phase", 16.0}, {"phase_radius", 6.0}};
  c.tolerances["endpoint"] = 1e-8;
  c.tolerances["grid_error"] = 1e-3;
  return c;
}

std::vector<PlannedRequest> exact_harmonic_requests(const ExperimentConfig& c) {
  std::vector<PlannedRequest> out;
  const auto grid = main_grid(c);
  for (double T : c.axis("T")) {
    SynthesisRequest req{target::Harmonic{c.param("sigma")}, c.param("budget"), c.tolerance("grid_error"), c.pots};
    out.push_back({"harmonic", req, T, synthesis_options(c, grid)});
  }
  return out;
}

SuiteResult run_exact_harmonic(const SuiteContext& ctx) {
  const auto& c = ctx.config;
  const double sigma = c.param("sigma");
  const double tol_end = c.tolerance("endpoint");
  const double tol_grid = c.tolerance("grid_error");
  auto planned = exact_harmonic_requests(c);
  SuiteResult r;
  set_columns(r, {"T", "sigma", "endpoint_error", "error_ground", "error_boosted", "error_two_hump", "error",
                  "total_duration"});
  std::vector<SynthesisReport> reports(planned.size());
  collect_rows(
      r, planned.size(),
      [&](std::size_t i) {
        auto& p = planned[i];
        p.options.workers = ctx.workers;
        const double T = p.knob;
        const auto sched = synthesize_exact_harmonic(sigma, T);
        AbzOptions ao;
        ao.tol = 1e-12;
        const auto abz = solve_abz(ControlSignal(sched, ControlSlot::Quad), T, ao);
        if (abz.blow_up_time) throw BlowUp(*abz.blow_up_time);
        const double end = std::max({std::abs(abz.a.back()), std::abs(abz.b.back() - 1.0),
                                     std::abs(abz.zeta.back() - sigma)});
        auto rep = synthesize_at(p.request, T, p.options);
        const auto& e = rep.achieved_error;
        Row row{{T, sigma, end, e.at(0), e.at(1), e.at(2), rep.max_error(), rep.total_duration}};
        reports[i] = std::move(rep);
        if (!(end <= tol_end)) {
          row.ok = false;
          row.note = threshold_note("endpoint error", end, tol_end);
        } else if (!(reports[i].max_error() <= tol_grid)) {
          row.ok = false;
          row.note = threshold_note("grid error", reports[i].max_error(), tol_grid);
        }
        return row;
      },
      1);
  for (auto& rep : reports)
    if (!rep.schedule.empty()) r.reports.push_back(std::move(rep));
  r.summary["endpoint_error"] = max_of(column(r, "endpoint_error"));
  r.summary["max_grid_error"] = max_of(column(r, "error"));
  r.summary["max_total_duration"] = max_of(column(r, "total_duration"));
  r.series.push_back({"error_vs_T", "T", "error", column(r, "T"), column(r, "error")});
  return r;
}

ExperimentConfig gadget_defaults() {
  ExperimentConfig c;
  c.pots.drift = potential::AbsPower{1.0, 1.0};
  c.sweep["tau_quad"] = {1e-2, 1e-3, 1e-4};
  c.sweep["tau_dilation"] = {2e-3, 1e-3, 5e-4};
  c.sweep["t_free"] = {0.1, 0.05, 0.025};
  c.params = {{"delta", 0.7},         {"alpha", 2.0},         {"sigma", 0.3},          {"budget", 0.05},
              {"quad_n", 2048},       {"dilation_n", 32768},  {"free_n", 16384},       {"max_phase", 8.0},
              {"phase_radius", 6.0},  {"inner_ratio_scale", 0.01}, {"free_dilation_scale", 0.1}};
  c.tolerances["final_error"] = 1e-2;
  return c;
}

std::vector<PlannedRequest> gadget_requests(const ExperimentConfig& c) {
  std::vector<PlannedRequest> out;
  const double budget = c.param("budget");
  const double tol = c.tolerance("final_error");
  auto opts = [&](const std::string& name) {
    auto o = synthesis_options(c, named_grid(c, name));
    o.inner_ratio_scale = c.param("inner_ratio_scale");
    o.free_dilation_scale = c.param("free_dilation_scale");
    return o;
  };
  const auto quad = opts("quad");
  for (double tau : c.axis("tau_quad"))
    out.push_back({"quad_phase", {target::QuadPhase{c.param("delta")}, budget, tol, c.pots}, tau, quad});
  const auto dil = opts("dilation");
  for (double tau : c.axis("tau_dilation"))
    out.push_back({"dilation", {target::Dilation{c.param("alpha")}, budget, tol, c.pots}, tau, dil});
  const auto fr = opts("free");
  for (double t : c.axis("t_free"))
    out.push_back({"free", {target::Free{c.param("sigma")}, budget, tol, c.pots}, t, fr});
  return out;
}

SuiteResult run_gadgets(const SuiteContext& ctx) {
  const auto& c = ctx.config;
  const double tol = c.tolerance("final_error");
  auto planned = gadget_requests(c);
  SuiteResult r;
  set_columns(r, {"index", "gadget", "knob", "error", "total_duration", "error_ground", "error_boosted",
                  "error_two_hump"});
  std::vector<SynthesisReport> reports(planned.size());
  collect_rows(
      r, planned.size(),
      [&](std::size_t i) {
        auto& p = planned[i];
        p.options.workers = ctx.workers;
        auto rep = synthesize_at(p.request, p.knob, p.options);
        const auto& e = rep.achieved_error;
        Row row{{static_cast<std::int64_t>(i), p.label, p.knob, rep.max_error(), rep.total_duration, e.at(0),
                 e.at(1), e.at(2)}};
        reports[i] = std::move(rep);
        return row;
      },
      1);
  for (auto& rep : reports)
    if (!rep.schedule.empty()) r.reports.push_back(std::move(rep));

  for (const std::string g : {"quad_phase", "dilation", "free"}) {
    PlotSeries s{g, "knob", "error", {}, {}};
    for (std::size_t i = 0; i < planned.size(); ++i)
      if (planned[i].label == g) {
        s.x.push_back(planned[i].knob);
        s.y.push_back(cell_double(r, i, "error"));
      }
    bool decreasing = s.y.size() >= 2;
    for (std::size_t k = 1; k < s.y.size(); ++k) decreasing = decreasing && s.y[k] < s.y[k - 1];
    const double final_error = s.y.empty() ? kNaN : s.y.back();
    r.summary[g] = {{"knobs", s.x}, {"errors", s.y}, {"strictly_decreasing", decreasing}, {"final_error", final_error}};
    if (!decreasing) r.fail(fmt::format("{} gadget error is not strictly decreasing", g));
    if (!(final_error <= tol)) r.fail(fmt::format("{} gadget {}", g, threshold_note("final error", final_error, tol)));
    r.series.push_back(std::move(s));
  }
  return r;
}

ExperimentConfig trotter_defaults() {
  ExperimentConfig c;
  c.grid = {4096, 12.0};
  c.pots.w2 = potential::GaussianExp{-1.0, 0.3};
  c.sweep["n"] = {1, 2, 4, 8, 16};
  c.params = {{"sigma", 0.3}, {"alpha", 1.0}, {"budget", 0.25}, {"request_tol", 1.0}, {"max_phase", 16.0},
              {"phase_radius", 6.0}};
  c.tolerances["slope_min"] = -1.5;
  c.tolerances["slope_max"] = -0.5;
  return c;
}

std::vector<PlannedRequest> trotter_requests(const ExperimentConfig& c) {
  std::vector<PlannedRequest> out;
  const auto o = synthesis_options(c, main_grid(c));
  for (double n : c.axis("n")) {
    if (n < 1.0 || n != std::floor(n)) throw ConfigError("axis 'n' needs positive integers");
    SynthesisRequest req{target::HarmonicWithW2{c.param("sigma"), c.param("alpha")}, c.param("budget"),
                         c.param("request_tol"), c.pots};
    out.push_back({"trotter", req, n, o});
  }
  return out;
}

SuiteResult run_trotter(const SuiteContext& ctx) {
  const auto& c = ctx.config;
  auto planned = trotter_requests(c);
  SuiteResult r;
  set_columns(r, {"n", "error", "total_duration", "error_ground", "error_boosted", "error_two_hump"});
  std::vector<SynthesisReport> reports(planned.size());
  collect_rows(
      r, planned.size(),
      [&](std::size_t i) {
        auto& p = planned[i];
        p.options.workers = ctx.workers;
        auto rep = synthesize_at(p.request, p.knob, p.options);
        const auto& e = rep.achieved_error;
        Row row{{static_cast<std::int64_t>(std::lround(p.knob)), rep.max_error(), rep.total_duration, e.at(0),
                 e.at(1), e.at(2)}};
        reports[i] = std::move(rep);
        return row;
      },
      1);
  for (auto& rep : reports)
    if (!rep.schedule.empty()) r.reports.push_back(std::move(rep));
  const auto ns = column(r, "n");
  const auto errs = column(r, "error");
  bool decreasing = errs.size() >= 2;
  for (std::size_t k = 1; k < errs.size(); ++k) decreasing = decreasing && errs[k] < errs[k - 1];
  double slope = kNaN;
  try {
    slope = loglog_slope(ns, errs);
  } catch (const InvalidArgument& e) {
    r.fail(fmt::format("slope undefined: {}", e.what()));
  }
  const double lo = c.tolerance("slope_min"), hi = c.tolerance("slope_max");
  r.summary["errors"] = errs;
  r.summary["slope"] = slope;
  r.summary["decreasing"] = decreasing;
  if (!decreasing) r.fail("Trotter error is not decreasing in n");
  if (!(slope >= lo && slope <= hi))
    r.fail(fmt::format("log-log slope {} outside [{}, {}]", format_double(slope), lo, hi));
  r.series.push_back({"error_vs_n", "n", "error", ns, errs});
  return r;
}

// ---------------------------------------------------------------- suite 9

ExperimentConfig budget_defaults() {
  ExperimentConfig c;
  c.sweep["source"] = {6, 7, 8};
  return c;
}

SuiteResult run_budget(const SuiteContext& ctx) {
  const auto& c = ctx.config;
  std::vector<std::pair<int, PlannedRequest>> planned;
  for (double src : c.axis("source")) {
    const int s = static_cast<int>(src);
    std::vector<PlannedRequest> reqs;
    if (s == 6)
      reqs = exact_harmonic_requests(default_config("exact-harmonic"));
    else if (s == 7)
      reqs = gadget_requests(default_config("gadget-convergence"));
    else if (s == 8)
      reqs = trotter_requests(default_config("trotter-composition"));
    else
      throw ConfigError(fmt::format("budget-law source must be 6, 7 or 8, got {}", src));
    for (auto& p : reqs) planned.emplace_back(s, std::move(p));
  }
  SuiteResult r;
  set_columns(r, {"index", "source", "gadget", "knob", "total_duration", "budget", "slack"});
  std::vector<SynthesisReport> reports(planned.size());
  collect_rows(
      r, planned.size(),
      [&](std::size_t i) {
        auto& [src, p] = planned[i];
        p.options.validate = false;
        auto rep = synthesize_at(p.request, p.knob, p.options);
        const double total = rep.schedule.total_duration();
        const double budget = p.request.budget;
        Row row{{static_cast<std::int64_t>(i), static_cast<std::int64_t>(src), p.label, p.knob, total, budget,
                 budget - total}};
        if (!(total <= budget)) {
          row.ok = false;
          row.note = threshold_note("total duration", total, budget);
        }
        reports[i] = std::move(rep);
        return row;
      },
      ctx.workers);
  double min_slack = std::numeric_limits<double>::infinity();
  for (double s : column(r, "slack")) min_slack = std::min(min_slack, s);
  r.summary["min_slack"] = min_slack;
  r.summary["schedules"] = r.metrics.rows.size();
  r.series.push_back({"duration_vs_budget", "budget", "total_duration", column(r, "budget"),
                      column(r, "total_duration")});
  return r;
}

// ---------------------------------------------------------------- suite 10

ExperimentConfig obstruction_defaults() {
  ExperimentConfig c;
  c.grid = {4096, 24.0};
  c.sweep["draw"] = iota_axis(20);
  c.params = {{"T", 1.0},         {"pieces", 4},        {"samples", 10}, {"u0_min", -0.5},
              {"u0_max", 2.0},    {"u_max", 1.5},       {"hump_center", 1.5}, {"hump_a", 1.0},
              {"phase_radius", 12.0}, {"word_guard", 1e-6}};
  c.tolerances["residual"] = 1e-4;
  c.tolerances["r0_gap"] = 1e-3;
  c.tolerances["r0_min"] = 0.3;
  return c;
}

GaussianState random_gaussian(std::mt19937_64& rng) {
  GaussianState g;
  g.theta = uniform(rng, 0.0, 2.0 * std::numbers::pi);
  g.a = uniform(rng, 0.4, 1.2);
  g.b = uniform(rng, -0.5, 0.5);
  g.p = uniform(rng, -1.0, 1.0);
  g.q = uniform(rng, -1.0, 1.0);
  return g;
}

SuiteResult run_obstruction(const SuiteContext& ctx) {
  const auto& c = ctx.config;
  const auto grid = main_grid(c);
  const auto& draws = c.axis("draw");
  const double T = c.param("T");
  const int pieces = static_cast<int>(c.param("pieces"));
  const int samples = static_cast<int>(c.param("samples"));
  if (!(T > 0.0) || pieces < 1 || samples < 1) throw ConfigError("gaussian-obstruction needs T > 0, pieces, samples >= 1");
  const double tol = c.tolerance("residual");
  const double tol_gap = c.tolerance("r0_gap");
  const double r0_min = c.tolerance("r0_min");
  const auto hump = two_hump(grid, c.param("hump_center"), c.param("hump_a"));
  const double r0 = gaussian_fit(hump).residual;
  PropagateOptions base;
  base.dt = dt_policy(c);
  SuiteResult r;
  set_columns(r, {"draw", "samples", "max_residual", "last_sample_time", "r0", "r_final", "r_gap"});
  collect_rows(
      r, draws.size(),
      [&](std::size_t i) {
        const std::size_t d = as_index(draws[i], "draw");
        auto rng = draw_rng(c, 10, d);
        const auto s = random_schedule(rng, T, pieces, c.param("u0_min"), c.param("u0_max"), c.param("u_max"));
        const auto g0 = random_gaussian(rng);

        std::vector<std::pair<double, WaveFunction>> snaps;
        std::size_t next = 1;
        const double dts = T / samples;
        PropagateOptions po = base;
        po.sample_interval = dts;
        po.sink = [&](double t, const WaveFunction& psi) {
          if (next <= static_cast<std::size_t>(samples) && t >= next * dts - 1e-12 * T) {
            snaps.emplace_back(t, psi);
            ++next;
          }
        };
        propagate_limiting(sample_gaussian(grid, g0), s, po);
        double worst = 0.0;
        FitOptions fo;
        for (const auto& [t, psi] : snaps) {
          const auto fit = gaussian_fit(psi, fo);
          fo.hint = fit.state;
          worst = std::max(worst, fit.residual);
        }

        const auto u0 = ControlSignal(s, ControlSlot::Quad);
        const auto reach = exact_reachability_word(u0, T, ReachRoute::Free);
        const auto cls = solve_classical(u0, ControlSignal(s, ControlSlot::Linear), T, 1e-12);
        FactorWord word{factor::GlobalPhase{cls.theta.back()}, factor::PlaneWave{0.5 * cls.p.back()},
                        factor::Translate{cls.q.back()}};
        word.insert(word.end(), reach.word.begin(), reach.word.end());
        WordEvalOptions wo;
        wo.guard.boundary_mass_threshold = c.param("word_guard");
        const double r_final = gaussian_fit(evaluate_word(word, hump, wo)).residual;
        const double gap = std::abs(r_final - r0);

        Row row{{static_cast<std::int64_t>(d), static_cast<std::int64_t>(snaps.size()), worst,
                 snaps.empty() ? kNaN : snaps.back().first, r0, r_final, gap}};
        if (snaps.size() != static_cast<std::size_t>(samples)) {
          row.ok = false;
          row.note = fmt::format("captured {} of {} sample times", snaps.size(), samples);
        } else if (!(worst <= tol)) {
          row.ok = false;
          row.note = threshold_note("Gaussian residual", worst, tol);
        } else if (!(r0 >= r0_min)) {
          row.ok = false;
          row.note = fmt::format("two-hump residual {} below {}", format_double(r0), r0_min);
        } else if (!(gap <= tol_gap)) {
          row.ok = false;
          row.note = threshold_note("two-hump residual change", gap, tol_gap);
        }
        return row;
      },
      ctx.workers);
  r.summary["max_residual"] = max_of(column(r, "max_residual"));
  r.summary["r0"] = r0;
  r.summary["max_r0_gap"] = max_of(column(r, "r_gap"));
  std::vector<double> x;
  for (std::size_t i = 0; i < r.metrics.rows.size(); ++i) x.push_back(static_cast<double>(i + 1));
  r.series.push_back({"residual_by_draw", "draw", "max_residual", x, column(r, "max_residual")});
  return r;
}

// ---------------------------------------------------------------- suite 11

ExperimentConfig compression_defaults() {
  ExperimentConfig c;
  c.grid = {4096, 24.0};
  c.sweep["draw"] = iota_axis(10);
  c.params = {{"resonant_draw", 9}, {"states", 10},   {"max_len", 8},      {"a_max", 1.0},
              {"s_min", 0.02},      {"s_max", 0.2},   {"beta_min", 0.7},   {"beta_max", 1.4},
              {"resonant_s", 0.25}};
  c.tolerances["error"] = 1e-4;
  return c;
}

Factor random_factor(std::mt19937_64& rng, const ExperimentConfig& c) {
  const double kind = uniform(rng, 0.0, 3.0);
  const double sign = uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
  if (kind < 1.0) return factor::QuadPhase{uniform(rng, -c.param("a_max"), c.param("a_max"))};
  if (kind < 2.0) {
    const double beta = uniform(rng, c.param("beta_min"), c.param("beta_max"));
    return factor::Dilate{uniform(rng, 0.0, 1.0) < 0.2 ? -beta : beta};
  }
  return factor::FreeProp{sign * uniform(rng, c.param("s_min"), c.param("s_max"))};
}

SuiteResult run_compression(const SuiteContext& ctx) {
  const auto& c = ctx.config;
  const auto grid = main_grid(c);
  const auto& draws = c.axis("draw");
  const auto resonant_draw = static_cast<std::size_t>(c.param("resonant_draw"));
  const int n_states = static_cast<int>(c.param("states"));
  const int max_len = static_cast<int>(c.param("max_len"));
  const double rs = c.param("resonant_s");
  if (n_states < 1 || max_len < 3 || rs == 0.0) throw ConfigError("compression needs states >= 1, max_len >= 3, resonant_s != 0");
  const double tol = c.tolerance("error");
  SuiteResult r;
  set_columns(r, {"draw", "length", "resonant_pairs", "used_delta", "max_error", "max_delta_bound", "a", "beta",
                  "sigma", "attempts"});
  collect_rows(
      r, draws.size(),
      [&](std::size_t i) {
        const std::size_t d = as_index(draws[i], "draw");
        auto rng = draw_rng(c, 11, d);
        std::vector<WaveFunction> states;
        for (int k = 0; k < n_states; ++k) states.push_back(random_smooth_state(grid, rng, kCalm));
        const bool resonant = d == resonant_draw;
        for (int attempt = 1; attempt <= 200; ++attempt) {
          FactorWord word;
          const int len = resonant ? 2 + static_cast<int>(uniform(rng, 1.0, max_len - 1.0))
                                   : static_cast<int>(uniform(rng, 3.0, max_len + 1.0));
          const int random_len = resonant ? len - 2 : len;
          for (int k = 0; k < random_len; ++k) word.push_back(random_factor(rng, c));
          if (resonant) {
            word.push_back(factor::FreeProp{rs});
            word.push_back(factor::QuadPhase{-1.0 / (4.0 * rs)});
          }
          DeltaPolicy dp;
          dp.test_states = states;
          CompressedWord cw;
          std::vector<double> errs;
          try {
            cw = compress_word(word, dp);
            if (!(std::abs(cw.beta) >= 0.25 && std::abs(cw.beta) <= 4.0)) continue;
            const auto cword = cw.word();
            for (const auto& psi : states) errs.push_back(evaluate_word(word, psi).distance(evaluate_word(cword, psi)));
          } catch (const SupportOverflow&) {
            continue;
          } catch (const WrapAroundRisk&) {
            continue;
          } catch (const ChirpAliasing&) {
            continue;
          }
          const double err = max_of(errs);
          const double bound = cw.delta_bound.empty() ? 0.0 : max_of(cw.delta_bound);
          Row row{{static_cast<std::int64_t>(d), static_cast<std::int64_t>(word.size()),
                   static_cast<std::int64_t>(cw.resonant_pairs), cw.used_delta.value_or(kNaN), err, bound, cw.a,
                   cw.beta, cw.sigma, static_cast<std::int64_t>(attempt)}};
          if (resonant && cw.resonant_pairs == 0) {
            row.ok = false;
            row.note = "engineered resonant pair was not detected";
          } else if (cw.resonant_pairs > 0) {
            for (std::size_t k = 0; k < errs.size(); ++k)
              if (!(errs[k] <= cw.delta_bound.at(k) * (1.0 + 1e-9) + 1e-10)) {
                row.ok = false;
                row.note = fmt::format("state {} error {} exceeds its delta bound {}", k, format_double(errs[k]),
                                       format_double(cw.delta_bound[k]));
                break;
              }
          } else if (!(err <= tol)) {
            row.ok = false;
            row.note = threshold_note("error", err, tol);
          }
          return row;
        }
        throw Error("no admissible word within 200 attempts");
      },
      ctx.workers);
  double generic = 0.0;
  for (std::size_t i = 0; i < r.metrics.rows.size(); ++i)
    if (cell_double(r, i, "resonant_pairs") == 0.0) generic = std::max(generic, cell_double(r, i, "max_error"));
  r.summary["max_generic_error"] = generic;
  r.summary["resonant_rows"] = 0;
  for (std::size_t i = 0; i < r.metrics.rows.size(); ++i)
    if (cell_double(r, i, "resonant_pairs") > 0.0) {
      r.summary["resonant_rows"] = r.summary["resonant_rows"].get<int>() + 1;
      r.summary["resonant_error"] = cell_double(r, i, "max_error");
      r.summary["resonant_bound"] = cell_double(r, i, "max_delta_bound");
    }
  std::vector<double> x;
  for (std::size_t i = 0; i < r.metrics.rows.size(); ++i) x.push_back(static_cast<double>(i + 1));
  r.series.push_back({"error_by_draw", "draw", "max_error", x, column(r, "max_error")});
  return r;
}

// ---------------------------------------------------------------- suite 12

ExperimentConfig determinism_defaults() {
  ExperimentConfig c;
  c.sweep["run"] = {0, 1};
  return c;
}

SuiteResult run_determinism(const SuiteContext& ctx) {
  const auto& c = ctx.config;
  const auto& runs = c.axis("run");
  ExperimentConfig inner = default_config("representation-formula");
  inner.seeds = c.seeds;
  SuiteResult r;
  set_columns(r, {"run", "workers", "csv_sha256", "bytes", "identical"});
  std::string first;
  bool all_same = true;
  std::vector<Row> rows;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t workers = i % 2 == 0 ? 1 : std::max<std::size_t>(4, ctx.workers);
    const auto res = execute_suite(inner, workers);
    const std::string csv = res.metrics.to_csv();
    if (i == 0) first = csv;
    const bool same = csv == first;
    all_same = all_same && same;
    std::vector<Cell> cells{static_cast<std::int64_t>(i), static_cast<std::int64_t>(workers), sha256_hex(csv),
                            static_cast<std::int64_t>(csv.size()), static_cast<std::int64_t>(same ? 1 : 0),
                            std::string(same ? "ok" : "fail"),
                            std::string(same ? "" : "metric CSV differs from run 0")};
    r.metrics.add_row(std::move(cells));
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    r.wall_seconds.push_back(dt.count());
    if (!same) r.fail(fmt::format("run {} metric CSV differs from run 0", i));
  }
  r.summary["identical"] = all_same;
  r.summary["runs"] = runs.size();
  std::vector<double> x, y;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    x.push_back(static_cast<double>(i + 1));
    y.push_back(cell_double(r, i, "bytes"));
  }
  r.series.push_back({"csv_bytes_by_run", "run", "bytes", x, y});
  return r;
}

}  // namespace

const std::vector<SuiteInfo>& suite_registry() {
  static const std::vector<SuiteInfo> registry{
      {"harmonic-eigenphase", 1, "Harmonic eigenphase on Hermite functions", eigenphase_defaults, run_eigenphase},
      {"representation-formula", 2, "Quadratic-control representation formula", representation_defaults,
       run_representation},
      {"reduction-formula", 3, "Reduction of the linear control to a translation", reduction_defaults,
       run_reduction},
      {"lemcom-identity", 4, "Free propagator past a quadratic phase", lemcom_defaults, run_lemcom},
      {"kernel-formula", 5, "Chirp factorization of the free propagator", kernel_defaults, run_kernel},
      {"exact-harmonic", 6, "Exact small-time harmonic synthesis", exact_harmonic_defaults, run_exact_harmonic},
      {"gadget-convergence", 7, "Phase, dilation and free-evolution gadgets", gadget_defaults, run_gadgets},
      {"trotter-composition", 8, "Trotter composition with a bounded potential", trotter_defaults, run_trotter},
      {"budget-law", 9, "Schedule durations within the requested budget", budget_defaults, run_budget},
      {"gaussian-obstruction", 10, "Gaussian class invariance", obstruction_defaults, run_obstruction},
      {"compression", 11, "Three-factor compression of factor words", compression_defaults, run_compression},
      {"determinism", 12, "Byte-identical metric tables on rerun", determinism_defaults, run_determinism},
  };
  return registry;
}

}  // namespace stqc
