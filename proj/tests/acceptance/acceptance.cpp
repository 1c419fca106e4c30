#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "stqc/errors.hpp"
#include "stqc/harness.hpp"

using namespace stqc;
using nlohmann::json;

namespace {

// Pinned acceptance thresholds.
constexpr double kEigenphase = 1e-6;
constexpr double kRepresentation = 1e-4;
constexpr double kReduction = 1e-4;
constexpr double kLemcom = 1e-6;
constexpr double kLemcomGap = 0.1;
constexpr double kKernel = 1e-6;
constexpr double kEndpoint = 1e-8;
constexpr double kHarmonicGrid = 1e-3;
constexpr double kHarmonicSigma = 0.3;
constexpr double kHarmonicT = 0.01;
constexpr double kGadgetFinal = 1e-2;
constexpr double kSlopeMin = -1.5;
constexpr double kSlopeMax = -0.5;
constexpr double kDefaultBudget = 0.05;
constexpr double kObstructionResidual = 1e-4;
constexpr double kObstructionGap = 1e-3;
constexpr double kObstructionR0 = 0.3;
constexpr double kCompression = 1e-4;

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    details.push_back(fmt::format("{}{}", ok ? "" : "[violated] ", what));
  }
};

std::string num(double v) { return fmt::format("{:.3g}", v); }

std::filesystem::path g_out = "acceptance_out";
std::map<std::string, SuiteResult> g_results;
std::map<std::string, RunManifest> g_manifests;

const SuiteResult& run(const std::string& suite, Outcome& o) {
  if (!g_results.count(suite)) {
    ExperimentConfig cfg = default_config(suite);
    cfg.output_dir = (g_out / suite).string();
    SuiteResult r;
    g_manifests[suite] = run_suite(cfg, &r);
    g_results[suite] = std::move(r);
  }
  const auto& r = g_results.at(suite);
  o.require(r.passed, fmt::format("suite {} reported {}", suite, r.passed ? "pass" : "failure"));
  for (const auto& f : r.failures) o.details.push_back("  " + f);
  return r;
}

void pinned(Outcome& o, const std::string& suite, const std::string& name, double value) {
  const auto c = default_config(suite);
  const auto it = c.tolerances.find(name);
  o.require(it != c.tolerances.end() && it->second == value,
            fmt::format("{} tolerance '{}' pinned at {}", suite, name, num(value)));
}

double summary(const SuiteResult& r, const std::string& key) {
  if (!r.summary.contains(key) || !r.summary.at(key).is_number()) return std::nan("");
  return r.summary.at(key).get<double>();
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion1() {
  Outcome o;
  pinned(o, "harmonic-eigenphase", "phase_error", kEigenphase);
  const auto& r = run("harmonic-eigenphase", o);
  const double e = summary(r, "max_phase_error");
  o.require(r.metrics.rows.size() == 11, fmt::format("{} Hermite functions k = 0..10", r.metrics.rows.size()));
  o.require(e <= kEigenphase, fmt::format("max phase error {} <= {}", num(e), num(kEigenphase)));
  return o;
}

Outcome criterion2() {
  Outcome o;
  pinned(o, "representation-formula", "error", kRepresentation);
  const auto& r = run("representation-formula", o);
  const double e = summary(r, "max_error"), b = summary(r, "max_l1_bound");
  o.require(r.metrics.rows.size() == 10, fmt::format("{} random controls", r.metrics.rows.size()));
  o.require(b < 1.0, fmt::format("max 4T|u|_L1 {} < 1", num(b)));
  o.require(e <= kRepresentation, fmt::format("max error {} <= {}", num(e), num(kRepresentation)));
  return o;
}

Outcome criterion3() {
  Outcome o;
  pinned(o, "reduction-formula", "error", kReduction);
  const auto& r = run("reduction-formula", o);
  const double e = summary(r, "max_error");
  o.require(r.metrics.rows.size() == 10, fmt::format("{} random control pairs", r.metrics.rows.size()));
  o.require(e <= kReduction, fmt::format("max error {} <= {}", num(e), num(kReduction)));
  return o;
}

Outcome criterion4() {
  Outcome o;
  pinned(o, "lemcom-identity", "error", kLemcom);
  const auto& r = run("lemcom-identity", o);
  const double e = summary(r, "max_error"), g = summary(r, "min_gap");
  o.require(r.metrics.rows.size() == 50, fmt::format("{} random pairs", r.metrics.rows.size()));
  o.require(g > kLemcomGap, fmt::format("min |1+4as| {} > {}", num(g), num(kLemcomGap)));
  o.require(e <= kLemcom, fmt::format("max error {} <= {}", num(e), num(kLemcom)));
  return o;
}

Outcome criterion5() {
  Outcome o;
  pinned(o, "kernel-formula", "error", kKernel);
  const auto& r = run("kernel-formula", o);
  const auto s = default_config("kernel-formula").axis("s");
  o.require(s == std::vector<double>{0.25, 0.5, 1.0}, "s in {0.25, 0.5, 1}");
  const double e = summary(r, "max_error");
  o.require(e <= kKernel, fmt::format("max error {} <= {}", num(e), num(kKernel)));
  return o;
}

Outcome criterion6() {
  Outcome o;
  pinned(o, "exact-harmonic", "endpoint", kEndpoint);
  pinned(o, "exact-harmonic", "grid_error", kHarmonicGrid);
  const auto c = default_config("exact-harmonic");
  o.require(c.param("sigma") == kHarmonicSigma && c.axis("T") == std::vector<double>{kHarmonicT},
            "sigma = 0.3, T = 0.01");
  const auto& r = run("exact-harmonic", o);
  const double end = summary(r, "endpoint_error"), g = summary(r, "max_grid_error");
  o.require(end <= kEndpoint, fmt::format("ODE endpoint error {} <= {}", num(end), num(kEndpoint)));
  o.require(g <= kHarmonicGrid, fmt::format("grid error {} <= {}", num(g), num(kHarmonicGrid)));
  return o;
}

Outcome criterion7() {
  Outcome o;
  pinned(o, "gadget-convergence", "final_error", kGadgetFinal);
  const auto& r = run("gadget-convergence", o);
  for (const std::string g : {"quad_phase", "dilation", "free"}) {
    const auto& s = r.summary.at(g);
    const auto errs = s.at("errors").get<std::vector<double>>();
    const auto knobs = s.at("knobs").get<std::vector<double>>();
    bool geometric = knobs.size() == 3 && knobs[0] > 0.0;
    if (geometric) geometric = std::abs(knobs[1] / knobs[0] - knobs[2] / knobs[1]) < 1e-12 * (knobs[1] / knobs[0]);
    bool decreasing = errs.size() == 3;
    for (std::size_t k = 1; decreasing && k < errs.size(); ++k) decreasing = errs[k] < errs[k - 1];
    o.require(geometric, fmt::format("{}: 3-point geometric sweep", g));
    o.require(decreasing, fmt::format("{}: errors {}, {}, {} strictly decreasing", g, num(errs.at(0)),
                                      num(errs.at(1)), num(errs.at(2))));
    o.require(errs.back() <= kGadgetFinal, fmt::format("{}: final error {} <= {}", g, num(errs.back()), num(kGadgetFinal)));
  }
  o.require(default_config("gadget-convergence").pots.to_json() ==
                PotentialBindings{potential::AbsPower{1.0, 1.0}, potential::Zero{}}.to_json(),
            "drift V(x) = |x|");
  return o;
}

Outcome criterion8() {
  Outcome o;
  const auto c = default_config("trotter-composition");
  o.require(c.axis("n") == std::vector<double>{1, 2, 4, 8, 16}, "n in {1, 2, 4, 8, 16}");
  o.require(c.param("sigma") == 0.3 && c.param("alpha") == 1.0, "sigma = 0.3, alpha = 1");
  o.require(c.pots.to_json() == PotentialBindings{potential::Zero{}, potential::GaussianExp{-1.0, 0.3}}.to_json(),
            "W2 = exp(-x^2 + 0.3x)");
  pinned(o, "trotter-composition", "slope_min", kSlopeMin);
  pinned(o, "trotter-composition", "slope_max", kSlopeMax);
  const auto& r = run("trotter-composition", o);
  const auto errs = r.summary.at("errors").get<std::vector<double>>();
  bool decreasing = errs.size() == 5;
  for (std::size_t k = 1; decreasing && k < errs.size(); ++k) decreasing = errs[k] < errs[k - 1];
  std::string list;
  for (double e : errs) list += (list.empty() ? "" : ", ") + num(e);
  o.require(decreasing, fmt::format("errors {} decreasing", list));
  const double slope = summary(r, "slope");
  o.require(slope >= kSlopeMin && slope <= kSlopeMax,
            fmt::format("log-log slope {} in [{}, {}]", num(slope), num(kSlopeMin), num(kSlopeMax)));
  return o;
}

Outcome criterion9() {
  Outcome o;
  std::size_t count = 0;
  for (const std::string s : {"exact-harmonic", "gadget-convergence", "trotter-composition"}) {
    Outcome ignore;
    const auto& r = run(s, ignore);
    const double requested = default_config(s).params.value("budget", kDefaultBudget);
    for (const auto& rep : r.reports) {
      ++count;
      const double total = rep.schedule.total_duration();
      o.require(total <= rep.request.budget && rep.total_duration <= rep.request.budget &&
                    rep.request.budget == requested,
                fmt::format("{} {} knob {}: total {} <= eps {}", s, rep.gadget_trace.gadget, num(rep.knob),
                            fmt::format("{:.17g}", total), num(rep.request.budget)));
    }
  }
  o.require(count > 0, fmt::format("{} synthesis reports checked", count));
  Outcome standalone;
  const auto& b = run("budget-law", standalone);
  o.require(b.passed, "budget-law suite passes");
  return o;
}

Outcome criterion10() {
  Outcome o;
  pinned(o, "gaussian-obstruction", "residual", kObstructionResidual);
  pinned(o, "gaussian-obstruction", "r0_gap", kObstructionGap);
  pinned(o, "gaussian-obstruction", "r0_min", kObstructionR0);
  const auto& r = run("gaussian-obstruction", o);
  o.require(r.metrics.rows.size() == 20, fmt::format("{} random control draws", r.metrics.rows.size()));
  const auto samples = [&] {
    std::size_t n = 0;
    const auto it = std::find(r.metrics.columns.begin(), r.metrics.columns.end(), "samples");
    for (const auto& row : r.metrics.rows)
      if (const auto* v = std::get_if<std::int64_t>(&row.at(static_cast<std::size_t>(it - r.metrics.columns.begin()))))
        n += *v == 10 ? 1 : 0;
    return n;
  }();
  o.require(samples == 20, fmt::format("{} draws with 10 sample times", samples));
  const double res = summary(r, "max_residual"), r0 = summary(r, "r0"), gap = summary(r, "max_r0_gap");
  o.require(res <= kObstructionResidual, fmt::format("max Gaussian residual {} <= {}", num(res), num(kObstructionResidual)));
  o.require(r0 >= kObstructionR0, fmt::format("two-hump residual r0 {} >= {}", num(r0), num(kObstructionR0)));
  o.require(gap <= kObstructionGap, fmt::format("max |r(T) - r0| {} <= {}", num(gap), num(kObstructionGap)));
  return o;
}

Outcome criterion11() {
  Outcome o;
  pinned(o, "compression", "error", kCompression);
  const auto& r = run("compression", o);
  o.require(r.metrics.rows.size() == 10, fmt::format("{} random words", r.metrics.rows.size()));
  const double e = summary(r, "max_generic_error");
  o.require(e <= kCompression, fmt::format("max generic error {} <= {}", num(e), num(kCompression)));
  const int resonant = r.summary.value("resonant_rows", 0);
  o.require(resonant >= 1, fmt::format("{} word(s) with a perturbed resonant pair", resonant));
  if (resonant >= 1) {
    const double re = summary(r, "resonant_error"), rb = summary(r, "resonant_bound");
    o.require(re <= rb * (1.0 + 1e-9) + 1e-10, fmt::format("resonant error {} within delta bound {}", num(re), num(rb)));
  }
  return o;
}

Outcome criterion12() {
  Outcome o;
  Outcome ignore;
  run("representation-formula", ignore);
  ExperimentConfig cfg = default_config("representation-formula");
  cfg.output_dir = (g_out / "representation-formula-rerun").string();
  run_suite(cfg);
  const auto a = read_file(g_out / "representation-formula" / "metrics.csv");
  const auto b = read_file(g_out / "representation-formula-rerun" / "metrics.csv");
  o.require(!a.empty() && a == b,
            fmt::format("metrics.csv byte-identical on rerun ({} bytes, sha256 {})", a.size(), sha256_hex(a).substr(0, 16)));
  const auto& d = run("determinism", o);
  o.require(d.summary.value("identical", false), "determinism suite: serial and threaded runs identical");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_out = argv[1];
  struct Entry {
    int id;
    const char* title;
    Outcome (*fn)();
  };
  const std::vector<Entry> entries{
      {1, "harmonic eigenphase", criterion1},      {2, "representation formula", criterion2},
      {3, "reduction formula", criterion3},        {4, "free propagator past a phase", criterion4},
      {5, "kernel formula", criterion5},           {6, "exact harmonic synthesis", criterion6},
      {7, "gadget convergence", criterion7},       {8, "Trotter composition", criterion8},
      {9, "budget law", criterion9},               {10, "Gaussian obstruction", criterion10},
      {11, "three-factor compression", criterion11}, {12, "determinism", criterion12},
  };
  int failed = 0;
  std::vector<std::string> lines;
  for (const auto& e : entries) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = e.fn();
    } catch (const std::exception& ex) {
      o.require(false, fmt::format("exception: {}", ex.what()));
    }
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    const std::string line = fmt::format("{} criterion {:2d} {} ({:.1f} s)", o.pass ? "PASS" : "FAIL", e.id, e.title, dt.count());
    std::printf("%s\n", line.c_str());
    for (const auto& d : o.details) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
    lines.push_back(line);
    if (!o.pass) ++failed;
  }
  std::printf("\nSummary\n");
  for (const auto& l : lines) std::printf("%s\n", l.c_str());
  std::printf("%d of %zu criteria passed\n", static_cast<int>(entries.size()) - failed, entries.size());
  return failed == 0 ? 0 : 1;
}
