#include "stqc/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "stqc/bump.hpp"
#include "stqc/errors.hpp"
#include "stqc/factor.hpp"
#include "stqc/parallel.hpp"
#include "stqc/potential.hpp"
#include "stqc/primitives.hpp"
#include "stqc/states.hpp"

namespace stqc {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

nlohmann::json target_to_json(const SynthesisTarget& t) {
  return std::visit(
      overloaded{
          [](const target::QuadPhase& x) { return nlohmann::json{{"type", "quad_phase"}, {"delta", x.delta}}; },
          [](const target::Dilation& x) { return nlohmann::json{{"type", "dilation"}, {"alpha", x.alpha}}; },
          [](const target::Free& x) { return nlohmann::json{{"type", "free"}, {"sigma", x.sigma}}; },
          [](const target::Harmonic& x) { return nlohmann::json{{"type", "harmonic"}, {"sigma", x.sigma}}; },
          [](const target::HarmonicWithW2& x) {
            return nlohmann::json{{"type", "harmonic_w2"}, {"sigma", x.sigma}, {"alpha", x.alpha}};
          },
          [](const target::W2Phase& x) { return nlohmann::json{{"type", "w2_phase"}, {"c", x.c}}; },
      },
      t);
}

SynthesisTarget target_from_json(const nlohmann::json& j) {
  try {
    const auto type = j.at("type").get<std::string>();
    if (type == "quad_phase") return target::QuadPhase{j.at("delta").get<double>()};
    if (type == "dilation") return target::Dilation{j.at("alpha").get<double>()};
    if (type == "free") return target::Free{j.at("sigma").get<double>()};
    if (type == "harmonic") return target::Harmonic{j.at("sigma").get<double>()};
    if (type == "harmonic_w2")
      return target::HarmonicWithW2{j.at("sigma").get<double>(), j.at("alpha").get<double>()};
    if (type == "w2_phase") return target::W2Phase{j.at("c").get<double>()};
    throw ConfigError("unknown synthesis target '" + type + "'");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed synthesis target: ") + e.what());
  }
}

void SynthesisRequest::validate() const {
  if (!(budget > 0.0) || !std::isfinite(budget)) throw InvalidArgument("budget must be positive");
  if (!(tol > 0.0) || !std::isfinite(tol)) throw InvalidArgument("tol must be positive");
  std::visit(overloaded{
                 [](const target::QuadPhase& x) {
                   if (!std::isfinite(x.delta)) throw InvalidArgument("delta must be finite");
                 },
                 [](const target::Dilation& x) {
                   if (!(x.alpha > 0.0) || !std::isfinite(x.alpha))
                     throw InvalidArgument("dilation alpha must be positive");
                 },
                 [](const target::Free& x) {
                   if (!(x.sigma >= 0.0) || !std::isfinite(x.sigma))
                     throw InvalidArgument("free sigma must be nonnegative");
                 },
                 [](const target::Harmonic& x) {
                   if (!(x.sigma >= 0.0) || !std::isfinite(x.sigma))
                     throw InvalidArgument("harmonic sigma must be nonnegative");
                 },
                 [](const target::HarmonicWithW2& x) {
                   if (!(x.sigma >= 0.0) || !std::isfinite(x.sigma) || !std::isfinite(x.alpha))
                     throw InvalidArgument("harmonic sigma must be nonnegative, alpha finite");
                 },
                 [](const target::W2Phase& x) {
                   if (!std::isfinite(x.c)) throw InvalidArgument("W2 phase must be finite");
                 },
             },
             target);
  validate_potential(pots.drift);
  validate_potential(pots.w2);
}

nlohmann::json SynthesisRequest::to_json() const {
  return {{"target", target_to_json(target)}, {"budget", budget}, {"tol", tol}, {"potentials", pots.to_json()}};
}

SynthesisRequest SynthesisRequest::from_json(const nlohmann::json& j) {
  SynthesisRequest r;
  try {
    r.target = target_from_json(j.at("target"));
    r.budget = j.value("budget", r.budget);
    r.tol = j.value("tol", r.tol);
    if (j.contains("potentials")) r.pots = PotentialBindings::from_json(j.at("potentials"));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed synthesis request: ") + e.what());
  }
  return r;
}

nlohmann::json GadgetTrace::to_json() const {
  nlohmann::json j{{"gadget", gadget},
                   {"params", params},
                   {"first_segment", first_segment},
                   {"segment_count", segment_count}};
  if (!children.empty()) {
    j["children"] = nlohmann::json::array();
    for (const auto& c : children) j["children"].push_back(c.to_json());
  }
  return j;
}

GadgetTrace GadgetTrace::from_json(const nlohmann::json& j) {
  GadgetTrace t;
  t.gadget = j.at("gadget").get<std::string>();
  t.params = j.value("params", nlohmann::json::object());
  t.first_segment = j.value("first_segment", std::size_t{0});
  t.segment_count = j.value("segment_count", std::size_t{0});
  if (j.contains("children"))
    for (const auto& c : j.at("children")) t.children.push_back(from_json(c));
  return t;
}

double SynthesisReport::max_error() const {
  double m = 0.0;
  for (double e : achieved_error) m = std::max(m, e);
  return m;
}

nlohmann::json SynthesisReport::to_json() const {
  return {{"request", request.to_json()},
          {"schedule", schedule.to_json()},
          {"achieved_error", achieved_error},
          {"total_duration", total_duration},
          {"gadget_trace", gadget_trace.to_json()},
          {"knob", knob},
          {"rounds", rounds},
          {"shortfall", shortfall}};
}

SynthesisReport SynthesisReport::from_json(const nlohmann::json& j) {
  SynthesisReport r;
  try {
    r.request = SynthesisRequest::from_json(j.at("request"));
    r.schedule = ControlSchedule::from_json(j.at("schedule"));
    r.achieved_error = j.at("achieved_error").get<std::vector<double>>();
    r.total_duration = j.at("total_duration").get<double>();
    r.gadget_trace = GadgetTrace::from_json(j.at("gadget_trace"));
    r.knob = j.value("knob", 0.0);
    r.rounds = j.value("rounds", std::size_t{0});
    r.shortfall = j.value("shortfall", false);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed synthesis report: ") + e.what());
  }
  return r;
}

namespace {

struct Built {
  ControlSchedule schedule;
  GadgetTrace trace;
};

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(what) + " must be positive");
}

Built append_child(Built parent, const Built& child) {
  GadgetTrace t = child.trace;
  t.first_segment += parent.schedule.size();
  for (auto& c : t.children) c.first_segment += parent.schedule.size();
  parent.schedule.append(child.schedule);
  parent.trace.children.push_back(std::move(t));
  parent.trace.segment_count = parent.schedule.size();
  return parent;
}

Built build_exact_harmonic(double sigma, double T, std::size_t resolution) {
  require_positive(T, "T");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidArgument("sigma must be nonnegative");
  Built b;
  b.trace.gadget = "exact_harmonic";
  b.trace.params = {{"sigma", sigma}, {"T", T}};
  if (sigma == 0.0) return b;
  const double ratio = sigma / T;
  if (ratio < 1.0) throw InvalidArgument("exact harmonic construction needs sigma / T >= 1");
  if (ratio == 1.0) {
    b.schedule.append(Segment{T, 1.0, 0.0, 0.0, {}});
  } else {
    const Bump g(0.05);
    const double c = solve_bump_amplitude(g, ratio);
    auto profile = ControlProfile::bump_harmonic(c, g.delta0(), T);
    if (resolution > 0) {
      std::vector<double> samples(resolution);
      for (std::size_t i = 0; i < resolution; ++i)
        samples[i] = profile.value((static_cast<double>(i) + 0.5) * T / static_cast<double>(resolution), T);
      profile = ControlProfile::sampled(std::move(samples));
    }
    b.schedule.append(Segment{T, 0.0, 0.0, 0.0, profile});
    b.trace.params["amplitude"] = c;
    b.trace.params["delta0"] = g.delta0();
    b.trace.params["resolution"] = resolution;
  }
  b.trace.segment_count = b.schedule.size();
  return b;
}

Built build_quad_phase(double delta, double tau) {
  require_positive(tau, "tau");
  Built b;
  b.schedule.append(Segment{tau, -delta / tau, 0.0, 0.0, {}});
  b.trace.gadget = "quad_phase";
  b.trace.params = {{"delta", delta}, {"tau", tau}, {"u1", -delta / tau}};
  b.trace.segment_count = 1;
  return b;
}

Built build_dilation(double alpha, double tau, double inner_ratio) {
  require_positive(alpha, "alpha");
  require_positive(tau, "tau");
  if (!(inner_ratio > 0.0 && inner_ratio <= 1.0)) throw InvalidArgument("inner_ratio must lie in (0, 1]");
  Built b;
  b.trace.gadget = "dilation";
  b.trace.params = {{"alpha", alpha}, {"tau", tau}, {"inner_ratio", inner_ratio}};
  const double la = std::log(alpha);
  if (la == 0.0) {
    b.schedule.append(Segment{tau, 0.0, 0.0, 0.0, {}});
    b.trace.segment_count = 1;
    return b;
  }
  const double delta = la / (4.0 * tau);
  b = append_child(std::move(b), build_quad_phase(-delta, tau * inner_ratio));
  b.schedule.append(Segment{tau, -la * la / (4.0 * tau * tau), 0.0, 0.0, {}});
  b = append_child(std::move(b), build_quad_phase(delta, tau * inner_ratio));
  b.trace.params["middle_u1"] = -la * la / (4.0 * tau * tau);
  b.trace.segment_count = b.schedule.size();
  return b;
}

Built build_free(double sigma, double t, double dilation_tau, double inner_ratio, bool compensate) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InvalidArgument("sigma must be nonnegative");
  require_positive(t, "t");
  require_positive(dilation_tau, "dilation_tau");
  Built b;
  b.trace.gadget = "free";
  b.trace.params = {{"sigma", sigma}, {"t", t}, {"dilation_tau", dilation_tau},
                    {"inner_ratio", inner_ratio}, {"compensate", compensate}};
  double drift = sigma * t;
  if (compensate && t != 1.0) {
    const double extra = dilation_gadget_free_time(1.0 / std::sqrt(t), dilation_tau) * t +
                         dilation_gadget_free_time(std::sqrt(t), dilation_tau);
    drift -= extra;
    b.trace.params["compensation"] = extra;
    if (!(drift > 0.0))
      throw InvalidArgument("dilation gadgets carry more free time than sigma t; shrink dilation_tau");
  }
  b.trace.params["drift_duration"] = drift;
  b = append_child(std::move(b), build_dilation(1.0 / std::sqrt(t), dilation_tau, inner_ratio));
  if (drift > 0.0) b.schedule.append(Segment{drift, 0.0, 0.0, 0.0, {}});
  b = append_child(std::move(b), build_dilation(std::sqrt(t), dilation_tau, inner_ratio));
  b.trace.segment_count = b.schedule.size();
  return b;
}

Built build_w2_phase(double c, double tau) {
  require_positive(tau, "tau");
  Built b;
  b.schedule.append(Segment{tau, 0.0, -c / tau, 0.0, {}});
  b.trace.gadget = "w2_phase";
  b.trace.params = {{"c", c}, {"tau", tau}, {"u2", -c / tau}};
  b.trace.segment_count = 1;
  return b;
}

Built build_trotter(const target::HarmonicWithW2& tg, int n, double T_block, double tau_block,
                    double budget, std::size_t resolution) {
  if (n < 1) throw InvalidArgument("Trotter composition needs n >= 1");
  require_positive(T_block, "T_block");
  require_positive(tau_block, "tau_block");
  const double total = static_cast<double>(n) * (T_block + (tg.alpha != 0.0 ? tau_block : 0.0));
  if (total > budget) throw BudgetExceeded(total, budget);
  Built b;
  b.trace.gadget = "trotter";
  b.trace.params = {{"sigma", tg.sigma}, {"alpha", tg.alpha}, {"n", n},
                    {"T_block", T_block}, {"tau_block", tau_block}};
  const double dn = static_cast<double>(n);
  for (int i = 0; i < n; ++i) {
    if (tg.alpha != 0.0) b = append_child(std::move(b), build_w2_phase(tg.alpha * tg.sigma / dn, tau_block));
    b = append_child(std::move(b), build_exact_harmonic(tg.sigma / dn, T_block, resolution));
  }
  if (b.schedule.total_duration() > budget) throw BudgetExceeded(b.schedule.total_duration(), budget);
  return b;
}

}  // namespace

ControlSchedule synthesize_exact_harmonic(double sigma, double T, std::size_t resolution) {
  return build_exact_harmonic(sigma, T, resolution).schedule;
}

ControlSchedule gadget_quad_phase(double delta, double tau) { return build_quad_phase(delta, tau).schedule; }

ControlSchedule gadget_dilation(double alpha, double tau, double inner_ratio) {
  return build_dilation(alpha, tau, inner_ratio).schedule;
}

double dilation_gadget_free_time(double alpha, double tau) {
  require_positive(alpha, "alpha");
  const double la = std::log(alpha);
  if (la == 0.0) return tau;
  return tau * (alpha * alpha - 1.0) / (2.0 * la);
}

ControlSchedule gadget_free(double sigma, double t, double dilation_tau, double inner_ratio,
                            bool compensate) {
  return build_free(sigma, t, dilation_tau, inner_ratio, compensate).schedule;
}

ControlSchedule gadget_w2_phase(double c, double tau) { return build_w2_phase(c, tau).schedule; }

ControlSchedule trotter_compose(const target::HarmonicWithW2& target, int n, double T_block,
                                double tau_block, double budget, std::size_t resolution) {
  return build_trotter(target, n, T_block, tau_block, budget, resolution).schedule;
}

WaveFunction apply_harmonic_reference(const WaveFunction& psi, double sigma) {
  if (sigma == 0.0) return psi;
  const auto pieces = static_cast<int>(std::ceil(std::abs(sigma) / (std::numbers::pi / 4.0)));
  const double z = sigma / pieces;
  const double a = -0.5 * std::tan(z);
  const double s = 0.5 * std::sin(2.0 * z);
  WaveFunction out = psi;
  for (int i = 0; i < pieces; ++i)
    out = apply_quadratic_phase(apply_free_propagator(apply_quadratic_phase(out, a), s), a);
  return out;
}

WaveFunction apply_target(const SynthesisTarget& t, const WaveFunction& psi,
                          const PotentialBindings& pots, const PlanOptions& options) {
  return std::visit(
      overloaded{
          [&](const target::QuadPhase& x) { return apply_quadratic_phase(psi, x.delta); },
          [&](const target::Dilation& x) { return apply_dilation(psi, x.alpha); },
          [&](const target::Free& x) { return apply_free_propagator(psi, x.sigma); },
          [&](const target::Harmonic& x) { return apply_harmonic_reference(psi, x.sigma); },
          [&](const target::HarmonicWithW2& x) {
            if (x.sigma == 0.0) return psi;
            ControlSchedule s;
            s.append(Segment{x.sigma, 1.0, -x.alpha, 0.0, {}});
            PotentialBindings ref;
            ref.w2 = pots.w2;
            PropagateOptions o;
            o.dt = options.reference_dt;
            return propagate(psi, s, ref, o);
          },
          [&](const target::W2Phase& x) {
            auto phase = sample_potential(pots.w2, psi.grid());
            for (auto& v : phase) v *= x.c;
            return apply_pointwise_phase(psi, phase);
          },
      },
      t);
}

namespace {

double default_knob(const SynthesisRequest& r) {
  return std::visit(overloaded{
                        [&](const target::QuadPhase&) { return r.budget; },
                        [&](const target::Dilation&) { return r.budget / 3.0; },
                        [&](const target::Free& x) { return std::min(0.5, r.budget / (x.sigma + 0.3)); },
                        [&](const target::Harmonic& x) {
                          return x.sigma > 0.0 ? std::min(r.budget, x.sigma) : r.budget;
                        },
                        [&](const target::HarmonicWithW2&) { return 1.0; },
                        [&](const target::W2Phase&) { return r.budget; },
                    },
                    r.target);
}

Built build_for(const SynthesisRequest& r, double knob, const PlanOptions& o) {
  return std::visit(
      overloaded{
          [&](const target::QuadPhase& x) { return build_quad_phase(x.delta, knob); },
          [&](const target::Dilation& x) {
            if (x.alpha == 1.0) {
              Built b;
              b.trace.gadget = "identity";
              return b;
            }
            return build_dilation(x.alpha, knob, std::min(1.0, o.inner_ratio_scale * knob * knob));
          },
          [&](const target::Free& x) {
            if (x.sigma == 0.0) {
              Built b;
              b.trace.gadget = "identity";
              return b;
            }
            const double dtau = o.free_dilation_scale * knob;
            return build_free(x.sigma, knob, dtau, std::min(1.0, o.inner_ratio_scale * dtau * dtau), o.compensate);
          },
          [&](const target::Harmonic& x) { return build_exact_harmonic(x.sigma, knob, 0); },
          [&](const target::HarmonicWithW2& x) {
            const int n = static_cast<int>(std::lround(knob));
            const double dn = static_cast<double>(n);
            return build_trotter(x, n, o.trotter_harmonic_share * r.budget / dn,
                                 o.trotter_w2_share * r.budget / (dn * dn), r.budget, 0);
          },
          [&](const target::W2Phase& x) { return build_w2_phase(x.c, knob); },
      },
      r.target);
}

bool knob_grows(const SynthesisTarget& t) { return std::holds_alternative<target::HarmonicWithW2>(t); }

bool single_round(const SynthesisTarget& t) {
  if (std::holds_alternative<target::Harmonic>(t)) return true;
  if (const auto* d = std::get_if<target::Dilation>(&t)) return d->alpha == 1.0;
  if (const auto* f = std::get_if<target::Free>(&t)) return f->sigma == 0.0;
  return false;
}

}  // namespace

SynthesisReport synthesize_at(const SynthesisRequest& request, double knob, const PlanOptions& options) {
  request.validate();
  if (!options.grid) throw InvalidArgument("plan options need a grid");
  Built b = build_for(request, knob, options);
  const double total = b.schedule.total_duration();
  if (total > request.budget) throw BudgetExceeded(total, request.budget);

  std::vector<WaveFunction> states;
  if (options.validate)
    states = options.validation_states.empty() ? validation_panel(options.grid) : options.validation_states;
  const std::size_t workers = options.workers > 0 ? options.workers : worker_count();
  PropagateOptions po;
  po.dt = options.dt;
  auto errors = parallel_map<double>(
      states.size(),
      [&](std::size_t i) {
        const auto realized = propagate(states[i], b.schedule, request.pots, po);
        const auto reference = apply_target(request.target, states[i], request.pots, options);
        return realized.distance(reference);
      },
      workers);

  SynthesisReport rep;
  rep.request = request;
  rep.schedule = std::move(b.schedule);
  rep.achieved_error = std::move(errors);
  rep.total_duration = total;
  rep.gadget_trace = std::move(b.trace);
  rep.gadget_trace.segment_count = rep.schedule.size();
  rep.knob = knob;
  rep.rounds = 1;
  rep.shortfall = rep.max_error() > request.tol;
  return rep;
}

SynthesisReport plan(const SynthesisRequest& request, const PlanOptions& options) {
  request.validate();
  double knob = options.initial_knob.value_or(default_knob(request));
  const bool grows = knob_grows(request.target);
  const int rounds = single_round(request.target) ? 1 : std::max(1, options.max_rounds);
  std::optional<SynthesisReport> best;
  int done = 0;
  for (int r = 0; r < rounds; ++r, knob = grows ? knob * 2.0 : knob * 0.5) {
    ++done;
    try {
      auto rep = synthesize_at(request, knob, options);
      rep.rounds = static_cast<std::size_t>(done);
      if (!rep.shortfall) return rep;
      if (!best || rep.max_error() < best->max_error()) best = std::move(rep);
    } catch (const BudgetExceeded&) {
      if (grows) throw;
    } catch (const StiffSegment&) {
      break;
    }
  }
  const double best_error = best ? best->max_error() : std::numeric_limits<double>::infinity();
  if (options.allow_shortfall && best) {
    best->rounds = static_cast<std::size_t>(done);
    return *best;
  }
  throw ToleranceNotMet(best_error, request.tol);
}

}  // namespace stqc
