#include "stqc/solver.hpp"

#include <cmath>

#include "stqc/errors.hpp"
#include "stqc/fft.hpp"

namespace stqc {

nlohmann::json PotentialBindings::to_json() const {
  return nlohmann::json{{"drift", potential_to_json(drift)}, {"w2", potential_to_json(w2)}};
}

PotentialBindings PotentialBindings::from_json(const nlohmann::json& j) {
  PotentialBindings b;
  if (j.contains("drift")) b.drift = potential_from_json(j.at("drift"));
  if (j.contains("w2")) b.w2 = potential_from_json(j.at("w2"));
  return b;
}

namespace {

struct Fields {
  std::vector<double> v;
  std::vector<double> x2;
  std::vector<double> w2;
  std::vector<double> x;
  double v_max = 0.0;
  double x2_max = 0.0;
  double w2_max = 0.0;
  double x_max = 0.0;
};

Fields make_fields(const Grid& grid, const PotentialBindings& pots, const DtPolicy& policy) {
  Fields f;
  f.v = sample_potential(pots.drift, grid);
  f.w2 = sample_potential(pots.w2, grid);
  f.x2 = sample_potential(potential::QuadraticCtrl{}, grid);
  f.x = sample_potential(potential::LinearCtrl{}, grid);
  const double radius = policy.phase_radius.value_or(grid.half_width());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (std::abs(grid.x(j)) > radius) continue;
    f.v_max = std::max(f.v_max, std::abs(f.v[j]));
    f.x2_max = std::max(f.x2_max, f.x2[j]);
    f.w2_max = std::max(f.w2_max, std::abs(f.w2[j]));
    f.x_max = std::max(f.x_max, std::abs(f.x[j]));
  }
  return f;
}

std::size_t substeps_for(const Segment& s, std::size_t index, const Fields& f,
                         const DtPolicy& policy) {
  const double u1 = s.u1_profile ? s.u1_profile->sup_abs(s.tau) : std::abs(s.u1);
  const double vmax =
      f.v_max + u1 * f.x2_max + std::abs(s.u2) * f.w2_max + std::abs(s.ux) * f.x_max;
  double n = static_cast<double>(policy.min_substeps);
  if (policy.max_phase > 0.0 && std::isfinite(policy.max_phase))
    n = std::max(n, std::ceil(s.tau * vmax / policy.max_phase));
  if (policy.max_dt && *policy.max_dt > 0.0) n = std::max(n, std::ceil(s.tau / *policy.max_dt));
  if (!(n <= policy.max_substeps)) throw StiffSegment(index, n);
  return static_cast<std::size_t>(std::max(n, 1.0));
}

}  // namespace

std::vector<std::size_t> plan_substeps(const Grid& grid, const ControlSchedule& schedule,
                                       const PotentialBindings& pots, const DtPolicy& policy) {
  const auto f = make_fields(grid, pots, policy);
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < schedule.size(); ++i)
    out.push_back(substeps_for(schedule.segments()[i], i, f, policy));
  return out;
}

WaveFunction propagate(const WaveFunction& psi0, const ControlSchedule& schedule,
                       const PotentialBindings& pots, const PropagateOptions& opt,
                       PropagateStats* stats) {
  const Grid& grid = psi0.grid();
  const auto f = make_fields(grid, pots, opt.dt);
  const auto steps = plan_substeps(grid, schedule, pots, opt.dt);
  const std::size_t n = grid.size();
  const auto k2 = grid.wavenumbers_squared();
  const double inv_n = 1.0 / static_cast<double>(n);

  WaveFunction psi = psi0;
  auto values = psi.values();
  std::vector<complex> kin_half(n), kin_full(n), pot(n), scratch(n);
  double t_abs = 0.0;
  double next_sample = opt.sample_interval;
  if (opt.sink) opt.sink(0.0, psi);

  auto emit_mid = [&](double t) {
    // values hold the state right after a potential kick; finish the half kick on a copy
    std::copy(values.begin(), values.end(), scratch.begin());
    fft_forward(scratch);
    for (std::size_t j = 0; j < n; ++j) scratch[j] *= kin_half[j];
    fft_backward(scratch);
    opt.sink(t, WaveFunction(psi.grid_ptr(), scratch));
  };

  for (std::size_t si = 0; si < schedule.size(); ++si) {
    const Segment& s = schedule.segments()[si];
    const std::size_t m = steps[si];
    const double dt = s.tau / static_cast<double>(m);
    for (std::size_t j = 0; j < n; ++j) {
      kin_half[j] = std::polar(inv_n, -0.5 * dt * k2[j]);
      kin_full[j] = std::polar(inv_n, -dt * k2[j]);
    }
    auto fill_potential = [&](double u1) {
      for (std::size_t j = 0; j < n; ++j) {
        const double vt = f.v[j] + u1 * f.x2[j] + s.u2 * f.w2[j] + s.ux * f.x[j];
        pot[j] = std::polar(1.0, -dt * vt);
      }
    };
    if (!s.u1_profile) fill_potential(s.u1);

    fft_forward(values);
    for (std::size_t j = 0; j < n; ++j) values[j] *= kin_half[j];
    for (std::size_t i = 0; i < m; ++i) {
      fft_backward(values);
      if (s.u1_profile) {
        const double t0 = static_cast<double>(i) * dt;
        fill_potential(s.u1_profile->mean(t0, t0 + dt, s.tau));
      }
      for (std::size_t j = 0; j < n; ++j) values[j] *= pot[j];
      const double t_step = t_abs + static_cast<double>(i + 1) * dt;
      if (opt.sink && opt.sample_interval > 0.0 && i + 1 < m && t_step >= next_sample) {
        emit_mid(t_step);
        while (next_sample <= t_step) next_sample += opt.sample_interval;
      }
      fft_forward(values);
      const auto& kin = (i + 1 < m) ? kin_full : kin_half;
      for (std::size_t j = 0; j < n; ++j) values[j] *= kin[j];
    }
    fft_backward(values);
    t_abs += s.tau;
    if (stats) stats->substeps += m;
    if (opt.guard_segments || stats) {
      const double mass = psi.boundary_mass();
      if (stats) stats->max_boundary_mass = std::max(stats->max_boundary_mass, mass);
      if (opt.guard_segments && mass > opt.guard.boundary_mass_threshold)
        throw SupportOverflow(mass, opt.guard.boundary_mass_threshold, "propagation");
    }
    if (opt.sink) {
      opt.sink(t_abs, psi);
      while (opt.sample_interval > 0.0 && next_sample <= t_abs) next_sample += opt.sample_interval;
    }
  }
  return psi;
}

WaveFunction propagate_limiting(const WaveFunction& psi0, const ControlSchedule& schedule,
                                const PropagateOptions& options, PropagateStats* stats) {
  for (const auto& s : schedule.segments())
    if (s.u2 != 0.0) throw InvalidArgument("limiting system has no W2 slot");
  return propagate(psi0, schedule, PotentialBindings{}, options, stats);
}

}  // namespace stqc
