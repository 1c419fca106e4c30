#include "stqc/abz.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "ode.hpp"
#include "stqc/errors.hpp"

namespace stqc {
namespace {

std::vector<double> make_samples(double T, std::size_t n, const std::vector<double>& given) {
  std::vector<double> s = given;
  if (s.empty()) {
    const std::size_t m = std::max<std::size_t>(n, 2);
    for (std::size_t i = 0; i < m; ++i)
      s.push_back(T * static_cast<double>(i) / static_cast<double>(m - 1));
  }
  for (double t : s)
    if (t < 0.0 || t > T) throw InvalidArgument("sample time outside [0, T]");
  std::sort(s.begin(), s.end());
  return s;
}

std::vector<double> merged_stops(const std::vector<std::vector<double>>& lists, double T) {
  std::vector<double> all;
  for (const auto& l : lists)
    for (double t : l)
      if (t >= 0.0 && t <= T) all.push_back(t);
  all.push_back(T);
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

}  // namespace

AbzSolution solve_abz(const ControlSignal& u, double T, const AbzOptions& opt) {
  if (!(T >= 0.0) || !std::isfinite(T)) throw InvalidArgument("solve_abz needs T >= 0");
  const auto samples = make_samples(T, opt.n_samples, opt.sample_times);
  const auto stops = merged_stops({samples, u.breakpoints()}, T);
  const bool harmonic = opt.variant == AbzVariant::Harmonic;

  // state (a, log b, zeta); log b keeps b > 0 by construction
  auto rhs = [&](const std::array<double, 3>& s, std::array<double, 3>& ds, double t,
                 double anchor) {
    const double a = s[0];
    const double inv_b2 = std::exp(-2.0 * s[1]);
    ds[0] = -4.0 * a * a + (harmonic ? inv_b2 * inv_b2 : 0.0) - u.value_in_piece(t, anchor);
    ds[1] = 4.0 * a;
    ds[2] = inv_b2;
  };
  const double log_bound = std::log(opt.bound);
  auto ok = [&](const std::array<double, 3>& s) {
    return std::abs(s[0]) <= opt.bound && std::abs(s[1]) <= log_bound;
  };

  AbzSolution sol;
  std::array<double, 3> x{0.0, 0.0, 0.0};
  double t = 0.0;
  double dt = 0.0;
  std::size_t next = 0;
  auto record = [&](double at) {
    sol.t.push_back(at);
    sol.a.push_back(x[0]);
    sol.b.push_back(std::exp(x[1]));
    sol.zeta.push_back(x[2]);
  };
  while (next < samples.size() && samples[next] <= t) record(samples[next++]);
  for (double stop : stops) {
    if (stop <= t) continue;
    const double anchor = 0.5 * (t + stop);
    auto piece_rhs = [&](const std::array<double, 3>& s, std::array<double, 3>& ds, double tt) {
      rhs(s, ds, tt, anchor);
    };
    if (auto esc = detail::drive<3>(piece_rhs, x, t, stop, dt, opt.tol, ok)) {
      sol.blow_up_time = *esc;
      if (opt.throw_on_blowup) throw BlowUp(*esc);
      return sol;
    }
    t = stop;
    while (next < samples.size() && samples[next] <= t) record(samples[next++]);
  }
  return sol;
}

ClassicalSolution solve_classical(const ControlSignal& u0, const ControlSignal& u, double T,
                                  double tol, std::size_t n_samples,
                                  const std::vector<double>& sample_times) {
  if (!(T >= 0.0) || !std::isfinite(T)) throw InvalidArgument("solve_classical needs T >= 0");
  const auto samples = make_samples(T, n_samples, sample_times);
  const auto stops = merged_stops({samples, u0.breakpoints(), u.breakpoints()}, T);
  ClassicalSolution sol;
  std::array<double, 3> x{0.0, 0.0, 0.0};  // q, p, theta
  double t = 0.0;
  double dt = 0.0;
  std::size_t next = 0;
  auto record = [&](double at) {
    sol.t.push_back(at);
    sol.q.push_back(x[0]);
    sol.p.push_back(x[1]);
    sol.theta.push_back(x[2]);
  };
  while (next < samples.size() && samples[next] <= t) record(samples[next++]);
  for (double stop : stops) {
    if (stop <= t) continue;
    const double anchor = 0.5 * (t + stop);
    auto rhs = [&](const std::array<double, 3>& s, std::array<double, 3>& ds, double tt) {
      const double c0 = u0.value_in_piece(tt, anchor);
      const double c = u.value_in_piece(tt, anchor);
      ds[0] = s[1];
      ds[1] = -4.0 * c0 * s[0] - 2.0 * c;
      ds[2] = c0 * s[0] * s[0] - 0.25 * s[1] * s[1];
    };
    auto ok = [](const std::array<double, 3>&) { return true; };
    if (detail::drive<3>(rhs, x, t, stop, dt, tol, ok)) throw Error("classical integration failed");
    t = stop;
    while (next < samples.size() && samples[next] <= t) record(samples[next++]);
  }
  return sol;
}

nlohmann::json AbzSolution::to_json() const {
  nlohmann::json j{{"t", t}, {"a", a}, {"b", b}, {"zeta", zeta}};
  if (!p.empty()) {
    j["p"] = p;
    j["q"] = q;
    j["theta"] = theta;
  }
  j["blow_up_time"] = blow_up_time ? nlohmann::json(*blow_up_time) : nlohmann::json(nullptr);
  return j;
}

AbzSolution AbzSolution::from_json(const nlohmann::json& j) {
  AbzSolution s;
  s.t = j.at("t").get<std::vector<double>>();
  s.a = j.at("a").get<std::vector<double>>();
  s.b = j.at("b").get<std::vector<double>>();
  s.zeta = j.at("zeta").get<std::vector<double>>();
  if (j.contains("p")) {
    s.p = j.at("p").get<std::vector<double>>();
    s.q = j.at("q").get<std::vector<double>>();
    s.theta = j.at("theta").get<std::vector<double>>();
  }
  if (j.contains("blow_up_time") && !j.at("blow_up_time").is_null())
    s.blow_up_time = j.at("blow_up_time").get<double>();
  return s;
}

}  // namespace stqc
