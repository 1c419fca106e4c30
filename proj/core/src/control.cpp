#include "stqc/control.hpp"

#include <algorithm>
#include <cmath>
#include <json.hpp>

#include "stqc/errors.hpp"

namespace stqc {

ControlProfile ControlProfile::sampled(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("sampled profile needs at least one value");
  ControlProfile p;
  p.kind = Kind::Sampled;
  p.samples = std::move(values);
  return p;
}

ControlProfile ControlProfile::bump_harmonic(double amplitude, double delta0, double period) {
  ControlProfile p;
  p.kind = Kind::BumpHarmonic;
  p.bump = BumpHarmonic{amplitude, delta0, period};
  return p;
}

double ControlProfile::value(double t, double tau) const {
  if (reversed) t = tau - t;
  t = std::clamp(t, 0.0, tau);
  if (kind == Kind::BumpHarmonic) return bump.u(t * bump.period / tau);
  const auto m = samples.size();
  auto idx = static_cast<std::size_t>(t / tau * static_cast<double>(m));
  if (idx >= m) idx = m - 1;
  return samples[idx];
}

double ControlProfile::sup_abs(double tau) const {
  if (kind == Kind::Sampled) {
    double s = 0.0;
    for (double v : samples) s = std::max(s, std::abs(v));
    return s;
  }
  double s = 0.0;
  const int probes = 4096;
  for (int i = 0; i <= probes; ++i) s = std::max(s, std::abs(value(tau * i / probes, tau)));
  return s;
}

double ControlProfile::mean(double t0, double t1, double tau) const {
  if (kind == Kind::BumpHarmonic || !(t1 > t0)) return value(0.5 * (t0 + t1), tau);
  if (reversed) {
    const double a = tau - t1;
    t1 = tau - t0;
    t0 = a;
  }
  const auto m = samples.size();
  const double cell = tau / static_cast<double>(m);
  double acc = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double lo = std::max(t0, cell * static_cast<double>(i));
    const double hi = std::min(t1, cell * static_cast<double>(i + 1));
    if (hi > lo) acc += samples[i] * (hi - lo);
  }
  return acc / (t1 - t0);
}

double ControlProfile::integral_abs(double t0, double t1, double tau) const {
  if (t1 <= t0) return 0.0;
  const int cells = 2048;
  const double h = (t1 - t0) / cells;
  double s = 0.0;
  for (int i = 0; i < cells; ++i) s += std::abs(value(t0 + (i + 0.5) * h, tau));
  return s * h;
}

double Segment::quad_at(double t_local) const {
  return u1_profile ? u1_profile->value(t_local, tau) : u1;
}

ControlSchedule::ControlSchedule(std::vector<Segment> segments) {
  for (auto& s : segments) append(std::move(s));
}

double ControlSchedule::total_duration() const {
  double t = 0.0;
  for (const auto& s : segments_) t += s.tau;
  return t;
}

ControlSchedule& ControlSchedule::append(Segment s) {
  if (!(s.tau > 0.0) || !std::isfinite(s.tau))
    throw InvalidArgument("segment duration must be positive and finite");
  if (!std::isfinite(s.u1) || !std::isfinite(s.u2) || !std::isfinite(s.ux))
    throw InvalidArgument("segment coefficients must be finite");
  segments_.push_back(std::move(s));
  return *this;
}

ControlSchedule& ControlSchedule::append(const ControlSchedule& other) {
  for (const auto& s : other.segments_) segments_.push_back(s);
  return *this;
}

ControlSchedule ControlSchedule::concat(const ControlSchedule& other) const {
  ControlSchedule out = *this;
  out.append(other);
  return out;
}

ControlSchedule ControlSchedule::reversed() const {
  ControlSchedule out;
  out.segments_.assign(segments_.rbegin(), segments_.rend());
  for (auto& s : out.segments_)
    if (s.u1_profile) s.u1_profile->reversed = !s.u1_profile->reversed;
  return out;
}

namespace {

nlohmann::json profile_to_json(const ControlProfile& p) {
  nlohmann::json j;
  if (p.kind == ControlProfile::Kind::Sampled) {
    j["type"] = "sampled";
    j["values"] = p.samples;
  } else {
    j["type"] = "bump_harmonic";
    j["amplitude"] = p.bump.amplitude;
    j["delta0"] = p.bump.delta0;
    j["period"] = p.bump.period;
  }
  j["reversed"] = p.reversed;
  return j;
}

ControlProfile profile_from_json(const nlohmann::json& j) {
  const auto type = j.at("type").get<std::string>();
  ControlProfile p;
  if (type == "sampled") {
    p = ControlProfile::sampled(j.at("values").get<std::vector<double>>());
  } else if (type == "bump_harmonic") {
    p = ControlProfile::bump_harmonic(j.at("amplitude").get<double>(),
                                      j.value("delta0", 0.05), j.at("period").get<double>());
  } else {
    throw ConfigError("unknown profile type '" + type + "'");
  }
  p.reversed = j.value("reversed", false);
  return p;
}

}  // namespace

nlohmann::json ControlSchedule::to_json() const {
  nlohmann::json segs = nlohmann::json::array();
  for (const auto& s : segments_) {
    nlohmann::json j;
    j["tau"] = s.tau;
    j["u1"] = s.u1;
    j["u2"] = s.u2;
    if (s.ux != 0.0) j["u"] = std::vector<double>{s.ux};
    if (s.u1_profile) j["profile"] = profile_to_json(*s.u1_profile);
    segs.push_back(std::move(j));
  }
  return nlohmann::json{{"segments", segs}};
}

ControlSchedule ControlSchedule::from_json(const nlohmann::json& j) {
  try {
    ControlSchedule out;
    for (const auto& js : j.at("segments")) {
      Segment s;
      s.tau = js.at("tau").get<double>();
      if (js.contains("u1") && js.contains("u0"))
        throw ConfigError("segment sets both u1 and u0");
      s.u1 = js.contains("u0") ? js.at("u0").get<double>() : js.value("u1", 0.0);
      s.u2 = js.value("u2", 0.0);
      if (js.contains("u")) {
        const auto u = js.at("u").get<std::vector<double>>();
        if (u.size() != 1) throw ConfigError("linear control 'u' must have d = 1 entries");
        s.ux = u[0];
      }
      if (js.contains("profile")) s.u1_profile = profile_from_json(js.at("profile"));
      out.append(std::move(s));
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid schedule JSON: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("invalid schedule: ") + e.what());
  }
}

double ControlSignal::Piece::eval(double t) const {
  if (profile) return profile->value(local0 + (t - start), tau);
  return constant;
}

ControlSignal::ControlSignal(const ControlSchedule& schedule, ControlSlot slot) {
  double t = 0.0;
  for (const auto& s : schedule.segments()) {
    Piece p{t, t + s.tau, 0.0, std::nullopt, s.tau, 0.0};
    switch (slot) {
      case ControlSlot::Quad:
        p.constant = s.u1;
        p.profile = s.u1_profile;
        break;
      case ControlSlot::W2:
        p.constant = s.u2;
        break;
      case ControlSlot::Linear:
        p.constant = s.ux;
        break;
    }
    pieces_.push_back(std::move(p));
    t += s.tau;
  }
}

ControlSignal ControlSignal::constant(double value, double duration) {
  ControlSignal c;
  if (duration > 0.0) c.pieces_.push_back(Piece{0.0, duration, value, std::nullopt, duration, 0.0});
  return c;
}

double ControlSignal::duration() const { return pieces_.empty() ? 0.0 : pieces_.back().end; }

double ControlSignal::value(double t) const {
  if (pieces_.empty()) return 0.0;
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                             [](double v, const Piece& p) { return v < p.end; });
  if (it == pieces_.end()) --it;
  return it->eval(t);
}

double ControlSignal::value_in_piece(double t, double anchor) const {
  if (pieces_.empty()) return 0.0;
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), anchor,
                             [](double v, const Piece& p) { return v < p.end; });
  if (it == pieces_.end()) --it;
  if (it->profile && it->profile->kind == ControlProfile::Kind::Sampled) return value(anchor);
  return it->eval(std::clamp(t, it->start, it->end));
}

std::vector<double> ControlSignal::breakpoints() const {
  std::vector<double> b{0.0};
  for (const auto& p : pieces_) {
    if (p.profile && p.profile->kind == ControlProfile::Kind::Sampled) {
      // cell edges of a sampled profile, mapped to absolute time
      const auto m = p.profile->samples.size();
      const double cell = p.tau / static_cast<double>(m);
      for (std::size_t i = 1; i < m; ++i) {
        const double local = p.profile->reversed ? p.tau - cell * static_cast<double>(m - i)
                                                 : cell * static_cast<double>(i);
        const double t = p.start + (local - p.local0);
        if (t > p.start && t < p.end) b.push_back(t);
      }
    }
    b.push_back(p.end);
  }
  std::sort(b.begin(), b.end());
  return b;
}

double ControlSignal::l1_norm(double t0, double t1) const {
  double s = 0.0;
  for (const auto& p : pieces_) {
    const double lo = std::max(t0, p.start);
    const double hi = std::min(t1, p.end);
    if (hi <= lo) continue;
    if (p.profile)
      s += p.profile->integral_abs(p.local0 + lo - p.start, p.local0 + hi - p.start, p.tau);
    else
      s += std::abs(p.constant) * (hi - lo);
  }
  return s;
}

double ControlSignal::sup_abs() const {
  double s = 0.0;
  for (const auto& p : pieces_)
    s = std::max(s, p.profile ? p.profile->sup_abs(p.tau) : std::abs(p.constant));
  return s;
}

ControlSignal ControlSignal::slice(double t0, double t1) const {
  ControlSignal out;
  for (const auto& p : pieces_) {
    const double lo = std::max(t0, p.start);
    const double hi = std::min(t1, p.end);
    if (hi <= lo) continue;
    Piece q = p;
    q.local0 = p.local0 + (lo - p.start);
    q.start = lo - t0;
    q.end = hi - t0;
    out.pieces_.push_back(std::move(q));
  }
  return out;
}

}  // namespace stqc
