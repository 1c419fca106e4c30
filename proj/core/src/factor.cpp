#include "stqc/factor.hpp"

#include <cmath>
#include <numbers>

#include "stqc/abz.hpp"
#include "stqc/errors.hpp"
#include "stqc/fft.hpp"

namespace stqc {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

WaveFunction apply_harmonic(const WaveFunction& psi, double zeta, const DtPolicy& dt) {
  if (zeta == 0.0) return psi;
  PropagateOptions opt;
  opt.dt = dt;
  ControlSchedule s;
  s.append(Segment{std::abs(zeta), 1.0, 0.0, 0.0, std::nullopt});
  if (zeta > 0.0) return propagate(psi, s, PotentialBindings{}, opt);
  return propagate(psi.conjugated(), s, PotentialBindings{}, opt).conjugated();
}

WaveFunction apply_factor(const Factor& f, const WaveFunction& psi, const WordEvalOptions& opt) {
  return std::visit(
      overloaded{
          [&](const factor::QuadPhase& q) { return apply_quadratic_phase(psi, q.a); },
          [&](const factor::Dilate& d) {
            if (d.beta == 0.0) throw InvalidArgument("Dilate needs beta != 0");
            auto out = apply_dilation(psi, std::abs(d.beta), opt.guard);
            return d.beta < 0.0 ? apply_reflection(out) : out;
          },
          [&](const factor::FreeProp& fp) { return apply_free_propagator(psi, fp.sigma); },
          [&](const factor::PlaneWave& p) {
            return apply_plane_wave_and_translation(psi, p.p, 0.0, 0.0, opt.guard);
          },
          [&](const factor::Translate& t) {
            return apply_plane_wave_and_translation(psi, 0.0, t.q, 0.0, opt.guard);
          },
          [&](const factor::GlobalPhase& g) {
            return apply_plane_wave_and_translation(psi, 0.0, 0.0, g.theta, opt.guard);
          },
          [&](const factor::Harmonic& h) { return apply_harmonic(psi, h.zeta, opt.harmonic_dt); },
      },
      f);
}

GaussianParams apply_factor(const Factor& f, const GaussianParams& g) {
  return std::visit(overloaded{
                        [&](const factor::QuadPhase& q) { return gauss_quad_phase(g, q.a); },
                        [&](const factor::Dilate& d) { return gauss_dilate(g, d.beta); },
                        [&](const factor::FreeProp& fp) { return gauss_free(g, fp.sigma); },
                        [&](const factor::PlaneWave& p) { return gauss_plane_wave(g, p.p); },
                        [&](const factor::Translate& t) { return gauss_translate(g, t.q); },
                        [&](const factor::GlobalPhase& p) { return gauss_global_phase(g, p.theta); },
                        [&](const factor::Harmonic& h) { return gauss_harmonic(g, h.zeta); },
                    },
                    f);
}

// ||(e^{i delta Lap} - I) chi||
double free_defect(const WaveFunction& chi, double delta) {
  std::vector<complex> spec(chi.values().begin(), chi.values().end());
  fft_forward(spec);
  const auto k2 = chi.grid().wavenumbers_squared();
  double s = 0.0;
  for (std::size_t j = 0; j < spec.size(); ++j)
    s += std::norm(spec[j]) * std::norm(std::polar(1.0, -delta * k2[j]) - 1.0);
  // Parseval: h sum |f|^2 = (h / n) sum |F|^2
  return std::sqrt(s * chi.grid().spacing() / static_cast<double>(spec.size()));
}

}  // namespace

WaveFunction evaluate_word(const FactorWord& word, const WaveFunction& psi,
                           const WordEvalOptions& options) {
  WaveFunction out = psi;
  for (auto it = word.rbegin(); it != word.rend(); ++it) out = apply_factor(*it, out, options);
  return out;
}

GaussianParams evaluate_word(const FactorWord& word, const GaussianParams& g) {
  GaussianParams out = g;
  for (auto it = word.rbegin(); it != word.rend(); ++it) out = apply_factor(*it, out);
  return out;
}

FactorWord inverse_word(const FactorWord& word) {
  FactorWord out;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    out.push_back(std::visit(
        overloaded{
            [](const factor::QuadPhase& q) -> Factor { return factor::QuadPhase{-q.a}; },
            [](const factor::Dilate& d) -> Factor {
              if (d.beta == 0.0) throw InvalidArgument("Dilate needs beta != 0");
              return factor::Dilate{1.0 / d.beta};
            },
            [](const factor::FreeProp& f) -> Factor { return factor::FreeProp{-f.sigma}; },
            [](const factor::PlaneWave& p) -> Factor { return factor::PlaneWave{-p.p}; },
            [](const factor::Translate& t) -> Factor { return factor::Translate{-t.q}; },
            [](const factor::GlobalPhase& g) -> Factor { return factor::GlobalPhase{-g.theta}; },
            [](const factor::Harmonic& h) -> Factor { return factor::Harmonic{-h.zeta}; },
        },
        *it));
  }
  return out;
}

CommutedTriple commute_free_past_phase(double s, double a, double tol) {
  if (s == 0.0) throw InvalidArgument("commutation needs s != 0");
  const double d = 1.0 + 4.0 * a * s;
  if (std::abs(d) < tol) throw ResonantPair(s, a);
  const double theta = d < 0.0 ? (s > 0.0 ? -0.5 : 0.5) * std::numbers::pi : 0.0;
  return {a / d, 1.0 / d, s / d, theta};
}

FactorWord CompressedWord::word() const {
  FactorWord w;
  if (theta != 0.0) w.push_back(factor::GlobalPhase{theta});
  w.push_back(factor::QuadPhase{a});
  w.push_back(factor::Dilate{beta});
  w.push_back(factor::FreeProp{sigma});
  return w;
}

namespace {

struct Triple {
  double a = 0.0;
  double beta = 1.0;
  double sigma = 0.0;
  double theta = 0.0;
};

// Left-multiplies the running triple by one factor. A resonant FreeProp is
// shifted by delta; margin_ok drops when the shifted pair stays ill-conditioned.
void push_factor(Triple& t, const Factor& f, double resonance_tol, double delta,
                 bool& resonant, double margin, bool& margin_ok) {
  resonant = false;
  if (const auto* q = std::get_if<factor::QuadPhase>(&f)) {
    t.a += q->a;
  } else if (const auto* d = std::get_if<factor::Dilate>(&f)) {
    if (d->beta == 0.0) throw InvalidArgument("Dilate needs beta != 0");
    t.a *= d->beta * d->beta;
    t.beta *= d->beta;
  } else if (const auto* fp = std::get_if<factor::FreeProp>(&f)) {
    double s = fp->sigma;
    if (s == 0.0) return;
    if (t.a == 0.0) {
      t.sigma += s * t.beta * t.beta;
      return;
    }
    if (std::abs(1.0 + 4.0 * s * t.a) < resonance_tol) {
      resonant = true;
      s += delta;
      if (std::abs(1.0 + 4.0 * s * t.a) < margin) margin_ok = false;
      if (std::abs(1.0 + 4.0 * s * t.a) < resonance_tol) return;
    }
    const auto c = commute_free_past_phase(s, t.a, 0.0);
    t.sigma = c.sigma * t.beta * t.beta + t.sigma;
    t.beta = c.beta * t.beta;
    t.a = c.a;
    t.theta += c.theta;
  } else {
    throw InvalidArgument("compress_word accepts QuadPhase, Dilate and FreeProp only");
  }
}

}  // namespace

CompressedWord compress_word(const FactorWord& word, const DeltaPolicy& policy) {
  if (word.empty()) throw InvalidArgument("compress_word needs a nonempty word");

  auto run = [&](double delta, std::vector<std::size_t>* resonant_at, bool& margin_ok) {
    Triple t;
    margin_ok = true;
    for (std::size_t i = word.size(); i-- > 0;) {
      bool res = false;
      push_factor(t, word[i], policy.resonance_tol, delta, res, policy.margin, margin_ok);
      if (res && resonant_at) resonant_at->push_back(i);
    }
    return t;
  };

  std::vector<std::size_t> resonant_at;
  bool margin_ok = true;
  Triple t = run(0.0, &resonant_at, margin_ok);
  CompressedWord out;
  if (resonant_at.empty()) {
    out.a = t.a;
    out.beta = t.beta;
    out.sigma = t.sigma;
    out.theta = t.theta;
    return out;
  }

  std::optional<double> chosen;
  for (int k = policy.k_max; k >= policy.k_min; --k) {
    const double delta = std::ldexp(1.0, -k);
    std::vector<std::size_t> hits;
    bool ok = true;
    Triple trial = run(delta, &hits, ok);
    if (ok && !hits.empty()) {
      chosen = delta;
      t = trial;
      resonant_at = hits;
      break;
    }
  }
  if (!chosen) throw Error("no admissible delta resolves the resonant pair");
  out.a = t.a;
  out.beta = t.beta;
  out.sigma = t.sigma;
  out.theta = t.theta;
  out.used_delta = chosen;
  out.resonant_pairs = resonant_at.size();
  for (const auto& psi : policy.test_states) {
    double bound = 0.0;
    for (std::size_t i : resonant_at) {
      FactorWord prefix(word.begin() + static_cast<std::ptrdiff_t>(i), word.end());
      bound += free_defect(evaluate_word(prefix, psi), *chosen);
    }
    out.delta_bound.push_back(bound);
  }
  return out;
}

ReachabilityWord exact_reachability_word(const ControlSignal& u, double T, ReachRoute route,
                                         double bound, double tol) {
  if (!(T >= 0.0) || !std::isfinite(T)) throw InvalidArgument("T must be >= 0");
  if (!(bound > 0.0 && bound < 1.0)) throw InvalidArgument("subdivision bound must lie in (0, 1)");
  ReachabilityWord out;
  if (T == 0.0) return out;
  std::size_t n = 1;
  for (;; ++n) {
    if (n > 100000) throw Error("control too large for the subdivision");
    const double h = T / static_cast<double>(n);
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j)
      ok = 4.0 * h * u.l1_norm(h * static_cast<double>(j), h * static_cast<double>(j + 1)) <= bound;
    if (ok) break;
  }
  const double h = T / static_cast<double>(n);
  AbzOptions opt;
  opt.tol = tol;
  opt.variant = route == ReachRoute::Free ? AbzVariant::Free : AbzVariant::Harmonic;
  opt.throw_on_blowup = true;
  out.subdivision.push_back(0.0);
  FactorWord reversed;  // built in time order, reversed at the end
  for (std::size_t j = 0; j < n; ++j) {
    const double t0 = h * static_cast<double>(j);
    const double t1 = j + 1 == n ? T : h * static_cast<double>(j + 1);
    const auto sol = solve_abz(u.slice(t0, t1), t1 - t0, opt);
    const double a = sol.a.back();
    const double b = sol.b.back();
    const double z = sol.zeta.back();
    out.triples.push_back({a, b, z});
    out.subdivision.push_back(t1);
    if (route == ReachRoute::Free)
      reversed.push_back(factor::FreeProp{z});
    else
      reversed.push_back(factor::Harmonic{z});
    reversed.push_back(factor::Dilate{1.0 / b});
    reversed.push_back(factor::QuadPhase{a});
  }
  out.word.assign(reversed.rbegin(), reversed.rend());
  return out;
}

nlohmann::json word_to_json(const FactorWord& word) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& f : word) {
    arr.push_back(std::visit(
        overloaded{
            [](const factor::QuadPhase& q) { return nlohmann::json{{"op", "quad_phase"}, {"a", q.a}}; },
            [](const factor::Dilate& d) { return nlohmann::json{{"op", "dilate"}, {"beta", d.beta}}; },
            [](const factor::FreeProp& f) { return nlohmann::json{{"op", "free"}, {"sigma", f.sigma}}; },
            [](const factor::PlaneWave& p) {
              return nlohmann::json{{"op", "plane_wave"}, {"p", std::vector<double>{p.p}}};
            },
            [](const factor::Translate& t) {
              return nlohmann::json{{"op", "translate"}, {"q", std::vector<double>{t.q}}};
            },
            [](const factor::GlobalPhase& g) {
              return nlohmann::json{{"op", "global_phase"}, {"theta", g.theta}};
            },
            [](const factor::Harmonic& h) { return nlohmann::json{{"op", "harmonic"}, {"zeta", h.zeta}}; },
        },
        f));
  }
  return arr;
}

FactorWord word_from_json(const nlohmann::json& j) {
  try {
    FactorWord w;
    auto scalar = [](const nlohmann::json& v) {
      if (v.is_array()) {
        if (v.size() != 1) throw ConfigError("vector factor parameters must have d = 1 entries");
        return v[0].get<double>();
      }
      return v.get<double>();
    };
    for (const auto& f : j) {
      const auto op = f.at("op").get<std::string>();
      if (op == "quad_phase")
        w.push_back(factor::QuadPhase{f.at("a").get<double>()});
      else if (op == "dilate") {
        const double beta = f.at("beta").get<double>();
        if (beta == 0.0) throw ConfigError("dilate needs beta != 0");
        w.push_back(factor::Dilate{beta});
      } else if (op == "free")
        w.push_back(factor::FreeProp{f.at("sigma").get<double>()});
      else if (op == "plane_wave")
        w.push_back(factor::PlaneWave{scalar(f.at("p"))});
      else if (op == "translate")
        w.push_back(factor::Translate{scalar(f.at("q"))});
      else if (op == "global_phase")
        w.push_back(factor::GlobalPhase{f.at("theta").get<double>()});
      else if (op == "harmonic")
        w.push_back(factor::Harmonic{f.at("zeta").get<double>()});
      else
        throw ConfigError("unknown factor op '" + op + "'");
    }
    return w;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("invalid factor word JSON: ") + e.what());
  }
}

}  // namespace stqc
