#include "stqc/errors.hpp"

#include <fmt/format.h>

namespace stqc {

WrapAroundRisk::WrapAroundRisk(double mass, double threshold)
    : Error(fmt::format("translation wrap-around risk: boundary mass {:.3e} exceeds {:.3e}", mass,
                        threshold)),
      boundary_mass(mass) {}

SupportOverflow::SupportOverflow(double mass, double threshold, const std::string& where)
    : Error(fmt::format("{}: boundary mass {:.3e} exceeds {:.3e}; box too small", where, mass,
                        threshold)),
      boundary_mass(mass) {}

BlowUp::BlowUp(double t)
    : Error(fmt::format("Riccati solution escapes its bound at t = {:.6g}", t)), time(t) {}

ResonantPair::ResonantPair(double s_, double a_)
    : Error(fmt::format("resonant pair: 1 + 4as = {:.3e} (s = {}, a = {})", 1.0 + 4.0 * a_ * s_,
                        s_, a_)),
      s(s_),
      a(a_) {}

StiffSegment::StiffSegment(std::size_t seg, double n)
    : Error(fmt::format("segment {} needs {:.3e} sub-steps", seg, n)), segment(seg), substeps(n) {}

BudgetExceeded::BudgetExceeded(double d, double b)
    : Error(fmt::format("schedule duration {:.6g} exceeds budget {:.6g}", d, b)),
      duration(d),
      budget(b) {}

ToleranceNotMet::ToleranceNotMet(double best, double tol)
    : Error(fmt::format("tolerance {:.3e} not met; best error {:.3e}", tol, best)),
      best_error(best) {}

}  // namespace stqc
