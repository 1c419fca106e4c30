#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stqc/bump.hpp"

namespace stqc {

/// Finely resolved time profile of the |x|^2 coefficient on one segment.
/// Local time runs over [0, tau] where tau is the owning segment's duration.
struct ControlProfile {
  enum class Kind { Sampled, BumpHarmonic };

  Kind kind = Kind::Sampled;
  /// Sampled: piecewise-constant values on equal cells covering [0, tau].
  std::vector<double> samples;
  /// BumpHarmonic: analytic control of the exact harmonic construction.
  BumpHarmonic bump{0.0, 0.05, 1.0};
  /// Evaluate at tau - t instead of t.
  bool reversed = false;

  static ControlProfile sampled(std::vector<double> values);
  static ControlProfile bump_harmonic(double amplitude, double delta0, double period);

  double value(double t, double tau) const;
  /// Supremum of |value| estimated on a fine probe of [0, tau].
  double sup_abs(double tau) const;
  /// Mean of value over [t0, t1] in local time: exact cell overlaps for
  /// Sampled, the midpoint value for BumpHarmonic.
  double mean(double t0, double t1, double tau) const;
  /// int_{t0}^{t1} |value| dt in local time.
  double integral_abs(double t0, double t1, double tau) const;
};

/// One control segment of duration tau with constant coefficients
///   u1 (|x|^2, called u0 in the limiting system), u2 (W2) and ux (linear x).
/// A present u1_profile replaces the constant u1.
struct Segment {
  double tau = 0.0;
  double u1 = 0.0;
  double u2 = 0.0;
  double ux = 0.0;
  std::optional<ControlProfile> u1_profile;

  double quad_at(double t_local) const;
  bool has_profile() const { return u1_profile.has_value(); }
};

class ControlSchedule {
 public:
  ControlSchedule() = default;
  explicit ControlSchedule(std::vector<Segment> segments);

  const std::vector<Segment>& segments() const { return segments_; }
  std::size_t size() const { return segments_.size(); }
  bool empty() const { return segments_.empty(); }
  double total_duration() const;

  /// Appends a segment; throws InvalidArgument for non-positive or non-finite tau.
  ControlSchedule& append(Segment s);
  ControlSchedule& append(const ControlSchedule& other);
  /// this followed in time by other.
  ControlSchedule concat(const ControlSchedule& other) const;
  /// Segments in reverse order, profiles evaluated backwards in time.
  ControlSchedule reversed() const;

  nlohmann::json to_json() const;
  static ControlSchedule from_json(const nlohmann::json& j);

 private:
  std::vector<Segment> segments_;
};

enum class ControlSlot { Quad, W2, Linear };

/// A scalar control as a function of absolute time, piecewise over schedule segments.
class ControlSignal {
 public:
  ControlSignal() = default;
  ControlSignal(const ControlSchedule& schedule, ControlSlot slot);
  static ControlSignal constant(double value, double duration);
  static ControlSignal zero(double duration) { return constant(0.0, duration); }

  double duration() const;
  /// Value at t; at a breakpoint the later piece is used.
  double value(double t) const;
  /// Value at t using the piece that contains `anchor`; lets integrators stay
  /// on one side of a discontinuity.
  double value_in_piece(double t, double anchor) const;
  /// Piece boundaries including 0 and duration().
  std::vector<double> breakpoints() const;
  double l1_norm(double t0, double t1) const;
  double sup_abs() const;
  /// Restriction to [t0, t1], shifted to start at 0.
  ControlSignal slice(double t0, double t1) const;

 private:
  struct Piece {
    double start;
    double end;
    double constant;
    std::optional<ControlProfile> profile;
    double tau;
    double local0;
    double eval(double t) const;
  };
  std::vector<Piece> pieces_;
};

}  // namespace stqc
