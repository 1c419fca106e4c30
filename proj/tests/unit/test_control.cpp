#include <doctest.h>

#include "stqc/control.hpp"
#include "stqc/errors.hpp"

using namespace stqc;

namespace {
ControlSchedule sample_schedule() {
  ControlSchedule s;
  s.append(Segment{0.5, 1.0, 0.0, 0.0, {}});
  s.append(Segment{0.25, -2.0, 0.5, 0.3, {}});
  Segment p{0.4, 0.0, 0.0, 0.0, ControlProfile::sampled({1.0, 2.0, 3.0, 4.0})};
  s.append(p);
  return s;
}
}  // namespace

TEST_CASE("schedule validation and duration") {
  ControlSchedule s;
  CHECK_THROWS_AS(s.append(Segment{0.0, 1.0, 0.0, 0.0, {}}), InvalidArgument);
  CHECK_THROWS_AS(s.append(Segment{-1.0, 1.0, 0.0, 0.0, {}}), InvalidArgument);
  CHECK(sample_schedule().total_duration() == doctest::Approx(1.15));
}

TEST_CASE("schedule json round trip") {
  const auto s = sample_schedule();
  const auto back = ControlSchedule::from_json(s.to_json());
  REQUIRE(back.size() == s.size());
  CHECK(back.to_json() == s.to_json());
  const auto j = nlohmann::json::parse(R"({"segments":[{"tau":1.0,"u0":2.0,"u2":0.0}]})");
  CHECK(ControlSchedule::from_json(j).segments()[0].u1 == 2.0);
  CHECK_THROWS(ControlSchedule::from_json(nlohmann::json::parse(R"({"segments":[{"tau":-1}]})")));
}

TEST_CASE("concatenation and reversal") {
  const auto s = sample_schedule();
  const auto c = s.concat(s);
  CHECK(c.size() == 6);
  const auto r = s.reversed();
  CHECK(r.segments().front().tau == doctest::Approx(0.4));
  const ControlSignal fwd(s, ControlSlot::Quad);
  const ControlSignal bwd(r, ControlSlot::Quad);
  for (double t : {0.05, 0.3, 0.6, 0.8, 1.1})
    CHECK(bwd.value(1.15 - t) == doctest::Approx(fwd.value(t)));
}

TEST_CASE("control signal queries") {
  const auto s = sample_schedule();
  const ControlSignal q(s, ControlSlot::Quad);
  CHECK(q.duration() == doctest::Approx(1.15));
  CHECK(q.value(0.1) == 1.0);
  CHECK(q.value(0.5) == -2.0);
  CHECK(q.value(0.76) == 1.0);
  CHECK(q.value(1.14) == 4.0);
  CHECK(q.value_in_piece(0.5, 0.25) == 1.0);
  CHECK(q.sup_abs() == doctest::Approx(4.0));
  CHECK(q.l1_norm(0.0, 0.75) == doctest::Approx(0.5 + 0.5));
  const auto bp = q.breakpoints();
  CHECK(bp.front() == 0.0);
  CHECK(bp.back() == doctest::Approx(1.15));
  CHECK(bp.size() >= 7);
  const auto sl = q.slice(0.4, 0.8);
  CHECK(sl.duration() == doctest::Approx(0.4));
  CHECK(sl.value(0.05) == 1.0);
  CHECK(sl.value(0.2) == -2.0);
  const ControlSignal w(s, ControlSlot::W2);
  CHECK(w.value(0.6) == 0.5);
  const ControlSignal lin(s, ControlSlot::Linear);
  CHECK(lin.value(0.6) == doctest::Approx(0.3));
  CHECK(ControlSignal::constant(3.0, 2.0).l1_norm(0.0, 2.0) == doctest::Approx(6.0));
}
