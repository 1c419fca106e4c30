#include <doctest.h>

#include <random>
#include <sstream>

#include "stqc/errors.hpp"
#include "stqc/state_io.hpp"
#include "stqc/states.hpp"

using namespace stqc;

TEST_CASE("state dump round trip is bit exact") {
  const auto g = Grid::make(256, 8.0);
  std::mt19937_64 rng(3);
  const auto psi = random_smooth_state(g, rng);
  std::stringstream buf;
  write_state(buf, psi);
  const auto back = read_state(buf);
  REQUIRE(back.size() == psi.size());
  CHECK(back.grid().half_width() == g->half_width());
  for (std::size_t j = 0; j < psi.size(); ++j) CHECK(back[j] == psi[j]);
}

TEST_CASE("state dump header layout") {
  const auto g = Grid::make(16, 2.0);
  const auto psi = ground_gaussian(g);
  std::stringstream buf;
  write_state(buf, psi);
  const std::string bytes = buf.str();
  CHECK(bytes.substr(0, 4) == "STQC");
  CHECK(bytes.size() == 4 + 4 + 4 + 4 + 8 + 16 * 16);
}

TEST_CASE("corrupt dumps are rejected") {
  std::stringstream bad("XXXXgarbage");
  CHECK_THROWS_AS(read_state(bad), ConfigError);

  const auto g = Grid::make(16, 2.0);
  std::stringstream buf;
  write_state(buf, ground_gaussian(g));
  std::string truncated = buf.str().substr(0, 40);
  std::stringstream t(truncated);
  CHECK_THROWS_AS(read_state(t), ConfigError);
  CHECK_THROWS_AS(load_state("/nonexistent/dir/state.bin"), ConfigError);
}
