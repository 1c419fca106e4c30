#include "stqc/state_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "stqc/errors.hpp"

namespace stqc {
namespace {

static_assert(std::endian::native == std::endian::little,
              "state dumps are written in native order on little-endian hosts only");

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw ConfigError("truncated state dump");
  return v;
}

}  // namespace

void write_state(std::ostream& out, const WaveFunction& psi) {
  const auto& g = psi.grid();
  out.write("STQC", 4);
  put<std::uint32_t>(out, kStateFormatVersion);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.dim()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.size()));
  put<double>(out, g.half_width());
  for (const auto& v : psi.values()) {
    put<double>(out, v.real());
    put<double>(out, v.imag());
  }
  if (!out) throw Error("failed to write state dump");
}

WaveFunction read_state(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "STQC", 4) != 0) throw ConfigError("not an STQC state dump");
  const auto version = get<std::uint32_t>(in);
  if (version != kStateFormatVersion) throw ConfigError("unsupported STQC dump version");
  const auto d = get<std::uint32_t>(in);
  const auto n = get<std::uint32_t>(in);
  const auto L = get<double>(in);
  GridPtr grid;
  try {
    grid = Grid::make(n, L, static_cast<int>(d));
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("invalid grid in state dump: ") + e.what());
  }
  std::vector<complex> values(grid->size());
  for (auto& v : values) {
    const double re = get<double>(in);
    const double im = get<double>(in);
    v = {re, im};
  }
  return WaveFunction(grid, std::move(values));
}

void save_state(const std::string& path, const WaveFunction& psi) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_state(out, psi);
}

WaveFunction load_state(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path);
  return read_state(in);
}

}  // namespace stqc
