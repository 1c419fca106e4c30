#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "stqc/grid.hpp"

namespace stqc {

/// Binary state dump, little-endian:
///   magic "STQC", version u32, d u32, N u32, L f64, then N^d (re, im) f64 pairs.
inline constexpr std::uint32_t kStateFormatVersion = 1;

void write_state(std::ostream& out, const WaveFunction& psi);
WaveFunction read_state(std::istream& in);

void save_state(const std::string& path, const WaveFunction& psi);
WaveFunction load_state(const std::string& path);

}  // namespace stqc
