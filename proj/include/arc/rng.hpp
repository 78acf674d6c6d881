#pragma once

#include <array>
#include <cstdint>

namespace arc {

/// Philox4x32-10 counter-based generator. A draw is a pure function of
/// (key, counter), so simulation streams can be indexed by (path, step)
/// and stay identical no matter how many paths run or in what order.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Derives an independent substream key from a seed and a stream tag
/// (splitmix64 mixing).
std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t tag);

/// Uniform draw in (0, 1) for (seed, path, step); never returns 0 or 1.
double uniform01(std::uint64_t seed, std::uint64_t path, std::uint64_t step);

/// Standard normal draw for (seed, path, step), by inverse CDF of the
/// uniform draw above.
double normal_draw(std::uint64_t seed, std::uint64_t path, std::uint64_t step);

} // namespace arc
