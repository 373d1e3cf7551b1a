#pragma once

#include <array>
#include <cstdint>

namespace splitlv::rng {

// Philox4x32 with 10 rounds. Counter-based: every 128-bit output block is a
// pure function of (counter, key), so any draw of any stream can be
// regenerated in isolation, in any order, on any thread, bit for bit.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Uniform double in (0, 1] with 53 random bits taken from two 32-bit words.
// Never returns 0, so it is safe under a logarithm.
double uniform_open01(std::uint32_t hi, std::uint32_t lo);

// index-th standard normal draw of the stream (master_seed, stream).
// One Philox block per draw, Box-Muller cosine branch.
double standard_normal(std::uint64_t master_seed, std::uint64_t stream,
                       std::uint64_t index);

// index-th uniform (0, 1] draw of a keyed stream. Uses a domain-separated
// key, so it never collides with standard_normal draws at the same
// (master_seed, stream, index).
double uniform01(std::uint64_t master_seed, std::uint64_t stream,
                 std::uint64_t index);

}  // namespace splitlv::rng
