#include "splitlv/rng.hpp"

#include <cmath>
#include <numbers>

namespace splitlv::rng {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void round_once(std::array<std::uint32_t, 4>& c,
                       std::array<std::uint32_t, 2>& k) {
  const std::uint64_t p0 = std::uint64_t{kMul0} * c[0];
  const std::uint64_t p1 = std::uint64_t{kMul1} * c[2];
  const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const auto lo0 = static_cast<std::uint32_t>(p0);
  const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const auto lo1 = static_cast<std::uint32_t>(p1);
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  k[0] += kWeyl0;
  k[1] += kWeyl1;
}

inline std::array<std::uint32_t, 4> block(std::uint64_t master_seed,
                                          std::uint64_t stream,
                                          std::uint64_t index,
                                          std::uint32_t key_tweak) {
  const std::array<std::uint32_t, 4> counter = {
      static_cast<std::uint32_t>(index),
      static_cast<std::uint32_t>(index >> 32),
      static_cast<std::uint32_t>(stream),
      static_cast<std::uint32_t>(stream >> 32)};
  const std::array<std::uint32_t, 2> key = {
      static_cast<std::uint32_t>(master_seed),
      static_cast<std::uint32_t>(master_seed >> 32) ^ key_tweak};
  return philox4x32(counter, key);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) {
  for (int r = 0; r < 10; ++r) round_once(counter, key);
  return counter;
}

double uniform_open01(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (std::uint64_t{hi} << 32) | lo;
  // Top 53 bits, shifted into (0, 1] by adding one ulp before scaling.
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

double standard_normal(std::uint64_t master_seed, std::uint64_t stream,
                       std::uint64_t index) {
  const auto words = block(master_seed, stream, index, 0u);
  const double u1 = uniform_open01(words[0], words[1]);
  const double u2 = uniform_open01(words[2], words[3]);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double uniform01(std::uint64_t master_seed, std::uint64_t stream,
                 std::uint64_t index) {
  const auto words = block(master_seed, stream, index, 0x243F6A88u);
  return uniform_open01(words[0], words[1]);
}

}  // namespace splitlv::rng
