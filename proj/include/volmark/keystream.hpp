#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "volmark/bitvector.hpp"

namespace volmark {

struct HenonState {
  double x = 0.0;
  double y = 0.0;
  double a = 1.4;
  double b = 0.3;
  std::uint64_t n = 0;
};

inline constexpr std::size_t kDefaultBurnIn = 1000;
inline constexpr int kKeystreamBitsPerValue = 8;

// SHA-256 of the key; the first two 20-bit fields become x0 and y0 as
// 0.05 + h / 2^24, which lands inside the attractor basin.
HenonState derive_initial_state(std::span<const std::uint8_t> key);
HenonState derive_initial_state(std::string_view key);

// One step of x' = 1 - a x^2 + y, y' = b x in the fixed order
// t = x*x; t = a*t; t = 1 - t; x' = t + y; y' = b*x.
HenonState henon_step(const HenonState& s) noexcept;

// Discards `burn_in` iterates, then returns the next `count` x values.
// Throws Diverged if |x| ever exceeds 2.
std::vector<double> henon_sequence(HenonState s0, std::size_t count, std::size_t burn_in = kDefaultBurnIn);

// k-bit uniform interval thresholding of u = clamp((x + 1.5) / 3, 0, 1 - 2^-52),
// each index emitted MSB first, truncated to `n_bits`.
BitVector binarize_chaotic(std::span<const double> xs, int k, std::size_t n_bits);

// Thresholding of an already-normalized u in [0, 1); the inner step of
// binarize_chaotic().
std::uint32_t interval_index(double u, int k) noexcept;

BitVector keystream(std::string_view key, std::size_t n_bits);

}  // namespace volmark
