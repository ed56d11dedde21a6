#include "volmark/keystream.hpp"

#include <openssl/sha.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "volmark/error.hpp"

namespace volmark {

HenonState derive_initial_state(std::span<const std::uint8_t> key) {
  if (key.empty()) throw Error(ErrorCode::EmptyKey, "key must not be empty");
  std::array<std::uint8_t, SHA256_DIGEST_LENGTH> digest{};
  SHA256(key.data(), key.size(), digest.data());

  // Two 20-bit fields: the top 20 bits of digest[0..2] and of digest[3..5].
  auto field = [&](std::size_t off) {
    const std::uint32_t v = (std::uint32_t{digest[off]} << 16) | (std::uint32_t{digest[off + 1]} << 8) |
                            std::uint32_t{digest[off + 2]};
    return v >> 4;
  };
  constexpr double kScale = 1.0 / 16777216.0;  // 2^-24
  HenonState s;
  s.x = 0.05 + static_cast<double>(field(0)) * kScale;
  s.y = 0.05 + static_cast<double>(field(3)) * kScale;
  return s;
}

HenonState derive_initial_state(std::string_view key) {
  return derive_initial_state(std::span(reinterpret_cast<const std::uint8_t*>(key.data()), key.size()));
}

HenonState henon_step(const HenonState& s) noexcept {
  // Built with -ffp-contract=off: no fused multiply-add may merge these steps.
  double t = s.x * s.x;
  t = s.a * t;
  t = 1.0 - t;
  HenonState next = s;
  next.x = t + s.y;
  next.y = s.b * s.x;
  next.n = s.n + 1;
  return next;
}

std::vector<double> henon_sequence(HenonState s0, std::size_t count, std::size_t burn_in) {
  std::vector<double> xs;
  xs.reserve(count);
  HenonState s = s0;
  for (std::size_t i = 0; i < burn_in + count; ++i) {
    s = henon_step(s);
    if (!(std::fabs(s.x) <= 2.0))
      throw Error(ErrorCode::Diverged, "Henon orbit left the basin at iteration " + std::to_string(s.n));
    if (i >= burn_in) xs.push_back(s.x);
  }
  return xs;
}

std::uint32_t interval_index(double u, int k) noexcept {
  return static_cast<std::uint32_t>(std::floor(std::ldexp(u, k)));
}

BitVector binarize_chaotic(std::span<const double> xs, int k, std::size_t n_bits) {
  if (k < 1 || k > 16) throw Error(ErrorCode::InvalidArgument, "bits per value must lie in [1, 16]");
  const std::size_t needed = (n_bits + static_cast<std::size_t>(k) - 1) / static_cast<std::size_t>(k);
  if (xs.size() < needed)
    throw Error(ErrorCode::InsufficientValues,
                "need " + std::to_string(needed) + " chaotic values, got " + std::to_string(xs.size()));

  constexpr double kUpper = 1.0 - 0x1p-52;
  BitVector out(n_bits);
  std::size_t bit = 0;
  for (std::size_t i = 0; i < needed; ++i) {
    const double u = std::clamp((xs[i] + 1.5) / 3.0, 0.0, kUpper);
    const auto index = interval_index(u, k);
    for (int j = k - 1; j >= 0 && bit < n_bits; --j) out.set(bit++, (index >> j) & 1u);
  }
  return out;
}

BitVector keystream(std::string_view key, std::size_t n_bits) {
  const auto s0 = derive_initial_state(key);
  const std::size_t count = (n_bits + kKeystreamBitsPerValue - 1) / kKeystreamBitsPerValue;
  const auto xs = henon_sequence(s0, count, kDefaultBurnIn);
  return binarize_chaotic(xs, kKeystreamBitsPerValue, n_bits);
}

}  // namespace volmark
