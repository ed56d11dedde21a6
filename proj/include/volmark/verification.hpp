#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "volmark/bitvector.hpp"
#include "volmark/volume.hpp"

namespace volmark {

inline constexpr double kDefaultAlpha = 1e-6;
inline constexpr std::size_t kMaxBinomialN = 8192;

// Hamming distance / N.
double ber(const BitVector& w, const BitVector& w_hat);

// Normalized correlation of binary vectors; 0 when w_hat is all zero.
double nc(const BitVector& w, const BitVector& w_hat);

// MSE-normalized PSNR with MAX = 2^bit_depth - 1. +infinity for identical volumes.
double psnr(const Volume& reference, const Volume& test);

// log10 of P[X >= k] for X ~ Binomial(N, 1/2), from an exact big-integer
// tail sum.
double binomial_log10_p(std::size_t n, std::size_t k);

struct VerificationReport {
  std::size_t n = 0;
  std::size_t matched_bits = 0;
  double ber = 0.0;
  double nc = 0.0;
  double log10_p = 0.0;
  double alpha = kDefaultAlpha;
  bool integrity_intact = false;
  bool ownership_detected = false;
};

// Integrity check on the reversibly embedded watermark, then the binomial
// ownership test. The reported metrics come from `embedded` when it matches
// `w` exactly, otherwise from `zero` (the pre-stored share path).
VerificationReport verify(const BitVector& w, const std::optional<BitVector>& embedded, const BitVector& zero,
                          double alpha = kDefaultAlpha);

std::string to_json(const VerificationReport& r);

}  // namespace volmark
