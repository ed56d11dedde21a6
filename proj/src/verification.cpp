#include "volmark/verification.hpp"

#include <gmp.h>

#include <cmath>
#include <limits>

#include <json.hpp>

#include "volmark/error.hpp"

namespace volmark {

namespace {

void check_pair(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "bit vectors differ in length");
  if (a.empty()) throw Error(ErrorCode::EmptyVector, "metrics need at least one bit");
}

// RAII wrapper; GMP's C++ bindings would pull in gmpxx for two integers.
struct Mpz {
  mpz_t v;
  Mpz() { mpz_init(v); }
  ~Mpz() { mpz_clear(v); }
  Mpz(const Mpz&) = delete;
  Mpz& operator=(const Mpz&) = delete;
};

}  // namespace

double ber(const BitVector& w, const BitVector& w_hat) {
  check_pair(w, w_hat);
  return static_cast<double>(hamming_distance(w, w_hat)) / static_cast<double>(w.size());
}

double nc(const BitVector& w, const BitVector& w_hat) {
  check_pair(w, w_hat);
  const auto ones_w = w.count();
  if (ones_w == 0) throw Error(ErrorCode::DegenerateReference, "NC is undefined for an all-zero reference");
  const auto ones_hat = w_hat.count();
  if (ones_hat == 0) return 0.0;
  BitVector both = w;
  // a AND b = (a + b - (a XOR b)) / 2 in popcounts.
  const auto overlap = (ones_w + ones_hat - (both ^= w_hat).count()) / 2;
  return static_cast<double>(overlap) / std::sqrt(static_cast<double>(ones_w) * static_cast<double>(ones_hat));
}

double psnr(const Volume& reference, const Volume& test) {
  if (reference.dims() != test.dims()) throw Error(ErrorCode::DimsMismatch, "PSNR needs volumes of equal dims");
  long double sse = 0;
  for (std::size_t i = 0; i < reference.voxels.size(); ++i) {
    const long double diff = static_cast<long double>(reference.voxels[i]) - static_cast<long double>(test.voxels[i]);
    sse += diff * diff;
  }
  if (sse == 0) return std::numeric_limits<double>::infinity();
  const long double mse = sse / static_cast<long double>(reference.voxels.size());
  const long double max = reference.max_value();
  return static_cast<double>(10.0L * std::log10(max * max / mse));
}

double binomial_log10_p(std::size_t n, std::size_t k) {
  if (n > kMaxBinomialN || k > n)
    throw Error(ErrorCode::OutOfRange, "binomial test needs 0 <= k <= N <= " + std::to_string(kMaxBinomialN));
  if (k == 0) return 0.0;

  Mpz tail, term;
  for (std::size_t i = k; i <= n; ++i) {
    mpz_bin_uiui(term.v, n, i);
    mpz_add(tail.v, tail.v, term.v);
  }
  // tail = mantissa * 2^exp with mantissa in [0.5, 1); p = tail / 2^n.
  long exp = 0;
  const double mantissa = mpz_get_d_2exp(&exp, tail.v);
  return std::log10(mantissa) + static_cast<double>(exp - static_cast<long>(n)) * std::log10(2.0);
}

VerificationReport verify(const BitVector& w, const std::optional<BitVector>& embedded, const BitVector& zero,
                          double alpha) {
  if (zero.size() != w.size() || (embedded && embedded->size() != w.size()))
    throw Error(ErrorCode::LengthMismatch, "recovered watermarks must match the reference length");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::InvalidArgument, "alpha must lie in (0, 1)");

  VerificationReport r;
  r.n = w.size();
  r.alpha = alpha;
  r.integrity_intact = embedded && hamming_distance(w, *embedded) == 0;
  const BitVector& tested = r.integrity_intact ? *embedded : zero;
  const std::size_t mismatches = hamming_distance(w, tested);
  r.matched_bits = r.n - mismatches;
  r.ber = ber(w, tested);
  r.nc = nc(w, tested);
  r.log10_p = binomial_log10_p(r.n, r.matched_bits);
  r.ownership_detected = r.log10_p <= std::log10(alpha);
  return r;
}

std::string to_json(const VerificationReport& r) {
  nlohmann::ordered_json j;
  j["N"] = r.n;
  j["matched_bits"] = r.matched_bits;
  j["ber"] = r.ber;
  j["nc"] = r.nc;
  j["log10_p"] = r.log10_p;
  j["alpha"] = r.alpha;
  j["integrity_intact"] = r.integrity_intact;
  j["ownership_detected"] = r.ownership_detected;
  return j.dump(2);
}

}  // namespace volmark
