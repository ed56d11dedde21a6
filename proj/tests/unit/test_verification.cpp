#include <doctest.h>

#include <cmath>
#include <random>

#include "test_support.hpp"
#include "volmark/verification.hpp"

using namespace volmark;
using volmark::testing::code_of;

TEST_SUITE("verification") {
  TEST_CASE("BER") {
    std::mt19937_64 rng(1);
    const auto w = volmark::testing::random_bits(1024, rng);
    auto flipped = w;
    for (std::size_t i = 0; i < 10; ++i) flipped.flip(i * 97);
    CHECK(ber(w, w) == 0.0);
    CHECK(ber(w, flipped) == doctest::Approx(0.009766).epsilon(1e-4));
    CHECK(ber(w, flipped) == 10.0 / 1024.0);
    CHECK(ber(w, w ^ BitVector(1024, true)) == 1.0);
    CHECK(code_of([&] { ber(w, BitVector(10)); }) == ErrorCode::LengthMismatch);
    CHECK(code_of([] { ber(BitVector{}, BitVector{}); }) == ErrorCode::EmptyVector);
  }

  TEST_CASE("property: BER symmetry and triangle inequality") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 500; ++i) {
      const std::size_t n = 1 + rng() % 300;
      const auto a = volmark::testing::random_bits(n, rng);
      const auto b = volmark::testing::random_bits(n, rng);
      const auto c = volmark::testing::random_bits(n, rng);
      REQUIRE(ber(a, b) == ber(b, a));
      REQUIRE(ber(a, c) <= ber(a, b) + ber(b, c) + 1e-15);
    }
  }

  TEST_CASE("NC") {
    const auto ones = BitVector::from_string("1111");
    CHECK(nc(ones, ones) == 1.0);
    std::mt19937_64 rng(8);
    for (int i = 0; i < 200; ++i) {
      auto w = volmark::testing::random_bits(1 + rng() % 2048, rng);
      if (w.count() == 0) continue;
      REQUIRE(nc(w, w) == 1.0);
    }
    CHECK(nc(ones, BitVector::from_string("1100")) == doctest::Approx(0.7071).epsilon(1e-4));
    CHECK(nc(BitVector::from_string("1100"), BitVector::from_string("0011")) == 0.0);
    CHECK(nc(ones, BitVector(4)) == 0.0);
    CHECK(code_of([] { nc(BitVector(4), BitVector(4, true)); }) == ErrorCode::DegenerateReference);
  }

  TEST_CASE("PSNR") {
    const Volume a = make_volume({16, 16, 16}, 8, 100);
    CHECK(std::isinf(psnr(a, a)));
    CHECK(psnr(a, a) > 0);
    const Volume b = make_volume({16, 16, 16}, 8, 101);
    CHECK(psnr(a, b) == doctest::Approx(48.1308).epsilon(1e-5));
    Volume c = make_volume({16, 16, 16}, 8, 0);
    Volume d = c;
    d.voxels[123] = 255;
    CHECK(psnr(c, d) == doctest::Approx(36.1236).epsilon(1e-5));
    CHECK(code_of([&] { psnr(a, make_volume({16, 16, 8}, 8)); }) == ErrorCode::DimsMismatch);
    // MAX follows the bit depth.
    const Volume e = make_volume({4, 4, 4}, 16, 10), f = make_volume({4, 4, 4}, 16, 11);
    CHECK(psnr(e, f) == doctest::Approx(20 * std::log10(65535.0)));
  }

  TEST_CASE("binomial tail examples") {
    CHECK(binomial_log10_p(10, 0) == 0.0);
    CHECK(binomial_log10_p(1024, 0) == 0.0);
    CHECK(binomial_log10_p(10, 5) == doctest::Approx(std::log10(638.0 / 1024.0)).epsilon(1e-13));
    CHECK(binomial_log10_p(1024, 1024) == doctest::Approx(-1024 * std::log10(2.0)).epsilon(1e-13));
    CHECK(binomial_log10_p(1024, 1024) == doctest::Approx(-308.25).epsilon(1e-4));
    CHECK(binomial_log10_p(8192, 8192) == doctest::Approx(-8192 * std::log10(2.0)).epsilon(1e-13));
    CHECK(code_of([] { binomial_log10_p(10, 11); }) == ErrorCode::OutOfRange);
    CHECK(code_of([] { binomial_log10_p(8193, 1); }) == ErrorCode::OutOfRange);
  }

  TEST_CASE("property: binomial tail matches brute-force enumeration for N <= 20") {
    for (std::size_t n = 1; n <= 20; ++n) {
      std::vector<std::uint64_t> by_k(n + 1, 0);
      for (std::uint64_t outcome = 0; outcome < (std::uint64_t{1} << n); ++outcome)
        ++by_k[static_cast<std::size_t>(__builtin_popcountll(outcome))];
      std::uint64_t tail = 0;
      for (std::size_t k = n + 1; k-- > 0;) {
        tail += by_k[k];
        const double expected = std::log10(static_cast<double>(tail)) - static_cast<double>(n) * std::log10(2.0);
        REQUIRE(binomial_log10_p(n, k) == doctest::Approx(expected).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("property: tail is monotone in k and majority is never significant") {
    for (std::size_t n : {10u, 64u, 100u, 1024u, 4096u}) {
      double prev = 0.0;
      for (std::size_t k = 0; k <= n; ++k) {
        const double p = binomial_log10_p(n, k);
        REQUIRE(p <= prev);
        prev = p;
      }
    }
    for (std::size_t n = 10; n <= 2000; n += 2) REQUIRE(binomial_log10_p(n, (n + 1) / 2) > std::log10(0.3));
  }

  TEST_CASE("verify: intact pipeline") {
    std::mt19937_64 rng(3);
    const auto w = volmark::testing::random_bits(1024, rng);
    const auto r = verify(w, w, volmark::testing::random_bits(1024, rng));
    CHECK(r.integrity_intact);
    CHECK(r.ber == 0.0);
    CHECK(r.nc == doctest::Approx(1.0));
    CHECK(r.matched_bits == 1024);
    CHECK(r.log10_p == doctest::Approx(-1024 * std::log10(2.0)));
    CHECK(r.ownership_detected);
  }

  TEST_CASE("verify: zero-watermark path at 90% agreement is detected") {
    std::mt19937_64 rng(4);
    const auto w = volmark::testing::random_bits(1024, rng);
    auto zero = w;
    for (std::size_t i = 0; i < 102; ++i) zero.flip(i * 10);
    auto broken = w;
    broken.flip(0);
    const auto r = verify(w, broken, zero);
    CHECK_FALSE(r.integrity_intact);
    CHECK(r.matched_bits == 922);
    CHECK(r.log10_p < -150);
    CHECK(r.ownership_detected);
    const auto none = verify(w, std::nullopt, zero);
    CHECK_FALSE(none.integrity_intact);
    CHECK(none.log10_p == r.log10_p);
  }

  TEST_CASE("verify: Monte Carlo under the null hypothesis") {
    std::mt19937_64 rng(5);
    const auto w = volmark::testing::random_bits(1024, rng);
    int detections = 0;
    double mean_p = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const auto r = verify(w, std::nullopt, volmark::testing::random_bits(1024, rng));
      detections += r.ownership_detected;
      mean_p += std::pow(10.0, r.log10_p) / 1000.0;
    }
    CHECK(detections == 0);
    CHECK(mean_p > 0.4);
    CHECK(mean_p < 0.6);
  }

  TEST_CASE("verify: alpha and argument checks") {
    const auto w = BitVector::from_string("1111111111111111111111111111111111111111");  // 40 bits
    auto zero = w;
    for (std::size_t i = 0; i < 5; ++i) zero.flip(i);
    // P[X >= 35 | N = 40] is about 6.9e-7.
    CHECK(verify(w, std::nullopt, zero).ownership_detected);
    CHECK_FALSE(verify(w, std::nullopt, zero, 1e-7).ownership_detected);
    CHECK(verify(w, std::nullopt, zero, 1e-6).alpha == 1e-6);
    CHECK(code_of([&] { verify(w, std::nullopt, zero, 0.0); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { verify(w, std::nullopt, zero, 1.0); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { verify(w, std::nullopt, BitVector(3)); }) == ErrorCode::LengthMismatch);
    CHECK(code_of([&] { verify(w, BitVector(3), zero); }) == ErrorCode::LengthMismatch);
  }

  TEST_CASE("report document") {
    const auto w = BitVector::from_string("1111");
    const auto text = to_json(verify(w, w, w, 0.5));
    CHECK(text.find("\"N\": 4") != std::string::npos);
    CHECK(text.find("\"integrity_intact\": true") != std::string::npos);
    CHECK(text.find("\"ownership_detected\": true") != std::string::npos);
    CHECK(text.find("\"N\"") < text.find("\"matched_bits\""));
  }
}
