#include <doctest.h>

#include <random>

#include "test_support.hpp"
#include "volmark/bitvector.hpp"

using namespace volmark;
using volmark::testing::code_of;

TEST_SUITE("bitvector") {
  TEST_CASE("string round trip and packing is LSB first") {
    const auto b = BitVector::from_string("1011000001");
    CHECK(b.size() == 10);
    CHECK(b.to_string() == "1011000001");
    REQUIRE(b.bytes().size() == 2);
    CHECK(b.bytes()[0] == 0b00001101);
    CHECK(b.bytes()[1] == 0b00000010);
    CHECK(b.count() == 4);
    CHECK(code_of([] { BitVector::from_string("10x"); }) == ErrorCode::InvalidArgument);
  }

  TEST_CASE("xor and hamming distance") {
    const auto a = BitVector::from_string("1010");
    const auto b = BitVector::from_string("1100");
    CHECK((a ^ b).to_string() == "0110");
    CHECK(hamming_distance(a, b) == 2);
    CHECK(code_of([&] { hamming_distance(a, BitVector(3)); }) == ErrorCode::LengthMismatch);
    CHECK(code_of([&] { a.at(4); }) == ErrorCode::OutOfBounds);
  }

  TEST_CASE("property: .vmbits round trip for lengths 0..300") {
    std::mt19937_64 rng(3);
    for (std::size_t n = 0; n <= 300; ++n) {
      const auto bits = volmark::testing::random_bits(n, rng);
      const auto enc = encode_bits(bits);
      CHECK(enc.size() == 4 + 1 + 4 + (n + 7) / 8 + 4);
      REQUIRE(decode_bits(enc) == bits);
    }
  }

  TEST_CASE(".vmbits corruption is CorruptFile") {
    const auto enc = encode_bits(BitVector::from_string("1100101011"));
    // The length field is outside the checksum; see the trailing-bytes checks below.
    for (std::size_t i = 0; i < enc.size(); ++i) {
      if (i >= 5 && i < 9) continue;
      auto bad = enc;
      bad[i] ^= 0x01;
      CHECK(code_of([&] { decode_bits(bad); }).has_value());
    }
    auto relabeled = enc;
    relabeled[5] = 30;
    CHECK(code_of([&] { decode_bits(relabeled); }) == ErrorCode::CorruptFile);
    auto longer = enc;
    longer.push_back(0);
    CHECK(code_of([&] { decode_bits(longer); }) == ErrorCode::CorruptFile);
    auto shorter = enc;
    shorter.pop_back();
    CHECK(code_of([&] { decode_bits(shorter); }) == ErrorCode::CorruptFile);
  }

  TEST_CASE(".vmbits files") {
    volmark::testing::TempDir dir("bits");
    const auto bits = BitVector::from_string("0111001");
    write_bits(bits, dir / "f.vmbits");
    CHECK(read_bits(dir / "f.vmbits") == bits);
    CHECK(code_of([&] { read_bits(dir / "missing.vmbits"); }) == ErrorCode::IoFailure);
  }
}
