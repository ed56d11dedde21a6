#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace volmark {

// Packed bit sequence. Bit i lives in byte i/8 at position i%8 (LSB first),
// which is also the on-disk layout of `.vmbits` files.
class BitVector {
 public:
  BitVector() = default;
  explicit BitVector(std::size_t n, bool fill = false);

  // Parses a string of '0'/'1' characters, index 0 first.
  static BitVector from_string(std::string_view bits);
  static BitVector from_bytes(std::span<const std::uint8_t> bytes, std::size_t n);

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  bool operator[](std::size_t i) const noexcept { return (bytes_[i >> 3] >> (i & 7)) & 1u; }
  bool at(std::size_t i) const;
  void set(std::size_t i, bool value) noexcept;
  void flip(std::size_t i) noexcept { bytes_[i >> 3] ^= static_cast<std::uint8_t>(1u << (i & 7)); }
  void push_back(bool value);

  std::size_t count() const noexcept;
  std::span<const std::uint8_t> bytes() const noexcept { return bytes_; }
  std::string to_string() const;

  BitVector& operator^=(const BitVector& other);
  friend BitVector operator^(BitVector lhs, const BitVector& rhs) { return lhs ^= rhs; }

  bool operator==(const BitVector&) const = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint8_t> bytes_;
};

std::size_t hamming_distance(const BitVector& a, const BitVector& b);

// `.vmbits`: "VMBV", version u8, length u32 LE, packed bits, CRC32(packed bits) u32 LE.
inline constexpr std::uint8_t kBitsFormatVersion = 1;

std::vector<std::uint8_t> encode_bits(const BitVector& bits);
BitVector decode_bits(std::span<const std::uint8_t> data);
void write_bits(const BitVector& bits, const std::filesystem::path& path);
BitVector read_bits(const std::filesystem::path& path);

}  // namespace volmark
