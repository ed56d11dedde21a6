#include "volmark/bitvector.hpp"

#include <bit>

#include "detail/bytes.hpp"
#include "volmark/error.hpp"

namespace volmark {

namespace {

constexpr char kBitsMagic[5] = "VMBV";

}  // namespace

BitVector::BitVector(std::size_t n, bool fill)
    : size_(n), bytes_((n + 7) / 8, fill ? std::uint8_t{0xFF} : std::uint8_t{0}) {
  // Padding bits past size_ stay zero so byte-wise equality and popcount hold.
  if (fill && (n & 7)) bytes_.back() = static_cast<std::uint8_t>((1u << (n & 7)) - 1);
}

BitVector BitVector::from_string(std::string_view bits) {
  BitVector out(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] != '0' && bits[i] != '1')
      throw Error(ErrorCode::InvalidArgument, "bit string may only contain '0' and '1'");
    out.set(i, bits[i] == '1');
  }
  return out;
}

BitVector BitVector::from_bytes(std::span<const std::uint8_t> bytes, std::size_t n) {
  if (bytes.size() != (n + 7) / 8)
    throw Error(ErrorCode::LengthMismatch, "packed byte count does not match bit length");
  BitVector out(n);
  std::copy(bytes.begin(), bytes.end(), out.bytes_.begin());
  if (n & 7) out.bytes_.back() &= static_cast<std::uint8_t>((1u << (n & 7)) - 1);
  return out;
}

bool BitVector::at(std::size_t i) const {
  if (i >= size_) throw Error(ErrorCode::OutOfBounds, "bit index past end");
  return (*this)[i];
}

void BitVector::set(std::size_t i, bool value) noexcept {
  const auto mask = static_cast<std::uint8_t>(1u << (i & 7));
  if (value)
    bytes_[i >> 3] |= mask;
  else
    bytes_[i >> 3] &= static_cast<std::uint8_t>(~mask);
}

void BitVector::push_back(bool value) {
  if ((size_ & 7) == 0) bytes_.push_back(0);
  ++size_;
  set(size_ - 1, value);
}

std::size_t BitVector::count() const noexcept {
  std::size_t n = 0;
  for (auto b : bytes_) n += static_cast<std::size_t>(std::popcount(b));
  return n;
}

std::string BitVector::to_string() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i)
    if ((*this)[i]) s[i] = '1';
  return s;
}

BitVector& BitVector::operator^=(const BitVector& other) {
  if (other.size_ != size_) throw Error(ErrorCode::LengthMismatch, "XOR of unequal-length bit vectors");
  for (std::size_t i = 0; i < bytes_.size(); ++i) bytes_[i] ^= other.bytes_[i];
  return *this;
}

std::size_t hamming_distance(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::LengthMismatch, "Hamming distance of unequal lengths");
  return (a ^ b).count();
}

std::vector<std::uint8_t> encode_bits(const BitVector& bits) {
  if (bits.size() > 0xFFFFFFFFu) throw Error(ErrorCode::OutOfRange, "bit vector too long for .vmbits");
  detail::ByteWriter w;
  w.tag(kBitsMagic);
  w.u8(kBitsFormatVersion);
  w.u32(static_cast<std::uint32_t>(bits.size()));
  w.raw(bits.bytes());
  w.u32(detail::crc32(bits.bytes()));
  return std::move(w.bytes());
}

BitVector decode_bits(std::span<const std::uint8_t> data) {
  detail::ByteReader r(data);
  if (!r.tag(kBitsMagic)) throw Error(ErrorCode::CorruptFile, "bad .vmbits magic");
  if (const auto version = r.u8(); version != kBitsFormatVersion)
    throw Error(ErrorCode::CorruptFile, "unsupported .vmbits version " + std::to_string(version));
  const std::size_t n = r.u32();
  const auto payload = r.take((n + 7) / 8);
  const auto stored_crc = r.u32();
  if (r.remaining() != 0) throw Error(ErrorCode::CorruptFile, "trailing bytes after .vmbits payload");
  if (detail::crc32(payload) != stored_crc) throw Error(ErrorCode::CorruptFile, ".vmbits CRC mismatch");
  if ((n & 7) && (payload.back() >> (n & 7)) != 0)
    throw Error(ErrorCode::CorruptFile, "non-zero padding bits in .vmbits payload");
  return BitVector::from_bytes(payload, n);
}

void write_bits(const BitVector& bits, const std::filesystem::path& path) {
  detail::write_file(path, encode_bits(bits));
}

BitVector read_bits(const std::filesystem::path& path) { return decode_bits(detail::read_file(path)); }

}  // namespace volmark
