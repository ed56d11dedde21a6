#include "volmark/zero_watermark.hpp"

#include <openssl/sha.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <vector>

#include "volmark/error.hpp"
#include "volmark/lift3d.hpp"

namespace volmark {

namespace {

struct Box {
  std::size_t begin;
  std::size_t end;
};

std::vector<Box> boxes(std::size_t length, std::size_t n) {
  std::vector<Box> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t b = i * length / n;
    const std::size_t e = (i + 1) * length / n;
    out[i] = {b, std::max(e, b + 1)};
  }
  return out;
}

void check_lengths(std::size_t w, std::size_t c, std::size_t f) {
  if (w != c || w != f)
    throw Error(ErrorCode::LengthMismatch, "watermark, keystream and features must have equal lengths (" +
                                               std::to_string(w) + ", " + std::to_string(c) + ", " +
                                               std::to_string(f) + ")");
}

}  // namespace

Grid3<std::uint16_t> resample_box_mean(const Volume& v, std::size_t n) {
  const auto& d = v.dims();
  if (d.count() == 0) throw Error(ErrorCode::InvalidArgument, "cannot extract features from an empty volume");
  const auto bx = boxes(d.x, n), by = boxes(d.y, n), bz = boxes(d.z, n);

  Grid3<std::uint16_t> out(Dims3{n, n, n});
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t sum = 0;
        for (std::size_t z = bz[k].begin; z < bz[k].end; ++z)
          for (std::size_t y = by[j].begin; y < by[j].end; ++y)
            for (std::size_t x = bx[i].begin; x < bx[i].end; ++x) sum += v.voxels(x, y, z);
        const std::uint64_t count = (bx[i].end - bx[i].begin) * (by[j].end - by[j].begin) * (bz[k].end - bz[k].begin);
        out(i, j, k) = static_cast<std::uint16_t>((2 * sum + count) / (2 * count));
      }
  return out;
}

FeatureVector extract_features_baseline(const Volume& v, std::size_t n_bits) {
  if (n_bits > kMaxBaselineFeatureBits)
    throw Error(ErrorCode::NTooLarge, "baseline extractor yields at most " + std::to_string(kMaxBaselineFeatureBits) +
                                          " bits, asked for " + std::to_string(n_bits));
  const auto pooled = resample_box_mean(v, kFeatureGrid);
  const auto bands = forward_iwt3(cast<Coeff>(pooled), v.bit_depth);
  const auto& lll = bands[Band::LLL];
  const auto& d = lll.dims();

  std::vector<Coeff> selected;
  selected.reserve(n_bits);
  for (std::size_t x = 0; x < d.x && selected.size() < n_bits; ++x)
    for (std::size_t y = 0; y < d.y && selected.size() < n_bits; ++y)
      for (std::size_t z = 0; z < d.z && selected.size() < n_bits; ++z) selected.push_back(lll(x, y, z));

  FeatureVector f;
  f.extractor_id = std::string(kBaselineExtractorId);
  f.source = std::to_string(kFeatureGrid) + "x" + std::to_string(kFeatureGrid) + "x" + std::to_string(kFeatureGrid);
  f.bits = BitVector(n_bits);
  if (n_bits == 0) return f;

  auto sorted = selected;
  const auto mid = sorted.begin() + static_cast<std::ptrdiff_t>((n_bits - 1) / 2);
  std::nth_element(sorted.begin(), mid, sorted.end());
  const Coeff median = *mid;
  for (std::size_t i = 0; i < n_bits; ++i) f.bits.set(i, selected[i] > median);
  return f;
}

FeatureVector load_external_features(const std::filesystem::path& path, std::size_t n_bits) {
  FeatureVector f;
  f.bits = read_bits(path);
  if (f.bits.size() != n_bits)
    throw Error(ErrorCode::LengthMismatch, "feature file holds " + std::to_string(f.bits.size()) + " bits, expected " +
                                               std::to_string(n_bits));
  f.extractor_id = std::string(kExternalExtractorId);
  f.source = path.filename().string();
  return f;
}

std::string key_id(std::string_view key) {
  std::array<unsigned char, SHA256_DIGEST_LENGTH> digest{};
  SHA256(reinterpret_cast<const unsigned char*>(key.data()), key.size(), digest.data());
  std::string hex;
  char buf[3];
  for (std::size_t i = 0; i < 8; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

OwnershipShare make_ownership_share(const BitVector& watermark, const BitVector& keystream,
                                    const FeatureVector& features) {
  check_lengths(watermark.size(), keystream.size(), features.size());
  OwnershipShare os;
  os.bits = watermark ^ keystream ^ features.bits;
  os.extractor_id = features.extractor_id;
  return os;
}

BitVector recover_watermark(const BitVector& share, const BitVector& keystream, const FeatureVector& features) {
  check_lengths(share.size(), keystream.size(), features.size());
  return share ^ keystream ^ features.bits;
}

BitVector recover_watermark(const OwnershipShare& share, const BitVector& keystream, const FeatureVector& features) {
  return recover_watermark(share.bits, keystream, features);
}

}  // namespace volmark
