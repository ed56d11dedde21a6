#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "volmark/bitvector.hpp"
#include "volmark/grid.hpp"
#include "volmark/volume.hpp"

namespace volmark {

inline constexpr std::size_t kDefaultWatermarkBits = 1024;
inline constexpr std::size_t kFeatureGrid = 32;
inline constexpr std::size_t kMaxBaselineFeatureBits = 4096;  // (32/2)^3 LLL coefficients
inline constexpr std::string_view kBaselineExtractorId = "baseline-v1";
inline constexpr std::string_view kExternalExtractorId = "external";

struct FeatureVector {
  BitVector bits;
  std::string extractor_id;
  // Resolution the features were computed at, e.g. "32x32x32".
  std::string source;

  std::size_t size() const noexcept { return bits.size(); }
};

struct OwnershipShare {
  BitVector bits;
  // First 8 bytes of SHA-256(key), hex. Identifies the key without revealing it.
  std::string key_id;
  std::string extractor_id;
  std::int64_t created_unix = 0;

  std::size_t size() const noexcept { return bits.size(); }
};

// Box-mean resampling onto an n^3 grid. Box i along an axis of length L
// covers [floor(i L / n), floor((i + 1) L / n)), widened to one voxel when
// empty; means round half up.
Grid3<std::uint16_t> resample_box_mean(const Volume& v, std::size_t n = kFeatureGrid);

// Deterministic integer feature extractor: 32^3 box-mean resampling, one
// level of 3D-IWT, the first `n_bits` LLL coefficients in z-fastest raster
// order, thresholded strictly above their lower median.
FeatureVector extract_features_baseline(const Volume& v, std::size_t n_bits = kDefaultWatermarkBits);

// Reads a `.vmbits` feature file written by an external extractor.
FeatureVector load_external_features(const std::filesystem::path& path, std::size_t n_bits);

std::string key_id(std::string_view key);

// OS = w XOR c XOR f.
OwnershipShare make_ownership_share(const BitVector& watermark, const BitVector& keystream,
                                    const FeatureVector& features);

BitVector recover_watermark(const OwnershipShare& share, const BitVector& keystream, const FeatureVector& features);
BitVector recover_watermark(const BitVector& share, const BitVector& keystream, const FeatureVector& features);

}  // namespace volmark
