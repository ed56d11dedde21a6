#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "volmark/bitvector.hpp"
#include "volmark/lift3d.hpp"
#include "volmark/volume.hpp"

namespace volmark {

// The four designated LLL coefficients of a 2x2x2 cube: A at the cube origin,
// B/C/D its +x/+y/+z neighbours. The other four coefficients are never touched.
struct CubePoints {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;
  std::int64_t d = 0;

  constexpr bool operator==(const CubePoints&) const = default;
};

struct CubeExtraction {
  bool bit = false;
  CubePoints restored;
};

// Doubles the three reference differences and appends `bit` to each, then
// rebuilds A' = ceil((A+B+C+D + D'' - 2) / 4).
CubePoints embed_cube(const CubePoints& p, bool bit) noexcept;

// Majority vote over the parities of the three expanded differences, then
// the exact inverse of embed_cube(). Total over all integer inputs.
CubeExtraction extract_cube(const CubePoints& p) noexcept;

inline constexpr std::uint8_t kLocationMapVersion = 1;

// Side information for extraction: which cubes were skipped because the
// embedded cube would have left the voxel range.
struct LocationMap {
  std::uint8_t version = kLocationMapVersion;
  Dims3 source_dims;
  int bit_depth = 8;
  std::optional<Dims3> original_dims;
  std::uint32_t bits_embedded = 0;
  Dims3 cube_grid;
  // One bit per cube in cube raster order (z fastest, then y, then x).
  BitVector overflow;

  std::size_t cube_count() const noexcept { return cube_grid.count(); }
  std::size_t cube_index(std::size_t cx, std::size_t cy, std::size_t cz) const noexcept {
    return (cx * cube_grid.y + cy) * cube_grid.z + cz;
  }

  bool operator==(const LocationMap&) const = default;
};

struct EmbedResult {
  Volume watermarked;
  LocationMap map;
};

struct ExtractResult {
  BitVector share;
  Volume restored;
};

// Cube-local helpers on the LLL band; `cube` is in cube-grid coordinates.
CubePoints read_cube(const CoeffGrid& lll, Index3 cube) noexcept;
void write_cube(CoeffGrid& lll, Index3 cube, const CubePoints& p) noexcept;

// Cube grid of a volume (dims / 4); throws DimsNotAligned unless every dim
// is a positive multiple of 4.
Dims3 cube_grid_for(const Dims3& volume_dims);

EmbedResult embed(const Volume& v, const BitVector& share);
ExtractResult extract(const Volume& watermarked, const LocationMap& map);

// `.vmloc`: "VMLC", version u8, source dims 3xu32, bit_depth u8, original dims
// 3xu32 (zeros if absent), bits_embedded u32, cube grid 3xu32, packed bitmap,
// CRC32 over all preceding bytes. Little-endian throughout.
std::vector<std::uint8_t> encode_location_map(const LocationMap& map);
LocationMap decode_location_map(std::span<const std::uint8_t> data);
void write_location_map(const LocationMap& map, const std::filesystem::path& path);
LocationMap read_location_map(const std::filesystem::path& path);

}  // namespace volmark
