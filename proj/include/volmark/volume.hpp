#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "volmark/grid.hpp"

namespace volmark {

// Integer voxel volume with a declared bit depth in [8, 16].
struct Volume {
  Grid3<std::uint16_t> voxels;
  int bit_depth = 8;
  // Set when the volume was padded; the leading sub-volume of this size is
  // the original content.
  std::optional<Dims3> original_dims;
  std::map<std::string, std::string> metadata;

  const Dims3& dims() const noexcept { return voxels.dims(); }
  std::uint32_t max_value() const noexcept { return (std::uint32_t{1} << bit_depth) - 1; }

  bool operator==(const Volume&) const = default;
};

Volume make_volume(Dims3 dims, int bit_depth, std::uint16_t fill = 0);

// Throws unless dims are non-empty, bit depth is in [8, 16], every voxel fits
// the depth, and original_dims (if any) fits inside dims.
void validate(const Volume& v);

// Converts a signed grid to a volume, throwing ValueOutOfRange if any value
// falls outside [0, 2^bit_depth - 1]. Nothing is clamped.
Volume to_volume(const Grid3<std::int32_t>& g, int bit_depth);

enum class DType { U8, U16 };

struct VolumeHeader {
  Dims3 dims;
  int bit_depth = 8;
  DType dtype = DType::U8;
  std::string byte_order = "little";
  std::optional<Dims3> original_dims;
  std::map<std::string, std::string> metadata;

  bool operator==(const VolumeHeader&) const = default;
};

VolumeHeader header_of(const Volume& v);
std::string serialize_header(const VolumeHeader& h);
VolumeHeader parse_header(const std::string& text);

// Reads a `.vmvol` container (payload plus `.vmvol.json` sidecar) or an
// uncompressed integer NIfTI-1 file. `component_index` selects the 3D volume
// of a 4D NIfTI source.
Volume read_volume(const std::filesystem::path& path, std::optional<std::size_t> component_index = {});

// Writes the `.vmvol` payload at `path` and the header at `path` + ".json".
void write_volume(const Volume& v, const std::filesystem::path& path);

std::filesystem::path sidecar_path(const std::filesystem::path& payload);

// Rounds every dim up to a multiple of `multiple` (2 or 4) by edge
// replication and records original_dims. Aligned input is returned as is.
Volume pad_to_multiple(const Volume& v, std::size_t multiple);

Volume crop_to_original(const Volume& v);

}  // namespace volmark
