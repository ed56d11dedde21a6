#include "volmark/volume.hpp"

#include <algorithm>

#include "volmark/error.hpp"

namespace volmark {

Volume make_volume(Dims3 dims, int bit_depth, std::uint16_t fill) {
  Volume v;
  v.voxels = Grid3<std::uint16_t>(dims, fill);
  v.bit_depth = bit_depth;
  return v;
}

void validate(const Volume& v) {
  if (v.bit_depth < 8 || v.bit_depth > 16)
    throw Error(ErrorCode::InvalidArgument, "bit depth must lie in [8, 16], got " + std::to_string(v.bit_depth));
  const auto& d = v.dims();
  if (d.x == 0 || d.y == 0 || d.z == 0) throw Error(ErrorCode::InvalidArgument, "volume has an empty dimension");
  if (v.original_dims) {
    const auto& o = *v.original_dims;
    if (o.x == 0 || o.y == 0 || o.z == 0 || o.x > d.x || o.y > d.y || o.z > d.z)
      throw Error(ErrorCode::InvalidArgument, "original_dims must be positive and fit inside dims");
  }
  const auto max = v.max_value();
  for (std::size_t i = 0; i < v.voxels.size(); ++i)
    if (v.voxels[i] > max)
      throw Error(ErrorCode::ValueOutOfRange, "voxel " + std::to_string(i) + " = " + std::to_string(v.voxels[i]) +
                                                  " exceeds " + std::to_string(v.bit_depth) + "-bit range");
}

Volume to_volume(const Grid3<std::int32_t>& g, int bit_depth) {
  Volume v = make_volume(g.dims(), bit_depth);
  const auto max = static_cast<std::int32_t>(v.max_value());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] < 0 || g[i] > max)
      throw Error(ErrorCode::ValueOutOfRange,
                  "value " + std::to_string(g[i]) + " at " + std::to_string(i) + " outside voxel range");
    v.voxels[i] = static_cast<std::uint16_t>(g[i]);
  }
  return v;
}

Volume pad_to_multiple(const Volume& v, std::size_t multiple) {
  if (multiple != 2 && multiple != 4) throw Error(ErrorCode::InvalidArgument, "padding multiple must be 2 or 4");
  const auto& d = v.dims();
  auto round_up = [multiple](std::size_t n) { return (n + multiple - 1) / multiple * multiple; };
  const Dims3 padded{round_up(d.x), round_up(d.y), round_up(d.z)};
  if (padded == d) return v;

  Volume out = v;
  out.voxels = Grid3<std::uint16_t>(padded);
  for (std::size_t z = 0; z < padded.z; ++z)
    for (std::size_t y = 0; y < padded.y; ++y)
      for (std::size_t x = 0; x < padded.x; ++x)
        out.voxels(x, y, z) = v.voxels(std::min(x, d.x - 1), std::min(y, d.y - 1), std::min(z, d.z - 1));
  if (!out.original_dims) out.original_dims = d;
  return out;
}

Volume crop_to_original(const Volume& v) {
  if (!v.original_dims) throw Error(ErrorCode::MissingOriginalDims, "volume carries no original_dims");
  const auto o = *v.original_dims;
  const auto& d = v.dims();
  if (o.x > d.x || o.y > d.y || o.z > d.z) throw Error(ErrorCode::InvalidArgument, "original_dims exceed dims");
  Volume out = v;
  out.original_dims.reset();
  out.voxels = Grid3<std::uint16_t>(o);
  for (std::size_t z = 0; z < o.z; ++z)
    for (std::size_t y = 0; y < o.y; ++y)
      for (std::size_t x = 0; x < o.x; ++x) out.voxels(x, y, z) = v.voxels(x, y, z);
  return out;
}

}  // namespace volmark
