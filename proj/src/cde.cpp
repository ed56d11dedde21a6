#include "volmark/cde.hpp"

#include <algorithm>

#include "detail/bytes.hpp"
#include "volmark/error.hpp"

namespace volmark {

namespace {

constexpr char kMapMagic[5] = "VMLC";

constexpr std::int64_t floor_div4(std::int64_t n) noexcept { return n >= 0 ? n / 4 : -((-n + 3) / 4); }
constexpr std::int64_t ceil_div4(std::int64_t n) noexcept { return -floor_div4(-n); }
constexpr std::int64_t floor_div2(std::int64_t n) noexcept { return n >= 0 ? n / 2 : -((-n + 1) / 2); }
constexpr bool is_odd(std::int64_t n) noexcept { return (n % 2) != 0; }

bool footprint_in_range(const SubBands& bands, Index3 cube, std::int32_t max) {
  const auto block = local_inverse_block(bands, Index3{2 * cube.x, 2 * cube.y, 2 * cube.z});
  return std::all_of(block.begin(), block.end(), [max](std::int32_t v) { return v >= 0 && v <= max; });
}

void put_dims(detail::ByteWriter& w, const Dims3& d) {
  for (auto n : {d.x, d.y, d.z}) {
    if (n > 0xFFFFFFFFu) throw Error(ErrorCode::OutOfRange, "dimension too large for .vmloc");
    w.u32(static_cast<std::uint32_t>(n));
  }
}

Dims3 get_dims(detail::ByteReader& r) {
  Dims3 d;
  d.x = r.u32();
  d.y = r.u32();
  d.z = r.u32();
  return d;
}

}  // namespace

CubePoints embed_cube(const CubePoints& p, bool bit) noexcept {
  const std::int64_t b = bit ? 1 : 0;
  const std::int64_t ab = 2 * (p.a - p.b) + b;
  const std::int64_t ac = 2 * (p.a - p.c) + b;
  const std::int64_t ad = 2 * (p.a - p.d) + b;
  const std::int64_t a = ceil_div4(p.a + p.b + p.c + p.d + ab + ac + ad - 2);
  return {a, a - ab, a - ac, a - ad};
}

CubeExtraction extract_cube(const CubePoints& p) noexcept {
  const std::int64_t ab2 = p.a - p.b;
  const std::int64_t ac2 = p.a - p.c;
  const std::int64_t ad2 = p.a - p.d;
  const int odd = int{is_odd(ab2)} + int{is_odd(ac2)} + int{is_odd(ad2)};
  const bool bit = odd >= 2;
  const std::int64_t b = bit ? 1 : 0;
  // Exact when the parity agrees with the vote; floor keeps the map total otherwise.
  const std::int64_t ab = floor_div2(ab2 - b);
  const std::int64_t ac = floor_div2(ac2 - b);
  const std::int64_t ad = floor_div2(ad2 - b);
  const std::int64_t a = floor_div4(p.a + p.b + p.c + p.d + ab + ac + ad + 2);
  return {bit, {a, a - ab, a - ac, a - ad}};
}

CubePoints read_cube(const CoeffGrid& lll, Index3 cube) noexcept {
  const std::size_t x = 2 * cube.x, y = 2 * cube.y, z = 2 * cube.z;
  return {lll(x, y, z), lll(x + 1, y, z), lll(x, y + 1, z), lll(x, y, z + 1)};
}

void write_cube(CoeffGrid& lll, Index3 cube, const CubePoints& p) noexcept {
  const std::size_t x = 2 * cube.x, y = 2 * cube.y, z = 2 * cube.z;
  lll(x, y, z) = static_cast<Coeff>(p.a);
  lll(x + 1, y, z) = static_cast<Coeff>(p.b);
  lll(x, y + 1, z) = static_cast<Coeff>(p.c);
  lll(x, y, z + 1) = static_cast<Coeff>(p.d);
}

Dims3 cube_grid_for(const Dims3& d) {
  if (d.x == 0 || d.y == 0 || d.z == 0 || d.x % 4 || d.y % 4 || d.z % 4)
    throw Error(ErrorCode::DimsNotAligned, "embedding needs every dim to be a positive multiple of 4, got " +
                                               std::to_string(d.x) + "x" + std::to_string(d.y) + "x" +
                                               std::to_string(d.z));
  return {d.x / 4, d.y / 4, d.z / 4};
}

EmbedResult embed(const Volume& v, const BitVector& share) {
  validate(v);
  LocationMap map;
  map.source_dims = v.dims();
  map.bit_depth = v.bit_depth;
  map.original_dims = v.original_dims;
  map.cube_grid = cube_grid_for(v.dims());
  map.overflow = BitVector(map.cube_count());

  if (share.empty()) return {v, map};

  SubBands bands = forward_iwt3(v);
  auto& lll = bands[Band::LLL];
  const auto max = static_cast<std::int32_t>(v.max_value());
  const auto& g = map.cube_grid;

  std::size_t next = 0;
  for (std::size_t cx = 0; cx < g.x && next < share.size(); ++cx)
    for (std::size_t cy = 0; cy < g.y && next < share.size(); ++cy)
      for (std::size_t cz = 0; cz < g.z && next < share.size(); ++cz) {
        const Index3 cube{cx, cy, cz};
        const auto original = read_cube(lll, cube);
        write_cube(lll, cube, embed_cube(original, share[next]));
        if (footprint_in_range(bands, cube, max)) {
          ++next;
        } else {
          // Skipped cubes keep their bit for the next cube.
          write_cube(lll, cube, original);
          map.overflow.set(map.cube_index(cx, cy, cz), true);
        }
      }

  if (next < share.size())
    throw Error(ErrorCode::InsufficientCapacity, "only " + std::to_string(next) + " of " +
                                                     std::to_string(share.size()) + " bits fit in " +
                                                     std::to_string(map.cube_count()) + " cubes");
  map.bits_embedded = static_cast<std::uint32_t>(share.size());

  Volume out = to_volume(inverse_iwt3(bands), v.bit_depth);
  out.original_dims = v.original_dims;
  out.metadata = v.metadata;
  return {std::move(out), std::move(map)};
}

ExtractResult extract(const Volume& watermarked, const LocationMap& map) {
  if (map.version != kLocationMapVersion)
    throw Error(ErrorCode::MapVersionUnsupported, "location map version " + std::to_string(map.version));
  if (watermarked.dims() != map.source_dims || watermarked.bit_depth != map.bit_depth)
    throw Error(ErrorCode::DimsMismatch, "volume does not match the location map's source dims/bit depth");
  if (cube_grid_for(map.source_dims) != map.cube_grid || map.overflow.size() != map.cube_count())
    throw Error(ErrorCode::DimsMismatch, "location map cube grid is inconsistent with its source dims");

  ExtractResult result;
  SubBands bands = forward_iwt3(watermarked);
  auto& lll = bands[Band::LLL];
  const auto& g = map.cube_grid;

  std::size_t taken = 0;
  for (std::size_t cx = 0; cx < g.x && taken < map.bits_embedded; ++cx)
    for (std::size_t cy = 0; cy < g.y && taken < map.bits_embedded; ++cy)
      for (std::size_t cz = 0; cz < g.z && taken < map.bits_embedded; ++cz) {
        if (map.overflow[map.cube_index(cx, cy, cz)]) continue;
        const Index3 cube{cx, cy, cz};
        const auto e = extract_cube(read_cube(lll, cube));
        result.share.push_back(e.bit);
        write_cube(lll, cube, e.restored);
        ++taken;
      }
  if (taken < map.bits_embedded)
    throw Error(ErrorCode::DimsMismatch, "location map claims more bits than unmarked cubes");

  result.restored = to_volume(inverse_iwt3(bands), watermarked.bit_depth);
  result.restored.metadata = watermarked.metadata;
  if (map.original_dims) {
    result.restored.original_dims = map.original_dims;
    result.restored = crop_to_original(result.restored);
  }
  return result;
}

std::vector<std::uint8_t> encode_location_map(const LocationMap& map) {
  detail::ByteWriter w;
  w.tag(kMapMagic);
  w.u8(map.version);
  put_dims(w, map.source_dims);
  w.u8(static_cast<std::uint8_t>(map.bit_depth));
  put_dims(w, map.original_dims.value_or(Dims3{}));
  w.u32(map.bits_embedded);
  put_dims(w, map.cube_grid);
  w.raw(map.overflow.bytes());
  const auto crc = detail::crc32(w.bytes());
  w.u32(crc);
  return std::move(w.bytes());
}

LocationMap decode_location_map(std::span<const std::uint8_t> data) {
  detail::ByteReader r(data);
  if (!r.tag(kMapMagic)) throw Error(ErrorCode::CorruptFile, "bad .vmloc magic");
  LocationMap map;
  map.version = r.u8();
  if (map.version != kLocationMapVersion)
    throw Error(ErrorCode::MapVersionUnsupported, "location map version " + std::to_string(map.version));
  map.source_dims = get_dims(r);
  map.bit_depth = r.u8();
  const Dims3 original = get_dims(r);
  if (original != Dims3{}) map.original_dims = original;
  map.bits_embedded = r.u32();
  map.cube_grid = get_dims(r);
  const std::size_t cubes = map.cube_grid.count();
  map.overflow = BitVector::from_bytes(r.take((cubes + 7) / 8), cubes);
  const std::size_t body = r.position();
  const auto stored_crc = r.u32();
  if (r.remaining() != 0) throw Error(ErrorCode::CorruptFile, "trailing bytes after .vmloc payload");
  if (detail::crc32(data.first(body)) != stored_crc) throw Error(ErrorCode::CorruptFile, ".vmloc CRC mismatch");
  return map;
}

void write_location_map(const LocationMap& map, const std::filesystem::path& path) {
  detail::write_file(path, encode_location_map(map));
}

LocationMap read_location_map(const std::filesystem::path& path) {
  return decode_location_map(detail::read_file(path));
}

}  // namespace volmark
