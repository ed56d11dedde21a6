#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>

#include <json.hpp>

#include "detail/bytes.hpp"
#include "volmark/error.hpp"
#include "volmark/volume.hpp"

namespace volmark {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json dims_json(const Dims3& d) { return json::array({d.x, d.y, d.z}); }

Dims3 dims_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::CorruptHeader, "dims must be a 3-element array");
  Dims3 d;
  for (std::size_t i = 0; i < 3; ++i) {
    if (!j[i].is_number_unsigned() || j[i].get<std::uint64_t>() == 0)
      throw Error(ErrorCode::CorruptHeader, "dims must be positive integers");
  }
  d.x = j[0].get<std::size_t>();
  d.y = j[1].get<std::size_t>();
  d.z = j[2].get<std::size_t>();
  return d;
}

std::string_view dtype_tag(DType t) { return t == DType::U8 ? "u8" : "u16"; }

bool ends_with(const fs::path& p, std::string_view suffix) {
  const auto s = p.string();
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

void check_declared_range(std::span<const std::uint16_t> values, int bit_depth) {
  const std::uint32_t max = (std::uint32_t{1} << bit_depth) - 1;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i] > max)
      throw Error(ErrorCode::ValueOutOfRange, "voxel " + std::to_string(i) + " = " + std::to_string(values[i]) +
                                                  " exceeds declared " + std::to_string(bit_depth) + "-bit depth");
}

Volume read_raw(const fs::path& payload_path) {
  const auto header_bytes = detail::read_file(sidecar_path(payload_path));
  const VolumeHeader h = parse_header(std::string(header_bytes.begin(), header_bytes.end()));
  const auto payload = detail::read_file(payload_path);

  const std::size_t width = h.dtype == DType::U8 ? 1 : 2;
  if (payload.size() != h.dims.count() * width)
    throw Error(ErrorCode::CorruptHeader, "payload size " + std::to_string(payload.size()) +
                                              " does not match header dims and dtype");
  std::vector<std::uint16_t> values(h.dims.count());
  for (std::size_t i = 0; i < values.size(); ++i)
    values[i] = width == 1 ? payload[i]
                           : static_cast<std::uint16_t>(payload[2 * i] | (payload[2 * i + 1] << 8));
  check_declared_range(values, h.bit_depth);

  Volume v;
  v.voxels = Grid3<std::uint16_t>(h.dims, std::move(values));
  v.bit_depth = h.bit_depth;
  v.original_dims = h.original_dims;
  v.metadata = h.metadata;
  if (h.bit_depth < 8) throw Error(ErrorCode::CorruptHeader, "bit depth below 8 is not supported");
  validate(v);
  return v;
}

// NIfTI-1 single-file layout (348-byte header). Only the fields needed to
// locate integer voxel data are interpreted.
struct NiftiReader {
  std::span<const std::uint8_t> bytes;
  bool swap = false;

  template <typename T>
  T get(std::size_t offset) const {
    std::array<std::uint8_t, sizeof(T)> raw{};
    std::memcpy(raw.data(), bytes.data() + offset, sizeof(T));
    if (swap) std::reverse(raw.begin(), raw.end());
    T out;
    std::memcpy(&out, raw.data(), sizeof(T));
    return out;
  }
};

constexpr std::size_t kNiftiHeaderSize = 348;
constexpr std::int16_t kNiftiUint8 = 2;
constexpr std::int16_t kNiftiInt16 = 4;
constexpr std::int16_t kNiftiUint16 = 512;

bool looks_like_nifti(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= kNiftiHeaderSize && bytes[344] == 'n' && bytes[345] == '+' && bytes[346] == '1' &&
         bytes[347] == 0;
}

Volume read_nifti(std::span<const std::uint8_t> bytes, std::optional<std::size_t> component_index) {
  if (!looks_like_nifti(bytes)) throw Error(ErrorCode::UnknownFormat, "missing NIfTI-1 \"n+1\" magic");
  NiftiReader r{bytes};
  if (r.get<std::int32_t>(0) != static_cast<std::int32_t>(kNiftiHeaderSize)) {
    r.swap = true;
    if (r.get<std::int32_t>(0) != static_cast<std::int32_t>(kNiftiHeaderSize))
      throw Error(ErrorCode::CorruptHeader, "NIfTI sizeof_hdr is not 348");
  }

  std::array<std::int64_t, 8> dim{};
  for (std::size_t i = 0; i < 8; ++i) dim[i] = r.get<std::int16_t>(40 + 2 * i);
  const auto ndim = dim[0];
  if (ndim < 3 || ndim > 7) throw Error(ErrorCode::CorruptHeader, "NIfTI dim[0] must be in [3, 7]");
  for (std::int64_t i = 1; i <= ndim; ++i)
    if (dim[i] <= 0) throw Error(ErrorCode::CorruptHeader, "non-positive NIfTI dimension");
  for (std::int64_t i = 5; i <= ndim; ++i)
    if (dim[i] != 1) throw Error(ErrorCode::UnknownFormat, "NIfTI volumes beyond 4D are not supported");
  const std::size_t components = ndim >= 4 ? static_cast<std::size_t>(dim[4]) : 1;

  const auto datatype = r.get<std::int16_t>(70);
  std::size_t width = 0;
  switch (datatype) {
    case kNiftiUint8: width = 1; break;
    case kNiftiInt16:
    case kNiftiUint16: width = 2; break;
    default:
      throw Error(ErrorCode::UnknownFormat, "unsupported NIfTI datatype " + std::to_string(datatype) +
                                                " (only u8, i16, u16 are accepted)");
  }
  if (r.get<std::int16_t>(72) != static_cast<std::int16_t>(8 * width))
    throw Error(ErrorCode::CorruptHeader, "NIfTI bitpix disagrees with datatype");

  const float slope = r.get<float>(112);
  const float inter = r.get<float>(116);
  const bool unscaled = slope == 0.0f || std::isnan(slope) || (slope == 1.0f && (inter == 0.0f || std::isnan(inter)));
  if (!unscaled) throw Error(ErrorCode::UnknownFormat, "scaled NIfTI data would need quantization; rejected");

  std::size_t component = 0;
  if (components > 1) {
    if (!component_index) throw Error(ErrorCode::MissingComponentIndex, "4D NIfTI source needs a component index");
    component = *component_index;
  } else if (component_index && *component_index != 0) {
    throw Error(ErrorCode::InvalidArgument, "component index given for a 3D source");
  }
  if (component >= components)
    throw Error(ErrorCode::InvalidArgument, "component index " + std::to_string(component) + " out of range");

  const float vox_offset_f = r.get<float>(108);
  const auto vox_offset = static_cast<std::size_t>(std::max(vox_offset_f, static_cast<float>(kNiftiHeaderSize)));
  const Dims3 dims{static_cast<std::size_t>(dim[1]), static_cast<std::size_t>(dim[2]),
                   static_cast<std::size_t>(dim[3])};
  const std::size_t begin = vox_offset + component * dims.count() * width;
  if (bytes.size() < vox_offset + components * dims.count() * width)
    throw Error(ErrorCode::CorruptHeader, "NIfTI file shorter than its declared voxel payload");

  std::vector<std::uint16_t> values(dims.count());
  NiftiReader data{bytes.subspan(begin), r.swap};
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (datatype == kNiftiUint8) {
      values[i] = data.bytes[i];
    } else if (datatype == kNiftiUint16) {
      values[i] = data.get<std::uint16_t>(2 * i);
    } else {
      const auto s = data.get<std::int16_t>(2 * i);
      if (s < 0)
        throw Error(ErrorCode::ValueOutOfRange, "negative int16 voxel " + std::to_string(s) + " at " + std::to_string(i));
      values[i] = static_cast<std::uint16_t>(s);
    }
  }

  Volume v;
  v.voxels = Grid3<std::uint16_t>(dims, std::move(values));
  v.bit_depth = width == 1 ? 8 : 16;
  return v;
}

}  // namespace

fs::path sidecar_path(const fs::path& payload) { return fs::path(payload.string() + ".json"); }

VolumeHeader header_of(const Volume& v) {
  VolumeHeader h;
  h.dims = v.dims();
  h.bit_depth = v.bit_depth;
  h.dtype = v.bit_depth <= 8 ? DType::U8 : DType::U16;
  h.original_dims = v.original_dims;
  h.metadata = v.metadata;
  return h;
}

std::string serialize_header(const VolumeHeader& h) {
  json j;
  j["dims"] = dims_json(h.dims);
  j["bit_depth"] = h.bit_depth;
  j["dtype"] = dtype_tag(h.dtype);
  j["byte_order"] = h.byte_order;
  if (h.original_dims) j["original_dims"] = dims_json(*h.original_dims);
  j["metadata"] = h.metadata;
  return j.dump(2) + "\n";
}

VolumeHeader parse_header(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::CorruptHeader, std::string("header is not valid JSON: ") + e.what());
  }
  try {
    VolumeHeader h;
    h.dims = dims_from(j.at("dims"));
    h.bit_depth = j.at("bit_depth").get<int>();
    const auto dtype = j.at("dtype").get<std::string>();
    if (dtype == "u8")
      h.dtype = DType::U8;
    else if (dtype == "u16")
      h.dtype = DType::U16;
    else
      throw Error(ErrorCode::CorruptHeader, "unknown dtype tag '" + dtype + "'");
    h.byte_order = j.value("byte_order", std::string("little"));
    if (h.byte_order != "little") throw Error(ErrorCode::CorruptHeader, "only little-endian payloads are supported");
    if (j.contains("original_dims") && !j["original_dims"].is_null()) h.original_dims = dims_from(j["original_dims"]);
    if (j.contains("metadata")) h.metadata = j["metadata"].get<std::map<std::string, std::string>>();

    if (h.bit_depth < 1 || h.bit_depth > 16) throw Error(ErrorCode::CorruptHeader, "bit depth outside [1, 16]");
    if (h.dtype == DType::U8 && h.bit_depth > 8)
      throw Error(ErrorCode::CorruptHeader, "dtype u8 is too narrow for the declared bit depth");
    return h;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::CorruptHeader, std::string("malformed header: ") + e.what());
  }
}

Volume read_volume(const fs::path& path, std::optional<std::size_t> component_index) {
  if (ends_with(path, ".gz")) throw Error(ErrorCode::UnknownFormat, "compressed inputs are not supported");
  if (ends_with(path, ".vmvol.json")) return read_raw(fs::path(path.string().substr(0, path.string().size() - 5)));
  if (ends_with(path, ".vmvol") || fs::exists(sidecar_path(path))) {
    if (component_index && *component_index != 0)
      throw Error(ErrorCode::InvalidArgument, "component index given for a 3D source");
    return read_raw(path);
  }
  const auto bytes = detail::read_file(path);
  if (looks_like_nifti(bytes)) return read_nifti(bytes, component_index);
  throw Error(ErrorCode::UnknownFormat, "unrecognized volume format: " + path.string());
}

void write_volume(const Volume& v, const fs::path& path) {
  validate(v);
  const auto h = header_of(v);
  std::vector<std::uint8_t> payload;
  payload.reserve(v.voxels.size() * (h.dtype == DType::U8 ? 1 : 2));
  for (const auto value : v.voxels) {
    payload.push_back(static_cast<std::uint8_t>(value & 0xFF));
    if (h.dtype == DType::U16) payload.push_back(static_cast<std::uint8_t>(value >> 8));
  }
  detail::write_file(path, payload);
  const auto text = serialize_header(h);
  detail::write_file(sidecar_path(path), std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

}  // namespace volmark
