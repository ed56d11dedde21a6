#include "volmark/attack.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "detail/jpeg.hpp"
#include "volmark/error.hpp"

namespace volmark {

namespace {

using nlohmann::json;

constexpr std::array<std::pair<AttackKind, std::string_view>, 11> kKindNames{{
    {AttackKind::Gaussian, "gaussian"},
    {AttackKind::SaltPepper, "saltpepper"},
    {AttackKind::Jpeg, "jpeg"},
    {AttackKind::Median, "median"},
    {AttackKind::Average, "average"},
    {AttackKind::Scale, "scale"},
    {AttackKind::CropZ, "crop_z"},
    {AttackKind::Rotate, "rotate"},
    {AttackKind::Translate, "translate"},
    {AttackKind::RandomCrop, "random_crop"},
    {AttackKind::Hybrid, "hybrid"},
}};

std::string_view level_name(AttackKind k) {
  switch (k) {
    case AttackKind::Jpeg: return "q";
    case AttackKind::Median:
    case AttackKind::Average: return "w";
    case AttackKind::Scale: return "f";
    case AttackKind::Rotate: return "theta";
    default: return "p";
  }
}

double default_level(AttackKind k) {
  switch (k) {
    case AttackKind::Jpeg: return 100.0;
    case AttackKind::Median:
    case AttackKind::Average: return 3.0;
    case AttackKind::Scale: return 1.0;
    default: return 0.0;
  }
}

Plane parse_plane(std::string_view s) {
  if (s == "XY" || s == "xy") return Plane::XY;
  if (s == "XZ" || s == "xz") return Plane::XZ;
  if (s == "YZ" || s == "yz") return Plane::YZ;
  throw Error(ErrorCode::BadParameter, "plane must be XY, XZ or YZ");
}

std::string_view plane_name(Plane p) { return p == Plane::XY ? "XY" : p == Plane::XZ ? "XZ" : "YZ"; }

Axis parse_axis(std::string_view s) {
  if (s == "x" || s == "X") return Axis::X;
  if (s == "y" || s == "Y") return Axis::Y;
  if (s == "z" || s == "Z") return Axis::Z;
  throw Error(ErrorCode::BadParameter, "axis must be x, y or z");
}

std::string_view axis_name(Axis a) { return a == Axis::X ? "x" : a == Axis::Y ? "y" : "z"; }

double parse_number(std::string_view s) {
  std::istringstream in{std::string(s)};
  double v = 0.0;
  in >> v;
  if (!in || !in.eof()) throw Error(ErrorCode::BadParameter, "not a number: '" + std::string(s) + "'");
  return v;
}

std::string format_number(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::BadParameter, what);
}

std::uint16_t round_clamp(double value, std::uint32_t max) {
  const double r = std::floor(value + 0.5);
  if (r <= 0.0) return 0;
  if (r >= static_cast<double>(max)) return static_cast<std::uint16_t>(max);
  return static_cast<std::uint16_t>(r);
}

// Trilinear sample with zero fill outside [0, dim - 1] on any axis.
double sample_trilinear(const Grid3<std::uint16_t>& g, double fx, double fy, double fz) {
  const auto& d = g.dims();
  constexpr double kEps = 1e-9;
  if (fx < -kEps || fy < -kEps || fz < -kEps || fx > static_cast<double>(d.x - 1) + kEps ||
      fy > static_cast<double>(d.y - 1) + kEps || fz > static_cast<double>(d.z - 1) + kEps)
    return 0.0;
  auto split = [](double f, std::size_t n, std::size_t& i0, std::size_t& i1, double& t) {
    f = std::clamp(f, 0.0, static_cast<double>(n - 1));
    i0 = static_cast<std::size_t>(std::floor(f));
    i1 = std::min(i0 + 1, n - 1);
    t = f - static_cast<double>(i0);
  };
  std::size_t x0, x1, y0, y1, z0, z1;
  double tx, ty, tz;
  split(fx, d.x, x0, x1, tx);
  split(fy, d.y, y0, y1, ty);
  split(fz, d.z, z0, z1, tz);
  auto lerp = [](double a, double b, double t) { return a + (b - a) * t; };
  const double c00 = lerp(g(x0, y0, z0), g(x1, y0, z0), tx);
  const double c10 = lerp(g(x0, y1, z0), g(x1, y1, z0), tx);
  const double c01 = lerp(g(x0, y0, z1), g(x1, y0, z1), tx);
  const double c11 = lerp(g(x0, y1, z1), g(x1, y1, z1), tx);
  return lerp(lerp(c00, c10, ty), lerp(c01, c11, ty), tz);
}

Volume gaussian(const Volume& v, const AttackSpec& a) {
  Volume out = v;
  if (a.level == 0.0) return out;
  const double sigma = a.level * v.max_value();
  const CounterRng rng(a.seed, 1);
  for (std::size_t i = 0; i < out.voxels.size(); ++i)
    out.voxels[i] = round_clamp(v.voxels[i] + sigma * rng.normal(i), v.max_value());
  return out;
}

Volume salt_pepper(const Volume& v, const AttackSpec& a) {
  Volume out = v;
  const CounterRng hit(a.seed, 2);
  const CounterRng salt(a.seed, 3);
  for (std::size_t i = 0; i < out.voxels.size(); ++i)
    if (hit.uniform(i) < a.level)
      out.voxels[i] = (salt.bits(i) & 1u) ? static_cast<std::uint16_t>(v.max_value()) : std::uint16_t{0};
  return out;
}

template <typename Reduce>
Volume window_filter(const Volume& v, std::size_t w, Reduce reduce) {
  const auto& d = v.dims();
  const auto r = static_cast<std::ptrdiff_t>(w / 2);
  Volume out = v;
  std::vector<std::uint16_t> window(w * w * w);
  auto clampi = [](std::ptrdiff_t i, std::size_t n) {
    return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(n) - 1));
  };
  for (std::size_t z = 0; z < d.z; ++z)
    for (std::size_t y = 0; y < d.y; ++y)
      for (std::size_t x = 0; x < d.x; ++x) {
        std::size_t n = 0;
        for (std::ptrdiff_t dz = -r; dz <= r; ++dz)
          for (std::ptrdiff_t dy = -r; dy <= r; ++dy)
            for (std::ptrdiff_t dx = -r; dx <= r; ++dx)
              window[n++] = v.voxels(clampi(static_cast<std::ptrdiff_t>(x) + dx, d.x),
                                     clampi(static_cast<std::ptrdiff_t>(y) + dy, d.y),
                                     clampi(static_cast<std::ptrdiff_t>(z) + dz, d.z));
        out.voxels(x, y, z) = reduce(window);
      }
  return out;
}

Volume median(const Volume& v, const AttackSpec& a) {
  return window_filter(v, static_cast<std::size_t>(a.level), [](std::vector<std::uint16_t>& w) {
    const auto mid = w.begin() + static_cast<std::ptrdiff_t>(w.size() / 2);
    std::nth_element(w.begin(), mid, w.end());
    return *mid;
  });
}

Volume average(const Volume& v, const AttackSpec& a) {
  return window_filter(v, static_cast<std::size_t>(a.level), [](std::vector<std::uint16_t>& w) {
    std::uint64_t sum = 0;
    for (auto x : w) sum += x;
    const std::uint64_t n = w.size();
    return static_cast<std::uint16_t>((2 * sum + n) / (2 * n));
  });
}

Volume scale(const Volume& v, const AttackSpec& a) {
  const auto& d = v.dims();
  auto scaled = [f = a.level](std::size_t n) {
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(static_cast<double>(n) * f + 0.5)));
  };
  const Dims3 od{scaled(d.x), scaled(d.y), scaled(d.z)};
  if (od == d) return v;
  // Pixel-centre alignment: output sample i sits at (i + 0.5) * in/out - 0.5.
  auto source = [](std::size_t i, std::size_t in, std::size_t out) {
    const double s = (static_cast<double>(i) + 0.5) * static_cast<double>(in) / static_cast<double>(out) - 0.5;
    return std::clamp(s, 0.0, static_cast<double>(in - 1));
  };
  Volume out = v;
  out.original_dims.reset();
  out.voxels = Grid3<std::uint16_t>(od);
  for (std::size_t z = 0; z < od.z; ++z)
    for (std::size_t y = 0; y < od.y; ++y)
      for (std::size_t x = 0; x < od.x; ++x)
        out.voxels(x, y, z) = round_clamp(
            sample_trilinear(v.voxels, source(x, d.x, od.x), source(y, d.y, od.y), source(z, d.z, od.z)),
            v.max_value());
  return out;
}

Volume crop_z(const Volume& v, const AttackSpec& a) {
  const auto& d = v.dims();
  const auto removed = static_cast<std::size_t>(std::floor(a.level * static_cast<double>(d.z) + 0.5));
  if (removed == 0) return v;
  if (removed >= d.z) throw Error(ErrorCode::BadParameter, "crop_z would remove every slice");
  Volume out = v;
  out.original_dims.reset();
  out.voxels = Grid3<std::uint16_t>(Dims3{d.x, d.y, d.z - removed});
  std::copy_n(v.voxels.begin(), out.voxels.size(), out.voxels.begin());
  return out;
}

Volume rotate(const Volume& v, const AttackSpec& a) {
  if (a.level == 0.0) return v;
  const auto& d = v.dims();
  const double theta = a.level * std::numbers::pi / 180.0;
  const double c = std::cos(theta), s = std::sin(theta);
  const double cx = (static_cast<double>(d.x) - 1.0) / 2.0;
  const double cy = (static_cast<double>(d.y) - 1.0) / 2.0;
  const double cz = (static_cast<double>(d.z) - 1.0) / 2.0;
  Volume out = v;
  for (std::size_t z = 0; z < d.z; ++z)
    for (std::size_t y = 0; y < d.y; ++y)
      for (std::size_t x = 0; x < d.x; ++x) {
        double px = static_cast<double>(x) - cx, py = static_cast<double>(y) - cy, pz = static_cast<double>(z) - cz;
        // Inverse rotation maps each output voxel back into the source.
        double* u = nullptr;
        double* w = nullptr;
        switch (a.plane) {
          case Plane::XY: u = &px, w = &py; break;
          case Plane::XZ: u = &px, w = &pz; break;
          case Plane::YZ: u = &py, w = &pz; break;
        }
        const double ru = c * *u + s * *w;
        const double rw = -s * *u + c * *w;
        *u = ru;
        *w = rw;
        out.voxels(x, y, z) = round_clamp(sample_trilinear(v.voxels, px + cx, py + cy, pz + cz), v.max_value());
      }
  return out;
}

Volume translate(const Volume& v, const AttackSpec& a) {
  const auto& d = v.dims();
  const std::size_t axis = a.axis == Axis::X ? 0 : a.axis == Axis::Y ? 1 : 2;
  const std::array<std::size_t, 3> extent{d.x, d.y, d.z};
  const auto shift = static_cast<std::size_t>(std::floor(a.level * static_cast<double>(extent[axis]) + 0.5));
  if (shift == 0) return v;
  Volume out = v;
  for (std::size_t z = 0; z < d.z; ++z)
    for (std::size_t y = 0; y < d.y; ++y)
      for (std::size_t x = 0; x < d.x; ++x) {
        std::array<std::size_t, 3> src{x, y, z};
        if (src[axis] < shift) {
          out.voxels(x, y, z) = 0;
          continue;
        }
        src[axis] -= shift;
        out.voxels(x, y, z) = v.voxels(src[0], src[1], src[2]);
      }
  return out;
}

Volume random_crop(const Volume& v, const AttackSpec& a) {
  const auto& d = v.dims();
  bool any = false;
  std::array<std::size_t, 3> lo{d.x, d.y, d.z}, hi{0, 0, 0};
  for (std::size_t z = 0; z < d.z; ++z)
    for (std::size_t y = 0; y < d.y; ++y)
      for (std::size_t x = 0; x < d.x; ++x)
        if (v.voxels(x, y, z) > 0) {
          any = true;
          const std::array<std::size_t, 3> p{x, y, z};
          for (int i = 0; i < 3; ++i) {
            lo[i] = std::min(lo[i], p[i]);
            hi[i] = std::max(hi[i], p[i]);
          }
        }
  if (!any) throw Error(ErrorCode::EmptyRoi, "random_crop needs at least one non-zero voxel");
  const double volume = a.level * static_cast<double>(d.count());
  const auto side = static_cast<std::size_t>(std::floor(std::cbrt(volume) + 0.5));
  if (side == 0) return v;

  const CounterRng rng(a.seed, 4);
  std::array<std::size_t, 3> start{}, extent{};
  for (std::size_t i = 0; i < 3; ++i) {
    const std::size_t span = hi[i] - lo[i] + 1;
    extent[i] = std::min(side, span);
    const std::size_t positions = span - extent[i] + 1;
    start[i] = lo[i] + std::min(positions - 1, static_cast<std::size_t>(rng.uniform(i) * static_cast<double>(positions)));
  }
  Volume out = v;
  for (std::size_t z = start[2]; z < start[2] + extent[2]; ++z)
    for (std::size_t y = start[1]; y < start[1] + extent[1]; ++y)
      for (std::size_t x = start[0]; x < start[0] + extent[0]; ++x) out.voxels(x, y, z) = 0;
  return out;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_(splitmix64(seed ^ splitmix64(stream))) {}

std::uint64_t CounterRng::bits(std::uint64_t counter) const noexcept { return splitmix64(key_ + splitmix64(counter)); }

double CounterRng::uniform(std::uint64_t counter) const noexcept {
  return static_cast<double>(bits(counter) >> 11) * 0x1p-53;
}

double CounterRng::normal(std::uint64_t counter) const noexcept {
  const double u1 = (static_cast<double>(bits(2 * counter) >> 11) + 1.0) * 0x1p-53;  // (0, 1]
  const double u2 = uniform(2 * counter + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::string_view to_string(AttackKind k) noexcept {
  for (const auto& [kind, name] : kKindNames)
    if (kind == k) return name;
  return "unknown";
}

AttackKind parse_attack_kind(std::string_view name) {
  for (const auto& [kind, n] : kKindNames)
    if (n == name) return kind;
  throw Error(ErrorCode::BadParameter, "unknown attack kind '" + std::string(name) + "'");
}

AttackSpec parse_attack(std::string_view kind, std::string_view params, std::uint64_t seed) {
  AttackSpec a;
  a.kind = parse_attack_kind(kind);
  if (a.kind == AttackKind::Hybrid)
    throw Error(ErrorCode::BadParameter, "hybrid attacks are configured through a JSON document");
  a.level = default_level(a.kind);
  a.seed = seed;
  std::size_t pos = 0;
  while (pos < params.size()) {
    const auto end = params.find_first_of(",;", pos);
    const auto item = params.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
    pos = end == std::string_view::npos ? params.size() : end + 1;
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw Error(ErrorCode::BadParameter, "expected key=value, got '" + std::string(item) + "'");
    const auto key = item.substr(0, eq);
    const auto value = item.substr(eq + 1);
    if (key == level_name(a.kind))
      a.level = parse_number(value);
    else if (key == "plane" && a.kind == AttackKind::Rotate)
      a.plane = parse_plane(value);
    else if (key == "axis" && a.kind == AttackKind::Translate)
      a.axis = parse_axis(value);
    else
      throw Error(ErrorCode::BadParameter,
                  "parameter '" + std::string(key) + "' does not apply to " + std::string(to_string(a.kind)));
  }
  validate(a);
  return a;
}

std::string describe_params(const AttackSpec& a) {
  if (a.kind == AttackKind::Hybrid) {
    std::string out;
    for (const auto& s : a.stages) {
      if (!out.empty()) out += "+";
      out += std::string(to_string(s.kind)) + "(" + describe_params(s) + ")";
    }
    return out;
  }
  std::string out = std::string(level_name(a.kind)) + "=" + format_number(a.level);
  if (a.kind == AttackKind::Rotate) out += ";plane=" + std::string(plane_name(a.plane));
  if (a.kind == AttackKind::Translate) out += ";axis=" + std::string(axis_name(a.axis));
  return out;
}

AttackSpec attack_from_json(const json& j) {
  try {
    AttackSpec a;
    a.kind = parse_attack_kind(j.at("kind").get<std::string>());
    a.seed = j.value("seed", std::uint64_t{0});
    if (a.kind == AttackKind::Hybrid) {
      const auto& stages = j.at("stages");
      for (std::size_t i = 0; i < stages.size(); ++i) {
        AttackSpec stage = attack_from_json(stages[i]);
        // Stages without their own seed draw one from the parent.
        if (!stages[i].contains("seed")) stage.seed = splitmix64(a.seed + i + 1);
        a.stages.push_back(std::move(stage));
      }
    } else {
      a.level = j.value(std::string(level_name(a.kind)), default_level(a.kind));
      if (j.contains("plane")) a.plane = parse_plane(j["plane"].get<std::string>());
      if (j.contains("axis")) a.axis = parse_axis(j["axis"].get<std::string>());
    }
    validate(a);
    return a;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::BadParameter, std::string("malformed attack spec: ") + e.what());
  }
}

json to_json(const AttackSpec& a) {
  json j;
  j["kind"] = to_string(a.kind);
  j["seed"] = a.seed;
  if (a.kind == AttackKind::Hybrid) {
    j["stages"] = json::array();
    for (const auto& s : a.stages) j["stages"].push_back(to_json(s));
    return j;
  }
  j[std::string(level_name(a.kind))] = a.level;
  if (a.kind == AttackKind::Rotate) j["plane"] = plane_name(a.plane);
  if (a.kind == AttackKind::Translate) j["axis"] = axis_name(a.axis);
  return j;
}

void validate(const AttackSpec& a) {
  const double x = a.level;
  const std::string name(to_string(a.kind));
  require(std::isfinite(x), name + ": intensity must be finite");
  switch (a.kind) {
    case AttackKind::Gaussian:
    case AttackKind::SaltPepper:
    case AttackKind::CropZ:
    case AttackKind::Translate:
      require(x >= 0.0 && x <= 0.5, name + ": p must lie in [0, 0.5]");
      break;
    case AttackKind::RandomCrop: require(x >= 0.0 && x <= 0.25, name + ": p must lie in [0, 0.25]"); break;
    case AttackKind::Jpeg: require(x >= 10.0 && x <= 100.0 && x == std::floor(x), name + ": q must be an integer in [10, 100]"); break;
    case AttackKind::Median:
    case AttackKind::Average: require(x == 3.0 || x == 5.0 || x == 7.0, name + ": w must be 3, 5 or 7"); break;
    case AttackKind::Scale: require(x >= 0.25 && x <= 2.0, name + ": f must lie in [0.25, 2]"); break;
    case AttackKind::Rotate: require(x >= -30.0 && x <= 30.0, name + ": theta must lie in [-30, 30] degrees"); break;
    case AttackKind::Hybrid:
      require(!a.stages.empty(), "hybrid: stage list must not be empty");
      for (const auto& s : a.stages) validate(s);
      break;
  }
}

Volume apply_attack(const Volume& v, const AttackSpec& a) {
  validate(a);
  switch (a.kind) {
    case AttackKind::Gaussian: return gaussian(v, a);
    case AttackKind::SaltPepper: return salt_pepper(v, a);
    case AttackKind::Jpeg: return detail::jpeg_slices(v, static_cast<int>(a.level));
    case AttackKind::Median: return median(v, a);
    case AttackKind::Average: return average(v, a);
    case AttackKind::Scale: return scale(v, a);
    case AttackKind::CropZ: return crop_z(v, a);
    case AttackKind::Rotate: return rotate(v, a);
    case AttackKind::Translate: return translate(v, a);
    case AttackKind::RandomCrop: return random_crop(v, a);
    case AttackKind::Hybrid: {
      Volume out = v;
      for (const auto& s : a.stages) out = apply_attack(out, s);
      return out;
    }
  }
  throw Error(ErrorCode::BadParameter, "unhandled attack kind");
}

}  // namespace volmark
