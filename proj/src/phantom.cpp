#include "volmark/phantom.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "volmark/attack.hpp"

namespace volmark {

Volume smooth_phantom(Dims3 dims, int bit_depth, std::uint64_t seed) {
  constexpr int kWaves = 6;
  const CounterRng rng(seed, 0x5048414eull);
  const double max = static_cast<double>((1u << bit_depth) - 1);

  struct Wave {
    std::array<double, 3> k;
    double phase;
    double amplitude;
  };
  std::array<Wave, kWaves> waves{};
  std::uint64_t c = 0;
  for (auto& w : waves) {
    const std::array<double, 3> extent{static_cast<double>(dims.x), static_cast<double>(dims.y),
                                       static_cast<double>(dims.z)};
    for (std::size_t a = 0; a < 3; ++a) {
      // Between -3 and 3 cycles across the axis.
      const double cycles = 6.0 * rng.uniform(c++) - 3.0;
      w.k[a] = 2.0 * std::numbers::pi * cycles / extent[a];
    }
    w.phase = 2.0 * std::numbers::pi * rng.uniform(c++);
    w.amplitude = 0.05 * max * (0.5 + rng.uniform(c++));
  }

  const CounterRng texture(seed, 0x54455854ull);
  Volume v = make_volume(dims, bit_depth);
  for (std::size_t z = 0; z < dims.z; ++z)
    for (std::size_t y = 0; y < dims.y; ++y)
      for (std::size_t x = 0; x < dims.x; ++x) {
        double value = 0.5 * max;
        for (const auto& w : waves)
          value += w.amplitude * std::cos(w.k[0] * static_cast<double>(x) + w.k[1] * static_cast<double>(y) +
                                          w.k[2] * static_cast<double>(z) + w.phase);
        value += 0.004 * max * (texture.uniform(v.voxels.index(x, y, z)) - 0.5);
        v.voxels(x, y, z) = static_cast<std::uint16_t>(std::clamp(std::floor(value + 0.5), 1.0, max));
      }
  return v;
}

namespace {

struct Ellipsoid {
  std::array<double, 3> centre;
  std::array<double, 3> radius;
  double value;

  // Signed distance proxy in voxels: negative inside.
  double edge(double x, double y, double z) const {
    const double dx = (x - centre[0]) / radius[0], dy = (y - centre[1]) / radius[1], dz = (z - centre[2]) / radius[2];
    const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
    return (r - 1.0) * std::min({radius[0], radius[1], radius[2]});
  }
};

double smoothstep_inside(double edge) { return 1.0 / (1.0 + std::exp(edge / 0.75)); }

}  // namespace

Volume body_phantom(Dims3 dims, int bit_depth, std::uint64_t seed) {
  constexpr int kOrgans = 5;
  const CounterRng rng(seed, 0x424f4459ull);
  const double max = static_cast<double>((1u << bit_depth) - 1);
  const std::array<double, 3> extent{static_cast<double>(dims.x), static_cast<double>(dims.y),
                                     static_cast<double>(dims.z)};
  std::uint64_t c = 0;
  auto jitter = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(c++); };

  Ellipsoid body;
  for (std::size_t a = 0; a < 3; ++a) {
    body.centre[a] = (0.5 + jitter(-0.03, 0.03)) * extent[a] - 0.5;
    body.radius[a] = jitter(0.40, 0.47) * extent[a];
  }
  body.value = 0.3 * max;

  std::array<Ellipsoid, kOrgans> organs{};
  for (auto& o : organs) {
    for (std::size_t a = 0; a < 3; ++a) {
      o.radius[a] = jitter(0.06, 0.16) * extent[a];
      // Keep the organ centre well inside the body.
      o.centre[a] = body.centre[a] + jitter(-0.5, 0.5) * (body.radius[a] - o.radius[a]);
    }
    o.value = jitter(-0.15, 0.45) * max;
  }
  const std::array<double, 3> bias_k{2.0 * std::numbers::pi * jitter(-1, 1) / extent[0],
                                     2.0 * std::numbers::pi * jitter(-1, 1) / extent[1],
                                     2.0 * std::numbers::pi * jitter(-1, 1) / extent[2]};
  const double bias_phase = jitter(0, 2.0 * std::numbers::pi);

  const CounterRng texture(seed, 0x54455854ull);
  Volume v = make_volume(dims, bit_depth);
  for (std::size_t z = 0; z < dims.z; ++z)
    for (std::size_t y = 0; y < dims.y; ++y)
      for (std::size_t x = 0; x < dims.x; ++x) {
        const double fx = static_cast<double>(x), fy = static_cast<double>(y), fz = static_cast<double>(z);
        const double inside = smoothstep_inside(body.edge(fx, fy, fz));
        const double floor_noise = 0.005 * max * texture.uniform(v.voxels.size() + v.voxels.index(x, y, z));
        double value = body.value;
        for (const auto& o : organs) value += o.value * smoothstep_inside(o.edge(fx, fy, fz));
        value *= 1.0 + 0.05 * std::cos(bias_k[0] * fx + bias_k[1] * fy + bias_k[2] * fz + bias_phase);
        value += 0.004 * max * (texture.uniform(v.voxels.index(x, y, z)) - 0.5);
        v.voxels(x, y, z) =
            static_cast<std::uint16_t>(std::clamp(std::floor(inside * value + floor_noise + 0.5), 0.0, max));
      }
  return v;
}

}  // namespace volmark
