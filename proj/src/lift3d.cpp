#include "volmark/lift3d.hpp"

#include <vector>

#include "volmark/error.hpp"

namespace volmark {

namespace {

enum class LiftAxis { X, Y, Z };

std::size_t extent_of(const Dims3& d, LiftAxis axis) {
  switch (axis) {
    case LiftAxis::X: return d.x;
    case LiftAxis::Y: return d.y;
    case LiftAxis::Z: return d.z;
  }
  return 0;
}

// Applies the 1D transform to every line along `axis`, storing low halves
// in the first half of the line and high halves in the second.
void lift_axis(CoeffGrid& g, LiftAxis axis, bool forward) {
  const auto& d = g.dims();
  const std::size_t n = extent_of(d, axis);
  const std::size_t half = n / 2;
  const std::size_t stride = axis == LiftAxis::X ? 1 : axis == LiftAxis::Y ? d.x : d.x * d.y;
  const std::size_t lines = d.count() / n;
  std::vector<Coeff> line(n);
  auto values = g.values();

  for (std::size_t l = 0; l < lines; ++l) {
    std::size_t base = 0;
    switch (axis) {
      case LiftAxis::X: base = l * d.x; break;
      case LiftAxis::Y: base = (l / d.x) * d.x * d.y + (l % d.x); break;
      case LiftAxis::Z: base = l; break;
    }
    for (std::size_t i = 0; i < n; ++i) line[i] = values[base + i * stride];
    if (forward) {
      for (std::size_t t = 0; t < half; ++t) {
        const auto p = lift_forward(line[2 * t], line[2 * t + 1]);
        values[base + t * stride] = p.low;
        values[base + (half + t) * stride] = p.high;
      }
    } else {
      for (std::size_t t = 0; t < half; ++t) {
        const auto p = lift_inverse(line[t], line[half + t]);
        values[base + 2 * t * stride] = p[0];
        values[base + (2 * t + 1) * stride] = p[1];
      }
    }
  }
}

constexpr std::size_t bit_x(std::size_t band) { return (band >> 2) & 1u; }
constexpr std::size_t bit_y(std::size_t band) { return (band >> 1) & 1u; }
constexpr std::size_t bit_z(std::size_t band) { return band & 1u; }

}  // namespace

const char* band_name(Band b) noexcept {
  static constexpr const char* kNames[] = {"LLL", "LLH", "LHL", "LHH", "HLL", "HLH", "HHL", "HHH"};
  return kNames[static_cast<std::size_t>(b)];
}

SubBands forward_iwt3(const CoeffGrid& g, int bit_depth) {
  const auto& d = g.dims();
  if (d.x % 2 || d.y % 2 || d.z % 2 || d.count() == 0)
    throw Error(ErrorCode::OddDimension, "3D-IWT needs non-empty even dims, got " + std::to_string(d.x) + "x" +
                                             std::to_string(d.y) + "x" + std::to_string(d.z));
  CoeffGrid work = g;
  lift_axis(work, LiftAxis::Z, true);
  lift_axis(work, LiftAxis::Y, true);
  lift_axis(work, LiftAxis::X, true);

  const Dims3 h{d.x / 2, d.y / 2, d.z / 2};
  SubBands out;
  out.source_dims = d;
  out.bit_depth = bit_depth;
  for (std::size_t b = 0; b < 8; ++b) {
    CoeffGrid band(h);
    for (std::size_t z = 0; z < h.z; ++z)
      for (std::size_t y = 0; y < h.y; ++y)
        for (std::size_t x = 0; x < h.x; ++x)
          band(x, y, z) = work(x + bit_x(b) * h.x, y + bit_y(b) * h.y, z + bit_z(b) * h.z);
    out.bands[b] = std::move(band);
  }
  return out;
}

SubBands forward_iwt3(const Volume& v) { return forward_iwt3(cast<Coeff>(v.voxels), v.bit_depth); }

CoeffGrid inverse_iwt3(const SubBands& b) {
  const Dims3 h = b.band_dims();
  for (const auto& band : b.bands)
    if (band.dims() != h || band.size() != h.count())
      throw Error(ErrorCode::InconsistentBands, "sub-bands disagree on dims");
  if (Dims3{2 * h.x, 2 * h.y, 2 * h.z} != b.source_dims)
    throw Error(ErrorCode::InconsistentBands, "band dims are not half the source dims");

  CoeffGrid work(b.source_dims);
  for (std::size_t k = 0; k < 8; ++k)
    for (std::size_t z = 0; z < h.z; ++z)
      for (std::size_t y = 0; y < h.y; ++y)
        for (std::size_t x = 0; x < h.x; ++x)
          work(x + bit_x(k) * h.x, y + bit_y(k) * h.y, z + bit_z(k) * h.z) = b.bands[k](x, y, z);
  lift_axis(work, LiftAxis::X, false);
  lift_axis(work, LiftAxis::Y, false);
  lift_axis(work, LiftAxis::Z, false);
  return work;
}

CoeffGrid local_inverse_block(const SubBands& b, Index3 origin, Dims3 extent) {
  const Dims3 h = b.band_dims();
  for (const auto& band : b.bands)
    if (band.dims() != h) throw Error(ErrorCode::InconsistentBands, "sub-bands disagree on dims");
  if (origin.x + extent.x > h.x || origin.y + extent.y > h.y || origin.z + extent.z > h.z)
    throw Error(ErrorCode::OutOfBounds, "coefficient block extends past the band");

  // Each coefficient position owns exactly the 2x2x2 voxels it was computed
  // from, so the block is inverted one position at a time.
  CoeffGrid out(Dims3{2 * extent.x, 2 * extent.y, 2 * extent.z});
  for (std::size_t k = 0; k < extent.z; ++k)
    for (std::size_t j = 0; j < extent.y; ++j)
      for (std::size_t i = 0; i < extent.x; ++i) {
        // c[x][y][z] indexed by the high-flag of each axis.
        Coeff c[2][2][2];
        for (std::size_t band = 0; band < 8; ++band)
          c[bit_x(band)][bit_y(band)][bit_z(band)] = b.bands[band](origin.x + i, origin.y + j, origin.z + k);
        Coeff vx[2][2][2];  // after undoing x: [vx][y-flag][z-flag]
        for (int fy = 0; fy < 2; ++fy)
          for (int fz = 0; fz < 2; ++fz) {
            const auto p = lift_inverse(c[0][fy][fz], c[1][fy][fz]);
            vx[0][fy][fz] = p[0];
            vx[1][fy][fz] = p[1];
          }
        Coeff vy[2][2][2];  // [vx][vy][z-flag]
        for (int px = 0; px < 2; ++px)
          for (int fz = 0; fz < 2; ++fz) {
            const auto p = lift_inverse(vx[px][0][fz], vx[px][1][fz]);
            vy[px][0][fz] = p[0];
            vy[px][1][fz] = p[1];
          }
        for (int px = 0; px < 2; ++px)
          for (int py = 0; py < 2; ++py) {
            const auto p = lift_inverse(vy[px][py][0], vy[px][py][1]);
            out(2 * i + px, 2 * j + py, 2 * k) = p[0];
            out(2 * i + px, 2 * j + py, 2 * k + 1) = p[1];
          }
      }
  return out;
}

}  // namespace volmark
