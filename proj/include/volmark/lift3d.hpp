#pragma once

#include <array>
#include <cstdint>

#include "volmark/grid.hpp"
#include "volmark/volume.hpp"

namespace volmark {

// Sub-band labels: letter 1 is the x-axis result, letter 2 y, letter 3 z.
// The enum value is the bit pattern (x_high << 2) | (y_high << 1) | z_high.
enum class Band : std::uint8_t { LLL = 0, LLH, LHL, LHH, HLL, HLH, HHL, HHH };

inline constexpr std::array<Band, 8> kAllBands{Band::LLL, Band::LLH, Band::LHL, Band::LHH,
                                              Band::HLL, Band::HLH, Band::HHL, Band::HHH};

const char* band_name(Band b) noexcept;

using Coeff = std::int32_t;
using CoeffGrid = Grid3<Coeff>;

// One-level integer Haar (S-transform) decomposition. All eight bands have
// half the source dims.
struct SubBands {
  std::array<CoeffGrid, 8> bands;
  Dims3 source_dims;
  int bit_depth = 8;

  CoeffGrid& operator[](Band b) noexcept { return bands[static_cast<std::size_t>(b)]; }
  const CoeffGrid& operator[](Band b) const noexcept { return bands[static_cast<std::size_t>(b)]; }
  const Dims3& band_dims() const noexcept { return bands[0].dims(); }
};

// Separable lifting along z, then y, then x. Per pair (a, b):
// h = a - b, l = floor((a + b) / 2). Requires even dims (OddDimension).
SubBands forward_iwt3(const Volume& v);
SubBands forward_iwt3(const CoeffGrid& g, int bit_depth);

// Exact inverse: per axis a = l + floor((h + 1) / 2), b = a - h, axes in the
// order x, y, z. Values are not range checked; see to_volume().
CoeffGrid inverse_iwt3(const SubBands& b);

// Voxels of the (2*extent) footprint of the coefficient block whose band
// coordinates start at `origin`. Matches the same slice of inverse_iwt3().
CoeffGrid local_inverse_block(const SubBands& b, Index3 origin, Dims3 extent = {2, 2, 2});

// 1D lifting step, exposed for exhaustive testing.
struct LiftPair {
  Coeff low;
  Coeff high;
  constexpr bool operator==(const LiftPair&) const = default;
};

constexpr LiftPair lift_forward(Coeff a, Coeff b) noexcept {
  // >> on signed values is an arithmetic shift (floor division by 2) in C++20.
  return {(a + b) >> 1, a - b};
}

constexpr std::array<Coeff, 2> lift_inverse(Coeff low, Coeff high) noexcept {
  const Coeff a = low + ((high + 1) >> 1);
  return {a, a - high};
}

}  // namespace volmark
