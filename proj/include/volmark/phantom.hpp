#pragma once

#include <cstdint>

#include "volmark/volume.hpp"

namespace volmark {

// Smooth, stationary synthetic volume: a mid-grey base plus a few random
// low-frequency plane waves and light texture. Deterministic per seed and
// strictly positive, so it has a full-volume region of interest.
Volume smooth_phantom(Dims3 dims, int bit_depth, std::uint64_t seed);

// Anatomy-like volume: a low noise floor outside, an ellipsoidal body with a gentle
// bias field, a few brighter or darker inner ellipsoids with soft edges, and
// light texture inside the body. Deterministic per seed.
Volume body_phantom(Dims3 dims, int bit_depth, std::uint64_t seed);

}  // namespace volmark
