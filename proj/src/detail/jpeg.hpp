#pragma once

#include "volmark/volume.hpp"

namespace volmark::detail {

// Baseline JPEG round trip of every z-slice at the given quality. Slices are
// mapped linearly onto 8 bits (offset only when their range already fits).
Volume jpeg_slices(const Volume& v, int quality);

}  // namespace volmark::detail
