#pragma once

#include <cstdint>
#include <vector>

#include "ped/raster.hpp"

namespace ped {

// Squared distance assigned to pixels that cannot reach any set pixel
// (empty source map). Larger than any in-canvas squared distance.
inline constexpr std::int64_t kUnreachable = INT64_C(1) << 60;

// Exact squared Euclidean distance to the nearest set pixel of src, per
// pixel, row-major. Pure integer arithmetic (Meijster et al. 2000), so the
// result is bit-exact against a brute-force all-pairs scan. Runs in O(W*H).
std::vector<std::int64_t> squared_distance_field(const BoundaryMap& src);

// Largest squared pixel distance representable inside a W x H canvas.
inline std::int64_t max_canvas_dist_sq(int width, int height) {
    const std::int64_t dx = width > 0 ? width - 1 : 0;
    const std::int64_t dy = height > 0 ? height - 1 : 0;
    return dx * dx + dy * dy;
}

// Integer matching gate for a real-valued pixel tolerance: a pixel pair
// corresponds iff its squared distance is <= floor(tol^2). Clamped to the
// canvas diagonal so kUnreachable never matches.
std::int64_t squared_tolerance_gate(double tol, int width, int height);

} // namespace ped
