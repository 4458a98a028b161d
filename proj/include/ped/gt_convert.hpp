#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "ped/raster.hpp"

namespace ped {

// Ground-truth edges of one object instance. `edges` is full-canvas; every
// set pixel lies inside `box` (the tight pixel box dilated by the
// conversion radius and clipped to the canvas).
struct GtInstance {
    std::uint16_t id = 0;
    std::uint16_t category = 0;
    Box box;
    BoundaryMap edges;
};

// Converted ground truth for one image: per-category semantic boundary
// channels (CategorySet order) plus the instance list.
struct GtScene {
    std::vector<BoundaryMap> semantic;
    std::vector<GtInstance> instances;
};

// Multi-label semantic boundaries. A pixel p (non-ignore) is an edge for
// category k iff its Chebyshev radius-r neighborhood (p included) contains
// a pixel labeled k and a pixel with a different non-ignore label; edges
// therefore land on both sides of every boundary. Ignore pixels neither
// generate nor receive edges.
//
// Returns one binary channel per category in CategorySet order.
// LabelError on a label outside the set that is not the ignore sentinel.
std::vector<BoundaryMap> semantic_boundaries(const LabelMap& labels, int radius,
                                             const CategorySet& cats);

// Per-instance boundaries: a pixel is an edge of instance i iff its
// radius-r neighborhood contains a pixel of i and a pixel not of i.
// Shared borders of touching instances land in both edge maps. Instances
// are emitted in ascending id order. ManifestError when a nonzero id has
// no manifest entry.
std::vector<GtInstance> instance_boundaries(const InstanceMap& instances,
                                            const std::map<std::uint16_t, std::uint16_t>& id_to_category,
                                            int radius);

} // namespace ped
