#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ped/error.hpp"

namespace ped {

// Label value marking pixels excluded from all edge correspondence counts.
inline constexpr std::uint16_t kIgnoreLabel = 65535;

// Per-pixel category ids, row-major. kIgnoreLabel marks ignore pixels.
struct LabelMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> data;

    LabelMap() = default;
    LabelMap(int w, int h, std::uint16_t fill = 0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

    std::uint16_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    std::uint16_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    std::size_t pixel_count() const { return data.size(); }
};

// Per-pixel instance ids, row-major. 0 means "no instance".
struct InstanceMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint16_t> data;

    InstanceMap() = default;
    InstanceMap(int w, int h)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h, 0) {}

    std::uint16_t at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    std::uint16_t& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
};

// Binary edge raster, row-major, one byte per pixel (0 or 1).
struct BoundaryMap {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> bits;

    BoundaryMap() = default;
    BoundaryMap(int w, int h)
        : width(w), height(h), bits(static_cast<std::size_t>(w) * h, 0) {}

    bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * width + x] != 0; }
    void set(int x, int y, bool v = true) { bits[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0; }

    std::uint64_t count() const;
    bool empty() const { return count() == 0; }
    bool same_shape(const BoundaryMap& o) const { return width == o.width && height == o.height; }
};

// Multi-channel probability raster, channel-major then row-major.
// Every value lies in [0, 1].
struct ProbMap {
    int channels = 0;
    int width = 0;
    int height = 0;
    std::vector<float> values;

    ProbMap() = default;
    ProbMap(int k, int w, int h)
        : channels(k), width(w), height(h),
          values(static_cast<std::size_t>(k) * w * h, 0.0f) {}

    float at(int c, int x, int y) const {
        return values[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
    float& at(int c, int x, int y) {
        return values[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
    const float* channel(int c) const {
        return values.data() + static_cast<std::size_t>(c) * width * height;
    }
    float* channel(int c) {
        return values.data() + static_cast<std::size_t>(c) * width * height;
    }
    std::size_t plane_size() const { return static_cast<std::size_t>(width) * height; }
};

// Half-open pixel rectangle [x0, x1) x [y0, y1).
struct Box {
    int x0 = 0;
    int y0 = 0;
    int x1 = 0;
    int y1 = 0;

    int width() const { return x1 - x0; }
    int height() const { return y1 - y0; }
    std::int64_t area() const { return static_cast<std::int64_t>(width()) * height(); }
    bool valid() const { return x0 < x1 && y0 < y1; }
    bool contains(int x, int y) const { return x >= x0 && x < x1 && y >= y0 && y < y1; }

    bool operator==(const Box&) const = default;
};

enum class CategoryKind { Stuff, Instance };

struct Category {
    std::uint16_t id = 0;
    std::string name;
    CategoryKind kind = CategoryKind::Stuff;
};

// Ordered category list. Channel order of all K-channel rasters follows
// the order of this list.
class CategorySet {
public:
    CategorySet() = default;
    explicit CategorySet(std::vector<Category> cats);

    int size() const { return static_cast<int>(cats_.size()); }
    const Category& at(int index) const { return cats_[static_cast<std::size_t>(index)]; }
    const std::vector<Category>& list() const { return cats_; }

    bool contains(std::uint16_t id) const;
    // Channel index for a category id; LabelError if unknown.
    int index_of(std::uint16_t id) const;

    int stuff_count() const;
    int instance_count() const;

private:
    std::vector<Category> cats_;
    std::vector<int> index_; // id -> channel index, -1 when absent
};

// Tight bounding box of the set pixels of a mask. EmptyMaskError if none.
Box bbox_of(const BoundaryMap& mask);

// Place a 1-channel crop onto a zeroed canvas at the given box.
// Crop dimensions must equal the box dimensions and the box must lie
// inside the canvas; ShapeError otherwise.
ProbMap embed(const ProbMap& crop, const Box& box, int canvas_width, int canvas_height);

// Threshold a 1-channel probability map. A pixel is set iff value >= theta
// (closed on the left; ODS results depend on this convention).
// theta must lie in (0, 1); ParamError otherwise.
BoundaryMap binarize(const ProbMap& map, double theta);

// Intersection of two boxes; returns an invalid box when disjoint.
Box intersect(const Box& a, const Box& b);

// Smallest box containing both inputs.
Box box_union(const Box& a, const Box& b);

// Grow a box by r pixels on every side, clipped to the canvas.
Box dilate_clip(const Box& box, int r, int canvas_width, int canvas_height);

} // namespace ped
