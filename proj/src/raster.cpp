#include "ped/raster.hpp"

#include <algorithm>
#include <numeric>

namespace ped {

std::uint64_t BoundaryMap::count() const {
    std::uint64_t n = 0;
    for (std::uint8_t b : bits)
        n += b;
    return n;
}

CategorySet::CategorySet(std::vector<Category> cats) : cats_(std::move(cats)) {
    std::uint16_t max_id = 0;
    for (const Category& c : cats_)
        max_id = std::max(max_id, c.id);
    index_.assign(static_cast<std::size_t>(max_id) + 1, -1);
    for (std::size_t i = 0; i < cats_.size(); ++i) {
        if (cats_[i].id == kIgnoreLabel)
            throw ParamError("category id collides with ignore sentinel 65535");
        if (index_[cats_[i].id] != -1)
            throw ParamError("duplicate category id " + std::to_string(cats_[i].id));
        index_[cats_[i].id] = static_cast<int>(i);
    }
}

bool CategorySet::contains(std::uint16_t id) const {
    return id < index_.size() && index_[id] != -1;
}

int CategorySet::index_of(std::uint16_t id) const {
    if (!contains(id))
        throw LabelError("label id " + std::to_string(id) + " not in category set");
    return index_[id];
}

int CategorySet::stuff_count() const {
    return static_cast<int>(std::count_if(cats_.begin(), cats_.end(), [](const Category& c) {
        return c.kind == CategoryKind::Stuff;
    }));
}

int CategorySet::instance_count() const {
    return size() - stuff_count();
}

Box bbox_of(const BoundaryMap& mask) {
    int x0 = mask.width, y0 = mask.height, x1 = 0, y1 = 0;
    for (int y = 0; y < mask.height; ++y) {
        const std::uint8_t* row = mask.bits.data() + static_cast<std::size_t>(y) * mask.width;
        for (int x = 0; x < mask.width; ++x) {
            if (!row[x])
                continue;
            x0 = std::min(x0, x);
            y0 = std::min(y0, y);
            x1 = std::max(x1, x + 1);
            y1 = std::max(y1, y + 1);
        }
    }
    if (x1 == 0) // no set pixel seen
        throw EmptyMaskError("bbox_of: mask has no set pixels");
    return Box{x0, y0, x1, y1};
}

ProbMap embed(const ProbMap& crop, const Box& box, int canvas_width, int canvas_height) {
    if (crop.channels != 1)
        throw ShapeError("embed: crop must have exactly one channel");
    if (crop.width != box.width() || crop.height != box.height())
        throw ShapeError("embed: crop dimensions do not match box");
    if (box.x0 < 0 || box.y0 < 0 || box.x1 > canvas_width || box.y1 > canvas_height || !box.valid())
        throw ShapeError("embed: box outside canvas");
    ProbMap out(1, canvas_width, canvas_height);
    for (int y = 0; y < crop.height; ++y) {
        const float* src = crop.values.data() + static_cast<std::size_t>(y) * crop.width;
        float* dst = out.values.data()
            + static_cast<std::size_t>(box.y0 + y) * canvas_width + box.x0;
        std::copy(src, src + crop.width, dst);
    }
    return out;
}

BoundaryMap binarize(const ProbMap& map, double theta) {
    if (map.channels != 1)
        throw ShapeError("binarize: map must have exactly one channel");
    if (!(theta > 0.0 && theta < 1.0))
        throw ParamError("binarize: theta must lie in (0,1)");
    BoundaryMap out(map.width, map.height);
    for (std::size_t i = 0; i < map.values.size(); ++i)
        out.bits[i] = (map.values[i] >= theta) ? 1 : 0;
    return out;
}

Box intersect(const Box& a, const Box& b) {
    return Box{std::max(a.x0, b.x0), std::max(a.y0, b.y0),
               std::min(a.x1, b.x1), std::min(a.y1, b.y1)};
}

Box box_union(const Box& a, const Box& b) {
    return Box{std::min(a.x0, b.x0), std::min(a.y0, b.y0),
               std::max(a.x1, b.x1), std::max(a.y1, b.y1)};
}

Box dilate_clip(const Box& box, int r, int canvas_width, int canvas_height) {
    return Box{std::max(0, box.x0 - r), std::max(0, box.y0 - r),
               std::min(canvas_width, box.x1 + r), std::min(canvas_height, box.y1 + r)};
}

} // namespace ped
