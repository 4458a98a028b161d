#include "ped/gt_convert.hpp"

#include <algorithm>

namespace ped {

std::vector<BoundaryMap> semantic_boundaries(const LabelMap& labels, int radius,
                                             const CategorySet& cats) {
    if (radius < 1)
        throw ParamError("semantic_boundaries: radius must be >= 1");
    const int w = labels.width;
    const int h = labels.height;
    for (std::uint16_t v : labels.data)
        if (v != kIgnoreLabel && !cats.contains(v))
            throw LabelError("label id " + std::to_string(v) + " not in category set");

    std::vector<BoundaryMap> out(static_cast<std::size_t>(cats.size()), BoundaryMap(w, h));
    std::vector<std::uint16_t> seen; // distinct labels in the current window
    seen.reserve(9);

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (labels.at(x, y) == kIgnoreLabel)
                continue;
            seen.clear();
            const int y0 = std::max(0, y - radius), y1 = std::min(h - 1, y + radius);
            const int x0 = std::max(0, x - radius), x1 = std::min(w - 1, x + radius);
            for (int ny = y0; ny <= y1; ++ny) {
                for (int nx = x0; nx <= x1; ++nx) {
                    const std::uint16_t v = labels.at(nx, ny);
                    if (v == kIgnoreLabel)
                        continue;
                    if (std::find(seen.begin(), seen.end(), v) == seen.end())
                        seen.push_back(v);
                }
            }
            if (seen.size() < 2)
                continue;
            for (std::uint16_t v : seen)
                out[static_cast<std::size_t>(cats.index_of(v))].set(x, y);
        }
    }
    return out;
}

std::vector<GtInstance> instance_boundaries(const InstanceMap& instances,
                                            const std::map<std::uint16_t, std::uint16_t>& id_to_category,
                                            int radius) {
    if (radius < 1)
        throw ParamError("instance_boundaries: radius must be >= 1");
    const int w = instances.width;
    const int h = instances.height;

    // Tight pixel boxes per id, in one pass.
    std::map<std::uint16_t, Box> tight;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::uint16_t id = instances.at(x, y);
            if (id == 0)
                continue;
            if (!id_to_category.count(id))
                throw ManifestError("instance id " + std::to_string(id) + " missing from manifest");
            auto [it, fresh] = tight.try_emplace(id, Box{x, y, x + 1, y + 1});
            if (!fresh) {
                Box& b = it->second;
                b.x0 = std::min(b.x0, x);
                b.y0 = std::min(b.y0, y);
                b.x1 = std::max(b.x1, x + 1);
                b.y1 = std::max(b.y1, y + 1);
            }
        }
    }

    std::vector<GtInstance> out;
    out.reserve(tight.size());
    for (const auto& [id, box] : tight) {
        GtInstance inst;
        inst.id = id;
        inst.category = id_to_category.at(id);
        inst.box = dilate_clip(box, radius, w, h);
        inst.edges = BoundaryMap(w, h);
        // All edge pixels of instance i lie within radius of an i-pixel,
        // hence inside the dilated box; scanning it suffices.
        for (int y = inst.box.y0; y < inst.box.y1; ++y) {
            for (int x = inst.box.x0; x < inst.box.x1; ++x) {
                bool mine = false, other = false;
                const int ny1 = std::min(h - 1, y + radius), nx1 = std::min(w - 1, x + radius);
                for (int ny = std::max(0, y - radius); ny <= ny1 && !(mine && other); ++ny)
                    for (int nx = std::max(0, x - radius); nx <= nx1; ++nx) {
                        (instances.at(nx, ny) == id ? mine : other) = true;
                        if (mine && other)
                            break;
                    }
                if (mine && other)
                    inst.edges.set(x, y);
            }
        }
        out.push_back(std::move(inst));
    }
    return out;
}

} // namespace ped
