#pragma once

// Synthetic scene generation for integration and acceptance runs: a
// Voronoi stuff background with non-overlapping rectangular instances.

#include <filesystem>
#include <map>

#include "ped/manifest.hpp"
#include "ped/raster.hpp"
#include "ped/rng.hpp"

namespace ped::testing {

// 4 stuff categories (ids 1..4) and 4 instance categories (ids 11..14).
CategorySet synth_categories();

struct SynthScene {
    LabelMap labels;
    InstanceMap instances;
    std::map<std::uint16_t, std::uint16_t> instance_categories;
};

// At least three distinct stuff and three distinct instance categories
// appear; at least min_instances instances are placed.
SynthScene make_scene(Rng& rng, const CategorySet& cats, int width, int height,
                      int min_instances);

// Writes <id>_labels.png / <id>_instances.png / <id>_instances.json for
// n_images scenes under dir, ready for convert-gt.
void write_synth_dataset(const std::filesystem::path& dir, int n_images, int width, int height,
                         int min_instances, std::uint64_t seed);

// GT-as-prediction dataset (PEDP files + manifest.json) under out_dir.
void write_identity_predictions(const DatasetManifest& gt, const std::filesystem::path& out_dir);

} // namespace ped::testing
