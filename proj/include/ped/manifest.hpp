#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "ped/gt_convert.hpp"
#include "ped/instance_match.hpp"
#include "ped/perturb.hpp"
#include "ped/raster.hpp"

namespace ped {

// ---- category set file ---------------------------------------------------
// JSON array of {"id": n, "name": "...", "kind": "stuff"|"instance"}.
CategorySet read_categories_file(const std::filesystem::path& path);

// ---- converted ground truth -----------------------------------------------

struct GtInstanceEntry {
    std::uint16_t id = 0;
    std::uint16_t category = 0;
    Box box;
    std::string edges_path; // 1-channel binary PEDP crop sized to box
    std::string edges_crc32;
};

struct GtImageEntry {
    std::string id;
    int width = 0;
    int height = 0;
    std::string semantic_path; // K-channel binary PEDP
    std::string semantic_crc32;
    std::vector<GtInstanceEntry> instances; // ascending instance id
};

struct DatasetManifest {
    int version = 1;
    int radius = 0; // conversion radius, echoed into reports
    CategorySet categories;
    std::vector<GtImageEntry> images;
    std::filesystem::path root; // directory the entry paths resolve against
};

DatasetManifest read_dataset_manifest(const std::filesystem::path& path);
void write_dataset_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

// Pixel data for one image; verifies checksums when strict.
GtScene load_gt_scene(const DatasetManifest& manifest, const GtImageEntry& entry,
                      bool strict = false);

// Writes <id>_sem.pedp and <id>_inst<k>.pedp under out_root and returns the
// manifest entry. Instances with empty edge maps (an instance covering the
// whole canvas) are dropped.
GtImageEntry save_gt_scene(const std::filesystem::path& out_root, const std::string& image_id,
                           const GtScene& scene, int width, int height);

// ---- predictions -----------------------------------------------------------

struct PredInstanceEntry {
    std::uint16_t category = 0;
    double score = 0.0;
    Box box;
    std::string edges_path; // 1-channel PEDP crop sized to box
};

struct PredImageEntry {
    std::string id;
    std::string semantic_path;                // K-channel PEDP (canonical)
    std::vector<std::string> semantic_quantized; // K 8-bit PNGs (needs --quantized)
    std::vector<PredInstanceEntry> instances;
};

struct PredictionManifest {
    int version = 1;
    std::vector<PredImageEntry> images;
    std::filesystem::path root;
};

PredictionManifest read_prediction_manifest(const std::filesystem::path& path);
void write_prediction_manifest(const std::filesystem::path& path,
                               const PredictionManifest& manifest);

struct ImagePrediction {
    ProbMap semantic; // K channels
    std::vector<PredInstance> instances;
};

// Loads and validates one image's predictions against the GT geometry.
ImagePrediction load_prediction(const PredictionManifest& manifest, const PredImageEntry& entry,
                                const GtImageEntry& gt_entry, const CategorySet& cats,
                                bool allow_quantized, bool strict);

// ---- conversion driver ------------------------------------------------------

// Converts one image worth of rasters. With filter_unknown_labels, labels
// outside the category set are treated as ignore; otherwise they raise
// LabelError. Instance categories must be instance-kind (ManifestError).
GtScene convert_scene(const LabelMap& labels, const InstanceMap* instances,
                      const std::map<std::uint16_t, std::uint16_t>& instance_categories,
                      const CategorySet& cats, int radius, bool filter_unknown_labels);

struct ConvertOptions {
    int radius = 2;
    bool filter_unknown_labels = false;
    int jobs = 1;
};

struct ConvertOutcome {
    int converted = 0;
    std::vector<std::pair<std::string, std::string>> errors; // image id, message
};

// Batch conversion: seg_root holds <id>_labels.png plus optional
// <id>_instances.png / <id>_instances.json pairs. Images are processed in
// sorted id order; per-image failures are recorded and conversion
// continues. Writes out_root/manifest.json.
ConvertOutcome convert_dataset(const std::filesystem::path& seg_root,
                               const std::filesystem::path& out_root, const CategorySet& cats,
                               const ConvertOptions& options);

// ---- perturbation driver -----------------------------------------------------

// JSON form: {"seed": n, "ops": [{"op": "dilate", "r": 1}, {"op": "shift",
// "dx": 3, "dy": 0}, {"op": "drop_instances", "fraction": 0.25},
// {"op": "jitter_boxes", "max_px": 2}, {"op": "flip_noise", "rate": 0.01},
// {"op": "score_assign", "dist": "constant"|"uniform", "a": .., "b": ..}]}.
PerturbSpec read_perturb_spec(const std::filesystem::path& path);

// Degrades every image of the GT manifest into a prediction dataset under
// out_dir (PEDP files + manifest.json). Each image uses the substream seed
// spec.seed ^ fnv1a64(image id), so output is independent of scheduling.
void perturb_dataset(const DatasetManifest& gt, const PerturbSpec& spec,
                     const std::filesystem::path& out_dir, int jobs = 1);

} // namespace ped
