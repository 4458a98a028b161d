#pragma once

#include <filesystem>

#include "ped/manifest.hpp"
#include "ped/panoptic_metric.hpp"

namespace ped {

// Matching tolerance, either absolute pixels or a fraction of the image
// diagonal (rounded to the nearest pixel, minimum 1).
struct Tolerance {
    enum class Mode { DiagonalFraction, Pixels };
    Mode mode = Mode::DiagonalFraction;
    double value = 0.0035;

    double resolve(int width, int height) const;
    const char* mode_name() const {
        return mode == Mode::DiagonalFraction ? "fraction-of-diagonal" : "pixels";
    }
};

struct EvalConfig {
    Tolerance tolerance;
    int thresholds = 99;
    double iou_min = 0.5;
    int top_t = 2;
    double score_min = 0.0; // predictions below are discarded up front
    InstanceEdgeMode instance_edge_mode = InstanceEdgeMode::DatasetOds;
    int jobs = 1;
    bool strict = false;
    bool allow_quantized = false;
};

// Dataset-level aggregates, kept alongside the report so tooling (pr-dump,
// acceptance checks) can inspect the full PR curves.
struct EvalResult {
    Report report;
    CategorySet categories;
    std::vector<PrAccumulator> stuff_acc;          // per channel index
    std::vector<InstanceCategoryData> instance_data; // per channel index
};

// Evaluates every image of the GT manifest against the prediction
// manifest (joined by image id; a GT image without predictions is a
// ManifestError). Per-image work parallelizes across `jobs` threads;
// partial results merge in image order, so the report is byte-identical
// for any job count.
EvalResult evaluate_dataset(const DatasetManifest& gt, const PredictionManifest& preds,
                            const EvalConfig& config);

// Per-category per-threshold P/R points as CSV files under dir.
void dump_pr_curves(const EvalResult& result, const std::filesystem::path& dir);

} // namespace ped
