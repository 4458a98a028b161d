#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ped/boundary_eval.hpp"
#include "ped/raster.hpp"

namespace ped {

// How the dataset-level instance edge score is formed from TP pairs.
enum class InstanceEdgeMode {
    DatasetOds, // one threshold per category over counts summed across pairs
    PerPairMax, // mean of per-pair maximum F-measures (sensitivity mode)
};

struct CategorySupport {
    std::uint64_t images = 0;        // images contributing to the edge score
    std::uint64_t gt_instances = 0;  // tp + fn
    std::uint64_t pred_instances = 0; // tp + fp
    std::uint64_t tp = 0, fp = 0, fn = 0;
};

struct CategoryScore {
    std::uint16_t category = 0;
    std::string name;
    CategoryKind kind = CategoryKind::Stuff;
    double f_edge = 0.0;
    double f_object = 0.0;
    double f2 = 0.0;
    // ODS threshold; NaN in PerPairMax mode where no single theta exists.
    double theta_star = 0.0;
    CategorySupport support;
};

struct SkippedCategory {
    std::uint16_t category = 0;
    std::string name;
    std::string reason;
};

// Configuration echoed into every report so results are reproducible.
struct ReportConfig {
    std::string tolerance_mode; // "fraction-of-diagonal" or "pixels"
    double tolerance_value = 0.0;
    int thresholds = 0;
    double iou_min = 0.0;
    int top_t = 0;
    int radius = 0;
    double score_min = 0.0;
    std::string instance_edge_mode;
};

struct Report {
    std::vector<CategoryScore> categories; // evaluated, CategorySet order
    std::vector<SkippedCategory> skipped;
    std::optional<double> stuff_mean_f2;
    std::optional<double> instance_mean_f_edge;
    std::optional<double> instance_mean_f_object;
    std::optional<double> instance_mean_f2;
    std::optional<double> overall_mean_f2;
    ReportConfig config;
};

// Dataset aggregate for one instance category.
struct InstanceCategoryData {
    std::uint64_t tp = 0, fp = 0, fn = 0;
    PrAccumulator pair_acc;        // counts summed over all TP pairs
    std::vector<double> pair_mfs;  // per-pair maxima, image order
};

// F1 of object recognition: TP / (TP + FP/2 + FN/2).
// UndefinedError when all three counts are zero.
double f_object(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn);

// Stuff category score: f_edge = MF(ODS) of the accumulated semantic
// channel, f_object = 1, f2 = f_edge. Returns nullopt (with a reason) when
// the dataset holds no GT edges for the category.
std::optional<CategoryScore> f2_stuff(const Category& cat, const PrAccumulator& acc,
                                      std::string* skip_reason = nullptr);

// Instance category score from dataset-level match aggregates. Skipped
// only when the dataset holds neither GT instances nor predictions.
std::optional<CategoryScore> f2_instance(const Category& cat, const InstanceCategoryData& data,
                                         InstanceEdgeMode mode = InstanceEdgeMode::DatasetOds,
                                         std::string* skip_reason = nullptr);

// Means over evaluated categories. EmptyReportError when nothing was
// evaluated.
Report aggregate(const std::vector<CategoryScore>& scores,
                 const std::vector<SkippedCategory>& skipped,
                 const ReportConfig& config);

} // namespace ped
