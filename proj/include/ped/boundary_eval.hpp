#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ped/raster.hpp"

namespace ped {

// Correspondence tallies for one binarized prediction against one GT map.
struct MatchCounts {
    std::uint64_t pred_total = 0;
    std::uint64_t pred_matched = 0;
    std::uint64_t gt_total = 0;
    std::uint64_t gt_matched = 0;

    MatchCounts& operator+=(const MatchCounts& o) {
        pred_total += o.pred_total;
        pred_matched += o.pred_matched;
        gt_total += o.gt_total;
        gt_matched += o.gt_matched;
        return *this;
    }
    bool operator==(const MatchCounts&) const = default;
};

// Precision at one threshold; pred_total == 0 counts as precision 0.
double precision(const MatchCounts& c);
// Recall at one threshold; gt_total == 0 counts as recall 0.
double recall(const MatchCounts& c);
// F-measure 2PR/(P+R), 0 when P + R == 0.
double f_measure(double p, double r);

// Evenly spaced thresholds k/(n+1), k = 1..n. n = 99 gives 0.01 .. 0.99.
std::vector<double> threshold_grid(int n);

// Dataset-scale accumulator: per-threshold counts summed over images.
// Merging is associative and commutative (integer sums), so parallel
// per-image evaluation reduces to the same result in any order.
struct PrAccumulator {
    std::vector<double> grid;
    std::vector<MatchCounts> counts;
    std::uint64_t images = 0; // contributions accumulated (nonempty GT)

    PrAccumulator() = default;
    // ParamError unless the grid is strictly increasing within (0,1).
    explicit PrAccumulator(std::vector<double> g);

    bool empty() const;
    PrAccumulator& operator+=(const PrAccumulator& o);
};

// One-sided distance matching between two binary maps: a predicted edge
// pixel is matched iff some GT edge pixel lies within Euclidean distance
// tol, and vice versa. Pixels under the ignore mask are treated as
// non-edge on both sides, so they contribute to none of the four counts
// and never act as match targets.
MatchCounts correspond(const BoundaryMap& pred, const BoundaryMap& gt, double tol,
                       const BoundaryMap* ignore = nullptr);

// Adds correspond(binarize(pred, theta), gt, tol, ignore) into acc for
// every theta of the grid. Images whose GT has no edge pixels (after
// ignore masking) are excluded from accumulation entirely, so recall is
// never taken over an empty reference. Computed in a single pass over the
// rasters via threshold histograms; the result is identical to the
// per-threshold recomputation.
void accumulate_pr(const ProbMap& pred, const BoundaryMap& gt,
                   const std::vector<double>& grid, double tol, PrAccumulator& acc,
                   const BoundaryMap* ignore = nullptr);

struct OdsResult {
    double f = 0.0;
    double theta = 0.0;
    double precision = 0.0;
    double recall = 0.0;
};

// Maximum F-measure over the accumulated grid (optimal dataset scale).
// Ties resolve to the lowest theta. ParamError on an accumulator with an
// empty grid.
OdsResult mf_ods(const PrAccumulator& acc);

} // namespace ped
