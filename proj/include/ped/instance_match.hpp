#pragma once

#include <cstdint>
#include <vector>

#include "ped/boundary_eval.hpp"
#include "ped/gt_convert.hpp"
#include "ped/raster.hpp"

namespace ped {

// One predicted instance. `edges` is a 1-channel probability crop sized
// exactly to `box`; values outside the box are zero by definition.
struct PredInstance {
    std::uint16_t category = 0;
    double score = 0.0;
    Box box;
    ProbMap edges;
};

// Box intersection over union in the half-open pixel convention.
double iou(const Box& a, const Box& b);

// Candidate predictions per ground-truth instance after the IoU gate.
struct CoarseCandidates {
    // Per gt (input order): prediction indices ranked by IoU descending,
    // ties broken by higher score then input order; at most top_t entries.
    std::vector<std::vector<int>> per_gt;
    // Gts with no candidate; immediately false negatives.
    std::vector<int> unmatched_gts;
};

// Coarse matching: for each gt keep the top_t predictions with
// iou > iou_min (strict). gts and preds must share one category.
CoarseCandidates coarse_match(const std::vector<GtInstance>& gts,
                              const std::vector<PredInstance>& preds,
                              double iou_min = 0.5, int top_t = 2);

struct TpPair {
    int gt = -1;
    int pred = -1;
    double pair_mf = 0.0;
};

// Disjoint partition of one image-category's instances.
struct MatchResult {
    std::vector<TpPair> tp_pairs;
    std::vector<int> fp; // prediction indices, ascending
    std::vector<int> fn; // gt indices, ascending
};

// Per-threshold correspondence counts of one (gt, pred) pair: the
// prediction crop embedded on the canvas against the gt instance edges.
// Equals accumulate_pr on the full canvas; computed on the joint
// bounding window, which contains every edge pixel of both maps.
PrAccumulator pair_accumulator(const GtInstance& gt, const PredInstance& pred,
                               const std::vector<double>& grid, double tol,
                               int canvas_width, int canvas_height);

// Maximum F-measure of the pair over the threshold grid.
double pair_max_f(const GtInstance& gt, const PredInstance& pred,
                  const std::vector<double>& grid, double tol,
                  int canvas_width, int canvas_height);

// Fine matching: evaluates pair_max_f for every coarse candidate pair and
// assigns greedily in descending pair_mf (ties: higher IoU, then candidate
// generation order), each gt and each prediction consumed at most once.
// Unassigned predictions (candidates or not) become FP, unassigned gts FN,
// so |TP| + |FP| = #preds and |TP| + |FN| = #gts always hold.
MatchResult fine_match(const std::vector<GtInstance>& gts,
                       const std::vector<PredInstance>& preds,
                       const CoarseCandidates& coarse,
                       const std::vector<double>& grid, double tol,
                       int canvas_width, int canvas_height);

} // namespace ped
