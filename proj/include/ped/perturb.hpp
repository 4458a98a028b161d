#pragma once

#include <cstdint>
#include <vector>

#include "ped/gt_convert.hpp"
#include "ped/instance_match.hpp"
#include "ped/raster.hpp"

namespace ped {

// Score distribution for score_assign.
struct ScoreDist {
    enum class Kind { Constant, Uniform };
    Kind kind = Kind::Constant;
    double a = 1.0; // constant value, or lower bound
    double b = 1.0; // upper bound (uniform)
};

// One degradation step. Ops compose left to right with no implicit
// normalization; stochastic ops draw from a single SplitMix64 stream
// seeded with PerturbSpec::seed, in documented scan order, so identical
// (input, spec) pairs give bit-identical outputs on every platform.
struct PerturbOp {
    enum class Kind { Dilate, Shift, DropInstances, JitterBoxes, FlipNoise, ScoreAssign };
    Kind kind = Kind::Dilate;

    int radius = 0;        // Dilate: Chebyshev radius
    int dx = 0, dy = 0;    // Shift: rigid translation
    double fraction = 0.0; // DropInstances: fraction of instances removed
    int max_px = 0;        // JitterBoxes: max |offset| per axis
    double rate = 0.0;     // FlipNoise: per-pixel flip probability
    ScoreDist score;       // ScoreAssign

    static PerturbOp dilate(int r);
    static PerturbOp shift(int dx, int dy);
    static PerturbOp drop_instances(double fraction);
    static PerturbOp jitter_boxes(int max_px);
    static PerturbOp flip_noise(double rate);
    static PerturbOp score_assign(ScoreDist d);
};

struct PerturbSpec {
    std::uint64_t seed = 0;
    std::vector<PerturbOp> ops;
};

// ParamError when any op parameter is outside its domain.
void validate(const PerturbSpec& spec);

// Degrade per-category binary GT channels into a prediction map.
// Instance-only ops (drop/jitter/score) are no-ops here. Flip noise draws
// one value per pixel in channel-major row-major order.
ProbMap perturb_semantic(const std::vector<BoundaryMap>& gt, const PerturbSpec& spec);

// Copy GT instances into predictions (score 1 unless assigned), then apply
// ops. Jitter and shift move box and crop content rigidly, clamped so the
// box stays inside the canvas; drop removes round(fraction * n) instances
// chosen by partial Fisher-Yates over the current list.
std::vector<PredInstance> perturb_instances(const std::vector<GtInstance>& gt,
                                            const PerturbSpec& spec,
                                            int canvas_width, int canvas_height);

} // namespace ped
