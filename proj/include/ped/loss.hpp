#pragma once

#include <array>
#include <vector>

#include "ped/raster.hpp"

namespace ped {

// Result of one reweighted cross-entropy evaluation. The gradient is laid
// out exactly like the prediction tensor (channel-major, row-major) and is
// taken w.r.t. the unclipped prediction: zero wherever the value was
// clipped.
struct LossBreakdown {
    double eta = 0.0;     // edge-pixel fraction of the ground truth
    double eta_bar = 0.0; // non-edge fraction; eta + eta_bar = 1
    double value = 0.0;
    std::vector<double> gradient;
};

// Edge / non-edge pixel fractions over all channels jointly.
// ParamError on an empty tensor or on non-binary ground-truth values.
std::pair<double, double> balance_factors(const ProbMap& gt);
std::pair<double, double> balance_factors(const std::vector<BoundaryMap>& gt);

// Reweighted cross-entropy edge loss
//   sum_p [ -eta * (1 - Y_p) * log(1 - f_p) - eta_bar * Y_p * log(f_p) ]
// with f clipped to [clip_eps, 1 - clip_eps]. The same form serves both
// the semantic and the instance edge loss. With per_channel set, the
// balance factors are taken per channel instead of jointly; the breakdown
// still reports the joint fractions.
LossBreakdown reweighted_edge_loss(const ProbMap& pred, const ProbMap& gt,
                                   double clip_eps = 1e-7, bool per_channel = false);

// Weighted combination of the three branch losses.
double total_loss(double l_s, double l_o, double l_i, const std::array<double, 3>& alphas);

} // namespace ped
