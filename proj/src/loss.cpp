#include "ped/loss.hpp"

#include <cmath>
#include <tuple>

namespace ped {

namespace {

bool is_binary(float v) {
    return v == 0.0f || v == 1.0f;
}

std::pair<double, double> fractions(std::uint64_t edge, std::uint64_t total) {
    if (total == 0)
        throw ParamError("balance_factors: empty ground truth");
    const double eta = static_cast<double>(edge) / static_cast<double>(total);
    return {eta, 1.0 - eta};
}

} // namespace

std::pair<double, double> balance_factors(const ProbMap& gt) {
    std::uint64_t edge = 0;
    for (float v : gt.values) {
        if (!is_binary(v))
            throw ParamError("balance_factors: ground truth must be binary");
        edge += (v == 1.0f);
    }
    return fractions(edge, gt.values.size());
}

std::pair<double, double> balance_factors(const std::vector<BoundaryMap>& gt) {
    std::uint64_t edge = 0, total = 0;
    for (const BoundaryMap& m : gt) {
        edge += m.count();
        total += m.bits.size();
    }
    return fractions(edge, total);
}

LossBreakdown reweighted_edge_loss(const ProbMap& pred, const ProbMap& gt,
                                   double clip_eps, bool per_channel) {
    if (pred.channels != gt.channels || pred.width != gt.width || pred.height != gt.height)
        throw ShapeError("reweighted_edge_loss: prediction and ground truth shapes differ");
    if (!(clip_eps > 0.0 && clip_eps < 0.5))
        throw ParamError("reweighted_edge_loss: clip_eps must lie in (0, 0.5)");

    LossBreakdown out;
    std::tie(out.eta, out.eta_bar) = balance_factors(gt);
    out.gradient.assign(pred.values.size(), 0.0);

    const double lo = clip_eps;
    const double hi = 1.0 - clip_eps;
    const std::size_t plane = pred.plane_size();

    for (int c = 0; c < pred.channels; ++c) {
        double eta = out.eta, eta_bar = out.eta_bar;
        if (per_channel) {
            std::uint64_t edge = 0;
            const float* gc = gt.channel(c);
            for (std::size_t i = 0; i < plane; ++i)
                edge += (gc[i] == 1.0f);
            std::tie(eta, eta_bar) = fractions(edge, plane);
        }
        const float* fp = pred.channel(c);
        const float* yp = gt.channel(c);
        double* grad = out.gradient.data() + static_cast<std::size_t>(c) * plane;
        for (std::size_t i = 0; i < plane; ++i) {
            const double y = yp[i];
            const double f = fp[i];
            const bool clipped = f < lo || f > hi;
            const double fc = clipped ? (f < lo ? lo : hi) : f;
            out.value += -eta * (1.0 - y) * std::log(1.0 - fc) - eta_bar * y * std::log(fc);
            if (!clipped)
                grad[i] = eta * (1.0 - y) / (1.0 - f) - eta_bar * y / f;
        }
    }
    return out;
}

double total_loss(double l_s, double l_o, double l_i, const std::array<double, 3>& alphas) {
    for (double a : alphas)
        if (!(a >= 0.0) || !std::isfinite(a))
            throw ParamError("total_loss: weights must be finite and nonnegative");
    if (!std::isfinite(l_s) || !std::isfinite(l_o) || !std::isfinite(l_i))
        throw ParamError("total_loss: losses must be finite");
    return alphas[0] * l_s + alphas[1] * l_o + alphas[2] * l_i;
}

} // namespace ped
