#include "ped/boundary_eval.hpp"

#include <algorithm>
#include <cmath>

#include "ped/distance.hpp"

namespace ped {

double precision(const MatchCounts& c) {
    if (c.pred_total == 0)
        return 0.0;
    return static_cast<double>(c.pred_matched) / static_cast<double>(c.pred_total);
}

double recall(const MatchCounts& c) {
    if (c.gt_total == 0)
        return 0.0;
    return static_cast<double>(c.gt_matched) / static_cast<double>(c.gt_total);
}

double f_measure(double p, double r) {
    if (p + r <= 0.0)
        return 0.0;
    return 2.0 * p * r / (p + r);
}

std::vector<double> threshold_grid(int n) {
    if (n < 1)
        throw ParamError("threshold grid needs at least one value");
    std::vector<double> grid(static_cast<std::size_t>(n));
    for (int k = 1; k <= n; ++k)
        grid[static_cast<std::size_t>(k) - 1] = static_cast<double>(k) / (n + 1);
    return grid;
}

PrAccumulator::PrAccumulator(std::vector<double> g) : grid(std::move(g)), counts(grid.size()) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0 && grid[i] < 1.0))
            throw ParamError("threshold grid values must lie in (0,1)");
        if (i > 0 && !(grid[i] > grid[i - 1]))
            throw ParamError("threshold grid must be strictly increasing");
    }
}

bool PrAccumulator::empty() const {
    for (const MatchCounts& c : counts)
        if (c.pred_total || c.gt_total)
            return false;
    return true;
}

PrAccumulator& PrAccumulator::operator+=(const PrAccumulator& o) {
    if (grid != o.grid)
        throw ParamError("accumulator threshold grids differ");
    for (std::size_t i = 0; i < counts.size(); ++i)
        counts[i] += o.counts[i];
    images += o.images;
    return *this;
}

namespace {

void check_same_shape(int wa, int ha, int wb, int hb, const char* what) {
    if (wa != wb || ha != hb)
        throw ShapeError(std::string(what) + ": raster dimensions differ");
}

BoundaryMap masked(const BoundaryMap& m, const BoundaryMap* ignore) {
    if (!ignore)
        return m;
    check_same_shape(m.width, m.height, ignore->width, ignore->height, "ignore mask");
    BoundaryMap out = m;
    for (std::size_t i = 0; i < out.bits.size(); ++i)
        if (ignore->bits[i])
            out.bits[i] = 0;
    return out;
}

// Index of the highest grid threshold still <= v, or -1 when v is below
// the whole grid. binarize uses >=, so pixel v participates at exactly the
// thresholds grid[0..bucket(v)].
int bucket(const std::vector<double>& grid, double v) {
    auto it = std::upper_bound(grid.begin(), grid.end(), v);
    return static_cast<int>(it - grid.begin()) - 1;
}

} // namespace

MatchCounts correspond(const BoundaryMap& pred, const BoundaryMap& gt, double tol,
                       const BoundaryMap* ignore) {
    check_same_shape(pred.width, pred.height, gt.width, gt.height, "correspond");
    const BoundaryMap p = masked(pred, ignore);
    const BoundaryMap g = masked(gt, ignore);
    const std::int64_t gate = squared_tolerance_gate(tol, p.width, p.height);

    MatchCounts out;
    out.pred_total = p.count();
    out.gt_total = g.count();
    if (out.pred_total == 0 && out.gt_total == 0)
        return out;

    if (out.pred_total > 0 && out.gt_total > 0) {
        const std::vector<std::int64_t> dist_to_gt = squared_distance_field(g);
        const std::vector<std::int64_t> dist_to_pred = squared_distance_field(p);
        for (std::size_t i = 0; i < p.bits.size(); ++i) {
            if (p.bits[i] && dist_to_gt[i] <= gate)
                ++out.pred_matched;
            if (g.bits[i] && dist_to_pred[i] <= gate)
                ++out.gt_matched;
        }
    }
    return out;
}

void accumulate_pr(const ProbMap& pred, const BoundaryMap& gt,
                   const std::vector<double>& grid, double tol, PrAccumulator& acc,
                   const BoundaryMap* ignore) {
    if (pred.channels != 1)
        throw ShapeError("accumulate_pr: prediction must have exactly one channel");
    check_same_shape(pred.width, pred.height, gt.width, gt.height, "accumulate_pr");
    if (grid != acc.grid)
        throw ParamError("accumulate_pr: grid does not match accumulator");

    const BoundaryMap g = masked(gt, ignore);
    const std::uint64_t gt_total = g.count();
    if (gt_total == 0)
        return; // image contributes nothing for this category
    ++acc.images;

    const int w = pred.width;
    const int h = pred.height;
    const std::int64_t gate = squared_tolerance_gate(tol, w, h);
    const std::vector<std::int64_t> dist_to_gt = squared_distance_field(g);

    const int n = static_cast<int>(grid.size());
    std::vector<std::uint64_t> hist_all(static_cast<std::size_t>(n), 0);
    std::vector<std::uint64_t> hist_near(static_cast<std::size_t>(n), 0);
    std::vector<std::uint64_t> hist_gt(static_cast<std::size_t>(n), 0);

    // Prediction side: a pixel with value v is a predicted edge at every
    // theta <= v and matched iff it also sits within the gate of some GT
    // pixel (that term is threshold independent).
    for (std::size_t i = 0; i < pred.values.size(); ++i) {
        if (ignore && ignore->bits[i])
            continue;
        const int b = bucket(grid, pred.values[i]);
        if (b < 0)
            continue;
        ++hist_all[static_cast<std::size_t>(b)];
        if (dist_to_gt[i] <= gate)
            ++hist_near[static_cast<std::size_t>(b)];
    }

    // GT side: a GT pixel is matched at theta iff some prediction pixel
    // within the gate has value >= theta, i.e. iff theta <= the maximum
    // prediction value over the tolerance disc.
    std::vector<std::pair<int, int>> disc;
    const int rad = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(gate))));
    for (int dy = -rad; dy <= rad; ++dy)
        for (int dx = -rad; dx <= rad; ++dx)
            if (static_cast<std::int64_t>(dx) * dx + static_cast<std::int64_t>(dy) * dy <= gate)
                disc.emplace_back(dx, dy);

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (!g.at(x, y))
                continue;
            float best = -1.0f;
            for (const auto& [dx, dy] : disc) {
                const int px = x + dx;
                const int py = y + dy;
                if (px < 0 || px >= w || py < 0 || py >= h)
                    continue;
                if (ignore && ignore->at(px, py))
                    continue;
                best = std::max(best, pred.at(0, px, py));
            }
            const int b = best < 0.0f ? -1 : bucket(grid, best);
            if (b >= 0)
                ++hist_gt[static_cast<std::size_t>(b)];
        }
    }

    // Suffix-sum the histograms into per-threshold counts.
    std::uint64_t run_all = 0, run_near = 0, run_gt = 0;
    for (int t = n - 1; t >= 0; --t) {
        run_all += hist_all[static_cast<std::size_t>(t)];
        run_near += hist_near[static_cast<std::size_t>(t)];
        run_gt += hist_gt[static_cast<std::size_t>(t)];
        MatchCounts& c = acc.counts[static_cast<std::size_t>(t)];
        c.pred_total += run_all;
        c.pred_matched += run_near;
        c.gt_total += gt_total;
        c.gt_matched += run_gt;
    }
}

OdsResult mf_ods(const PrAccumulator& acc) {
    if (acc.grid.empty())
        throw ParamError("mf_ods: empty accumulator grid");
    OdsResult best;
    best.theta = acc.grid.front();
    for (std::size_t i = 0; i < acc.grid.size(); ++i) {
        const double p = precision(acc.counts[i]);
        const double r = recall(acc.counts[i]);
        const double f = f_measure(p, r);
        if (f > best.f) {
            best = OdsResult{f, acc.grid[i], p, r};
        }
    }
    if (best.f == 0.0) {
        best.precision = precision(acc.counts.front());
        best.recall = recall(acc.counts.front());
    }
    return best;
}

} // namespace ped
