#include "ped/instance_match.hpp"

#include <algorithm>
#include <cmath>

#include "ped/distance.hpp"

namespace ped {

double iou(const Box& a, const Box& b) {
    const Box inter = intersect(a, b);
    if (!inter.valid())
        return 0.0;
    const std::int64_t ai = inter.area();
    const std::int64_t au = a.area() + b.area() - ai;
    return static_cast<double>(ai) / static_cast<double>(au);
}

CoarseCandidates coarse_match(const std::vector<GtInstance>& gts,
                              const std::vector<PredInstance>& preds,
                              double iou_min, int top_t) {
    if (top_t < 1)
        throw ParamError("coarse_match: top_t must be >= 1");
    CoarseCandidates out;
    out.per_gt.resize(gts.size());
    for (std::size_t gi = 0; gi < gts.size(); ++gi) {
        struct Cand {
            int pred;
            double iou;
        };
        std::vector<Cand> cands;
        for (std::size_t pi = 0; pi < preds.size(); ++pi) {
            const double v = iou(gts[gi].box, preds[pi].box);
            if (v > iou_min)
                cands.push_back({static_cast<int>(pi), v});
        }
        std::stable_sort(cands.begin(), cands.end(), [&](const Cand& a, const Cand& b) {
            if (a.iou != b.iou)
                return a.iou > b.iou;
            return preds[static_cast<std::size_t>(a.pred)].score
                 > preds[static_cast<std::size_t>(b.pred)].score;
        });
        if (static_cast<int>(cands.size()) > top_t)
            cands.resize(static_cast<std::size_t>(top_t));
        for (const Cand& c : cands)
            out.per_gt[gi].push_back(c.pred);
        if (cands.empty())
            out.unmatched_gts.push_back(static_cast<int>(gi));
    }
    return out;
}

namespace {

// Joint window for a pair evaluation: every edge pixel of either side lies
// inside, so counts over the window equal counts over the full canvas.
Box pair_window(const GtInstance& gt, const PredInstance& pred, double tol,
                int canvas_width, int canvas_height) {
    const int margin = static_cast<int>(std::ceil(tol)) + 1;
    return dilate_clip(box_union(gt.box, pred.box), margin, canvas_width, canvas_height);
}

BoundaryMap crop_bits(const BoundaryMap& src, const Box& win) {
    BoundaryMap out(win.width(), win.height());
    for (int y = 0; y < win.height(); ++y) {
        const std::uint8_t* s =
            src.bits.data() + static_cast<std::size_t>(win.y0 + y) * src.width + win.x0;
        std::copy(s, s + win.width(), out.bits.data() + static_cast<std::size_t>(y) * win.width());
    }
    return out;
}

ProbMap place_in_window(const ProbMap& crop, const Box& box, const Box& win) {
    ProbMap out(1, win.width(), win.height());
    for (int y = 0; y < crop.height; ++y) {
        const float* s = crop.values.data() + static_cast<std::size_t>(y) * crop.width;
        float* d = out.values.data()
            + static_cast<std::size_t>(box.y0 - win.y0 + y) * win.width() + (box.x0 - win.x0);
        std::copy(s, s + crop.width, d);
    }
    return out;
}

void check_pred(const PredInstance& pred, int canvas_width, int canvas_height) {
    if (pred.edges.channels != 1 || pred.edges.width != pred.box.width()
        || pred.edges.height != pred.box.height())
        throw ShapeError("prediction edge crop does not match its box");
    if (pred.box.x0 < 0 || pred.box.y0 < 0 || pred.box.x1 > canvas_width
        || pred.box.y1 > canvas_height || !pred.box.valid())
        throw ShapeError("prediction box outside canvas");
}

} // namespace

PrAccumulator pair_accumulator(const GtInstance& gt, const PredInstance& pred,
                               const std::vector<double>& grid, double tol,
                               int canvas_width, int canvas_height) {
    check_pred(pred, canvas_width, canvas_height);
    const Box win = pair_window(gt, pred, tol, canvas_width, canvas_height);
    const BoundaryMap gt_win = crop_bits(gt.edges, win);
    const ProbMap pred_win = place_in_window(pred.edges, pred.box, win);
    PrAccumulator acc(grid);
    accumulate_pr(pred_win, gt_win, grid, tol, acc);
    return acc;
}

double pair_max_f(const GtInstance& gt, const PredInstance& pred,
                  const std::vector<double>& grid, double tol,
                  int canvas_width, int canvas_height) {
    return mf_ods(pair_accumulator(gt, pred, grid, tol, canvas_width, canvas_height)).f;
}

MatchResult fine_match(const std::vector<GtInstance>& gts,
                       const std::vector<PredInstance>& preds,
                       const CoarseCandidates& coarse,
                       const std::vector<double>& grid, double tol,
                       int canvas_width, int canvas_height) {
    if (coarse.per_gt.size() != gts.size())
        throw ParamError("fine_match: candidate list does not match gt list");

    struct ScoredPair {
        int gt;
        int pred;
        double mf;
        double iou;
    };
    std::vector<ScoredPair> pairs;
    for (std::size_t gi = 0; gi < gts.size(); ++gi) {
        for (int pi : coarse.per_gt[gi]) {
            const PredInstance& p = preds[static_cast<std::size_t>(pi)];
            pairs.push_back({static_cast<int>(gi), pi,
                             pair_max_f(gts[gi], p, grid, tol, canvas_width, canvas_height),
                             iou(gts[gi].box, p.box)});
        }
    }
    // Stable sort keeps candidate generation order on full ties.
    std::stable_sort(pairs.begin(), pairs.end(), [](const ScoredPair& a, const ScoredPair& b) {
        if (a.mf != b.mf)
            return a.mf > b.mf;
        return a.iou > b.iou;
    });

    MatchResult out;
    std::vector<char> gt_used(gts.size(), 0);
    std::vector<char> pred_used(preds.size(), 0);
    for (const ScoredPair& p : pairs) {
        if (gt_used[static_cast<std::size_t>(p.gt)] || pred_used[static_cast<std::size_t>(p.pred)])
            continue;
        gt_used[static_cast<std::size_t>(p.gt)] = 1;
        pred_used[static_cast<std::size_t>(p.pred)] = 1;
        out.tp_pairs.push_back({p.gt, p.pred, p.mf});
    }
    for (std::size_t pi = 0; pi < preds.size(); ++pi)
        if (!pred_used[pi])
            out.fp.push_back(static_cast<int>(pi));
    for (std::size_t gi = 0; gi < gts.size(); ++gi)
        if (!gt_used[gi])
            out.fn.push_back(static_cast<int>(gi));
    return out;
}

} // namespace ped
