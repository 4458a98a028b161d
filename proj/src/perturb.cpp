#include "ped/perturb.hpp"

#include <algorithm>
#include <cmath>

#include "ped/rng.hpp"

namespace ped {

PerturbOp PerturbOp::dilate(int r) {
    PerturbOp op;
    op.kind = Kind::Dilate;
    op.radius = r;
    return op;
}
PerturbOp PerturbOp::shift(int dx, int dy) {
    PerturbOp op;
    op.kind = Kind::Shift;
    op.dx = dx;
    op.dy = dy;
    return op;
}
PerturbOp PerturbOp::drop_instances(double fraction) {
    PerturbOp op;
    op.kind = Kind::DropInstances;
    op.fraction = fraction;
    return op;
}
PerturbOp PerturbOp::jitter_boxes(int max_px) {
    PerturbOp op;
    op.kind = Kind::JitterBoxes;
    op.max_px = max_px;
    return op;
}
PerturbOp PerturbOp::flip_noise(double rate) {
    PerturbOp op;
    op.kind = Kind::FlipNoise;
    op.rate = rate;
    return op;
}
PerturbOp PerturbOp::score_assign(ScoreDist d) {
    PerturbOp op;
    op.kind = Kind::ScoreAssign;
    op.score = d;
    return op;
}

void validate(const PerturbSpec& spec) {
    for (const PerturbOp& op : spec.ops) {
        switch (op.kind) {
        case PerturbOp::Kind::Dilate:
            if (op.radius < 0)
                throw ParamError("perturb: dilate radius must be >= 0");
            break;
        case PerturbOp::Kind::Shift:
            break;
        case PerturbOp::Kind::DropInstances:
            if (!(op.fraction >= 0.0 && op.fraction <= 1.0))
                throw ParamError("perturb: drop fraction must lie in [0,1]");
            break;
        case PerturbOp::Kind::JitterBoxes:
            if (op.max_px < 0)
                throw ParamError("perturb: jitter range must be >= 0");
            break;
        case PerturbOp::Kind::FlipNoise:
            if (!(op.rate >= 0.0 && op.rate <= 1.0))
                throw ParamError("perturb: flip rate must lie in [0,1]");
            break;
        case PerturbOp::Kind::ScoreAssign:
            if (!(op.score.a >= 0.0 && op.score.a <= 1.0 && op.score.b >= 0.0
                  && op.score.b <= 1.0 && op.score.a <= op.score.b))
                throw ParamError("perturb: score bounds must satisfy 0 <= a <= b <= 1");
            break;
        }
    }
}

namespace {

// Chebyshev max filter, separable: horizontal pass then vertical pass.
void max_filter(float* plane, int w, int h, int r) {
    if (r <= 0)
        return;
    std::vector<float> tmp(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y) {
        const float* row = plane + static_cast<std::size_t>(y) * w;
        float* out = tmp.data() + static_cast<std::size_t>(y) * w;
        for (int x = 0; x < w; ++x) {
            float m = 0.0f;
            const int x1 = std::min(w - 1, x + r);
            for (int nx = std::max(0, x - r); nx <= x1; ++nx)
                m = std::max(m, row[nx]);
            out[x] = m;
        }
    }
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) {
            float m = 0.0f;
            const int y1 = std::min(h - 1, y + r);
            for (int ny = std::max(0, y - r); ny <= y1; ++ny)
                m = std::max(m, tmp[static_cast<std::size_t>(ny) * w + x]);
            plane[static_cast<std::size_t>(y) * w + x] = m;
        }
    }
}

void shift_plane(float* plane, int w, int h, int dx, int dy) {
    std::vector<float> src(plane, plane + static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int sx = x - dx;
            const int sy = y - dy;
            plane[static_cast<std::size_t>(y) * w + x] =
                (sx >= 0 && sx < w && sy >= 0 && sy < h)
                    ? src[static_cast<std::size_t>(sy) * w + sx]
                    : 0.0f;
        }
    }
}

} // namespace

ProbMap perturb_semantic(const std::vector<BoundaryMap>& gt, const PerturbSpec& spec) {
    validate(spec);
    if (gt.empty())
        throw ParamError("perturb_semantic: no channels");
    const int w = gt.front().width;
    const int h = gt.front().height;
    ProbMap pred(static_cast<int>(gt.size()), w, h);
    for (std::size_t c = 0; c < gt.size(); ++c) {
        if (gt[c].width != w || gt[c].height != h)
            throw ShapeError("perturb_semantic: channel dimensions differ");
        float* plane = pred.channel(static_cast<int>(c));
        for (std::size_t i = 0; i < gt[c].bits.size(); ++i)
            plane[i] = gt[c].bits[i] ? 1.0f : 0.0f;
    }

    Rng rng(spec.seed);
    for (const PerturbOp& op : spec.ops) {
        switch (op.kind) {
        case PerturbOp::Kind::Dilate:
            for (int c = 0; c < pred.channels; ++c)
                max_filter(pred.channel(c), w, h, op.radius);
            break;
        case PerturbOp::Kind::Shift:
            for (int c = 0; c < pred.channels; ++c)
                shift_plane(pred.channel(c), w, h, op.dx, op.dy);
            break;
        case PerturbOp::Kind::FlipNoise:
            for (float& v : pred.values)
                if (rng.next_double() < op.rate)
                    v = 1.0f - v;
            break;
        case PerturbOp::Kind::DropInstances:
        case PerturbOp::Kind::JitterBoxes:
        case PerturbOp::Kind::ScoreAssign:
            break; // instance-only
        }
    }
    return pred;
}

std::vector<PredInstance> perturb_instances(const std::vector<GtInstance>& gt,
                                            const PerturbSpec& spec,
                                            int canvas_width, int canvas_height) {
    validate(spec);
    std::vector<PredInstance> preds;
    preds.reserve(gt.size());
    for (const GtInstance& g : gt) {
        PredInstance p;
        p.category = g.category;
        p.score = 1.0;
        p.box = g.box;
        p.edges = ProbMap(1, g.box.width(), g.box.height());
        for (int y = 0; y < p.edges.height; ++y)
            for (int x = 0; x < p.edges.width; ++x)
                p.edges.at(0, x, y) = g.edges.at(g.box.x0 + x, g.box.y0 + y) ? 1.0f : 0.0f;
        preds.push_back(std::move(p));
    }

    auto move_box = [&](PredInstance& p, int dx, int dy) {
        dx = std::clamp(dx, -p.box.x0, canvas_width - p.box.x1);
        dy = std::clamp(dy, -p.box.y0, canvas_height - p.box.y1);
        p.box.x0 += dx;
        p.box.x1 += dx;
        p.box.y0 += dy;
        p.box.y1 += dy;
    };

    Rng rng(spec.seed);
    for (const PerturbOp& op : spec.ops) {
        switch (op.kind) {
        case PerturbOp::Kind::ScoreAssign:
            for (PredInstance& p : preds) {
                p.score = (op.score.kind == ScoreDist::Kind::Constant)
                              ? op.score.a
                              : op.score.a + rng.next_double() * (op.score.b - op.score.a);
            }
            break;
        case PerturbOp::Kind::DropInstances: {
            const std::size_t n = preds.size();
            const std::size_t k = static_cast<std::size_t>(
                std::llround(op.fraction * static_cast<double>(n)));
            std::vector<std::size_t> idx(n);
            for (std::size_t i = 0; i < n; ++i)
                idx[i] = i;
            for (std::size_t i = 0; i < k; ++i) { // partial Fisher-Yates
                const std::size_t j = i + rng.next_below(n - i);
                std::swap(idx[i], idx[j]);
            }
            std::vector<char> dropped(n, 0);
            for (std::size_t i = 0; i < k; ++i)
                dropped[idx[i]] = 1;
            std::vector<PredInstance> kept;
            kept.reserve(n - k);
            for (std::size_t i = 0; i < n; ++i)
                if (!dropped[i])
                    kept.push_back(std::move(preds[i]));
            preds = std::move(kept);
            break;
        }
        case PerturbOp::Kind::JitterBoxes:
            for (PredInstance& p : preds) {
                const int dx = static_cast<int>(rng.next_int(-op.max_px, op.max_px));
                const int dy = static_cast<int>(rng.next_int(-op.max_px, op.max_px));
                move_box(p, dx, dy);
            }
            break;
        case PerturbOp::Kind::Shift:
            for (PredInstance& p : preds)
                move_box(p, op.dx, op.dy);
            break;
        case PerturbOp::Kind::Dilate:
            for (PredInstance& p : preds)
                max_filter(p.edges.values.data(), p.edges.width, p.edges.height, op.radius);
            break;
        case PerturbOp::Kind::FlipNoise:
            for (PredInstance& p : preds)
                for (float& v : p.edges.values)
                    if (rng.next_double() < op.rate)
                        v = 1.0f - v;
            break;
        }
    }
    return preds;
}

} // namespace ped
