#include "ped/dataset_eval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

#include "parallel.hpp"
#include "ped/io.hpp"

namespace ped {

double Tolerance::resolve(int width, int height) const {
    if (!(value >= 0.0))
        throw ParamError("tolerance must be nonnegative");
    if (mode == Mode::Pixels)
        return value;
    const double diag = std::sqrt(static_cast<double>(width) * width
                                  + static_cast<double>(height) * height);
    return std::max(1.0, std::round(value * diag));
}

namespace {

// Per-image partial aggregates, merged in image order.
struct ImagePartial {
    std::vector<PrAccumulator> stuff;
    std::vector<InstanceCategoryData> inst;
};

ProbMap channel_view(const ProbMap& src, int c) {
    ProbMap out(1, src.width, src.height);
    const float* plane = src.channel(c);
    std::copy(plane, plane + src.plane_size(), out.values.begin());
    return out;
}

ImagePartial evaluate_image(const DatasetManifest& gt, const GtImageEntry& gt_entry,
                            const PredictionManifest& pred_manifest,
                            const PredImageEntry& pred_entry, const EvalConfig& cfg,
                            const std::vector<double>& grid) {
    const CategorySet& cats = gt.categories;
    GtScene scene = load_gt_scene(gt, gt_entry, cfg.strict);
    ImagePrediction pred = load_prediction(pred_manifest, pred_entry, gt_entry, cats,
                                           cfg.allow_quantized, cfg.strict);
    const double tol = cfg.tolerance.resolve(gt_entry.width, gt_entry.height);

    ImagePartial out;
    out.stuff.assign(static_cast<std::size_t>(cats.size()), PrAccumulator(grid));
    out.inst.resize(static_cast<std::size_t>(cats.size()));
    for (auto& d : out.inst)
        d.pair_acc = PrAccumulator(grid);

    std::unordered_map<std::uint16_t, std::vector<GtInstance>> gt_by_cat;
    for (GtInstance& g : scene.instances)
        gt_by_cat[g.category].push_back(std::move(g));
    std::unordered_map<std::uint16_t, std::vector<PredInstance>> pred_by_cat;
    for (PredInstance& p : pred.instances)
        if (p.score >= cfg.score_min)
            pred_by_cat[p.category].push_back(std::move(p));

    static const std::vector<GtInstance> no_gts;
    static const std::vector<PredInstance> no_preds;

    for (int ci = 0; ci < cats.size(); ++ci) {
        const Category& cat = cats.at(ci);
        if (cat.kind == CategoryKind::Stuff) {
            accumulate_pr(channel_view(pred.semantic, ci), scene.semantic[static_cast<std::size_t>(ci)],
                          grid, tol, out.stuff[static_cast<std::size_t>(ci)]);
            continue;
        }
        const auto git = gt_by_cat.find(cat.id);
        const auto pit = pred_by_cat.find(cat.id);
        const std::vector<GtInstance>& gts = git == gt_by_cat.end() ? no_gts : git->second;
        const std::vector<PredInstance>& cps = pit == pred_by_cat.end() ? no_preds : pit->second;
        if (gts.empty() && cps.empty())
            continue;

        const CoarseCandidates coarse = coarse_match(gts, cps, cfg.iou_min, cfg.top_t);
        const MatchResult match =
            fine_match(gts, cps, coarse, grid, tol, gt_entry.width, gt_entry.height);

        InstanceCategoryData& data = out.inst[static_cast<std::size_t>(ci)];
        data.tp += match.tp_pairs.size();
        data.fp += match.fp.size();
        data.fn += match.fn.size();
        for (const TpPair& pair : match.tp_pairs) {
            data.pair_acc += pair_accumulator(gts[static_cast<std::size_t>(pair.gt)],
                                              cps[static_cast<std::size_t>(pair.pred)], grid, tol,
                                              gt_entry.width, gt_entry.height);
            data.pair_mfs.push_back(pair.pair_mf);
        }
    }
    return out;
}

} // namespace

EvalResult evaluate_dataset(const DatasetManifest& gt, const PredictionManifest& preds,
                            const EvalConfig& cfg) {
    if (cfg.jobs < 1)
        throw ParamError("jobs must be >= 1");
    const std::vector<double> grid = threshold_grid(cfg.thresholds);

    std::unordered_map<std::string, const PredImageEntry*> pred_by_id;
    for (const PredImageEntry& e : preds.images)
        pred_by_id[e.id] = &e;
    for (const GtImageEntry& e : gt.images)
        if (!pred_by_id.count(e.id))
            throw ManifestError("no predictions for image '" + e.id + "'");

    std::vector<ImagePartial> partials(gt.images.size());
    parallel_for_index(gt.images.size(), cfg.jobs, [&](std::size_t i) {
        const GtImageEntry& entry = gt.images[i];
        partials[i] = evaluate_image(gt, entry, preds, *pred_by_id.at(entry.id), cfg, grid);
    });

    EvalResult result;
    result.categories = gt.categories;
    result.stuff_acc.assign(static_cast<std::size_t>(gt.categories.size()), PrAccumulator(grid));
    result.instance_data.resize(static_cast<std::size_t>(gt.categories.size()));
    for (auto& d : result.instance_data)
        d.pair_acc = PrAccumulator(grid);

    for (ImagePartial& p : partials) {
        for (int ci = 0; ci < gt.categories.size(); ++ci) {
            const auto i = static_cast<std::size_t>(ci);
            result.stuff_acc[i] += p.stuff[i];
            result.instance_data[i].tp += p.inst[i].tp;
            result.instance_data[i].fp += p.inst[i].fp;
            result.instance_data[i].fn += p.inst[i].fn;
            result.instance_data[i].pair_acc += p.inst[i].pair_acc;
            result.instance_data[i].pair_mfs.insert(result.instance_data[i].pair_mfs.end(),
                                                    p.inst[i].pair_mfs.begin(),
                                                    p.inst[i].pair_mfs.end());
        }
    }

    std::vector<CategoryScore> scores;
    std::vector<SkippedCategory> skipped;
    for (int ci = 0; ci < gt.categories.size(); ++ci) {
        const Category& cat = gt.categories.at(ci);
        std::string reason;
        std::optional<CategoryScore> score;
        if (cat.kind == CategoryKind::Stuff)
            score = f2_stuff(cat, result.stuff_acc[static_cast<std::size_t>(ci)], &reason);
        else
            score = f2_instance(cat, result.instance_data[static_cast<std::size_t>(ci)],
                                cfg.instance_edge_mode, &reason);
        if (score)
            scores.push_back(std::move(*score));
        else
            skipped.push_back({cat.id, cat.name, reason});
    }

    ReportConfig echo;
    echo.tolerance_mode = cfg.tolerance.mode_name();
    echo.tolerance_value = cfg.tolerance.value;
    echo.thresholds = cfg.thresholds;
    echo.iou_min = cfg.iou_min;
    echo.top_t = cfg.top_t;
    echo.radius = gt.radius;
    echo.score_min = cfg.score_min;
    echo.instance_edge_mode =
        cfg.instance_edge_mode == InstanceEdgeMode::DatasetOds ? "dataset-ods" : "per-pair-max";

    result.report = aggregate(scores, skipped, echo);
    return result;
}

void dump_pr_curves(const EvalResult& result, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (int ci = 0; ci < result.categories.size(); ++ci) {
        const Category& cat = result.categories.at(ci);
        const PrAccumulator& acc = cat.kind == CategoryKind::Stuff
                                       ? result.stuff_acc[static_cast<std::size_t>(ci)]
                                       : result.instance_data[static_cast<std::size_t>(ci)].pair_acc;
        if (acc.empty())
            continue;
        std::ostringstream out;
        out << "theta,precision,recall,f,pred_total,pred_matched,gt_total,gt_matched\n";
        for (std::size_t t = 0; t < acc.grid.size(); ++t) {
            const MatchCounts& c = acc.counts[t];
            const double p = precision(c);
            const double r = recall(c);
            char buf[160];
            std::snprintf(buf, sizeof(buf), "%.6g,%.17g,%.17g,%.17g,", acc.grid[t], p, r,
                          f_measure(p, r));
            out << buf << c.pred_total << ',' << c.pred_matched << ',' << c.gt_total << ','
                << c.gt_matched << "\n";
        }
        write_file_atomic(dir / (std::to_string(cat.id) + "_" + cat.name + ".csv"), out.str());
    }
}

} // namespace ped
