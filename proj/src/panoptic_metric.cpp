#include "ped/panoptic_metric.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace ped {

double f_object(std::uint64_t tp, std::uint64_t fp, std::uint64_t fn) {
    if (tp == 0 && fp == 0 && fn == 0)
        throw UndefinedError("f_object: no instances on either side");
    return static_cast<double>(tp)
         / (static_cast<double>(tp) + 0.5 * static_cast<double>(fp) + 0.5 * static_cast<double>(fn));
}

std::optional<CategoryScore> f2_stuff(const Category& cat, const PrAccumulator& acc,
                                      std::string* skip_reason) {
    std::uint64_t gt_total = 0;
    for (const MatchCounts& c : acc.counts)
        gt_total += c.gt_total;
    if (gt_total == 0) {
        if (skip_reason)
            *skip_reason = "no ground-truth edges in dataset";
        return std::nullopt;
    }
    const OdsResult ods = mf_ods(acc);
    CategoryScore s;
    s.category = cat.id;
    s.name = cat.name;
    s.kind = CategoryKind::Stuff;
    s.f_edge = ods.f;
    s.f_object = 1.0;
    s.f2 = s.f_edge * s.f_object;
    s.theta_star = ods.theta;
    s.support.images = acc.images;
    return s;
}

std::optional<CategoryScore> f2_instance(const Category& cat, const InstanceCategoryData& data,
                                         InstanceEdgeMode mode, std::string* skip_reason) {
    const std::uint64_t n_gt = data.tp + data.fn;
    const std::uint64_t m_pred = data.tp + data.fp;
    if (n_gt == 0 && m_pred == 0) {
        if (skip_reason)
            *skip_reason = "no ground-truth instances and no predictions";
        return std::nullopt;
    }

    CategoryScore s;
    s.category = cat.id;
    s.name = cat.name;
    s.kind = CategoryKind::Instance;
    s.support.gt_instances = n_gt;
    s.support.pred_instances = m_pred;
    s.support.tp = data.tp;
    s.support.fp = data.fp;
    s.support.fn = data.fn;
    s.support.images = data.pair_acc.images;

    s.f_object = f_object(data.tp, data.fp, data.fn);
    s.theta_star = std::numeric_limits<double>::quiet_NaN();
    if (data.tp == 0) {
        s.f_edge = 0.0;
    } else if (mode == InstanceEdgeMode::DatasetOds) {
        const OdsResult ods = mf_ods(data.pair_acc);
        s.f_edge = ods.f;
        s.theta_star = ods.theta;
    } else {
        s.f_edge = std::accumulate(data.pair_mfs.begin(), data.pair_mfs.end(), 0.0)
                 / static_cast<double>(data.pair_mfs.size());
    }
    s.f2 = s.f_edge * s.f_object;
    return s;
}

Report aggregate(const std::vector<CategoryScore>& scores,
                 const std::vector<SkippedCategory>& skipped,
                 const ReportConfig& config) {
    if (scores.empty())
        throw EmptyReportError("aggregate: zero evaluated categories");

    Report r;
    r.categories = scores;
    r.skipped = skipped;
    r.config = config;

    double stuff_f2 = 0.0, inst_fe = 0.0, inst_fo = 0.0, inst_f2 = 0.0, all_f2 = 0.0;
    std::size_t n_stuff = 0, n_inst = 0;
    for (const CategoryScore& s : scores) {
        all_f2 += s.f2;
        if (s.kind == CategoryKind::Stuff) {
            stuff_f2 += s.f2;
            ++n_stuff;
        } else {
            inst_fe += s.f_edge;
            inst_fo += s.f_object;
            inst_f2 += s.f2;
            ++n_inst;
        }
    }
    if (n_stuff > 0)
        r.stuff_mean_f2 = stuff_f2 / static_cast<double>(n_stuff);
    if (n_inst > 0) {
        r.instance_mean_f_edge = inst_fe / static_cast<double>(n_inst);
        r.instance_mean_f_object = inst_fo / static_cast<double>(n_inst);
        r.instance_mean_f2 = inst_f2 / static_cast<double>(n_inst);
    }
    r.overall_mean_f2 = all_f2 / static_cast<double>(scores.size());
    return r;
}

} // namespace ped
