// ped: panoptic edge detection evaluation toolkit.
//
// Subcommands: convert-gt, eval, perturb, loss, report.
// Exit codes: 0 success, 1 usage error, 2 data/format error,
// 3 internal invariant violation.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ped/dataset_eval.hpp"
#include "ped/io.hpp"
#include "ped/loss.hpp"
#include "ped/manifest.hpp"
#include "ped/report_io.hpp"

#include <json.hpp>

namespace {

ped::Tolerance parse_tolerance(const std::string& text) {
    ped::Tolerance tol;
    std::string num = text;
    if (text.size() > 2 && text.ends_with("px")) {
        tol.mode = ped::Tolerance::Mode::Pixels;
        num = text.substr(0, text.size() - 2);
    } else {
        tol.mode = ped::Tolerance::Mode::DiagonalFraction;
    }
    try {
        std::size_t used = 0;
        tol.value = std::stod(num, &used);
        if (used != num.size())
            throw std::invalid_argument(num);
    } catch (const std::exception&) {
        throw CLI::ValidationError("--tolerance", "expected a number or '<n>px'");
    }
    if (tol.value < 0.0)
        throw CLI::ValidationError("--tolerance", "must be nonnegative");
    return tol;
}

struct SharedFlags {
    std::string tolerance = "0.0035";
    int thresholds = 99;
    double iou_min = 0.5;
    int top_t = 2;
    double score_min = 0.0;
    std::string edge_mode = "dataset-ods";
    int jobs = 1;
    bool strict = false;
};

void add_eval_flags(CLI::App* cmd, SharedFlags& f) {
    cmd->add_option("--tolerance", f.tolerance,
                    "matching tolerance: fraction of image diagonal, or absolute pixels "
                    "with a 'px' suffix (e.g. 2px)")
        ->capture_default_str();
    cmd->add_option("--thresholds", f.thresholds, "number of binarization thresholds")
        ->check(CLI::Range(1, 10000))
        ->capture_default_str();
    cmd->add_option("--iou-min", f.iou_min, "coarse matching IoU gate (strict >)")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--top-t", f.top_t, "coarse matching candidate count")
        ->check(CLI::Range(1, 1000))
        ->capture_default_str();
    cmd->add_option("--score-min", f.score_min, "discard predictions below this score")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--instance-edge-mode", f.edge_mode,
                    "instance F_edge aggregation: dataset-ods or per-pair-max")
        ->check(CLI::IsMember({"dataset-ods", "per-pair-max"}))
        ->capture_default_str();
    cmd->add_option("--jobs", f.jobs, "parallel worker threads")
        ->check(CLI::Range(1, 512))
        ->capture_default_str();
    cmd->add_flag("--strict", f.strict, "verify checksums and value ranges strictly");
}

int run(int argc, char** argv) {
    CLI::App app{"panoptic edge detection evaluation toolkit"};
    app.require_subcommand(1);

    // convert-gt
    auto* convert = app.add_subcommand(
        "convert-gt", "convert segmentation ground truth to boundary ground truth");
    std::string conv_input, conv_output, conv_categories;
    int conv_radius = 2;
    bool conv_filter = false;
    int conv_jobs = 1;
    convert->add_option("--input", conv_input, "directory with <id>_labels.png rasters")
        ->required();
    convert->add_option("--output", conv_output, "output directory")->required();
    convert->add_option("--categories", conv_categories, "category set JSON file")->required();
    convert->add_option("--radius", conv_radius, "boundary neighborhood radius")
        ->check(CLI::Range(1, 64))
        ->capture_default_str();
    convert->add_flag("--filter", conv_filter,
                      "treat labels outside the category set as ignore instead of failing");
    convert->add_option("--jobs", conv_jobs, "parallel worker threads")->check(CLI::Range(1, 512));

    // eval
    auto* eval = app.add_subcommand("eval", "score predictions against converted ground truth");
    std::string eval_gt, eval_pred, eval_json, eval_csv, eval_pr_dump;
    bool eval_quantized = false;
    SharedFlags ef;
    eval->add_option("--gt", eval_gt, "ground-truth manifest.json")->required();
    eval->add_option("--pred", eval_pred, "prediction manifest.json")->required();
    eval->add_option("--out-json", eval_json, "report JSON output path");
    eval->add_option("--out-csv", eval_csv, "report CSV output path");
    eval->add_option("--pr-dump", eval_pr_dump, "directory for per-category P/R curve CSVs");
    eval->add_flag("--quantized", eval_quantized, "allow 8-bit PNG probability channels");
    add_eval_flags(eval, ef);

    // perturb
    auto* perturb = app.add_subcommand(
        "perturb", "degrade ground truth into a synthetic prediction dataset");
    std::string pert_gt, pert_out, pert_spec;
    std::uint64_t pert_seed = 0;
    int pert_jobs = 1;
    double pert_drop = -1.0, pert_flip = -1.0;
    int pert_dilate = -1, pert_jitter = -1;
    std::pair<int, int> pert_shift{0, 0};
    bool pert_has_shift = false;
    perturb->add_option("--gt", pert_gt, "ground-truth manifest.json")->required();
    perturb->add_option("--out", pert_out, "output directory")->required();
    perturb->add_option("--spec", pert_spec, "perturbation spec JSON file");
    perturb->add_option("--seed", pert_seed, "seed (overrides the spec file)");
    perturb->add_option("--drop", pert_drop, "append drop_instances(fraction)")
        ->check(CLI::Range(0.0, 1.0));
    perturb->add_option("--jitter", pert_jitter, "append jitter_boxes(max_px)")
        ->check(CLI::Range(0, 4096));
    perturb->add_option("--dilate", pert_dilate, "append dilate(radius)")
        ->check(CLI::Range(0, 4096));
    perturb
        ->add_option_function<std::vector<int>>(
            "--shift",
            [&](const std::vector<int>& v) {
                if (v.size() != 2)
                    throw CLI::ValidationError("--shift", "expected DX DY");
                pert_shift = {v[0], v[1]};
                pert_has_shift = true;
            },
            "append shift(dx, dy)")
        ->expected(2);
    perturb->add_option("--flip-noise", pert_flip, "append flip_noise(rate)")
        ->check(CLI::Range(0.0, 1.0));
    perturb->add_option("--jobs", pert_jobs, "parallel worker threads")->check(CLI::Range(1, 512));

    // loss
    auto* loss = app.add_subcommand("loss", "reweighted cross-entropy edge loss spot check");
    std::string loss_pred, loss_gt;
    double loss_eps = 1e-7;
    bool loss_per_channel = false;
    loss->add_option("--pred", loss_pred, "prediction PEDP file")->required();
    loss->add_option("--gt", loss_gt, "binary ground-truth PEDP file")->required();
    loss->add_option("--clip-eps", loss_eps, "probability clipping epsilon")
        ->check(CLI::Range(1e-30, 0.499))
        ->capture_default_str();
    loss->add_flag("--per-channel", loss_per_channel, "balance factors per channel");

    // report
    auto* report = app.add_subcommand("report", "re-render a report JSON");
    std::string rep_json, rep_csv;
    bool rep_print = false;
    report->add_option("--json", rep_json, "report JSON file")->required();
    report->add_option("--out-csv", rep_csv, "CSV output path");
    report->add_flag("--print", rep_print, "print a table to stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1; // any parse failure is a usage error
    }

    if (convert->parsed()) {
        const ped::CategorySet cats = ped::read_categories_file(conv_categories);
        ped::ConvertOptions opts;
        opts.radius = conv_radius;
        opts.filter_unknown_labels = conv_filter;
        opts.jobs = conv_jobs;
        const ped::ConvertOutcome outcome = ped::convert_dataset(conv_input, conv_output, cats, opts);
        std::fprintf(stderr, "converted %d image(s)\n", outcome.converted);
        for (const auto& [id, msg] : outcome.errors)
            std::fprintf(stderr, "error: %s: %s\n", id.c_str(), msg.c_str());
        return outcome.errors.empty() ? 0 : 2;
    }

    if (eval->parsed()) {
        ped::EvalConfig cfg;
        cfg.tolerance = parse_tolerance(ef.tolerance);
        cfg.thresholds = ef.thresholds;
        cfg.iou_min = ef.iou_min;
        cfg.top_t = ef.top_t;
        cfg.score_min = ef.score_min;
        cfg.instance_edge_mode = ef.edge_mode == "per-pair-max"
                                     ? ped::InstanceEdgeMode::PerPairMax
                                     : ped::InstanceEdgeMode::DatasetOds;
        cfg.jobs = ef.jobs;
        cfg.strict = ef.strict;
        cfg.allow_quantized = eval_quantized;
        const ped::DatasetManifest gt = ped::read_dataset_manifest(eval_gt);
        const ped::PredictionManifest preds = ped::read_prediction_manifest(eval_pred);
        const ped::EvalResult result = ped::evaluate_dataset(gt, preds, cfg);
        ped::write_report(result.report, eval_json, eval_csv);
        if (!eval_pr_dump.empty())
            ped::dump_pr_curves(result, eval_pr_dump);
        if (eval_json.empty() && eval_csv.empty())
            std::cout << ped::report_to_table(result.report);
        return 0;
    }

    if (perturb->parsed()) {
        ped::PerturbSpec spec;
        if (!pert_spec.empty())
            spec = ped::read_perturb_spec(pert_spec);
        if (perturb->count("--seed"))
            spec.seed = pert_seed;
        if (pert_dilate >= 0)
            spec.ops.push_back(ped::PerturbOp::dilate(pert_dilate));
        if (pert_has_shift)
            spec.ops.push_back(ped::PerturbOp::shift(pert_shift.first, pert_shift.second));
        if (pert_drop >= 0.0)
            spec.ops.push_back(ped::PerturbOp::drop_instances(pert_drop));
        if (pert_jitter >= 0)
            spec.ops.push_back(ped::PerturbOp::jitter_boxes(pert_jitter));
        if (pert_flip >= 0.0)
            spec.ops.push_back(ped::PerturbOp::flip_noise(pert_flip));
        const ped::DatasetManifest gt = ped::read_dataset_manifest(pert_gt);
        ped::perturb_dataset(gt, spec, pert_out, pert_jobs);
        return 0;
    }

    if (loss->parsed()) {
        const ped::ProbMap pred = ped::read_prob_map(loss_pred, true);
        const ped::ProbMap gt = ped::read_prob_map(loss_gt, true);
        const ped::LossBreakdown b =
            ped::reweighted_edge_loss(pred, gt, loss_eps, loss_per_channel);
        double grad_l2 = 0.0;
        for (double g : b.gradient)
            grad_l2 += g * g;
        nlohmann::json out{{"eta", b.eta},
                           {"eta_bar", b.eta_bar},
                           {"value", b.value},
                           {"gradient_l2", std::sqrt(grad_l2)}};
        std::cout << out.dump(2) << "\n";
        return 0;
    }

    if (report->parsed()) {
        const ped::Report rep = ped::read_report(rep_json);
        if (!rep_csv.empty())
            ped::write_report(rep, "", rep_csv);
        if (rep_print || rep_csv.empty())
            std::cout << ped::report_to_table(rep);
        return 0;
    }

    return 1;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const ped::ParamError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const ped::ShapeError& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 3;
    } catch (const ped::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 3;
    }
}
