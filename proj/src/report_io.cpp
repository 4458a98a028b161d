#include "ped/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "ped/io.hpp"

namespace ped {

using nlohmann::json;

namespace {

json opt_to_json(const std::optional<double>& v) {
    if (!v)
        return nullptr;
    return *v;
}

std::optional<double> opt_from_json(const json& j) {
    if (j.is_null())
        return std::nullopt;
    return j.get<double>();
}

std::string pct(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", v * 100.0);
    return buf;
}

std::string theta_str(double v) {
    if (std::isnan(v))
        return "";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

} // namespace

std::string report_to_json_string(const Report& r) {
    json j;
    j["format"] = "ped-report";
    j["version"] = 1;
    j["config"] = {{"tolerance_mode", r.config.tolerance_mode},
                   {"tolerance_value", r.config.tolerance_value},
                   {"thresholds", r.config.thresholds},
                   {"iou_min", r.config.iou_min},
                   {"top_t", r.config.top_t},
                   {"radius", r.config.radius},
                   {"score_min", r.config.score_min},
                   {"instance_edge_mode", r.config.instance_edge_mode}};
    json cats = json::array();
    for (const CategoryScore& s : r.categories) {
        json js;
        js["id"] = s.category;
        js["name"] = s.name;
        js["kind"] = s.kind == CategoryKind::Stuff ? "stuff" : "instance";
        js["f_edge"] = s.f_edge;
        js["f_object"] = s.f_object;
        js["f2"] = s.f2;
        js["theta_star"] = std::isnan(s.theta_star) ? json(nullptr) : json(s.theta_star);
        js["support"] = {{"images", s.support.images},
                         {"gt_instances", s.support.gt_instances},
                         {"pred_instances", s.support.pred_instances},
                         {"tp", s.support.tp},
                         {"fp", s.support.fp},
                         {"fn", s.support.fn}};
        cats.push_back(std::move(js));
    }
    j["categories"] = std::move(cats);
    json skipped = json::array();
    for (const SkippedCategory& s : r.skipped)
        skipped.push_back({{"id", s.category}, {"name", s.name}, {"reason", s.reason}});
    j["skipped"] = std::move(skipped);
    j["means"] = {{"stuff_f2", opt_to_json(r.stuff_mean_f2)},
                  {"instance_f_edge", opt_to_json(r.instance_mean_f_edge)},
                  {"instance_f_object", opt_to_json(r.instance_mean_f_object)},
                  {"instance_f2", opt_to_json(r.instance_mean_f2)},
                  {"overall_f2", opt_to_json(r.overall_mean_f2)}};
    return j.dump(2) + "\n";
}

Report report_from_json_string(const std::string& text) {
    const json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || j.value("format", "") != "ped-report")
        throw FormatError("not a ped report JSON document");
    Report r;
    const json& jc = j.at("config");
    r.config.tolerance_mode = jc.at("tolerance_mode").get<std::string>();
    r.config.tolerance_value = jc.at("tolerance_value").get<double>();
    r.config.thresholds = jc.at("thresholds").get<int>();
    r.config.iou_min = jc.at("iou_min").get<double>();
    r.config.top_t = jc.at("top_t").get<int>();
    r.config.radius = jc.at("radius").get<int>();
    r.config.score_min = jc.at("score_min").get<double>();
    r.config.instance_edge_mode = jc.at("instance_edge_mode").get<std::string>();
    for (const json& js : j.at("categories")) {
        CategoryScore s;
        s.category = js.at("id").get<std::uint16_t>();
        s.name = js.at("name").get<std::string>();
        s.kind = js.at("kind").get<std::string>() == "stuff" ? CategoryKind::Stuff
                                                             : CategoryKind::Instance;
        s.f_edge = js.at("f_edge").get<double>();
        s.f_object = js.at("f_object").get<double>();
        s.f2 = js.at("f2").get<double>();
        s.theta_star = js.at("theta_star").is_null()
                           ? std::numeric_limits<double>::quiet_NaN()
                           : js.at("theta_star").get<double>();
        const json& sup = js.at("support");
        s.support.images = sup.at("images").get<std::uint64_t>();
        s.support.gt_instances = sup.at("gt_instances").get<std::uint64_t>();
        s.support.pred_instances = sup.at("pred_instances").get<std::uint64_t>();
        s.support.tp = sup.at("tp").get<std::uint64_t>();
        s.support.fp = sup.at("fp").get<std::uint64_t>();
        s.support.fn = sup.at("fn").get<std::uint64_t>();
        r.categories.push_back(std::move(s));
    }
    for (const json& js : j.at("skipped")) {
        r.skipped.push_back({js.at("id").get<std::uint16_t>(), js.at("name").get<std::string>(),
                             js.at("reason").get<std::string>()});
    }
    const json& jm = j.at("means");
    r.stuff_mean_f2 = opt_from_json(jm.at("stuff_f2"));
    r.instance_mean_f_edge = opt_from_json(jm.at("instance_f_edge"));
    r.instance_mean_f_object = opt_from_json(jm.at("instance_f_object"));
    r.instance_mean_f2 = opt_from_json(jm.at("instance_f2"));
    r.overall_mean_f2 = opt_from_json(jm.at("overall_f2"));
    return r;
}

Report read_report(const std::filesystem::path& json_path) {
    return report_from_json_string(read_file(json_path));
}

std::string report_to_csv(const Report& r) {
    std::ostringstream out;
    out << "id,name,kind,f_edge,f_object,f2,theta_star,note\n";
    for (const CategoryScore& s : r.categories) {
        out << s.category << ',' << s.name << ','
            << (s.kind == CategoryKind::Stuff ? "stuff" : "instance") << ',' << pct(s.f_edge)
            << ',' << pct(s.f_object) << ',' << pct(s.f2) << ',' << theta_str(s.theta_star)
            << ",\n";
    }
    if (r.stuff_mean_f2)
        out << ",stuff_mean,mean,,," << pct(*r.stuff_mean_f2) << ",,\n";
    if (r.instance_mean_f2)
        out << ",instance_mean,mean," << pct(*r.instance_mean_f_edge) << ','
            << pct(*r.instance_mean_f_object) << ',' << pct(*r.instance_mean_f2) << ",,\n";
    if (r.overall_mean_f2)
        out << ",overall_mean,mean,,," << pct(*r.overall_mean_f2) << ",,\n";
    for (const SkippedCategory& s : r.skipped)
        out << s.category << ',' << s.name << ",skipped,,,,," << s.reason << "\n";
    return out.str();
}

std::string report_to_table(const Report& r) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof(line), "%-6s %-16s %-9s %8s %9s %8s %8s\n", "id", "name", "kind",
                  "F_edge", "F_object", "F2", "theta*");
    out << line;
    for (const CategoryScore& s : r.categories) {
        std::snprintf(line, sizeof(line), "%-6u %-16s %-9s %8s %9s %8s %8s\n", s.category,
                      s.name.c_str(), s.kind == CategoryKind::Stuff ? "stuff" : "instance",
                      pct(s.f_edge).c_str(), pct(s.f_object).c_str(), pct(s.f2).c_str(),
                      theta_str(s.theta_star).c_str());
        out << line;
    }
    auto mean_row = [&](const char* name, const std::optional<double>& fe,
                        const std::optional<double>& fo, const std::optional<double>& f2) {
        if (!f2)
            return;
        std::snprintf(line, sizeof(line), "%-6s %-16s %-9s %8s %9s %8s %8s\n", "", name, "mean",
                      fe ? pct(*fe).c_str() : "", fo ? pct(*fo).c_str() : "", pct(*f2).c_str(),
                      "");
        out << line;
    };
    mean_row("stuff", std::nullopt, std::nullopt, r.stuff_mean_f2);
    mean_row("instance", r.instance_mean_f_edge, r.instance_mean_f_object, r.instance_mean_f2);
    mean_row("overall", std::nullopt, std::nullopt, r.overall_mean_f2);
    for (const SkippedCategory& s : r.skipped)
        out << "skipped: " << s.name << " (" << s.reason << ")\n";
    return out.str();
}

void write_report(const Report& report, const std::filesystem::path& json_path,
                  const std::filesystem::path& csv_path) {
    if (!json_path.empty())
        write_file_atomic(json_path, report_to_json_string(report));
    if (!csv_path.empty())
        write_file_atomic(csv_path, report_to_csv(report));
}

} // namespace ped
