#pragma once

#include <filesystem>
#include <string>

#include "ped/panoptic_metric.hpp"

namespace ped {

// Full-precision JSON rendering; NaN theta and absent means become null.
std::string report_to_json_string(const Report& report);
Report report_from_json_string(const std::string& text);

Report read_report(const std::filesystem::path& json_path);

// One row per category with f_edge / f_object / f2 as percentages (one
// decimal), then mean rows, then skipped rows when any exist.
std::string report_to_csv(const Report& report);

// Compact console table.
std::string report_to_table(const Report& report);

// Writes the JSON and/or CSV rendering; either path may be empty to skip.
void write_report(const Report& report, const std::filesystem::path& json_path,
                  const std::filesystem::path& csv_path);

} // namespace ped
