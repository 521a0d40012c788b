#pragma once

#include <string>
#include <vector>

#include "relstable/sweep.hpp"

namespace relstable {

// CSV with header d,alpha,m,t,x,y,comparator,estimate,std_err,ratio.
// Coordinates are semicolon-joined inside the x and y cells; floats use
// shortest round-trip formatting, so parsing reproduces them bit-exactly.
std::string csv_string(const RatioReport& report);
void emit_csv(const RatioReport& report, const std::string& path);
std::vector<RatioRecord> parse_records_csv(const std::string& path);
std::vector<RatioRecord> parse_records_csv_text(const std::string& text);

// JSON report:
// { "config": {...}, "summary": { "min_ratio", "max_ratio", "geo_mean",
//   "log_spread", "fitted": {"C","c2_inner","gamma","lambda1"} },
//   "verdict": "pass"|"fail", "dropped_points": n } with stable key order;
// a "reason" key is appended on structural failure.
std::string json_string(const RatioReport& report);
void emit_report_json(const RatioReport& report, const std::string& path);

// Self-contained SVG scatter of log-ratio against the configured axis
// (t, dist or delta) with the fitted +-log C band drawn.
std::string svg_string(const RatioReport& report);
void emit_plot_svg(const RatioReport& report, const std::string& path);

// Shortest round-trip decimal formatting (the CSV float convention).
std::string format_double(double v);

}  // namespace relstable
