#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "relstable/domain.hpp"
#include "relstable/estimators.hpp"
#include "relstable/params.hpp"
#include "relstable/sweep.hpp"

namespace relstable {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fully validated run description parsed from the flat key = value config
// (sections in brackets). Parsing is strict: unknown sections or keys and
// duplicate keys are errors, and the seed is mandatory.
struct RunConfig {
    std::string command;  // levy | kernel | simulate | estimate | sweep | exit-check | report

    ModelParams params;
    std::optional<Domain> domain;
    McConfig mc;

    std::optional<SweepConfig> sweep;
    std::optional<ExitCheckConfig> exit_check;

    // outputs
    std::string out_dir = ".";
    std::string csv_name = "records.csv";
    std::string json_name = "report.json";
    std::string svg_name = "plot.svg";

    // levy / kernel grids
    std::vector<double> levy_r_grid;
    std::vector<double> kernel_t_grid;
    std::vector<double> kernel_r_grid;

    // simulate
    double sim_horizon = 1.0;
    int sim_n_grid = 64;
    long sim_n_paths = 1;
    std::string sim_sampler = "subordination";  // or "thinned"
    double sim_jump_cut = 0.05;
    std::optional<Point> sim_start;

    // estimate
    std::string est_quantity;  // kernel | survival | green | lambda1
    double est_t = 1.0;
    std::optional<Point> est_x, est_y;

    // report
    std::string report_input_csv;
    double report_cap_c = 200.0;
    std::string report_axis = "dist";

    std::string csv_path() const { return out_dir + "/" + csv_name; }
    std::string json_path() const { return out_dir + "/" + json_name; }
    std::string svg_path() const { return out_dir + "/" + svg_name; }
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

}  // namespace relstable
