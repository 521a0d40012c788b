#pragma once

#include <string>
#include <utility>
#include <vector>

#include "relstable/domain.hpp"
#include "relstable/estimators.hpp"
#include "relstable/params.hpp"
#include "relstable/rng.hpp"

namespace relstable {

// One comparator/estimator pairing per verified theorem.
enum class TheoremTag {
    SmallTimeHeatKernel,   // killed kernel vs. small-time comparator
    LargeTimeHeatKernel,   // killed kernel vs. e^{-lambda1 t} boundary product
    GreenBounded,          // Green estimate vs. bounded-domain comparator
    GreenHalfSpaceLike,    // Green estimate vs. half-space-like comparator
    GreenHalfSpaceD1,      // Green estimate vs. half-line comparator (d = 1)
    GreenHalfSpaceDge2,    // Green estimate vs. half-space comparator (d >= 2)
    FreeKernelSharpness,   // free kernel quadrature vs. min(t^{-d/a}, t j^m)
};

std::string to_string(TheoremTag tag);
TheoremTag theorem_tag_from_string(const std::string& name);
std::vector<TheoremTag> all_theorem_tags();

struct SweepConfig {
    TheoremTag tag = TheoremTag::FreeKernelSharpness;
    Domain domain = Domain::full_space(1);
    double alpha = 1.0;
    std::vector<double> m_grid{1.0};
    std::vector<double> t_grid;       // ignored by Green tags
    int pairs_per_stratum = 20;
    McConfig mc;
    double max_rel_se = 0.25;   // records noisier than this are dropped
    double cap_c = 200.0;       // PASS iff the fitted band constant C <= cap
    double c2_inner = 1.0;
    bool fit_c2 = true;         // optimize c2 when the comparator uses the tail factor
    std::string axis = "dist";  // plot axis: t | dist | delta

    void validate() const;
};

struct RatioRecord {
    double m = 0.0, t = 0.0;
    Point x, y;
    double delta_x = 0.0, delta_y = 0.0, dist = 0.0;
    double comparator = 0.0;
    double estimate = 0.0;
    double std_err = 0.0;
    double ratio = 0.0;  // estimate / comparator
    bool retained = true;
};

struct SweepSummary {
    double min_ratio = 0.0, max_ratio = 0.0;
    double geo_mean = 0.0, log_spread = 0.0;
    double fitted_c = 0.0;
    double fitted_c2 = 1.0;
    double fitted_gamma = 0.0;
    double fitted_lambda1 = 0.0;
    bool has_c2 = false, has_gamma = false, has_lambda1 = false;
    int dropped_points = 0;
    bool pass = false;
    std::string reason;  // non-empty on structural failure
};

struct RatioReport {
    std::vector<std::pair<std::string, std::string>> config_echo;  // ordered
    std::vector<RatioRecord> records;
    SweepSummary summary;
    std::string axis = "dist";
    int d = 1;
    double alpha = 1.0;
};

// Evaluates comparator and estimate on the configured grid, drops records
// whose relative standard error exceeds the threshold, fits the two-sided
// band and renders the verdict. PASS iff every retained ratio lies in
// [1/C, C] with the fitted C below cap_c.
RatioReport run_sweep(const SweepConfig& cfg);

// Band constant alone: exp(max |log ratio|) over retained records.
double fit_band_c(const std::vector<RatioRecord>& records);

// Optimizes c2 (when the tag's comparator takes it) by minimizing the maximum
// absolute log ratio, rewriting comparator/ratio fields in place; returns
// {C, c2}.
std::pair<double, double> fit_band(const SweepConfig& cfg, std::vector<RatioRecord>& records);

// Stratified point pairs: both boundary distances >= scale; one <= scale/4;
// both <= scale/4. Deterministic given the stream.
std::vector<std::pair<Point, Point>> stratified_pairs(const Domain& dom, double scale,
                                                      int per_stratum, RngStream& rng);

// Exit-time check: finds the largest gamma with
// max over the (m, r) grid of P(tau_{B(x, A r)} < gamma r^alpha) <= B + 2 SE.
struct ExitCheckConfig {
    int d = 1;
    double alpha = 1.0;
    double A = 1.0;
    double B = 0.25;
    std::vector<double> m_grid{0.1, 1.0};
    std::vector<double> r_grid{0.25, 1.0};
    McConfig mc;
    double gamma_floor = 1e-4;
    double gamma_cap = 0.5;

    void validate() const;
};

RatioReport run_exit_time_check(const ExitCheckConfig& cfg);

}  // namespace relstable
