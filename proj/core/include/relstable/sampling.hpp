#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "relstable/domain.hpp"
#include "relstable/params.hpp"
#include "relstable/rng.hpp"

namespace relstable {

// One simulated trajectory on a fixed time grid.
struct PathSample {
    std::vector<double> times;           // n_grid + 1 entries starting at 0
    std::vector<double> positions;       // (n_grid + 1) * dim, row-major
    std::vector<std::uint8_t> alive;     // per grid time; false stays false
    std::optional<int> exit_index;       // first grid index outside the domain
    int dim = 1;

    std::span<const double> position(int i) const {
        return {positions.data() + static_cast<std::size_t>(i) * dim,
                static_cast<std::size_t>(dim)};
    }
    int steps() const { return static_cast<int>(times.size()) - 1; }
};

// Per-step increment sampler for fixed (params, dt): precomputes the scaling
// and tilt constants once so the Monte Carlo engines pay no per-step setup.
// Draws S with E e^{-lambda S} = exp(-dt ((lambda + m^{2/alpha})^{alpha/2} - m))
// via Kanter's positive-stable variate (the one-sided Chambers-Mallows-Stuck
// specialization) accepted with probability e^{-m^{2/alpha} S}; the e^{m dt}
// normalization is absorbed by the geometric retry. Displacements are Gaussian
// with coordinate variance 2S given S.
class IncrementSampler {
public:
    IncrementSampler(const ModelParams& p, double dt);

    double subordinator(RngStream& rng) const {
        for (;;) {
            const double s = scale_ * standard_draw(rng);
            if (tempering_ == 0.0) return s;
            if (tempering_ * s < 745.0 && rng.uniform01() < std::exp(-tempering_ * s))
                return s;
        }
    }

    void displacement(RngStream& rng, std::span<double> out) const {
        const double sd = std::sqrt(2.0 * subordinator(rng));
        for (double& v : out) v = sd * rng.normal();
    }

    double dt() const { return dt_; }

private:
    double standard_draw(RngStream& rng) const {
        const double u = 3.14159265358979323846 * rng.uniform01();
        const double w = rng.exponential();
        const double log_a = (beta_ * std::log(std::sin(beta_ * u)) +
                              gamma_ * std::log(std::sin(gamma_ * u)) -
                              std::log(std::sin(u))) / gamma_;
        return std::exp(gamma_over_beta_ * (log_a - std::log(w)));
    }

    double dt_ = 0.0;
    double beta_ = 0.5, gamma_ = 0.5, gamma_over_beta_ = 1.0;
    double scale_ = 1.0;      // dt^{1/beta}
    double tempering_ = 0.0;  // m^{2/alpha}
};

// One increment of the tilted alpha/2-stable subordinator (single-call form).
double sample_subordinator_increment(double dt, const ModelParams& p, RngStream& rng);

// One spatial increment of X^m over dt: Gaussian with coordinate variance 2S
// given the subordinator increment S. The law has density free_kernel(dt, .).
void sample_increment(double dt, const ModelParams& p, RngStream& rng, std::span<double> out);

// Free path from the origin on a uniform grid (subordination increments).
PathSample sample_path(double horizon, int n_grid, const ModelParams& p, RngStream& rng);

// Path killed at the first grid time outside dom. Killing is grid-detected;
// sub-step excursions are not seen (coarse grids overestimate survival).
PathSample sample_killed_path(const Domain& dom, double horizon, int n_grid,
                              const Point& start, const ModelParams& p, RngStream& rng);

// Meyer-thinning sampler: the symmetric stable path is decomposed into exact
// compound-Poisson jumps above jump_cut plus the sub-cut remainder aggregated
// as a Gaussian with matched variance; each large jump of size rho is deleted
// independently with probability 1 - psi(m^{1/alpha} rho). Precomputes the
// retention table once; immutable and safe to share across threads afterwards.
class ThinnedPathSampler {
public:
    ThinnedPathSampler(const ModelParams& p, double jump_cut,
                       const QuadratureConfig& q = {});

    PathSample sample(double horizon, int n_grid, RngStream& rng) const;
    // Endpoint only (no grid storage).
    void sample_endpoint(double horizon, int n_grid, RngStream& rng,
                         std::span<double> out) const;

    double big_jump_rate() const { return big_rate_; }
    double retention(double jump_size) const;  // psi(m^{1/alpha} jump_size)

private:
    void step(double h, RngStream& rng, std::span<double> pos,
              long* deleted_count) const;

    ModelParams params_;
    double cut_ = 0.0;
    double big_rate_ = 0.0;        // nu(|z| > cut) of the stable driver
    double coord_var_rate_ = 0.0;  // per-coordinate variance rate of the sub-cut remainder
    double mass_scale_ = 0.0;
    // retention table on ln(m^{1/alpha} rho)
    double y_lo_ = 0.0, y_hi_ = 0.0, dy_ = 0.0;
    std::vector<double> log_psi_;
};

// Convenience single-call form (builds the sampler internally).
PathSample sample_path_thinned(double horizon, int n_grid, const ModelParams& p,
                               double jump_cut, RngStream& rng);

// Rates used by the thinning construction and its tests.
// nu(|z| > cut) for the symmetric stable driver.
double big_jump_rate(double cut, const ModelParams& p);
// Expected number of deleted jumps above cut per unit time.
double deleted_jump_rate(double cut, const ModelParams& p, const QuadratureConfig& q = {});
// Per-coordinate variance rate of the aggregated sub-cut jumps.
double small_jump_variance(double cut, const ModelParams& p);
// Deletion rate ignored below the cut (the construction's reported bias).
double sub_cut_deletion_rate(double cut, const ModelParams& p, const QuadratureConfig& q = {});

}  // namespace relstable
