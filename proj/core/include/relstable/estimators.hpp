#pragma once

#include <cstdint>
#include <vector>

#include "relstable/domain.hpp"
#include "relstable/free_kernel.hpp"
#include "relstable/params.hpp"

namespace relstable {

// Monte Carlo run configuration. Batches of paths are partitioned by stream
// id, so the result is deterministic for fixed (seed, stream_base, batch
// layout) regardless of the worker count.
struct McConfig {
    long n_samples = 10000;
    int grid_steps = 64;
    std::uint64_t seed = 1;
    std::uint64_t stream_base = 0;
    long batch_size = 4096;

    void validate() const {
        if (n_samples < 1) throw std::invalid_argument("McConfig: n_samples must be >= 1");
        if (grid_steps < 1) throw std::invalid_argument("McConfig: grid_steps must be >= 1");
        if (batch_size < 1) throw std::invalid_argument("McConfig: batch_size must be >= 1");
    }
};

struct KernelEstimate {
    double value = 0.0;
    double std_err = 0.0;
    long n_samples = 0;
    double bandwidth = 0.0;  // the final-step width used by the density readout
    int grid_steps = 0;
};

struct GreenEstimate {
    double value = 0.0;
    double std_err = 0.0;
    long n_samples = 0;
    double bandwidth = 0.0;
    double time_horizon_cap = 0.0;
};

struct Lambda1Estimate {
    double value = 0.0;
    double std_err = 0.0;
    double window_lo = 0.0, window_hi = 0.0;  // fitted time window
    long n_samples = 0;
};

// Raised when an estimator cannot produce a usable value (e.g. all paths dead
// before the fitting window).
struct InsufficientDataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// p^m_D(t, x, y) by the one-step-back representation: paths are killed on the
// grid up to t - h (h = t/grid_steps) and the free kernel over the final step
// is averaged over the survivors. Unbiased given the grid; the bandwidth
// field records h.
KernelEstimate estimate_killed_kernel(const Domain& dom, double t, const Point& x,
                                      const Point& y, const ModelParams& p, const McConfig& mc);

// Batched form: one path ensemble from x serves every (t, y) request. All
// requests run on the shared step h = step hint (default: min t over requests
// divided by grid_steps), so each t must be close to a grid multiple.
struct KernelRequest {
    double t = 0.0;
    Point y;
};
std::vector<KernelEstimate> estimate_killed_kernel_batch(const Domain& dom, const Point& x,
                                                         const std::vector<KernelRequest>& reqs,
                                                         const ModelParams& p, const McConfig& mc,
                                                         double step_hint = 0.0);

// P_x(tau_D > t) with binomial standard error.
KernelEstimate estimate_survival(const Domain& dom, double t, const Point& x,
                                 const ModelParams& p, const McConfig& mc);

// Survival at every grid time k h, k = 0..n_steps, from one ensemble.
std::vector<KernelEstimate> survival_curve(const Domain& dom, const Point& x, double horizon,
                                           int n_steps, const ModelParams& p, const McConfig& mc);

// Green function G^m_D(x, y): time integral of the killed-kernel estimates
// over a geometric grid up to the horizon cap plus an exponential-tail
// extrapolation e^{-lambda1 t} fitted from the survival decay (bounded
// domains). Unbounded domains require m > 0 (and d >= 3 when m = 0 would be
// needed); the tail is then truncated at the cap without extrapolation.
GreenEstimate estimate_green(const Domain& dom, const Point& x, const Point& y,
                             const ModelParams& p, const McConfig& mc);

// Principal eigenvalue of the killed generator from the late-time survival
// slope: fits -d/dt ln P(tau > t) over [T, 3T] with T chosen so survival lies
// in [0.01, 0.2].
Lambda1Estimate estimate_lambda1(const Domain& dom, const ModelParams& p, const McConfig& mc);

// Empirical exit-time law of the ball B(center, radius): histogram of
// grid-detected first-exit times over [0, horizon].
struct ExitTimeLaw {
    double step = 0.0;
    std::vector<long> exits_by_step;  // index k: exits detected at time k*step
    long n_paths = 0;
    // P(tau < s) for s in grid units (interpolated within steps).
    double cdf(double s) const;
};
ExitTimeLaw exit_time_law(const Point& center, double radius, double horizon,
                          const ModelParams& p, const McConfig& mc);

// Worker threads used by the batch engines: RELSTABLE_WORKERS when set,
// hardware concurrency otherwise.
int worker_count();

}  // namespace relstable
