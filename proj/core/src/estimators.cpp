#include "relstable/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <thread>

#include "relstable/sampling.hpp"
#include "relstable/stats.hpp"

namespace relstable {

namespace {

struct ProbePlan {
    std::vector<int> kernel_steps;   // sorted; position read at step s, estimating t=(s+1)h
    std::vector<Point> targets;      // shared y list for every kernel step
    std::vector<int> survival_steps; // sorted; alive flag recorded at step s
    std::vector<double> green_weights;  // per kernel step; enables per-path totals
    bool record_exits = false;
};

struct RunResult {
    std::vector<double> k_sum, k_sumsq;  // [kernel_steps.size() * targets.size()]
    std::vector<double> g_sum, g_sumsq;  // [targets.size()]
    std::vector<long> alive;             // [survival_steps.size()]
    std::vector<long> exit_hist;         // [n_steps + 1]
    long n_paths = 0;
};

void merge_into(RunResult& into, const RunResult& from) {
    for (std::size_t i = 0; i < into.k_sum.size(); ++i) {
        into.k_sum[i] += from.k_sum[i];
        into.k_sumsq[i] += from.k_sumsq[i];
    }
    for (std::size_t i = 0; i < into.g_sum.size(); ++i) {
        into.g_sum[i] += from.g_sum[i];
        into.g_sumsq[i] += from.g_sumsq[i];
    }
    for (std::size_t i = 0; i < into.alive.size(); ++i) into.alive[i] += from.alive[i];
    for (std::size_t i = 0; i < into.exit_hist.size(); ++i)
        into.exit_hist[i] += from.exit_hist[i];
    into.n_paths += from.n_paths;
}

void run_batches(long n_batches, const std::function<void(long)>& work) {
    const int workers = std::min<long>(worker_count(), n_batches);
    if (workers <= 1) {
        for (long b = 0; b < n_batches; ++b) work(b);
        return;
    }
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const long b = next.fetch_add(1);
                if (b >= n_batches) return;
                work(b);
            }
        });
    for (auto& th : pool) th.join();
}

// Core killed-path ensemble walker. Batches are keyed by stream id and merged
// in batch order, so results do not depend on the worker count.
RunResult run_killed_engine(const Domain& dom, const Point& start, const ModelParams& p,
                            double h, int n_steps, const ProbePlan& plan,
                            const RadialKernelTable* table, const McConfig& mc) {
    mc.validate();
    p.validate();
    if (dom.dim() != p.d) throw std::invalid_argument("estimator: domain dimension mismatch");
    if (!dom.contains(start))
        throw std::invalid_argument("estimator: start point must lie in the domain");
    if (!plan.kernel_steps.empty() && table == nullptr)
        throw std::invalid_argument("estimator: kernel probes need a kernel table");

    const int d = p.d;
    const std::size_t n_ks = plan.kernel_steps.size();
    const std::size_t n_tg = plan.targets.size();
    const bool greens = !plan.green_weights.empty();
    const long n_batches = (mc.n_samples + mc.batch_size - 1) / mc.batch_size;

    std::vector<RunResult> parts(n_batches);
    const IncrementSampler inc(p, h);

    run_batches(n_batches, [&](long b) {
        RunResult acc;
        acc.k_sum.assign(n_ks * n_tg, 0.0);
        acc.k_sumsq.assign(n_ks * n_tg, 0.0);
        acc.g_sum.assign(greens ? n_tg : 0, 0.0);
        acc.g_sumsq.assign(greens ? n_tg : 0, 0.0);
        acc.alive.assign(plan.survival_steps.size(), 0);
        acc.exit_hist.assign(plan.record_exits ? n_steps + 1 : 0, 0);

        RngStream rng(mc.seed, mc.stream_base + static_cast<std::uint64_t>(b));
        const long lo = b * mc.batch_size;
        const long hi = std::min(mc.n_samples, lo + mc.batch_size);

        Point pos(d), step(d);
        std::vector<double> green_tot(greens ? n_tg : 0, 0.0);

        for (long it = lo; it < hi; ++it) {
            std::copy(start.begin(), start.end(), pos.begin());
            bool alive = true;
            std::size_t kp = 0, sp = 0;
            if (greens) std::fill(green_tot.begin(), green_tot.end(), 0.0);

            for (int k = 0; k <= n_steps; ++k) {
                if (k > 0 && alive) {
                    inc.displacement(rng, step);
                    for (int i = 0; i < d; ++i) pos[i] += step[i];
                    if (!dom.contains(pos)) {
                        alive = false;
                        if (plan.record_exits) ++acc.exit_hist[k];
                    }
                }
                while (sp < plan.survival_steps.size() && plan.survival_steps[sp] == k) {
                    if (alive) ++acc.alive[sp];
                    ++sp;
                }
                while (kp < n_ks && plan.kernel_steps[kp] == k) {
                    if (alive) {
                        for (std::size_t j = 0; j < n_tg; ++j) {
                            const double v = (*table)(dist(pos, plan.targets[j]));
                            acc.k_sum[kp * n_tg + j] += v;
                            acc.k_sumsq[kp * n_tg + j] += v * v;
                            if (greens) green_tot[j] += plan.green_weights[kp] * v;
                        }
                    }
                    ++kp;
                }
                if (kp >= n_ks && sp >= plan.survival_steps.size() && !plan.record_exits) break;
                if (!alive && plan.record_exits && kp >= n_ks && sp >= plan.survival_steps.size())
                    break;
            }
            if (greens)
                for (std::size_t j = 0; j < n_tg; ++j) {
                    acc.g_sum[j] += green_tot[j];
                    acc.g_sumsq[j] += green_tot[j] * green_tot[j];
                }
        }
        parts[b] = std::move(acc);
    });

    RunResult total;
    total.k_sum.assign(n_ks * n_tg, 0.0);
    total.k_sumsq.assign(n_ks * n_tg, 0.0);
    total.g_sum.assign(greens ? n_tg : 0, 0.0);
    total.g_sumsq.assign(greens ? n_tg : 0, 0.0);
    total.alive.assign(plan.survival_steps.size(), 0);
    total.exit_hist.assign(plan.record_exits ? n_steps + 1 : 0, 0);
    for (const auto& part : parts) merge_into(total, part);
    return total;
}

KernelEstimate to_estimate(double sum, double sumsq, long n, double h, int steps) {
    KernelEstimate e;
    e.n_samples = n;
    e.bandwidth = h;
    e.grid_steps = steps;
    e.value = sum / n;
    if (n > 1) {
        const double var = std::max(0.0, (sumsq - sum * sum / n) / (n - 1));
        e.std_err = std::sqrt(var / n);
    }
    return e;
}

double kernel_table_range(const Domain& dom, const Point& x) {
    // Largest |z - y| seen by the readout: z and y both lie in the domain's
    // reach; pad with the start offset for unbounded kinds.
    const auto [lo, hi] = dom.sampling_box();
    double diag = 0.0;
    for (std::size_t i = 0; i < lo.size(); ++i) diag += (hi[i] - lo[i]) * (hi[i] - lo[i]);
    return dom.diameter_hint() + std::sqrt(diag) * 0.5 + norm(x) + 4.0;
}

}  // namespace

int worker_count() {
    if (const char* env = std::getenv("RELSTABLE_WORKERS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

std::vector<KernelEstimate> estimate_killed_kernel_batch(const Domain& dom, const Point& x,
                                                         const std::vector<KernelRequest>& reqs,
                                                         const ModelParams& p, const McConfig& mc,
                                                         double step_hint) {
    mc.validate();
    if (reqs.empty()) return {};
    double t_min = reqs.front().t;
    for (const auto& r : reqs) {
        if (!(r.t > 0.0)) throw std::invalid_argument("estimate_killed_kernel_batch: t must be > 0");
        if (!dom.contains(r.y))
            throw std::invalid_argument("estimate_killed_kernel_batch: y must lie in the domain");
        t_min = std::min(t_min, r.t);
    }
    const double h = step_hint > 0.0 ? step_hint : t_min / mc.grid_steps;

    // Deduplicate (step, target) pairs onto the plan's dense layout.
    ProbePlan plan;
    std::vector<std::pair<int, std::size_t>> where(reqs.size());  // (step idx, target idx)
    for (std::size_t i = 0; i < reqs.size(); ++i) {
        const int steps = std::max(1, static_cast<int>(std::llround(reqs[i].t / h)));
        int s = steps - 1;
        std::size_t tj = plan.targets.size();
        for (std::size_t j = 0; j < plan.targets.size(); ++j)
            if (plan.targets[j] == reqs[i].y) {
                tj = j;
                break;
            }
        if (tj == plan.targets.size()) plan.targets.push_back(reqs[i].y);
        where[i] = {s, tj};
    }
    for (const auto& [s, j] : where) plan.kernel_steps.push_back(s);
    std::sort(plan.kernel_steps.begin(), plan.kernel_steps.end());
    plan.kernel_steps.erase(std::unique(plan.kernel_steps.begin(), plan.kernel_steps.end()),
                            plan.kernel_steps.end());

    int n_steps = 0;
    for (const auto& [s, j] : where) n_steps = std::max(n_steps, s);

    const RadialKernelTable table(h, p, kernel_table_range(dom, x));
    const RunResult res = run_killed_engine(dom, x, p, h, n_steps, plan, &table, mc);

    std::vector<KernelEstimate> out(reqs.size());
    for (std::size_t i = 0; i < reqs.size(); ++i) {
        const auto [s, j] = where[i];
        const std::size_t ks = std::lower_bound(plan.kernel_steps.begin(),
                                                plan.kernel_steps.end(), s) -
                               plan.kernel_steps.begin();
        const std::size_t idx = ks * plan.targets.size() + j;
        out[i] = to_estimate(res.k_sum[idx], res.k_sumsq[idx], res.n_paths, h, s + 1);
    }
    return out;
}

KernelEstimate estimate_killed_kernel(const Domain& dom, double t, const Point& x,
                                      const Point& y, const ModelParams& p, const McConfig& mc) {
    if (!(t > 0.0)) throw std::invalid_argument("estimate_killed_kernel: t must be > 0");
    if (!dom.contains(x) || !dom.contains(y))
        throw std::invalid_argument("estimate_killed_kernel: x and y must lie in the domain");
    return estimate_killed_kernel_batch(dom, x, {{t, y}}, p, mc, t / mc.grid_steps).front();
}

std::vector<KernelEstimate> survival_curve(const Domain& dom, const Point& x, double horizon,
                                           int n_steps, const ModelParams& p, const McConfig& mc) {
    if (!(horizon > 0.0) || n_steps < 1)
        throw std::invalid_argument("survival_curve: need horizon > 0 and n_steps >= 1");
    const double h = horizon / n_steps;
    ProbePlan plan;
    plan.survival_steps.resize(n_steps + 1);
    for (int k = 0; k <= n_steps; ++k) plan.survival_steps[k] = k;
    const RunResult res = run_killed_engine(dom, x, p, h, n_steps, plan, nullptr, mc);
    std::vector<KernelEstimate> out(n_steps + 1);
    for (int k = 0; k <= n_steps; ++k) {
        KernelEstimate e;
        e.n_samples = res.n_paths;
        e.grid_steps = n_steps;
        e.bandwidth = h;
        const double prob = static_cast<double>(res.alive[k]) / res.n_paths;
        e.value = prob;
        e.std_err = std::sqrt(std::max(prob * (1.0 - prob), 0.0) / res.n_paths);
        out[k] = e;
    }
    return out;
}

KernelEstimate estimate_survival(const Domain& dom, double t, const Point& x,
                                 const ModelParams& p, const McConfig& mc) {
    if (!(t > 0.0)) throw std::invalid_argument("estimate_survival: t must be > 0");
    if (!dom.contains(x))
        throw std::invalid_argument("estimate_survival: x must lie in the domain");
    return survival_curve(dom, x, t, mc.grid_steps, p, mc).back();
}

Lambda1Estimate estimate_lambda1(const Domain& dom, const ModelParams& p, const McConfig& mc) {
    if (!dom.bounded()) throw std::domain_error("estimate_lambda1: domain must be bounded");
    const Point x = dom.deep_point();

    // Pilot: grow the horizon until survival drops below the window top.
    const double r_scale = 0.5 * dom.diameter_hint();
    double horizon = std::pow(r_scale, p.alpha);
    McConfig pilot = mc;
    pilot.n_samples = std::min<long>(mc.n_samples, 4000);
    bool found = false;
    for (int round = 0; round < 10; ++round) {
        const auto curve = survival_curve(dom, x, horizon, mc.grid_steps, p, pilot);
        if (curve.back().value <= 0.2) {
            found = true;
            break;
        }
        horizon *= 2.0;
    }
    if (!found)
        throw InsufficientDataError("estimate_lambda1: survival did not decay below 0.2");

    // Full run out to 3T; fit ln S between the first grid time with S <= 0.2
    // and 3x that time, keeping points with enough surviving mass.
    const int n_steps = std::min(4096, mc.grid_steps * 4);
    const auto curve = survival_curve(dom, x, 3.0 * horizon, n_steps, p, mc);
    const double h = 3.0 * horizon / n_steps;
    int t_star = -1;
    for (int k = 1; k <= n_steps; ++k)
        if (curve[k].value <= 0.2) {
            t_star = k;
            break;
        }
    if (t_star < 0)
        throw InsufficientDataError("estimate_lambda1: no window start found");
    const double floor_prob = std::max(0.005, 5.0 / static_cast<double>(mc.n_samples));
    std::vector<double> ts, ls;
    for (int k = t_star; k <= std::min(n_steps, 3 * t_star); ++k) {
        if (curve[k].value < floor_prob) break;
        ts.push_back(k * h);
        ls.push_back(std::log(curve[k].value));
    }
    if (ts.size() < 8)
        throw InsufficientDataError("estimate_lambda1: too few usable points in the window");
    const LineFit fit = ols_fit(ts, ls);
    Lambda1Estimate est;
    est.value = -fit.slope;
    est.std_err = fit.slope_se;
    est.window_lo = ts.front();
    est.window_hi = ts.back();
    est.n_samples = mc.n_samples;
    if (!(est.value > 0.0))
        throw InsufficientDataError("estimate_lambda1: non-positive fitted decay rate");
    return est;
}

GreenEstimate estimate_green(const Domain& dom, const Point& x, const Point& y,
                             const ModelParams& p, const McConfig& mc) {
    mc.validate();
    if (!dom.contains(x) || !dom.contains(y))
        throw std::invalid_argument("estimate_green: x and y must lie in the domain");
    if (x == y) throw std::invalid_argument("estimate_green: x and y must differ");
    const bool bounded = dom.bounded();
    if (!bounded && p.m == 0.0 && p.d <= 2)
        throw std::domain_error("estimate_green: Green function non-integrable (unbounded, m=0, d<=2)");

    double lambda1 = 0.0, lambda1_se = 0.0;
    double cap;
    if (bounded) {
        McConfig lmc = mc;
        lmc.n_samples = std::max<long>(2000, mc.n_samples / 4);
        lmc.stream_base = mc.stream_base + 1000003;  // independent of the main ensemble
        const auto l1 = estimate_lambda1(dom, p, lmc);
        lambda1 = l1.value;
        lambda1_se = l1.std_err;
        cap = std::log(50.0) / lambda1;  // survival ~ 2 percent at the cap
    } else {
        cap = 8.0 * std::pow(0.5 * dom.diameter_hint(), p.alpha);
    }

    const int total_steps = std::min(8192, std::max(mc.grid_steps, 256));
    const double h = cap / total_steps;

    // Geometric checkpoint grid on step indices.
    std::vector<int> steps;
    const double r_xy = dist(x, y);
    double t1 = std::max(4.0 * h, std::pow(r_xy, p.alpha) / 16.0);
    for (double t = t1; t < cap * 0.999; t *= 1.3)
        steps.push_back(std::max(1, static_cast<int>(std::llround(t / h))));
    steps.push_back(total_steps);
    std::sort(steps.begin(), steps.end());
    steps.erase(std::unique(steps.begin(), steps.end()), steps.end());

    // Trapezoid weights in t (left edge pinned at p(0) = 0 for x != y), plus
    // the exponential-tail weight 1/lambda1 attached to the cap checkpoint.
    const std::size_t n = steps.size();
    std::vector<double> weights(n, 0.0);
    std::vector<double> times(n);
    for (std::size_t i = 0; i < n; ++i) times[i] = steps[i] * h;
    for (std::size_t i = 0; i < n; ++i) {
        const double t_lo = i == 0 ? 0.0 : times[i - 1];
        const double t_hi = i + 1 < n ? times[i + 1] : times[i];
        weights[i] = 0.5 * (t_hi - t_lo);
    }
    if (bounded) weights.back() += 1.0 / lambda1;

    ProbePlan plan;
    plan.targets = {y};
    for (std::size_t i = 0; i < n; ++i) plan.kernel_steps.push_back(steps[i] - 1);
    plan.green_weights = weights;

    const RadialKernelTable table(h, p, kernel_table_range(dom, x));
    const RunResult res =
        run_killed_engine(dom, x, p, h, total_steps, plan, &table, mc);

    GreenEstimate est;
    est.n_samples = res.n_paths;
    est.bandwidth = h;
    est.time_horizon_cap = cap;
    est.value = res.g_sum[0] / res.n_paths;
    const double var =
        std::max(0.0, (res.g_sumsq[0] - res.g_sum[0] * res.g_sum[0] / res.n_paths) /
                          (std::max<long>(res.n_paths - 1, 1)));
    double se = std::sqrt(var / res.n_paths);
    if (bounded && lambda1 > 0.0) {
        // Tail term inherits the lambda1 fit uncertainty.
        const double tail = res.k_sum[(n - 1) * 1 + 0] / res.n_paths / lambda1;
        se = std::hypot(se, tail * lambda1_se / lambda1);
    }
    est.std_err = se;
    return est;
}

ExitTimeLaw exit_time_law(const Point& center, double radius, double horizon,
                          const ModelParams& p, const McConfig& mc) {
    if (!(radius > 0.0)) throw std::invalid_argument("exit_time_law: radius must be > 0");
    if (!(horizon > 0.0)) throw std::invalid_argument("exit_time_law: horizon must be > 0");
    const Domain ball = Domain::ball(center, radius);
    ProbePlan plan;
    plan.record_exits = true;
    const int n_steps = mc.grid_steps;
    const double h = horizon / n_steps;
    const RunResult res = run_killed_engine(ball, center, p, h, n_steps, plan, nullptr, mc);
    ExitTimeLaw law;
    law.step = h;
    law.exits_by_step = res.exit_hist;
    law.n_paths = res.n_paths;
    return law;
}

double ExitTimeLaw::cdf(double s) const {
    if (s <= 0.0) return 0.0;
    double count = 0.0;
    for (std::size_t k = 1; k < exits_by_step.size(); ++k) {
        const double tk = k * step;
        if (tk <= s)
            count += exits_by_step[k];
        else {
            // partial step: linear share of the bin
            const double frac = (s - (tk - step)) / step;
            if (frac > 0.0) count += frac * exits_by_step[k];
            break;
        }
    }
    return count / static_cast<double>(n_paths);
}

}  // namespace relstable
