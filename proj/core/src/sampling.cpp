#include "relstable/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "relstable/levy.hpp"
#include "relstable/quadrature.hpp"
#include "relstable/special.hpp"

namespace relstable {

IncrementSampler::IncrementSampler(const ModelParams& p, double dt) : dt_(dt) {
    p.validate();
    if (!(dt > 0.0)) throw std::domain_error("IncrementSampler: dt must be > 0");
    beta_ = 0.5 * p.alpha;
    gamma_ = 1.0 - beta_;
    gamma_over_beta_ = gamma_ / beta_;
    scale_ = std::pow(dt, 1.0 / beta_);
    tempering_ = p.mass_scale_sq();
}

double sample_subordinator_increment(double dt, const ModelParams& p, RngStream& rng) {
    return IncrementSampler(p, dt).subordinator(rng);
}

void sample_increment(double dt, const ModelParams& p, RngStream& rng, std::span<double> out) {
    if (static_cast<int>(out.size()) != p.d)
        throw std::invalid_argument("sample_increment: output dimension mismatch");
    IncrementSampler(p, dt).displacement(rng, out);
}

PathSample sample_path(double horizon, int n_grid, const ModelParams& p, RngStream& rng) {
    p.validate();
    if (!(horizon > 0.0) || n_grid < 1)
        throw std::invalid_argument("sample_path: need horizon > 0 and n_grid >= 1");
    const double h = horizon / n_grid;
    PathSample path;
    path.dim = p.d;
    path.times.resize(n_grid + 1);
    path.positions.assign(static_cast<std::size_t>(n_grid + 1) * p.d, 0.0);
    path.alive.assign(n_grid + 1, 1);
    std::vector<double> step(p.d);
    for (int k = 1; k <= n_grid; ++k) {
        path.times[k] = k * h;
        sample_increment(h, p, rng, step);
        for (int i = 0; i < p.d; ++i)
            path.positions[static_cast<std::size_t>(k) * p.d + i] =
                path.positions[static_cast<std::size_t>(k - 1) * p.d + i] + step[i];
    }
    return path;
}

PathSample sample_killed_path(const Domain& dom, double horizon, int n_grid,
                              const Point& start, const ModelParams& p, RngStream& rng) {
    p.validate();
    if (dom.dim() != p.d) throw std::invalid_argument("sample_killed_path: dimension mismatch");
    if (!dom.contains(start))
        throw std::invalid_argument("sample_killed_path: start must lie in the domain");
    if (!(horizon > 0.0) || n_grid < 1)
        throw std::invalid_argument("sample_killed_path: need horizon > 0 and n_grid >= 1");

    const double h = horizon / n_grid;
    PathSample path;
    path.dim = p.d;
    path.times.resize(n_grid + 1);
    path.positions.assign(static_cast<std::size_t>(n_grid + 1) * p.d, 0.0);
    path.alive.assign(n_grid + 1, 1);
    std::copy(start.begin(), start.end(), path.positions.begin());

    Point pos(start);
    std::vector<double> step(p.d);
    bool alive = true;
    for (int k = 1; k <= n_grid; ++k) {
        path.times[k] = k * h;
        if (alive) {
            sample_increment(h, p, rng, step);
            for (int i = 0; i < p.d; ++i) pos[i] += step[i];
            if (!dom.contains(pos)) {
                alive = false;
                path.exit_index = k;
            }
        }
        std::copy(pos.begin(), pos.end(),
                  path.positions.begin() + static_cast<std::size_t>(k) * p.d);
        path.alive[k] = alive ? 1 : 0;
    }
    return path;
}

double big_jump_rate(double cut, const ModelParams& p) {
    p.validate();
    if (!(cut > 0.0)) throw std::domain_error("big_jump_rate: cut must be > 0");
    // omega_{d-1} A int_cut^inf r^{-1-alpha} dr
    return unit_sphere_area(p.d) * stable_levy_constant(p) *
           std::pow(cut, -p.alpha) / p.alpha;
}

double small_jump_variance(double cut, const ModelParams& p) {
    p.validate();
    if (!(cut > 0.0)) throw std::domain_error("small_jump_variance: cut must be > 0");
    // int_{|z|<=cut} |z|^2 nu(dz) / d per coordinate
    return unit_sphere_area(p.d) * stable_levy_constant(p) *
           std::pow(cut, 2.0 - p.alpha) / (2.0 - p.alpha) / p.d;
}

double deleted_jump_rate(double cut, const ModelParams& p, const QuadratureConfig& q) {
    p.validate();
    if (!(cut > 0.0)) throw std::domain_error("deleted_jump_rate: cut must be > 0");
    if (p.m == 0.0) return 0.0;
    const double pref = unit_sphere_area(p.d) * stable_levy_constant(p);
    const auto f = [&](double r) {
        if (r <= 0.0) return 0.0;
        return std::pow(r, -1.0 - p.alpha) * one_minus_tempering_ratio(p.mass_scale() * r, p, q);
    };
    const double hi = std::max(4.0 * cut, 80.0 / std::max(p.mass_scale(), 1e-3));
    QuadratureConfig outer = q;
    outer.rel_tol = std::max(q.rel_tol, 1e-9);
    double head = integrate_panels(f, {cut, std::max(2.0 * cut, 0.5 * hi), hi}, outer);
    // Beyond hi the retention is numerically zero: deletion probability 1.
    double tail = std::pow(hi, -p.alpha) / p.alpha;
    return pref * (head + tail);
}

double sub_cut_deletion_rate(double cut, const ModelParams& p, const QuadratureConfig& q) {
    p.validate();
    if (!(cut > 0.0)) throw std::domain_error("sub_cut_deletion_rate: cut must be > 0");
    if (p.m == 0.0) return 0.0;
    const double pref = unit_sphere_area(p.d) * stable_levy_constant(p);
    const auto f = [&](double r) {
        if (r <= 0.0) return 0.0;
        return std::pow(r, -1.0 - p.alpha) * one_minus_tempering_ratio(p.mass_scale() * r, p, q);
    };
    QuadratureConfig outer = q;
    outer.rel_tol = std::max(q.rel_tol, 1e-9);
    return pref * integrate(f, 0.0, cut, outer);
}

ThinnedPathSampler::ThinnedPathSampler(const ModelParams& p, double jump_cut,
                                       const QuadratureConfig& q)
    : params_(p), cut_(jump_cut) {
    p.validate();
    if (!(jump_cut > 0.0))
        throw std::invalid_argument("ThinnedPathSampler: jump_cut must be > 0");
    big_rate_ = relstable::big_jump_rate(jump_cut, p);
    coord_var_rate_ = relstable::small_jump_variance(jump_cut, p);
    mass_scale_ = p.mass_scale();
    if (p.m == 0.0) return;

    // Retention spline over scaled size y = ln(m^{1/alpha} rho), rho >= cut.
    const int nodes = 1024;
    y_lo_ = std::log(mass_scale_ * jump_cut);
    y_hi_ = std::log(80.0);  // retention below 1e-30 beyond
    if (y_lo_ >= y_hi_) y_lo_ = y_hi_ - 1.0;
    dy_ = (y_hi_ - y_lo_) / (nodes - 1);
    log_psi_.resize(nodes);
    for (int i = 0; i < nodes; ++i) {
        const double r = std::exp(y_lo_ + i * dy_);
        const double v = tempering_ratio(r, p, q);
        log_psi_[i] = v > 0.0 ? std::log(v) : -760.0;
    }
}

double ThinnedPathSampler::retention(double jump_size) const {
    if (params_.m == 0.0) return 1.0;
    const double y = std::log(mass_scale_ * jump_size);
    if (y >= y_hi_) return 0.0;
    if (y <= y_lo_) return std::exp(log_psi_.front());
    const int n = static_cast<int>(log_psi_.size());
    int i = static_cast<int>((y - y_lo_) / dy_);
    i = std::clamp(i, 0, n - 2);
    const double b = (y - (y_lo_ + i * dy_)) / dy_;
    return std::exp((1.0 - b) * log_psi_[i] + b * log_psi_[i + 1]);
}

void ThinnedPathSampler::step(double h, RngStream& rng, std::span<double> pos,
                              long* deleted_count) const {
    const int d = params_.d;
    // Aggregated sub-cut remainder.
    const double sd = std::sqrt(h * coord_var_rate_);
    for (int i = 0; i < d; ++i) pos[i] += sd * rng.normal();
    // Exact large jumps, Meyer-thinned.
    const int n_jumps = rng.poisson(big_rate_ * h);
    double dir_buf[8];
    std::span<double> dir(dir_buf, static_cast<std::size_t>(d));
    for (int j = 0; j < n_jumps; ++j) {
        const double rho = cut_ * std::pow(rng.uniform01(), -1.0 / params_.alpha);
        rng.unit_vector(dir);
        const double keep_u = rng.uniform01();
        if (keep_u < retention(rho)) {
            for (int i = 0; i < d; ++i) pos[i] += rho * dir[i];
        } else if (deleted_count) {
            ++*deleted_count;
        }
    }
}

PathSample ThinnedPathSampler::sample(double horizon, int n_grid, RngStream& rng) const {
    if (!(horizon > 0.0) || n_grid < 1)
        throw std::invalid_argument("ThinnedPathSampler: need horizon > 0 and n_grid >= 1");
    if (params_.d > 8) throw std::invalid_argument("ThinnedPathSampler: d too large");
    const double h = horizon / n_grid;
    const int d = params_.d;
    PathSample path;
    path.dim = d;
    path.times.resize(n_grid + 1);
    path.positions.assign(static_cast<std::size_t>(n_grid + 1) * d, 0.0);
    path.alive.assign(n_grid + 1, 1);
    std::vector<double> pos(d, 0.0);
    for (int k = 1; k <= n_grid; ++k) {
        path.times[k] = k * h;
        step(h, rng, pos, nullptr);
        std::copy(pos.begin(), pos.end(),
                  path.positions.begin() + static_cast<std::size_t>(k) * d);
    }
    return path;
}

void ThinnedPathSampler::sample_endpoint(double horizon, int n_grid, RngStream& rng,
                                         std::span<double> out) const {
    if (static_cast<int>(out.size()) != params_.d)
        throw std::invalid_argument("ThinnedPathSampler: output dimension mismatch");
    if (params_.d > 8) throw std::invalid_argument("ThinnedPathSampler: d too large");
    const double h = horizon / n_grid;
    std::fill(out.begin(), out.end(), 0.0);
    for (int k = 0; k < n_grid; ++k) step(h, rng, out, nullptr);
}

PathSample sample_path_thinned(double horizon, int n_grid, const ModelParams& p,
                               double jump_cut, RngStream& rng) {
    const ThinnedPathSampler sampler(p, jump_cut);
    return sampler.sample(horizon, n_grid, rng);
}

}  // namespace relstable
