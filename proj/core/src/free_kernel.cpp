#include "relstable/free_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "relstable/levy.hpp"
#include "relstable/quadrature.hpp"
#include "relstable/subordinator.hpp"

namespace relstable {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLog2SqrtPi = 1.26551212348464539649;  // ln(2 sqrt(pi))

// ln theta-profile: ln g_beta(v) with the alpha = 1 closed form inlined.
struct ThetaProfile {
    double alpha;
    std::shared_ptr<const PositiveStableTable> table;  // null when alpha == 1

    explicit ThetaProfile(double a) : alpha(a) {
        if (alpha != 1.0) table = PositiveStableTable::shared_for(0.5 * alpha);
    }
    double log_g(double v) const {
        if (alpha == 1.0) return -1.5 * std::log(v) - 0.25 / v - kLog2SqrtPi;
        return table->log_density(v);
    }
};

// int_0^inf (4 pi tau v)^{-d/2} exp(-q/v - tilt * v) g_beta(v) dv
// with q = r^2 / (4 tau); tilt = tau for the tempered kernel, 0 for m = 0.
double subordination_integral(int d, const ThetaProfile& theta, double tau, double r,
                              double tilt, const QuadratureConfig& q_cfg) {
    const double q = 0.25 * r * r / tau;
    const double log_pref = -0.5 * d * std::log(4.0 * kPi * tau);
    const auto f = [&](double v) {
        if (v <= 0.0) return 0.0;
        const double lg = theta.log_g(v);
        if (!std::isfinite(lg)) return 0.0;
        const double e = log_pref - 0.5 * d * std::log(v) - q / v - tilt * v + lg;
        return e > -745.0 ? std::exp(e) : 0.0;
    };

    const double v_gauss = q > 0.0 ? 2.0 * q / d : 0.0;  // Gaussian saddle
    double v_hi = std::max({64.0, 16.0 * v_gauss, tilt > 0.0 ? 64.0 / tilt : 0.0});

    const auto head_edges = [&](double hi) {
        std::vector<double> e{0.0};
        for (double s : {0.25 * v_gauss, v_gauss, 4.0 * v_gauss, 0.25, 1.0, 4.0})
            if (s > 0.0 && s < hi) e.push_back(s);
        e.push_back(hi);
        std::sort(e.begin(), e.end());
        e.erase(std::unique(e.begin(), e.end()), e.end());
        return e;
    };
    // Algebraic tail mapped through v = 1/w; its tolerance is anchored to the
    // head so the correction term is not over-resolved.
    const auto tail_value = [&](double hi, double head) {
        const auto ft = [&](double w) {
            if (w <= 0.0) return 0.0;
            return f(1.0 / w) / (w * w);
        };
        QuadratureConfig tq = q_cfg;
        tq.abs_tol = std::max(tq.abs_tol, 0.5 * q_cfg.rel_tol * head);
        return integrate(ft, 0.0, 1.0 / hi, tq);
    };

    double head = integrate_panels(f, head_edges(v_hi), q_cfg);
    double tail = tail_value(v_hi, head);
    // Grow the split until the transformed tail is a small correction; keeps
    // the endpoint singularity of the transformed integrand harmless.
    for (int round = 0; round < 4 && tail > 1e-6 * (head + tail); ++round) {
        v_hi *= 16.0;
        head = integrate_panels(f, head_edges(v_hi), q_cfg);
        tail = tail_value(v_hi, head);
    }
    return head + tail;
}

// p^1(t, x) for the unit-mass process.
double kernel_m1(int d, double alpha, double t, double r, const QuadratureConfig& q) {
    const ThetaProfile theta(alpha);
    const double tau = std::pow(t, 2.0 / alpha);
    return std::exp(t) * subordination_integral(d, theta, tau, r, tau, q);
}

// Symmetric stable density (m = 0).
double kernel_stable(int d, double alpha, double t, double r, const QuadratureConfig& q) {
    const ThetaProfile theta(alpha);
    const double tau = std::pow(t, 2.0 / alpha);
    return subordination_integral(d, theta, tau, r, 0.0, q);
}

}  // namespace

double free_kernel_radial(double t, double r, const ModelParams& p, const QuadratureConfig& q) {
    p.validate();
    if (!(t > 0.0)) throw std::domain_error("free_kernel: t must be > 0");
    if (!(r >= 0.0)) throw std::domain_error("free_kernel: r must be >= 0");
    if (p.m == 0.0) return kernel_stable(p.d, p.alpha, t, r, q);
    // Exact scaling onto the unit-mass kernel; one quadrature code path.
    const double scale = std::pow(p.m, static_cast<double>(p.d) / p.alpha);
    return scale * kernel_m1(p.d, p.alpha, p.m * t, p.mass_scale() * r, q);
}

double free_kernel(double t, const std::vector<double>& x, const ModelParams& p,
                   const QuadratureConfig& q) {
    if (static_cast<int>(x.size()) != p.d)
        throw std::invalid_argument("free_kernel: displacement dimension mismatch");
    double r2 = 0.0;
    for (double c : x) r2 += c * c;
    return free_kernel_radial(t, std::sqrt(r2), p, q);
}

double free_kernel_comparator(double t, double r, const ModelParams& p,
                              const QuadratureConfig& q) {
    p.validate();
    if (!(t > 0.0)) throw std::domain_error("free_kernel_comparator: t must be > 0");
    const double first = std::pow(t, -static_cast<double>(p.d) / p.alpha);
    if (r == 0.0) return first;
    return std::min(first, t * levy_density(r, p, q));
}

RadialKernelTable::RadialKernelTable(double t, const ModelParams& p, double r_max, int nodes,
                                     const QuadratureConfig& q)
    : t_(t), params_(p), quad_(q), r_max_(r_max) {
    p.validate();
    if (!(t > 0.0)) throw std::domain_error("RadialKernelTable: t must be > 0");
    if (!(r_max > 0.0)) throw std::invalid_argument("RadialKernelTable: r_max must be > 0");
    if (nodes < 16) throw std::invalid_argument("RadialKernelTable: too few nodes");

    eps_ = std::pow(t, 1.0 / p.alpha) / 8.0;
    z_lo_ = std::log(eps_);
    const double z_hi = std::log(eps_ + r_max);
    dz_ = (z_hi - z_lo_) / (nodes - 1);

    log_value_.resize(nodes);
    for (int i = 0; i < nodes; ++i) {
        const double r = std::exp(z_lo_ + i * dz_) - eps_;
        const double v = free_kernel_radial(t, std::max(r, 0.0), p, q);
        log_value_[i] = v > 0.0 ? std::log(v) : -760.0;
    }

    const int n = nodes;
    second_deriv_.assign(n, 0.0);
    std::vector<double> tmp(n, 0.0);
    for (int i = 1; i < n - 1; ++i) {
        const double pr = 0.5 * second_deriv_[i - 1] + 2.0;
        second_deriv_[i] = -0.5 / pr;
        const double rhs = (log_value_[i + 1] - 2.0 * log_value_[i] + log_value_[i - 1]) / dz_;
        tmp[i] = (3.0 * rhs / dz_ - 0.5 * tmp[i - 1]) / pr;
    }
    for (int i = n - 2; i >= 1; --i)
        second_deriv_[i] = second_deriv_[i] * second_deriv_[i + 1] + tmp[i];
    second_deriv_[0] = second_deriv_[n - 1] = 0.0;
}

double RadialKernelTable::operator()(double r) const {
    if (!(r >= 0.0)) throw std::domain_error("RadialKernelTable: r must be >= 0");
    if (r > r_max_) return free_kernel_radial(t_, r, params_, quad_);
    const double z = std::log(eps_ + r);
    const int n = static_cast<int>(log_value_.size());
    int i = static_cast<int>((z - z_lo_) / dz_);
    i = std::clamp(i, 0, n - 2);
    const double a = (z_lo_ + (i + 1) * dz_ - z) / dz_;
    const double b = 1.0 - a;
    const double val = a * log_value_[i] + b * log_value_[i + 1] +
                       ((a * a * a - a) * second_deriv_[i] +
                        (b * b * b - b) * second_deriv_[i + 1]) * dz_ * dz_ / 6.0;
    return std::exp(val);
}

}  // namespace relstable
