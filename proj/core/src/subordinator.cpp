#include "relstable/subordinator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "relstable/quadrature.hpp"

namespace relstable {

namespace {

constexpr double kPi = std::numbers::pi;

void check_beta(double beta) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::invalid_argument("positive_stable_density: beta must lie in (0, 1)");
}

// ln A(u) for the Zolotarev integrand, with the finite u -> 0 limit.
double log_kanter_a(double u, double beta) {
    const double g = 1.0 - beta;
    if (u < 1e-9)
        return (beta * std::log(beta) + g * std::log(g)) / g;
    return (beta * std::log(std::sin(beta * u)) + g * std::log(std::sin(g * u)) -
            std::log(std::sin(u))) / g;
}

// x above which the series route converges fast from the first term.
double series_switch_point(double beta) {
    const double ratio = 2.0 * std::exp(std::lgamma(2.0 * beta + 1.0) -
                                        std::lgamma(beta + 1.0) - std::numbers::ln2);
    return std::max(4.0, std::pow(ratio, 1.0 / beta));
}

double zolotarev_integral(double x, double beta, const QuadratureConfig& q) {
    const double g = 1.0 - beta;
    const double c = std::pow(x, -beta / g);
    const auto f = [&](double u) {
        if (u <= 0.0 || u >= kPi) return 0.0;
        const double la = log_kanter_a(u, beta);
        if (la > 700.0) return 0.0;  // only reached when c e^{la} underflows the result anyway
        const double a = std::exp(la);
        const double e = c * a;
        if (e > 745.0) return 0.0;
        return a * std::exp(-e);
    };
    const double i = integrate_panels(
        f, {0.0, 0.5 * kPi, 0.875 * kPi, 0.984375 * kPi, 0.999 * kPi, kPi}, q);
    return beta / g * std::pow(x, -1.0 / g) * i / kPi;
}

}  // namespace

double positive_stable_density_series(double x, double beta, double tol) {
    check_beta(beta);
    if (!(x > 0.0)) throw std::domain_error("positive_stable_density_series: x must be > 0");
    const double lx = std::log(x);
    double sum = 0.0;
    for (int k = 1; k <= 500; ++k) {
        const double kb = k * beta;
        const double s = std::sin(kPi * std::fmod(kb, 2.0));
        const double term = (k % 2 ? 1.0 : -1.0) * s *
                            std::exp(std::lgamma(kb + 1.0) - std::lgamma(k + 1.0) -
                                     (kb + 1.0) * lx);
        sum += term;
        if (k > 2 && std::abs(term) < tol * std::abs(sum)) break;
    }
    return sum / kPi;
}

double positive_stable_tail_series(double x, double beta, double tol) {
    check_beta(beta);
    if (!(x > 0.0)) throw std::domain_error("positive_stable_tail_series: x must be > 0");
    const double lx = std::log(x);
    double sum = 0.0;
    for (int k = 1; k <= 500; ++k) {
        const double kb = k * beta;
        const double s = std::sin(kPi * std::fmod(kb, 2.0));
        const double term = (k % 2 ? 1.0 : -1.0) * s *
                            std::exp(std::lgamma(kb + 1.0) - std::lgamma(k + 1.0) - kb * lx) / kb;
        sum += term;
        if (k > 2 && std::abs(term) < tol * std::abs(sum)) break;
    }
    return sum / kPi;
}

double positive_stable_density(double x, double beta, const QuadratureConfig& q) {
    check_beta(beta);
    if (!(x > 0.0)) throw std::domain_error("positive_stable_density: x must be > 0");
    if (x > series_switch_point(beta)) return positive_stable_density_series(x, beta);
    return zolotarev_integral(x, beta, q);
}

double subordinator_density(double t, double u, double alpha, const QuadratureConfig& q) {
    if (!(t > 0.0 && u > 0.0)) throw std::domain_error("subordinator_density: t, u must be > 0");
    if (!(alpha > 0.0 && alpha < 2.0))
        throw std::invalid_argument("subordinator_density: alpha must lie in (0, 2)");
    if (alpha == 1.0)
        return t * std::pow(u, -1.5) * std::exp(-0.25 * t * t / u) / (2.0 * std::sqrt(kPi));
    const double tau = std::pow(t, 2.0 / alpha);
    return positive_stable_density(u / tau, 0.5 * alpha, q) / tau;
}

double subordinator_density_integral(double t, double u, double alpha,
                                     const QuadratureConfig& q) {
    if (!(t > 0.0 && u > 0.0))
        throw std::domain_error("subordinator_density_integral: t, u must be > 0");
    if (!(alpha > 0.0 && alpha < 2.0))
        throw std::invalid_argument("subordinator_density_integral: alpha must lie in (0, 2)");
    const double tau = std::pow(t, 2.0 / alpha);
    return zolotarev_integral(u / tau, 0.5 * alpha, q) / tau;
}

PositiveStableTable::PositiveStableTable(double beta, int nodes, const QuadratureConfig& q)
    : beta_(beta) {
    check_beta(beta);
    if (nodes < 16) throw std::invalid_argument("PositiveStableTable: too few nodes");
    const double g = 1.0 - beta;
    // Below v_min the density underflows: ln g ~ -B v^{-beta/(1-beta)} with
    // B = (1-beta) beta^{beta/(1-beta)}.
    const double b_const = g * std::pow(beta, beta / g);
    const double v_min = std::pow(b_const / 700.0, g / beta);
    series_switch_ = series_switch_point(beta);
    y_lo_ = std::log(v_min);
    y_hi_ = std::log(series_switch_) + 0.5;  // overlap past the switch for continuity
    dy_ = (y_hi_ - y_lo_) / (nodes - 1);

    log_density_.resize(nodes);
    for (int i = 0; i < nodes; ++i) {
        const double v = std::exp(y_lo_ + i * dy_);
        const double gv = v > series_switch_ ? positive_stable_density_series(v, beta)
                                             : zolotarev_integral(v, beta, q);
        log_density_[i] = gv > 0.0 ? std::log(gv) : -760.0;
    }

    // Natural cubic spline second derivatives (standard tridiagonal sweep).
    const int n = nodes;
    second_deriv_.assign(n, 0.0);
    std::vector<double> tmp(n, 0.0);
    for (int i = 1; i < n - 1; ++i) {
        const double p = 0.5 * second_deriv_[i - 1] + 2.0;
        second_deriv_[i] = -0.5 / p;
        const double rhs =
            (log_density_[i + 1] - 2.0 * log_density_[i] + log_density_[i - 1]) / dy_;
        tmp[i] = (3.0 * rhs / dy_ - 0.5 * tmp[i - 1]) / p;
    }
    for (int i = n - 2; i >= 1; --i)
        second_deriv_[i] = second_deriv_[i] * second_deriv_[i + 1] + tmp[i];
    second_deriv_[0] = second_deriv_[n - 1] = 0.0;
}

double PositiveStableTable::log_density(double v) const {
    if (!(v > 0.0)) return -std::numeric_limits<double>::infinity();
    const double y = std::log(v);
    if (y < y_lo_) return -std::numeric_limits<double>::infinity();
    if (v > series_switch_) {
        const double g = positive_stable_density_series(v, beta_);
        return g > 0.0 ? std::log(g) : -std::numeric_limits<double>::infinity();
    }
    const int n = static_cast<int>(log_density_.size());
    int i = static_cast<int>((y - y_lo_) / dy_);
    i = std::clamp(i, 0, n - 2);
    const double a = (y_lo_ + (i + 1) * dy_ - y) / dy_;
    const double b = 1.0 - a;
    return a * log_density_[i] + b * log_density_[i + 1] +
           ((a * a * a - a) * second_deriv_[i] +
            (b * b * b - b) * second_deriv_[i + 1]) * dy_ * dy_ / 6.0;
}

double PositiveStableTable::density(double v) const {
    const double lg = log_density(v);
    return std::isfinite(lg) ? std::exp(lg) : 0.0;
}

std::shared_ptr<const PositiveStableTable> PositiveStableTable::shared_for(double beta) {
    static std::mutex mu;
    static std::map<std::uint64_t, std::shared_ptr<const PositiveStableTable>> cache;
    std::uint64_t key = 0;
    static_assert(sizeof(key) == sizeof(beta));
    std::memcpy(&key, &beta, sizeof(key));
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto table = std::make_shared<const PositiveStableTable>(beta);
    cache.emplace(key, table);
    return table;
}

}  // namespace relstable
