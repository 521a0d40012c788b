#include "relstable/comparators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "relstable/special.hpp"

namespace relstable {

namespace {

double boundary_factor(double delta, double alpha, double sqrt_t) {
    return std::min(1.0, std::pow(delta, 0.5 * alpha) / sqrt_t);
}

}  // namespace

double small_time_comparator(double t, const Point& x, const Point& y, const Domain& dom,
                             const ModelParams& p, double c2_inner) {
    p.validate();
    if (!(t > 0.0)) throw std::domain_error("small_time_comparator: t must be > 0");
    if (!(c2_inner > 0.0)) throw std::domain_error("small_time_comparator: c2_inner must be > 0");
    const double sqrt_t = std::sqrt(t);
    const double bx = boundary_factor(dom.dist_to_complement(x), p.alpha, sqrt_t);
    const double by = boundary_factor(dom.dist_to_complement(y), p.alpha, sqrt_t);
    const double r = dist(x, y);
    const double diag = std::pow(t, -static_cast<double>(p.d) / p.alpha);
    double interior = diag;
    if (r > 0.0) {
        const double tail =
            t * exp_tail_factor(c2_inner * p.mass_scale() * r, p) / std::pow(r, p.d + p.alpha);
        interior = std::min(diag, tail);
    }
    return bx * by * interior;
}

double large_time_comparator(double t, const Point& x, const Point& y, const Domain& dom,
                             const ModelParams& p, double lambda1) {
    p.validate();
    if (!(t > 0.0)) throw std::domain_error("large_time_comparator: t must be > 0");
    if (!(lambda1 > 0.0)) throw std::domain_error("large_time_comparator: lambda1 must be > 0");
    return std::exp(-t * lambda1) * std::pow(dom.dist_to_complement(x), 0.5 * p.alpha) *
           std::pow(dom.dist_to_complement(y), 0.5 * p.alpha);
}

double green_comparator_bounded_raw(int d, double alpha, double delta_x, double delta_y,
                                    double r) {
    if (!(r > 0.0)) throw std::domain_error("green_comparator_bounded: x = y is singular");
    const double half_a = 0.5 * alpha;
    if (d > alpha) {
        const double ratio = std::pow(delta_x, half_a) * std::pow(delta_y, half_a) /
                             std::pow(r, alpha);
        return std::min(1.0, ratio) * std::pow(r, alpha - d);
    }
    if (d == 1 && alpha == 1.0)
        return std::log1p(std::sqrt(delta_x * delta_y) / r);
    // d = 1 < alpha
    return std::min(std::pow(delta_x * delta_y, 0.5 * (alpha - 1.0)),
                    std::pow(delta_x, half_a) * std::pow(delta_y, half_a) / r);
}

double green_comparator_bounded(const Point& x, const Point& y, const Domain& dom,
                                const ModelParams& p) {
    p.validate();
    return green_comparator_bounded_raw(p.d, p.alpha, dom.dist_to_complement(x),
                                        dom.dist_to_complement(y), dist(x, y));
}

double green_comparator_halfspace_like_raw(int d, double alpha, double m, double delta_x,
                                           double delta_y, double r) {
    if (!(m > 0.0))
        throw std::domain_error("green_comparator_halfspace_like: requires m > 0");
    if (!(r > 0.0))
        throw std::domain_error("green_comparator_halfspace_like: x = y is singular");
    const double half_a = 0.5 * alpha;
    const double inv_scale = std::pow(m, -1.0 / alpha);     // m^{-1/alpha}
    const double m_pow = std::pow(m, (2.0 - alpha) / alpha);  // m^{(2-alpha)/alpha}
    const double m_pow_half = std::sqrt(m_pow);               // m^{(2-alpha)/(2 alpha)}
    const bool far = r > 3.0 * inv_scale;
    const double dmin = std::min(delta_x, delta_y);

    if (d >= 3) {
        if (far) {
            const double gx = delta_x + std::pow(delta_x, half_a) / m_pow_half;
            const double gy = delta_y + std::pow(delta_y, half_a) / m_pow_half;
            return m_pow * std::min(1.0, gx * gy / (r * r)) * std::pow(r, 2.0 - d);
        }
        return std::pow(std::min(1.0, delta_x * delta_y / (r * r)), half_a) *
               std::pow(r, alpha - d);
    }
    if (d == 2) {
        if (far) {
            const double gx = delta_x + std::pow(delta_x, half_a) / m_pow_half;
            const double gy = delta_y + std::pow(delta_y, half_a) / m_pow_half;
            return m_pow * std::log1p(gx * gy / (r * r));
        }
        return std::pow(std::min(1.0, delta_x * delta_y / (r * r)), half_a) *
                   std::pow(r, alpha - 2.0) +
               m_pow * std::log1p(std::pow(m, 1.0 / alpha) * dmin);
    }
    // d = 1, split further on alpha.
    if (alpha > 1.0) {
        if (far)
            return std::exp(-std::pow(m, 1.0 / alpha) * r) / std::pow(r, 1.0 - half_a) *
                       std::pow(std::min(inv_scale, dmin), half_a) +
                   m_pow * dmin + m_pow_half * std::pow(dmin, half_a);
        return std::min(std::pow(delta_x * delta_y, 0.5 * (alpha - 1.0)),
                        std::pow(delta_x, half_a) * std::pow(delta_y, half_a) / r) +
               m_pow * std::sqrt(delta_x * delta_y);
    }
    if (alpha == 1.0) {
        if (far)
            return std::exp(-m * r) / std::sqrt(r) * std::sqrt(std::min(1.0 / m, dmin)) +
                   m * dmin + std::sqrt(m) * std::sqrt(dmin);
        return std::log1p(std::sqrt(delta_x * delta_y) / r) +
               std::sqrt(m) * std::sqrt(delta_x * delta_y);
    }
    // d = 1 > alpha
    const double wedge = std::pow(std::min(1.0, delta_x * delta_y / (r * r)), half_a);
    if (far)
        return std::exp(-std::pow(m, 1.0 / alpha) * r) / (std::sqrt(m) * std::pow(r, 1.0 - half_a)) *
                   wedge +
               m_pow * dmin + m_pow_half * std::pow(dmin, half_a);
    return std::pow(r, alpha - 1.0) * wedge + m_pow * dmin;
}

double green_comparator_halfspace_like(const Point& x, const Point& y, const Domain& dom,
                                       const ModelParams& p) {
    p.validate();
    return green_comparator_halfspace_like_raw(p.d, p.alpha, p.m, dom.dist_to_complement(x),
                                               dom.dist_to_complement(y), dist(x, y));
}

double green_comparator_halfline(double x, double y, const ModelParams& p) {
    p.validate();
    if (p.d != 1) throw std::invalid_argument("green_comparator_halfline: d must be 1");
    if (!(p.m > 0.0)) throw std::domain_error("green_comparator_halfline: requires m > 0");
    if (!(x > 0.0 && y > 0.0))
        throw std::domain_error("green_comparator_halfline: x, y must be > 0");
    const double alpha = p.alpha;
    const double half_a = 0.5 * alpha;
    const double r = std::abs(x - y);
    if (r == 0.0) throw std::domain_error("green_comparator_halfline: x = y is singular");
    const double m = p.m;
    const double inv_scale = std::pow(m, -1.0 / alpha);
    const double m_pow = std::pow(m, (2.0 - alpha) / alpha);
    const double m_pow_half = std::sqrt(m_pow);
    const double dmin = std::min(x, y);
    const double additive = m_pow * dmin + m_pow_half * std::pow(dmin, half_a);

    if (alpha >= 1.0) {
        const double split = std::min(inv_scale, dmin);
        if (r >= split)
            return std::exp(-std::pow(m, 1.0 / alpha) * r) / std::pow(r, 1.0 - half_a) *
                       std::pow(split, half_a) +
                   additive;
        if (alpha > 1.0) return std::pow(split, alpha - 1.0) + additive;
        return std::log(2.0 * split / r) + additive;
    }
    const double wedge = std::pow(std::min(1.0, x * y / (r * r)), half_a);
    if (r >= inv_scale)
        return std::exp(-std::pow(m, 1.0 / alpha) * r) / (std::sqrt(m) * std::pow(r, 1.0 - half_a)) *
                   wedge +
               additive;
    return std::pow(r, alpha - 1.0) * wedge + additive;
}

double green_comparator_halfspace(const Point& x, const Point& y, const ModelParams& p) {
    p.validate();
    if (p.d < 2) throw std::invalid_argument("green_comparator_halfspace: d must be >= 2");
    if (!(x.back() > 0.0 && y.back() > 0.0))
        throw std::domain_error("green_comparator_halfspace: points must lie in the upper half space");
    return green_comparator_halfspace_like_raw(p.d, p.alpha, p.m, x.back(), y.back(),
                                               dist(x, y));
}

}  // namespace relstable
