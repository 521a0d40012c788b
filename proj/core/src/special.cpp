#include "relstable/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "relstable/quadrature.hpp"

namespace relstable {

namespace {

// Integration edges for the psi integrand s^{nu-1} e^{-s/4 - r^2/s}.
// The peak sits near s = 2r for large r and below s = 4 otherwise; beyond
// split + 280 the remaining tail is < 1e-27 of the peak value. For small r
// the factor e^{-r^2/s} turns over at the scale s = r^2, so a geometric
// ladder of edges climbs from that layer to the split (the integrand varies
// like 1/s across it, which uniform bisection resolves too slowly).
std::vector<double> psi_edges(double r) {
    const double split = std::max(4.0, 2.0 * r);
    std::vector<double> edges{0.0};
    for (double s = r * r; s > 0.0 && s < 0.25 * split; s *= 16.0) edges.push_back(s);
    edges.push_back(split);
    edges.push_back(split + 280.0);
    return edges;
}

}  // namespace

double unit_sphere_area(int d) {
    if (d < 1) throw std::invalid_argument("unit_sphere_area: d must be >= 1");
    return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

double stable_levy_constant(const ModelParams& p) {
    p.validate();
    const double a = p.alpha;
    return a * std::pow(2.0, a - 1.0) * std::pow(std::numbers::pi, -0.5 * p.d) *
           std::tgamma(0.5 * (p.d + a)) / std::tgamma(1.0 - 0.5 * a);
}

double tempering_ratio(double r, const ModelParams& p, const QuadratureConfig& q) {
    p.validate();
    if (!(r >= 0.0)) throw std::domain_error("tempering_ratio: r must be >= 0");
    if (r == 0.0) return 1.0;
    const double nu = 0.5 * (p.d + p.alpha);
    const double r2 = r * r;
    const double log_norm = -2.0 * nu * std::numbers::ln2 - std::lgamma(nu);
    const auto f = [&](double s) {
        if (s <= 0.0) return 0.0;
        return std::exp(log_norm + (nu - 1.0) * std::log(s) - 0.25 * s - r2 / s);
    };
    double value = integrate_panels(f, psi_edges(r), q);
    // Clamp roundoff excursions outside the provable range (0, 1].
    return std::min(value, 1.0);
}

double one_minus_tempering_ratio(double r, const ModelParams& p, const QuadratureConfig& q) {
    p.validate();
    if (!(r >= 0.0)) throw std::domain_error("one_minus_tempering_ratio: r must be >= 0");
    if (r == 0.0) return 0.0;
    if (r >= 1.0) return 1.0 - tempering_ratio(r, p, q);
    const double nu = 0.5 * (p.d + p.alpha);
    const double r2 = r * r;
    const double log_norm = -2.0 * nu * std::numbers::ln2 - std::lgamma(nu);
    const auto f = [&](double s) {
        if (s <= 0.0) return 0.0;
        return -std::expm1(-r2 / s) * std::exp(log_norm + (nu - 1.0) * std::log(s) - 0.25 * s);
    };
    return integrate_panels(f, psi_edges(r), q);
}

double exp_tail_factor(double r, const ModelParams& p) {
    p.validate();
    if (!(r >= 0.0)) throw std::domain_error("exp_tail_factor: r must be >= 0");
    const double e = 0.5 * (p.d + p.alpha - 1.0);
    if (r == 0.0) return 1.0;
    return std::exp(-r) * (1.0 + std::pow(r, e));
}

double gap_scale(double r, const ModelParams& p) {
    p.validate();
    if (!(r > 0.0)) throw std::domain_error("gap_scale: r must be > 0");
    // Branches are definitional: selected by exact predicates, no epsilons.
    if (p.d + p.alpha > 2.0) return r * r;
    if (p.d == 1 && p.alpha < 1.0) return std::pow(r, 1.0 + p.alpha);
    // d = 1, alpha = 1
    if (r >= 1.0)
        throw std::domain_error("gap_scale: the d = 1 = alpha branch requires r in (0, 1)");
    return r * r * std::log(1.0 / r);
}

double green_weight(double r, const ModelParams& p) {
    p.validate();
    if (!(r > 0.0 && r <= 1.0)) throw std::domain_error("green_weight: r must lie in (0, 1]");
    if (p.d + p.alpha > 2.0) return std::pow(r, 2.0 - p.alpha - p.d);
    if (p.d == 1 && p.alpha < 1.0) return 1.0;
    return std::log(1.0 / r);
}

}  // namespace relstable
