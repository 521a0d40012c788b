#pragma once

#include <memory>
#include <vector>

#include "relstable/params.hpp"

namespace relstable {

// Density of the standard one-sided beta-stable law (0 < beta < 1) normalized
// by the Laplace transform E e^{-lambda S} = e^{-lambda^beta}.
// Evaluated through the Zolotarev/Ibragimov-Chernin single integral
//   g(x) = (beta/(1-beta)) x^{-1/(1-beta)} (1/pi)
//            int_0^pi A(u) exp(-x^{-beta/(1-beta)} A(u)) du,
//   A(u) = [sin(beta u)^beta sin((1-beta) u)^{1-beta} / sin(u)]^{1/(1-beta)},
// with the convergent power series taking over deep in the right tail where
// the integral peak collapses against u = pi.
double positive_stable_density(double x, double beta, const QuadratureConfig& q = {});

// The same density by the convergent series
//   (1/pi) sum_{k>=1} (-1)^{k+1} Gamma(k beta + 1)/k! sin(pi k beta) x^{-k beta - 1}.
// Numerically useful for x not too small; serves as an independent oracle for
// the integral route.
double positive_stable_density_series(double x, double beta, double tol = 1e-13);

// Upper tail P(S > x) by the term-by-term integrated series.
double positive_stable_tail_series(double x, double beta, double tol = 1e-13);

// Density theta_alpha(t, u) at level u > 0 and time t > 0 of the
// alpha/2-stable subordinator with E e^{-lambda S_t} = e^{-t lambda^{alpha/2}}.
// The alpha = 1 case uses the closed form t u^{-3/2} e^{-t^2/(4u)} / (2 sqrt(pi)).
double subordinator_density(double t, double u, double alpha, const QuadratureConfig& q = {});

// Same value, forced through the integral representation for every alpha
// (used to cross-check the alpha = 1 closed form).
double subordinator_density_integral(double t, double u, double alpha,
                                     const QuadratureConfig& q = {});

// Spline-accelerated positive-stable density, built from the integral
// representation on a log-log grid. Immutable after construction; safe for
// concurrent readers.
class PositiveStableTable {
public:
    explicit PositiveStableTable(double beta, int nodes = 1600, const QuadratureConfig& q = {});

    double density(double v) const;
    // ln density(v); -infinity below the underflow cutoff.
    double log_density(double v) const;
    double beta() const { return beta_; }
    // Process-wide cache keyed by beta (bitwise); tables are built once.
    static std::shared_ptr<const PositiveStableTable> shared_for(double beta);

private:
    double beta_ = 0.5;
    double y_lo_ = 0.0, y_hi_ = 0.0, dy_ = 0.0;
    std::vector<double> log_density_;   // at y_i = y_lo + i dy, y = ln v
    std::vector<double> second_deriv_;  // natural cubic spline
    double series_switch_ = 0.0;        // v above which the series tail is used
};

}  // namespace relstable
