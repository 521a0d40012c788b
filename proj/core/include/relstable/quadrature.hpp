#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "relstable/params.hpp"

namespace relstable {

// Raised when an adaptive quadrature cannot reach the requested tolerance.
// Carries the best estimate obtained so far and its error estimate.
struct QuadratureError : std::runtime_error {
    double partial_estimate;
    double error_estimate;
    QuadratureError(const std::string& what, double partial, double err)
        : std::runtime_error(what), partial_estimate(partial), error_estimate(err) {}
};

// Adaptive Gauss-Kronrod (G7,K15) integration of f over the finite interval
// [a, b]. Throws QuadratureError when the error estimate stays above
// max(abs_tol, rel_tol * |result|) at the configured subdivision depth.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureConfig& cfg = {});

// Integrates over the union of panels [edges[0],edges[1]], [edges[1],edges[2]], ...
// so that known interior scales of the integrand become panel boundaries.
// The tolerance is applied to the total, not per panel.
double integrate_panels(const std::function<double(double)>& f,
                        const std::vector<double>& edges, const QuadratureConfig& cfg = {});

}  // namespace relstable
