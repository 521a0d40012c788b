#pragma once

#include <cmath>
#include <stdexcept>

namespace relstable {

// Parameters of the relativistic alpha-stable process X^m on R^d, the Levy
// process with characteristic exponent (|xi|^2 + m^{2/alpha})^{alpha/2} - m.
// m = 0 is the symmetric alpha-stable process.
struct ModelParams {
    int d = 1;           // spatial dimension, >= 1
    double alpha = 1.0;  // stability index, in (0, 2)
    double m = 0.0;      // mass / tempering weight, >= 0 (units 1/time)

    void validate() const {
        if (d < 1) throw std::invalid_argument("ModelParams: d must be >= 1");
        if (!(alpha > 0.0 && alpha < 2.0))
            throw std::invalid_argument("ModelParams: alpha must lie in the open interval (0, 2)");
        if (!(m >= 0.0) || !std::isfinite(m))
            throw std::invalid_argument("ModelParams: m must be finite and >= 0");
    }

    // m^{1/alpha}: the inverse length scale of the tempering.
    double mass_scale() const { return m > 0.0 ? std::pow(m, 1.0 / alpha) : 0.0; }
    // m^{2/alpha}: the shift inside the characteristic exponent.
    double mass_scale_sq() const { return m > 0.0 ? std::pow(m, 2.0 / alpha) : 0.0; }
};

// Tolerances for the adaptive quadratures used throughout the library.
struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_subdivisions = 17;  // adaptive bisection depth

    void validate() const {
        if (!(rel_tol > 0.0)) throw std::invalid_argument("QuadratureConfig: rel_tol must be > 0");
        if (!(abs_tol >= 0.0)) throw std::invalid_argument("QuadratureConfig: abs_tol must be >= 0");
        if (max_subdivisions < 1)
            throw std::invalid_argument("QuadratureConfig: max_subdivisions must be >= 1");
    }
};

}  // namespace relstable
