#pragma once

#include "relstable/params.hpp"

namespace relstable {

// Radial Levy density j^m(r) = A(d,-alpha) r^{-d-alpha} psi(m^{1/alpha} r) of
// the relativistic stable process; reduces to the symmetric stable density
// A r^{-d-alpha} at m = 0.
double levy_density(double r, const ModelParams& p, const QuadratureConfig& q = {});

// Removed kernel j(r) - j^m(r) = A r^{-d-alpha} (1 - psi(m^{1/alpha} r)) >= 0;
// identically zero when m = 0.
double removed_density(double r, const ModelParams& p, const QuadratureConfig& q = {});

// Total removed mass int_{R^d} (J - J^m)(x, y) dy, computed in radial
// coordinates. Equals m; the dimensionless profile below is integrated once
// and scaled by m, so the identity is a genuine check of the quadratures
// rather than a restatement.
double removed_mass(const ModelParams& p, const QuadratureConfig& q = {});

// The m-independent factor |S^{d-1}| A(d,-alpha) int_0^inf u^{-1-alpha} (1 - psi(u)) du.
// Analytically equal to 1 for every (d, alpha).
double removed_mass_profile(int d, double alpha, const QuadratureConfig& q = {});

// Retention probability of a jump of the given size under Meyer thinning:
// psi(m^{1/alpha} jump_size) = J^m / J. Equals 1 when m = 0.
double thinning_probability(double jump_size, const ModelParams& p, const QuadratureConfig& q = {});

}  // namespace relstable
