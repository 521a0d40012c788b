#pragma once

#include "relstable/params.hpp"

namespace relstable {

// Surface area of the unit sphere S^{d-1}: 2 pi^{d/2} / Gamma(d/2).
double unit_sphere_area(int d);

// Normalizing constant of the stable Levy density,
//   alpha 2^{alpha-1} pi^{-d/2} Gamma((d+alpha)/2) / Gamma(1-alpha/2),
// so that the symmetric alpha-stable jump kernel is A r^{-d-alpha}.
double stable_levy_constant(const ModelParams& p);

// Tempering ratio psi(r): the ratio of the tempered jump kernel to the stable
// one at scaled separation r,
//   psi(r) = 2^{-(d+alpha)} Gamma((d+alpha)/2)^{-1}
//            int_0^inf s^{(d+alpha)/2 - 1} e^{-s/4 - r^2/s} ds,
// a smooth decreasing function of r^2 with psi(0) = 1 and 0 < psi <= 1.
// Evaluated by adaptive quadrature split at s = max(4, 2r) (the integrand peak)
// with the exponentially damped tail integrated on its own panel.
double tempering_ratio(double r, const ModelParams& p, const QuadratureConfig& q = {});

// 1 - psi(r) computed without cancellation: for small r the complement is
// integrated directly through expm1, so the value stays accurate even when
// psi(r) is within 1e-16 of 1.
double one_minus_tempering_ratio(double r, const ModelParams& p, const QuadratureConfig& q = {});

// Exponential tail factor phi(r) = e^{-r} (1 + r^{(d+alpha-1)/2}) appearing in
// the sharp small-time kernel comparators.
double exp_tail_factor(double r, const ModelParams& p);

// Gap scale xi(r): the small-r magnitude of 1 - psi(r),
//   r^2 for d+alpha > 2,  r^{1+alpha} for d = 1 > alpha,  r^2 ln(1/r) for d = 1 = alpha.
// The d = 1 = alpha branch requires r < 1 for positivity.
double gap_scale(double r, const ModelParams& p);

// Short-range Green weight sigma(r) on (0, 1]:
//   r^{2-alpha-d} for d+alpha > 2,  1 for d = 1 > alpha,  ln(1/r) for d = 1 = alpha.
double green_weight(double r, const ModelParams& p);

}  // namespace relstable
