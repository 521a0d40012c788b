#pragma once

#include "relstable/domain.hpp"
#include "relstable/params.hpp"

namespace relstable {

// Closed-form comparator functions: the explicit expressions the killed heat
// kernel and Green function are two-sided comparable to. Each is symmetric in
// (x, y) and evaluated exactly (elementary functions only).

// Small-time heat kernel comparator:
//   (1 ^ delta(x)^{a/2}/sqrt(t)) (1 ^ delta(y)^{a/2}/sqrt(t))
//     * min(t^{-d/a}, t phi(c2 m^{1/a} |x-y|) / |x-y|^{d+a}),
// with the x = y convention selecting the t^{-d/a} branch. c2 tunes the
// argument of the exponential tail factor phi.
double small_time_comparator(double t, const Point& x, const Point& y, const Domain& dom,
                             const ModelParams& p, double c2_inner = 1.0);

// Large-time comparator for bounded domains: e^{-lambda1 t} delta(x)^{a/2} delta(y)^{a/2}.
double large_time_comparator(double t, const Point& x, const Point& y, const Domain& dom,
                             const ModelParams& p, double lambda1);

// Green comparator on bounded domains (from the boundary-decay form of the
// Green function); branches on (d, alpha). Domain error at x = y.
double green_comparator_bounded(const Point& x, const Point& y, const Domain& dom,
                                const ModelParams& p);
// Same formula from precomputed boundary distances and separation.
double green_comparator_bounded_raw(int d, double alpha, double delta_x, double delta_y,
                                    double r);

// Green comparator on half-space-like domains (m > 0): the five-branch
// piecewise form with near/far split at |x-y| = 3 m^{-1/alpha}.
double green_comparator_halfspace_like(const Point& x, const Point& y, const Domain& dom,
                                       const ModelParams& p);
double green_comparator_halfspace_like_raw(int d, double alpha, double m, double delta_x,
                                           double delta_y, double r);

// Green comparator for the half line (0, inf), d = 1, m > 0: the three-regime
// form with the split at |x-y| = m^{-1/alpha} ^ x ^ y for alpha >= 1 and at
// m^{-1/alpha} for alpha < 1.
double green_comparator_halfline(double x, double y, const ModelParams& p);

// Green comparator for the upper half space, d >= 2: the half-space-like form
// with delta(x) = x_d.
double green_comparator_halfspace(const Point& x, const Point& y, const ModelParams& p);

}  // namespace relstable
