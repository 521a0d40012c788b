#pragma once

#include <span>
#include <vector>

namespace relstable {

struct MeanSe {
    double mean = 0.0;
    double sd = 0.0;
    double se = 0.0;
    long n = 0;
};

MeanSe mean_and_se(std::span<const double> values);

double normal_cdf(double x);

// Kolmogorov survival function Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} e^{-2 k^2 lambda^2}.
double kolmogorov_sf(double lambda);

// Two-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
struct KsResult {
    double statistic = 0.0;
    double p_value = 1.0;
};
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_se = 0.0;
};
LineFit ols_fit(std::span<const double> xs, std::span<const double> ys);

// Empirical quantile (linear interpolation); q in [0, 1].
double quantile(std::vector<double> values, double q);

}  // namespace relstable
