#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "gcruin/measures.hpp"

namespace gcruin::stats {

/// sup |F_n - F| for a law that may have atoms; `cdf_left` gives P(X < x).
double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf,
                    const std::function<double(double)>& cdf_left);
double ks_statistic(std::span<const double> sample, const std::function<double(double)>& continuous_cdf);
double ks_statistic(std::span<const double> sample, const Distribution& d);

/// sup |F_n - G_m| between two empirical laws.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

struct Interval {
  double estimate;
  double low;
  double high;
};

/// Wilson score interval for a binomial proportion at two-sided `confidence`.
Interval wilson(std::size_t successes, std::size_t trials, double confidence);

/// Two-sided standard-normal quantile z with P(|Z| <= z) = confidence.
double z_value(double confidence);

struct MeanSe {
  double mean;
  double se;
};

/// Sample mean and its standard error (n - 1 denominator).
MeanSe mean_se(std::span<const double> xs);

/// Smallest k with P(N <= k) >= q for N ~ Poisson(mean).
int poisson_quantile(double mean, double q);

}  // namespace gcruin::stats
