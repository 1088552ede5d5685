#include "gcruin/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/poisson.hpp>

#include "gcruin/errors.hpp"

namespace gcruin::stats {

double ks_statistic(std::span<const double> sample, const std::function<double(double)>& cdf,
                    const std::function<double(double)>& cdf_left) {
  if (sample.empty()) throw ParameterError("ks_statistic: empty sample");
  std::vector<double> xs(sample.begin(), sample.end());
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  // F_n is constant between order statistics, so the supremum sits at a jump.
  for (std::size_t i = 0; i < xs.size();) {
    std::size_t j = i;
    while (j < xs.size() && xs[j] == xs[i]) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - cdf_left(xs[i])));
    d = std::max(d, std::abs(static_cast<double>(j) / n - cdf(xs[i])));
    i = j;
  }
  return d;
}

double ks_statistic(std::span<const double> sample, const std::function<double(double)>& continuous_cdf) {
  return ks_statistic(sample, continuous_cdf, continuous_cdf);
}

double ks_statistic(std::span<const double> sample, const Distribution& d) {
  return ks_statistic(
      sample, [&](double x) { return d.cdf(x); }, [&](double x) { return d.cdf_left(x); });
}

double ks_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ParameterError("ks_two_sample: empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() || j < y.size()) {
    const double v = j == y.size() || (i < x.size() && x[i] <= y[j]) ? x[i] : y[j];
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return d;
}

double z_value(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw ParameterError("confidence must lie in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), 0.5 + 0.5 * confidence);
}

Interval wilson(std::size_t successes, std::size_t trials, double confidence) {
  if (trials == 0) throw ParameterError("wilson: no trials");
  const double z = z_value(confidence);
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z / (1.0 + z2 / n) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {p, std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

MeanSe mean_se(std::span<const double> xs) {
  if (xs.size() < 2) throw ParameterError("mean_se: need at least two values");
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

int poisson_quantile(double mean, double q) {
  if (!(mean >= 0.0)) throw ParameterError("poisson_quantile: mean must be >= 0");
  if (mean == 0.0) return 0;
  if (mean < 50.0) {
    double p = std::exp(-mean);
    double cum = p;
    int k = 0;
    while (cum < q && k < 10000) {
      ++k;
      p *= mean / k;
      cum += p;
    }
    return k;
  }
  using Policy = boost::math::policies::policy<
      boost::math::policies::discrete_quantile<boost::math::policies::integer_round_up>>;
  return static_cast<int>(boost::math::quantile(boost::math::poisson_distribution<double, Policy>(mean), q));
}

}  // namespace gcruin::stats
