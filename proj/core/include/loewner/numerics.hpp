#ifndef LOEWNER_NUMERICS_HPP
#define LOEWNER_NUMERICS_HPP

#include <cstddef>
#include <functional>
#include <vector>

namespace loewner {

// Deterministic pairwise reduction. The result depends only on the order of
// the input vector, never on chunking or thread count, so parallel drivers
// that fill results by task index reproduce sums bit for bit.
double pairwise_sum(const std::vector<double>& v);
double pairwise_sum(const double* v, std::size_t n);

double mean(const std::vector<double>& v);
// Unbiased sample variance (n-1 denominator).
double sample_variance(const std::vector<double>& v);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};
// Ordinary least squares y ~ slope*x + intercept.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

// One-sample Kolmogorov-Smirnov statistic against a cdf.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);
// Two-sample Kolmogorov-Smirnov statistic.
double ks_two_sample(std::vector<double> a, std::vector<double> b);
// Critical value of the one-sample statistic at significance alpha
// (asymptotic Kolmogorov distribution; alpha = 0.01 gives c = 1.628).
double ks_critical(std::size_t n, double alpha);
double ks_two_sample_critical(std::size_t n, std::size_t m, double alpha);

// Lag-1 autocorrelation of a sequence.
double lag1_autocorrelation(const std::vector<double>& v);

}  // namespace loewner

#endif  // LOEWNER_NUMERICS_HPP
