#pragma once

// Statistical helpers for the verification suites: mergeable moment
// accumulators, Kolmogorov-Smirnov and chi-square tests, percentiles and
// log-log regression slopes.

#include <Eigen/Dense>
#include <vector>

namespace erwg {

// First and second moments as plain sums (count, sum, sum of outer products),
// so partial accumulators merge by addition and a fixed merge order makes
// results independent of how replicas were distributed across workers.
class MomentAccumulator {
  public:
    explicit MomentAccumulator(int dim)
        : sum_(Eigen::VectorXd::Zero(dim)), outer_(Eigen::MatrixXd::Zero(dim, dim)) {}

    void add(const Eigen::VectorXd& x) {
        ++count_;
        sum_ += x;
        outer_ += x * x.transpose();
    }
    void merge(const MomentAccumulator& other) {
        count_ += other.count_;
        sum_ += other.sum_;
        outer_ += other.outer_;
    }

    long count() const { return count_; }
    Eigen::VectorXd mean() const { return sum_ / static_cast<double>(count_); }
    // population covariance about the sample mean
    Eigen::MatrixXd covariance() const {
        const Eigen::VectorXd m = mean();
        return outer_ / static_cast<double>(count_) - m * m.transpose();
    }
    // second moment about zero
    Eigen::MatrixXd second_moment() const { return outer_ / static_cast<double>(count_); }

  private:
    long count_ = 0;
    Eigen::VectorXd sum_;
    Eigen::MatrixXd outer_;
};

struct KsResult {
    double statistic; // sup-distance D
    double p_value;   // asymptotic, with the small-sample size correction
};

// Asymptotic Kolmogorov tail Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_tail(double lambda);

double normal_cdf(double x);

// Two-sided KS test of the samples against the standard normal law.
KsResult ks_test_standard_normal(std::vector<double> samples);

// Two-sided two-sample KS test.
KsResult ks_test_two_sample(std::vector<double> a, std::vector<double> b);

struct ChiSquareResult {
    double statistic;
    double p_value;
    long degrees_of_freedom;
    long cells; // after pooling
};

// Two-sample chi-square homogeneity test over aligned cells. Adjacent cells
// (in the given order) are pooled until each pooled cell holds at least
// min_pooled_count observations across both samples.
ChiSquareResult chi_square_two_sample(const std::vector<long>& a, const std::vector<long>& b,
                                      long min_pooled_count = 20);

// Linear-interpolation percentile, pct in [0, 100].
double percentile(std::vector<double> values, double pct);

// Slope of the least-squares line y = a + b x.
double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

// Sample variance minus z standard errors of the variance estimate (the
// standard error uses the empirical fourth moment, no normality assumed).
double variance_lcb(const std::vector<double>& samples, double z = 4.0);

} // namespace erwg
