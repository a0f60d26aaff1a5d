#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "erwg/errors.hpp"
#include "erwg/rng.hpp"
#include "erwg/stats.hpp"

using namespace erwg;

TEST_CASE("moment accumulator: hand-checked values and order-independent merge") {
    MomentAccumulator acc(2);
    Eigen::VectorXd a(2), b(2), c(2);
    a << 1.0, 2.0;
    b << 3.0, -1.0;
    c << -2.0, 0.0;
    acc.add(a);
    acc.add(b);
    acc.add(c);
    CHECK(acc.count() == 3);
    CHECK(acc.mean()(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(acc.mean()(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    // E[x0^2] - mean^2 = (1+9+4)/3 - 4/9 = 38/9
    CHECK(acc.covariance()(0, 0) == doctest::Approx(38.0 / 9.0).epsilon(1e-14));
    // E[x0 x1] - m0 m1 = (2-3+0)/3 - 2/9 = -5/9
    CHECK(acc.covariance()(0, 1) == doctest::Approx(-5.0 / 9.0).epsilon(1e-14));
    CHECK(acc.second_moment()(1, 1) == doctest::Approx(5.0 / 3.0).epsilon(1e-14));

    // Split / merge reproduces the pooled sums bit-for-bit.
    MomentAccumulator left(2), right(2);
    left.add(a);
    right.add(b);
    right.add(c);
    left.merge(right);
    CHECK(left.count() == 3);
    CHECK((left.mean() - acc.mean()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((left.covariance() - acc.covariance()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("Kolmogorov tail: known value, monotone, correct limits") {
    // Q(1.36) ~ 0.0505 is the classical 5% critical point.
    CHECK(kolmogorov_tail(1.36) == doctest::Approx(0.0505).epsilon(0.01));
    CHECK(kolmogorov_tail(0.5) > kolmogorov_tail(1.0));
    CHECK(kolmogorov_tail(1.0) > kolmogorov_tail(2.0));
    CHECK(kolmogorov_tail(1e-4) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(kolmogorov_tail(10.0) < 1e-12);
}

TEST_CASE("normal CDF") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-9));
    CHECK(normal_cdf(-1.959963984540054) == doctest::Approx(0.025).epsilon(1e-9));
    CHECK(normal_cdf(8.0) > 1.0 - 1e-14);
}

TEST_CASE("KS against standard normal: accepts normals, rejects a shifted sample") {
    Rng rng(2024);
    std::vector<double> z(5000);
    for (double& v : z) v = rng.next_normal();
    const KsResult ok = ks_test_standard_normal(z);
    CHECK(ok.p_value > 0.01);
    CHECK(ok.statistic < 0.05);

    for (double& v : z) v += 0.5;
    const KsResult bad = ks_test_standard_normal(z);
    CHECK(bad.p_value < 1e-6);
    CHECK_THROWS_AS(ks_test_standard_normal({}), InvalidConfig);
}

TEST_CASE("two-sample KS: same law accepted, disjoint laws rejected") {
    Rng rng(77);
    std::vector<double> a(3000), b(3000);
    for (double& v : a) v = rng.next_normal();
    for (double& v : b) v = rng.next_normal();
    CHECK(ks_test_two_sample(a, b).p_value > 0.01);
    for (double& v : b) v += 10.0;
    const KsResult far = ks_test_two_sample(a, b);
    CHECK(far.statistic == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(far.p_value < 1e-12);
    CHECK_THROWS_AS(ks_test_two_sample({}, {1.0}), InvalidConfig);
}

TEST_CASE("two-sample chi-square: identical counts give statistic 0; pooling respects the floor") {
    const std::vector<long> a{50, 60, 70, 80};
    CHECK(chi_square_two_sample(a, a).statistic == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(chi_square_two_sample(a, a).p_value == doctest::Approx(1.0).epsilon(1e-12));

    // Sparse tails must be pooled until each cell holds >= 20 across both samples.
    const std::vector<long> c{1, 2, 3, 4, 100, 4, 3, 2, 1};
    const std::vector<long> d{2, 1, 4, 3, 98, 3, 4, 1, 2};
    const ChiSquareResult r = chi_square_two_sample(c, d, 20);
    CHECK(r.cells >= 2);
    CHECK(r.cells < 9);
    CHECK(r.degrees_of_freedom == r.cells - 1);
    CHECK(r.p_value > 0.01); // nearly identical distributions

    // Everything pools into one cell -> no test possible.
    CHECK_THROWS_AS(chi_square_two_sample({1, 2}, {2, 1}, 20), InvalidConfig);
    CHECK_THROWS_AS(chi_square_two_sample({1, 2}, {2}, 20), InvalidConfig);

    // A genuinely different pair is rejected.
    const std::vector<long> e{100, 100, 100, 100};
    const std::vector<long> f{400, 50, 30, 20};
    CHECK(chi_square_two_sample(e, f).p_value < 1e-10);
}

TEST_CASE("percentile: linear interpolation") {
    std::vector<double> v{4.0, 1.0, 3.0, 2.0}; // sorted: 1 2 3 4
    CHECK(percentile(v, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(percentile(v, 100.0) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(percentile(v, 50.0) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(percentile(v, 25.0) == doctest::Approx(1.75).epsilon(1e-15));
    CHECK_THROWS_AS(percentile({}, 50.0), InvalidConfig);
    CHECK_THROWS_AS(percentile(v, 101.0), InvalidConfig);
}

TEST_CASE("least-squares slope: exact on a line, throws on degenerate input") {
    const std::vector<double> x{1.0, 2.0, 3.0, 4.0};
    const std::vector<double> y{0.5, 2.5, 4.5, 6.5}; // slope 2
    CHECK(least_squares_slope(x, y) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(least_squares_slope({1.0}, {1.0}), InvalidConfig);
    CHECK_THROWS_AS(least_squares_slope({2.0, 2.0}, {1.0, 3.0}), InvalidConfig);
}

TEST_CASE("variance lower confidence bound") {
    Rng rng(5);
    std::vector<double> z(20000);
    for (double& v : z) v = rng.next_normal();
    const double lcb = variance_lcb(z);
    CHECK(lcb > 0.9);
    CHECK(lcb < 1.0 + 0.1); // lcb sits below the true variance w.h.p.

    // Nearly-degenerate sample: the bound must not go positive.
    std::vector<double> flat(100, 3.0);
    flat[0] = 3.0000001;
    CHECK(variance_lcb(flat) <= 0.0);
    CHECK_THROWS_AS(variance_lcb({1.0}), InvalidConfig);
}
