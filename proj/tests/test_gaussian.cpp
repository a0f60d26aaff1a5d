#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <string>

#include "erwg/errors.hpp"
#include "erwg/gaussian.hpp"
#include "erwg/graph.hpp"
#include "erwg/spectral.hpp"

using namespace erwg;

namespace {

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace

TEST_CASE("propagator product: three routes agree") {
    const Eigen::MatrixXd B = memory_matrix(two_elephant_config(0.7, 0.5, 0.5));
    const Spectrum s = analyze(B);
    REQUIRE(s.real_T.has_value());
    const Eigen::MatrixXd T = *s.real_T;
    for (long n : {10L, 137L, 500L}) {
        for (long j : {1L, 2L, 7L, n / 2, n - 1, n}) {
            if (j < 1) continue;
            const Eigen::MatrixXd direct = c_product(j, n, B);
            CHECK(max_abs_diff(direct, c_product_compensated(j, n, B)) < 1e-12);
            // Eigen route: T diag(scalar products) T'.
            Eigen::MatrixXd diag = Eigen::MatrixXd::Zero(2, 2);
            for (int e = 0; e < 2; ++e)
                diag(e, e) = scalar_c_product(s.eigenvalues(e), j, n).real();
            CHECK(max_abs_diff(direct, T * diag * T.transpose()) < 1e-9);
        }
    }
    CHECK(max_abs_diff(c_product(42, 42, B), Eigen::MatrixXd::Identity(2, 2)) < 1e-15);
    CHECK_THROWS_AS(c_product(0, 5, B), InvalidConfig);
    CHECK_THROWS_AS(c_product(6, 5, B), InvalidConfig);
    CHECK_THROWS_AS(scalar_c_product({0.5, 0.0}, -1, 5), InvalidConfig);
}

TEST_CASE("scalar propagator: special values") {
    // lambda = 0: the product telescopes to j/n exactly.
    CHECK(scalar_c_product({0.0, 0.0}, 3, 1000).real() == doctest::Approx(0.003).epsilon(1e-13));
    CHECK(scalar_c_product({0.0, 0.0}, 3, 1000).imag() == 0.0);
    // lambda = 1: every factor is 1.
    CHECK(std::abs(scalar_c_product({1.0, 0.0}, 5, 800) - std::complex<double>(1.0, 0.0)) <
          1e-13);
    // lambda = -1 with the l=2 factor included: exact zero, no NaN from the
    // log-gamma pole.
    const std::complex<double> z = scalar_c_product({-1.0, 0.0}, 1, 50);
    CHECK(z.real() == 0.0);
    CHECK(z.imag() == 0.0);
    // Complex lambda against a direct product.
    const std::complex<double> lam(0.3, 0.4);
    std::complex<double> direct(1.0, 0.0);
    for (long l = 8; l <= 40; ++l)
        direct *= (static_cast<double>(l - 1) + lam) / static_cast<double>(l);
    CHECK(std::abs(scalar_c_product(lam, 7, 40) - direct) < 1e-12);
}

TEST_CASE("comparison Gaussian: exact covariance matches the direct power sum") {
    const Eigen::MatrixXd B = memory_matrix(two_elephant_config(0.6, 0.5, 0.5));
    const long n = 50;
    Eigen::MatrixXd direct = Eigen::MatrixXd::Zero(2, 2);
    for (long j = 1; j <= n; ++j) {
        const Eigen::MatrixXd P =
            matrix_power(static_cast<double>(j) / static_cast<double>(n), -B);
        direct += P.transpose() * P;
    }
    CHECK(max_abs_diff(gaussian_exact_covariance(B, n), direct) < 1e-9);
}

TEST_CASE("comparison Gaussian: empirical covariance converges and the regime gate holds") {
    const Eigen::MatrixXd B = memory_matrix(two_elephant_config(0.6, 0.5, 0.5));
    const GaussianEnsemble g = gaussian_comparison(B, 200, 2000, 99);
    CHECK(g.samples.rows() == 2000);
    CHECK(g.samples.cols() == 2);
    const double rel =
        (g.empirical_cov - g.exact_cov).norm() / g.exact_cov.norm();
    CHECK(rel < 0.15);
    // Deterministic in the seed.
    const GaussianEnsemble h = gaussian_comparison(B, 200, 2000, 99);
    CHECK(max_abs_diff(g.samples, h.samples) == 0.0);
    CHECK_THROWS_AS(gaussian_comparison(memory_matrix(two_elephant_config(0.9, 1.0, 1.0)),
                                        100, 10, 1),
                    RegimeMismatch);
    CHECK_THROWS_AS(gaussian_comparison(B, 0, 10, 1), InvalidConfig);
}

TEST_CASE("Brownian rescaling: quadratic-variation clock and determinism") {
    const std::vector<double> b{1.0, 0.5, 2.0, 0.25};
    const BrownianPath w = brownian_rescale(b, 7);
    REQUIRE(w.times.size() == 4);
    REQUIRE(w.values.size() == 4);
    CHECK(w.times[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(w.times[1] == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(w.times[2] == doctest::Approx(5.25).epsilon(1e-15));
    CHECK(w.times[3] == doctest::Approx(5.3125).epsilon(1e-15));
    const BrownianPath w2 = brownian_rescale(b, 7);
    CHECK(w.values == w2.values);
    const BrownianPath w3 = brownian_rescale(b, 8);
    CHECK(w.values != w3.values);
    CHECK_THROWS_AS(brownian_rescale({1.0, 0.0}, 1), InvalidConfig);
    CHECK_THROWS_AS(brownian_rescale({1.0, -2.0}, 1), InvalidConfig);
}

TEST_CASE("unit-disk grid") {
    const auto grid = unit_disk_grid(0.1);
    CHECK(grid.size() == 317); // lattice points of spacing 0.1 inside the closed disk
    for (const auto& lam : grid) CHECK(std::abs(lam) <= 1.0 + 1e-12);
    CHECK_THROWS_AS(unit_disk_grid(0.0), InvalidConfig);
}

TEST_CASE("deterministic envelope bounds: constants exist and are grid-stable") {
    const Eigen::MatrixXd B = memory_matrix(two_elephant_config(0.6, 0.5, 0.5));
    const std::vector<std::complex<double>> lams{{0.5, 0.0}, {-0.3, 0.4}};
    const BoundReport rep = proposition_bounds_check(lams, {B}, 100, 200);
    // three scalar bounds per lambda + three matrix bounds per matrix
    REQUIRE(rep.fits.size() == lams.size() * 3 + 3);
    for (const auto& f : rep.fits) {
        CHECK(std::isfinite(f.fitted_constant));
        CHECK(f.fitted_constant >= 0.0);
        CHECK(f.violation_ratio >= 1.0 - 1e-12); // grids nest, so the sup cannot shrink
        CHECK(f.violation_ratio <= 1.25);
    }
    CHECK(rep.max_violation_ratio <= 1.25);
    CHECK(rep.n_reference == 100);
    CHECK(rep.n_full == 200);
    CHECK_THROWS_AS(proposition_bounds_check(lams, {B}, 1, 200), InvalidConfig);
    CHECK_THROWS_AS(proposition_bounds_check(lams, {B}, 300, 200), InvalidConfig);
    CHECK_THROWS_AS(proposition_bounds_check({{1.5, 0.0}}, {}, 100, 200), InvalidConfig);
}

TEST_CASE("bound CSV: one row per fit plus header") {
    const Eigen::MatrixXd B = memory_matrix(two_elephant_config(0.6, 0.5, 0.5));
    const BoundReport rep = proposition_bounds_check({{0.2, 0.0}}, {B}, 50, 100);
    const std::string path = "test_bounds_out.csv";
    write_bound_csv(path, rep);
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    long rows = 0;
    bool header_ok = false;
    while (std::getline(in, line)) {
        if (rows == 0) header_ok = line.find("bound_id") != std::string::npos;
        ++rows;
    }
    in.close();
    std::remove(path.c_str());
    CHECK(header_ok);
    CHECK(rows == static_cast<long>(rep.fits.size()) + 1);
}
