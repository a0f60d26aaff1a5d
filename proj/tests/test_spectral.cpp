#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <complex>

#include "erwg/errors.hpp"
#include "erwg/graph.hpp"
#include "erwg/spectral.hpp"

using namespace erwg;

TEST_CASE("two-elephant spectrum: eigenvalues +-(2p-1), sorted by descending real part") {
    const Eigen::MatrixXd B = memory_matrix(two_elephant_config(0.6, 0.5, 0.5));
    const Spectrum s = analyze(B);
    CHECK(s.symmetric);
    CHECK(s.diagonalizable);
    CHECK(s.real_diagonalizable);
    CHECK(s.eigenvalues(0).real() == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(s.eigenvalues(1).real() == doctest::Approx(-0.2).epsilon(1e-12));
    CHECK(s.eigenvalues(0).imag() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s.eta == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(s.rho == doctest::Approx(0.8).epsilon(1e-12)); // rho = 1 - eta
    REQUIRE(s.real_T.has_value());
    // orthonormal eigenbasis, and it actually diagonalizes B
    const Eigen::MatrixXd T = *s.real_T;
    CHECK((T.transpose() * T - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
    const Eigen::MatrixXd lam = s.eigenvalues.real().asDiagonal();
    CHECK((B * T - T * lam).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("regime classification with tolerance band") {
    CHECK(classify_value(0.2) == Regime::Diffusive);
    CHECK(classify_value(0.5) == Regime::Critical);
    CHECK(classify_value(0.5 + 5e-10) == Regime::Critical);
    CHECK(classify_value(0.5 + 2e-9) == Regime::Superdiffusive);
    CHECK(classify_value(0.5 - 2e-9) == Regime::Diffusive);
    CHECK(classify_value(0.45, 0.1) == Regime::Critical);
}

TEST_CASE("per-projection labels") {
    const Spectrum s = analyze(memory_matrix(two_elephant_config(0.75, 0.5, 0.5)));
    const RegimeLabel label = classify(s);
    CHECK(label.global == Regime::Critical);
    CHECK(label.per_projection[0] == Regime::Critical);    // +0.5
    CHECK(label.per_projection[1] == Regime::Diffusive);   // -0.5
}

TEST_CASE("d_scale equals the direct product of (1 + lambda/m), m = 2..n-1") {
    for (double lambda : {-1.0, -0.5, -0.2, 0.3, 0.8, 1.0}) {
        double direct = 1.0; // d_2: empty product
        for (long n = 2; n <= 60; ++n) {
            CHECK(d_scale(lambda, n) == doctest::Approx(direct).epsilon(1e-12));
            direct *= (static_cast<double>(n) + lambda) / static_cast<double>(n);
        }
    }
    CHECK_THROWS_AS(d_scale(0.3, 1), InvalidConfig);
}

TEST_CASE("d_scale special values") {
    CHECK(d_scale(0.3, 2) == doctest::Approx(1.0).epsilon(1e-15));
    // lambda = -1: telescoping product, d_n = 1/(n-1)
    for (long n : {2L, 5L, 50L, 1000L})
        CHECK(d_scale(-1.0, n) == doctest::Approx(1.0 / static_cast<double>(n - 1)).epsilon(1e-12));
    // lambda = 0: every factor is 1
    CHECK(d_scale(0.0, 500) == doctest::Approx(1.0).epsilon(1e-12));
    // lambda = 1: telescoping product, d_n = n/2
    CHECK(d_scale(1.0, 500) == doctest::Approx(250.0).epsilon(1e-12));
    // gamma-ratio closed form at lambda = 0.8 (criterion scale): d_n ~ n^{lam-1}/Gamma(lam+2)
    const double lam = 0.8;
    const long n = 4000;
    const double exact = std::exp(std::lgamma(lam + static_cast<double>(n)) -
                                  std::lgamma(lam + 2.0) - std::lgamma(static_cast<double>(n)));
    CHECK(d_scale(lam, n) == doctest::Approx(exact).epsilon(1e-10));
}

TEST_CASE("complex d_scale matches the direct complex product") {
    const std::complex<double> lambda(0.3, 0.4);
    std::complex<double> direct = 1.0;
    for (long m = 2; m <= 39; ++m)
        direct *= (static_cast<double>(m) + lambda) / static_cast<double>(m);
    const std::complex<double> got = d_scale(lambda, 40L);
    CHECK(std::abs(got - direct) < 1e-12 * std::abs(direct));
}

TEST_CASE("matrix_power: identity, scalar consistency, group property") {
    const Eigen::MatrixXd B = memory_matrix(two_elephant_config(0.6, 0.5, 0.5));
    CHECK((matrix_power(1.0, B) - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() <
          1e-12);
    // diagonal exponent reduces to scalar powers
    Eigen::MatrixXd D(2, 2);
    D << 0.3, 0.0, 0.0, -0.7;
    const Eigen::MatrixXd P = matrix_power(0.37, D);
    CHECK(P(0, 0) == doctest::Approx(std::pow(0.37, 0.3)).epsilon(1e-12));
    CHECK(P(1, 1) == doctest::Approx(std::pow(0.37, -0.7)).epsilon(1e-12));
    CHECK(std::abs(P(0, 1)) < 1e-14);
    // x^B y^B = (xy)^B for commuting (equal) exponents
    const Eigen::MatrixXd lhs = matrix_power(0.2, B) * matrix_power(0.4, B);
    const Eigen::MatrixXd rhs = matrix_power(0.08, B);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("matrix_power agrees with the eigendecomposition route for symmetric B") {
    const Eigen::MatrixXd B = memory_matrix(two_elephant_config(0.9, 1.0, 1.0));
    const Spectrum s = analyze(B);
    const Eigen::MatrixXd T = *s.real_T;
    for (double x : {0.01, 0.2, 0.9}) {
        Eigen::VectorXd d(2);
        for (int j = 0; j < 2; ++j) d(j) = std::pow(x, s.eigenvalues(j).real());
        const Eigen::MatrixXd viaEigen = T * d.asDiagonal() * T.transpose();
        CHECK((matrix_power(x, B) - viaEigen).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("non-diagonalizable matrices are flagged, not silently decomposed") {
    Eigen::MatrixXd J(2, 2); // Jordan block
    J << 0.5, 1.0, 0.0, 0.5;
    const Spectrum s = analyze(J);
    CHECK_FALSE(s.diagonalizable);
    CHECK_FALSE(s.real_diagonalizable);
    CHECK(s.eta == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("rotation-like matrices have complex pairs and no real basis") {
    Eigen::MatrixXd R(2, 2);
    R << 0.0, -0.4, 0.4, 0.0; // eigenvalues +-0.4i
    const Spectrum s = analyze(R);
    CHECK(s.diagonalizable);
    CHECK_FALSE(s.real_diagonalizable);
    CHECK(s.eigenvalues(0).imag() == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(s.eta == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s.rho == doctest::Approx(1.0).epsilon(1e-12)); // rho = 1 - eta
}

TEST_CASE("spectrum json is well formed") {
    const std::string js = spectrum_to_json(analyze(memory_matrix(two_elephant_config(0.75, 0.5, 0.5))));
    CHECK(js.find("\"eta\"") != std::string::npos);
    CHECK(js.find("\"eigenvalues\"") != std::string::npos);
}
