#pragma once

// Eigen-analysis of the memory matrix.
//
// Conventions fixed here and relied on everywhere else:
//  - eigenvalues sorted by descending real part, ties by descending
//    imaginary part;
//  - eta = max_j Re(lambda_j), rho = 1 - eta;
//  - diagonalizability is decided numerically: cond(T) > 1e8 or solver
//    failure means "not diagonalizable" (Jordan detection is ill-posed);
//  - the scaling sequence d_n(lambda) = prod_{l=2}^{n-1} (1 + lambda/l)
//    = Gamma(lambda+n) / (Gamma(lambda+2) Gamma(n)), evaluated via
//    log-gamma, not the naive product.

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "erwg/errors.hpp"

namespace erwg {

enum class Regime { Diffusive, Critical, Superdiffusive };

std::string regime_name(Regime r);

struct RegimeLabel {
    Regime global;
    std::vector<Regime> per_projection; // by Re(lambda_j), same order as Spectrum
};

struct Spectrum {
    Eigen::VectorXcd eigenvalues; // sorted: descending Re, ties descending Im
    Eigen::MatrixXcd T;           // columns are eigenvectors; T^{-1} B T = Lambda
    Eigen::MatrixXcd T_inverse;
    std::optional<Eigen::MatrixXd> real_T; // set iff real_diagonalizable
    bool diagonalizable = false;
    bool real_diagonalizable = false;
    bool symmetric = false;
    double eta = 0.0;
    double rho = 1.0;
    double cond_T = 0.0;
    std::optional<int> nu; // max algebraic multiplicity at Re = eta, when known

    int k() const { return static_cast<int>(eigenvalues.size()); }
};

// Eigen-decomposition of B with the ordering/flag conventions above.
// Symmetric matrices use the orthogonal self-adjoint solver.
Spectrum analyze(const Eigen::MatrixXd& B);

// Critical iff |eta - 1/2| <= tol; diffusive iff eta < 1/2 - tol;
// superdiffusive otherwise. Same rule per projection on Re(lambda_j).
RegimeLabel classify(const Spectrum& spectrum, double tol = 1e-9);
Regime classify_value(double real_part, double tol = 1e-9);

// d_n(lambda) for n >= 2; d_2 = 1.
std::complex<double> d_scale(std::complex<double> lambda, long n);
double d_scale(double lambda, long n);

// x^A = exp(log(x) A), scaling-and-squaring Pade; symmetric A uses the
// eigendecomposition path and both routes must agree to 1e-10.
Eigen::MatrixXd matrix_power(double x, const Eigen::MatrixXd& A);

std::string spectrum_to_json(const Spectrum& s);

} // namespace erwg
