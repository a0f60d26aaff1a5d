#pragma once

// Comparison Gaussian processes, the propagator products C_{j,n}, the
// Brownian-motion rescaling identity, and deterministic product/power bounds.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "erwg/rng.hpp"
#include "erwg/spectral.hpp"

namespace erwg {

// C_{j,n} = prod_{l=j+1}^{n} ((l-1)/l I + B/l); C_{n,n} = I.
// Plain left-to-right accumulation in double precision.
Eigen::MatrixXd c_product(long j, long n, const Eigen::MatrixXd& B);

// Split form (j/n) * prod_{m=j}^{n-1} (I + B/m): the scalar prefactor is one
// exact division instead of n-j rounded factors. Used by the bound checks.
Eigen::MatrixXd c_product_compensated(long j, long n, const Eigen::MatrixXd& B);

// Scalar eigenvalue route prod_{l=j+1}^{n} (l-1+lambda)/l, evaluated through
// log-gamma ratios; exact zero when the product contains a vanishing factor.
std::complex<double> scalar_c_product(std::complex<double> lambda, long j, long n);

struct GaussianEnsemble {
    long n = 0;
    std::uint64_t seed = 0;
    Eigen::MatrixXd samples;       // replicas x k, rows are G_n = sum_j Y_j (j/n)^{-B}
    Eigen::MatrixXd exact_cov;     // sum_j (j/n)^{-B'} (j/n)^{-B}
    Eigen::MatrixXd empirical_cov; // about the exact (zero) mean
};

// Draws `replicas` independent copies of G_n; requires eta <= 1/2.
GaussianEnsemble gaussian_comparison(const Eigen::MatrixXd& B, long n, long replicas,
                                     std::uint64_t seed);

Eigen::MatrixXd gaussian_exact_covariance(const Eigen::MatrixXd& B, long n);

struct BrownianPath {
    std::vector<double> times;  // v_m = sum_{j<=m} b_j^2
    std::vector<double> values; // W(v_m) = sum_{j<=m} b_j (Z(j) - Z(j-1))
};

// Weighted sums of independent standard-normal increments land on a Brownian
// path at the quadratic-variation times v_m.
BrownianPath brownian_rescale(const std::vector<double>& b, std::uint64_t seed);

// A deterministic envelope bound fitted empirically over a (j, n) pair grid.
//
// Scalar bounds, with a = scalar_c_product(lambda, j, n), 1 <= j < n:
//   scalar_decay:        |a| <= c (j/n)^{1-Re lam}
//   scalar_power_approx: |a - (j/n)^{1-lam}| <= c j^{-1} (j/n)^{1-Re lam}
//   scalar_grid_osc:     sup_{x in [j,j+1]} |(j/n)^{-lam} - (x/n)^{-lam}|
//                          <= c j^{-1} (j/n)^{-Re lam}
// Matrix bounds use the spectral norm, eta in place of Re lam, and C_{j,n} in
// place of a (1 <= j <= n for decay/approx, 1 <= j < n for the oscillation).
//
// The approximation bounds carry a j^{-1} envelope: the product over
// l in [j, n) of (1 + O(l^{-2})) factors differs from 1 by the tail sum,
// which is Theta(1/j); a j^{-2} envelope admits no finite stable constant
// (empirically the fit then doubles when the grid doubles).
struct BoundFit {
    std::string bound_id;
    std::complex<double> lambda; // for matrix bounds: (eta, 0)
    double fitted_constant;      // smallest c on the full grid n <= n_full
    double reference_constant;   // smallest c on the grid n <= n_reference
    double violation_ratio;      // fitted / reference (1 when both negligible)
};

struct BoundReport {
    std::vector<BoundFit> fits;
    long n_reference = 0;
    long n_full = 0;
    double max_violation_ratio = 1.0;
};

// Fits the six bound constants over all pairs 1 <= j < n <= n_full (scalar
// bounds for each lambda; matrix bounds for each B) and reports how much each
// constant moves when the grid grows from n_reference to n_full.
BoundReport proposition_bounds_check(const std::vector<std::complex<double>>& lambda_grid,
                                     const std::vector<Eigen::MatrixXd>& matrices,
                                     long n_reference, long n_full);

// |lambda| <= 1 grid with the given step over both axes.
std::vector<std::complex<double>> unit_disk_grid(double step = 0.1);

// Columns: lambda_re, lambda_im, bound_id, fitted_constant, violation_ratio.
void write_bound_csv(const std::string& path, const BoundReport& report);

} // namespace erwg
