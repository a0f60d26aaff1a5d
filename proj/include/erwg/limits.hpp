#pragma once

// Closed-form limit objects: the diffusive and critical limit covariances,
// per-projection limit variances, sub-block covariances for the diffusive and
// critical projections, the iterated-logarithm ellipsoids, and the
// superdiffusive per-projection profile.

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "erwg/graph.hpp"
#include "erwg/spectral.hpp"
#include "json.hpp"

namespace erwg {

// Diffusive limit covariance: the unique solution of A'S + SA = -I with
// A = B - I/2 (equivalently the integral of e^{A't} e^{At} over t >= 0).
// Requires eta < 1/2 - tol; the Lyapunov residual is checked to 1e-10.
Eigen::MatrixXd sigma1(const Eigen::MatrixXd& B, double tol = 1e-9);

// Composite-Simpson quadrature of the defining integral, truncated at t_max.
// Cross-check route only; sigma1 is the authoritative value.
Eigen::MatrixXd sigma1_quadrature(const Eigen::MatrixXd& B, double t_max = 80.0,
                                  long intervals = 16000);

// Critical limit covariance in the eigenbasis:
//   Sigma2 = T^{-T} G T^{-1},  G_{p,q} = (T'T)_{p,q} 1{lam_p + lam_q = 1}.
// Requires |eta - 1/2| <= tol and a real-diagonalizable B; the criticality
// indicator uses the same tolerance as regime classification.
Eigen::MatrixXd sigma2(const Eigen::MatrixXd& B, const Spectrum& spectrum, double tol = 1e-9);

// Per-projection limit variance, piecewise in lam = lam_j (real):
//   lam < 1/2:  (1 - 2 lam)^{-1} (T'T)_{jj}
//   lam = 1/2:  (T'T)_{jj}
//   lam > 1/2:  (2 lam - 1)^{-1} Gamma(lam+2)^2 (T'T)_{jj}
double sigma_lambda(double lambda, const Spectrum& spectrum, int j, double tol = 1e-9);

// Joint covariances of the diffusive/critical projections, indexed in the
// layout (k1 diffusive projections first, then k2 critical ones); `diffusive`
// and `critical` give the permutation back into spectrum order.
struct SubBlockCovariances {
    std::vector<int> diffusive; // spectrum indices, diffusive block order
    std::vector<int> critical;  // spectrum indices, critical block order
    std::vector<double> lambdas; // eigenvalues in block order (size k1+k2)
    Eigen::MatrixXd gram;        // (T'T) restricted to the block columns
    std::optional<Eigen::MatrixXd> sigma1_tilde; // (1-lp-lq)^{-1} gram; only when k2 == 0
    Eigen::MatrixXd sigma2_tilde;                // 1{lp+lq=1} gram
    std::optional<Eigen::MatrixXd> sigma1_star;  // diffusive sub-block, k1 x k1
    std::optional<Eigen::MatrixXd> critical_gram; // critical Gram block, k2 x k2
};

// Requires real-diagonalizable spectrum with eta < 1; throws
// NoSubCriticalProjections when every eigenvalue is superdiffusive.
SubBlockCovariances sub_block_covariances(const Spectrum& spectrum, double tol = 1e-9);

struct LilEllipsoid {
    Eigen::MatrixXd Q;   // inverse covariance; the limit-point set is {x: x Q x' <= 1}
    std::string scaling; // the normalization the set applies to
};

// Q = Sigma^{-1} with Sigma Q = I verified to 1e-9; throws Singular otherwise.
LilEllipsoid lil_ellipsoid(const Eigen::MatrixXd& sigma,
                           const std::string& scaling = "sqrt(2 n log log n)");

struct SuperdiffusiveProjection {
    int j;                       // index in spectrum order
    double lambda;               // real eigenvalue (NaN marks a complex one)
    double limit_mean;           // E of lim Shat_n^{(j)} / d_n(lam_j)
    double fluctuation_exponent; // lam - 1/2
    double fluctuation_variance; // sigma_lambda value (NaN when lam not real)
};

struct SuperdiffusiveProfile {
    std::vector<SuperdiffusiveProjection> projections;
    // Closed-form constants for the strongly-coupled two-elephant family.
    std::optional<double> pair_sigma1;    // Gamma(2p+1)/sqrt(4p-3), p > 3/4
    std::optional<double> pair_sigma2;    // Gamma(3-2p)/sqrt(1-4p), p < 1/4
    std::optional<double> pair_mean_sum;  // lim E[(s^1+s^2)_n / (2 d_n)] = 2p(q1+q2-1)
    std::optional<double> pair_mean_diff; // lim E[(s^1-s^2)_n / (2 d_n)] = 2(1-p)(q1-q2)
};

// Throws NotSuperdiffusive when no projection has Re(lam) > 1/2 + tol.
SuperdiffusiveProfile superdiffusive_profile(const Spectrum& spectrum, const WalkConfig& config,
                                             double tol = 1e-9);

// Whether the config is the strongly-coupled pair (1<->2, equal p).
bool is_two_elephant(const WalkConfig& config);

// Full limit report; covariances that do not apply to the config's regime are
// omitted, and the non-diagonalizable critical covariance is always marked
// "unsupported" rather than silently approximated.
nlohmann::json limit_report(const WalkConfig& config, double tol = 1e-9);

} // namespace erwg
