#pragma once

// Exact moment oracles for the walk.
//
// All quantities here are computed without simulation:
//  - mean_recursion:       E[S_1] = 2q - 1,  E[S_{n+1}] = E[S_n](I + B/n)
//  - second_moment:        M_n = E[S_n' S_n] with
//        M_1 = I + offdiag((2q_i-1)(2q_j-1))
//        M_{n+1} = (I + B/n)' M_n (I + B/n) + I - Diag(B' M_n B) / n^2
//    (the Diag correction restores the unit diagonal contribution of X'X;
//     the derivation is re-verified against brute_force_distribution in tests
//     before the recursion is trusted as an oracle)
//  - brute_force_distribution: the exact law of S_n by dynamic programming
//    over per-elephant +1 counts (the count vector is Markov for both
//    sampling mechanisms); intentionally limited to tiny (n, k).
//  - rational_cross_check: the same recursions in exact rational arithmetic
//    (p, q taken exactly at their binary floating-point values) to bound the
//    rounding error of the double-precision recursions.

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "erwg/graph.hpp"
#include "erwg/simulate.hpp"

namespace erwg {

// Rows n = 0..n_max; row n is E[S_n].
Eigen::MatrixXd mean_recursion(const WalkConfig& config, long n_max);

// Element n (0..n_max) is M_n = E[S_n' S_n]; M_0 = 0.
std::vector<Eigen::MatrixXd> second_moment_recursion(const WalkConfig& config, long n_max);

// prod_{l=m}^{n-1} (I + B/l); maps E[S_m] to E[S_n] (identity when m == n).
Eigen::MatrixXd mean_propagator(const Eigen::MatrixXd& B, long m, long n);

// E[S_m' S_n] = M_m * mean_propagator(B, m, n) for 1 <= m <= n.
Eigen::MatrixXd cross_moment(const WalkConfig& config, long m, long n);

// Closed-form means of the strongly-coupled two-elephant pair: with
// lam1 = 2p - 1 and lam2 = 1 - 2p,
//   E[s_n^1 + s_n^2] = 4 p (q1 + q2 - 1) Gamma(lam1+n) / (Gamma(lam1+2) Gamma(n))
//   E[s_n^1 - s_n^2] = 4 (1-p) (q1 - q2) Gamma(lam2+n) / (Gamma(lam2+2) Gamma(n))
// valid for n >= 1 (n = 1 returns E[S_1] directly, which sidesteps the
// gamma-ratio pole; for n >= 2 a zero coefficient short-circuits the poles).
struct TwoElephantMeans {
    double sum;
    double diff;
};
TwoElephantMeans two_elephant_mean_closed_form(double p, double q1, double q2, long n);

struct BruteForceDistribution {
    std::vector<std::vector<std::int64_t>> support; // distinct S_n values, lexicographic
    std::vector<double> probability;
    Eigen::RowVectorXd mean;
    Eigen::MatrixXd second_moment;
    double total; // mass check, 1 up to rounding
};

// Exact distribution of S_n by path-count enumeration. Throws TooLarge when
// n > 8 or k > 3.
BruteForceDistribution brute_force_distribution(const WalkConfig& config, long n,
                                                Mechanism mechanism);

struct RationalCheck {
    double max_mean_error;
    double max_second_error;
};

// Exact-rational evaluation of both recursions up to n_max (<= 1000), returning
// the largest absolute deviation of the double-precision recursions.
RationalCheck rational_cross_check(const WalkConfig& config, long n_max);

// Columns: n, mean_1..mean_k, M_11, M_12, ..., M_kk (row-major).
void write_moment_csv(const std::string& path, const WalkConfig& config, long n_max);

} // namespace erwg
