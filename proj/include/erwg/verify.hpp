#pragma once

// Monte Carlo verification suites. Every check maps a limit statement about
// the walk to a falsifiable finite-scale assertion: thresholds sit at >= 4
// standard errors or at significance 0.01 with multiplicity correction, and
// wherever an exact finite-n oracle exists (moment recursions) the Monte
// Carlo estimate is tested against the oracle and the oracle against the
// asymptotic value, never Monte Carlo directly against an asymptote with a
// looser tolerance than both gaps combined.
//
// Determinism: given (config, master seed) every suite produces bit-identical
// reports regardless of worker count — replicas use the splittable per-replica
// streams and reductions run in a fixed order.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "erwg/gaussian.hpp"
#include "erwg/graph.hpp"
#include "erwg/spectral.hpp"

#include "json.hpp"

namespace erwg {

// Normalization applied to S_n before comparing against a limit covariance.
enum class CltScaling { SqrtN, SqrtNLogN };

struct CheckRecord {
    std::string name;
    std::string claim;   // plain-language statement of what is being tested
    std::string scaling; // exact normalization used
    double statistic = 0.0;
    double threshold = 0.0;
    bool pass = false;
    double standard_error = 0.0; // 0 when not applicable
    std::map<std::string, double> details;
};

struct VerificationReport {
    std::string suite;
    std::uint64_t config_hash = 0;
    std::uint64_t master_seed = 0;
    std::vector<CheckRecord> records;
    BoundReport bound_fits; // per-lambda fitted constants when the bounds suite ran
    double runtime_seconds = 0.0;

    bool all_passed() const;
    nlohmann::json to_json() const;
    std::string table() const; // human-readable fixed-width rendering
};

// Empirical covariance of scaled S_n against Sigma_theory (relative Frobenius
// error vs tol) plus KS normality of each standardized eigen-projection at
// significance 0.01 with Bonferroni correction over k projections;
// projections are standardized by the exact finite-n moment oracle.
CheckRecord clt_covariance_check(const WalkConfig& config, CltScaling scaling,
                                 const Eigen::MatrixXd& sigma_theory, long n, long replicas,
                                 double tol, std::uint64_t seed, int workers = 1);

// eta <= 1/2: max over replicas of ||S_n/n|| must sit below the envelope
// n^{-0.3} at n >= 10^4 (with the frozen 99th-percentile threshold 0.07 for
// the canonical diffusive two-elephant case); eta > 1/2: ||S_n/n|| must match
// the d_n/n scale instead (bracketed ratios).
CheckRecord slln_check(const WalkConfig& config, long n, long replicas, std::uint64_t seed,
                       int workers = 1);

// (d_n)^{-1}-scaled positions along superdiffusive projections: Cauchy decay
// of mean-square increments, limit-proxy mean within 4 SE of its exact value,
// positive limit variance (or exactly zero variance when the oracle says the
// limit is deterministic), and for two-elephant configs with 1/2 < 2p-1 < 1
// the fluctuation-field covariance against its stated rank-one target
// (relative Frobenius error vs fluct_tol, measured at the checkpoint where
// the exact finite-n covariance is closest to the target).
CheckRecord superdiffusive_limit_check(const WalkConfig& config,
                                       const std::vector<long>& checkpoints, long replicas,
                                       std::uint64_t seed, int workers = 1,
                                       double fluct_tol = 0.20);

// Full-memory (p=1) two-elephant walk started from opposite first steps:
// the average-position limit has zero mean (within 4 SE), support strictly
// inside (-1,1), variance > 0.01, and negating the start negates the law
// (two-sample KS p > 0.001).
CheckRecord full_memory_limit_check(long replicas, long horizon, std::uint64_t seed,
                                    int workers = 1);

// Strongly connected graph with every p_j = 1: positions synchronize. For k=2
// the start is conditioned on disagreeing first steps (rejection); for k > 2
// the walk runs unconditioned. Asserts the 99th percentile of the spread
// max_j |S^j/n - mean| below a frozen envelope and the common limit proxy
// strictly inside (-1,1).
CheckRecord synchronization_check(const WalkConfig& config, long n, long replicas,
                                  std::uint64_t seed);

// Single long trajectory, geometric checkpoints: r_n = x_n Sigma^{-1} x_n' for
// the law-of-the-iterated-logarithm scaled vector. HARD: max r_n <= 1.5 over
// checkpoints past 10^5 (or the final decade when the horizon is shorter).
// SOFT (reported, not asserted): max r_n >= 0.5 — the envelope is not
// saturated at reachable horizons. Diffusive configs scale the full vector by
// sqrt(2 n log log n); critical configs scale the critical projections by
// sqrt(2 n log n logloglog n).
CheckRecord lil_envelope_diagnostic(const WalkConfig& config, const Eigen::MatrixXd& sigma,
                                    long long_horizon, std::uint64_t seed);

// Regresses the log empirical m-th absolute moment of projection j on log n;
// slope must lie within m/2 +- 0.1 (diffusive projection) or within
// m/2 +- 0.15 after dividing by (log n)^{m/2} (critical projection). For m=2
// the Monte Carlo curve is also checked against the exact moment recursion.
CheckRecord moment_slope_check(const WalkConfig& config, int m, int projection, long n_max,
                               long replicas, std::uint64_t seed, int workers = 1);

// Literal vs conditional stepping must produce the same joint law: two-sample
// chi-square over the joint position lattice at time n.
CheckRecord mechanism_equivalence_check(const WalkConfig& config, long n, long replicas,
                                        std::uint64_t seed, int workers = 1);

const std::vector<std::string>& suite_names(); // oracle, diffusive-clt, ..., all

// Headline suite tolerances; the defaults are the frozen acceptance values.
// Overridable by key: clt-frobenius, critical-oracle, critical-limit,
// fluctuation, bounds-stability, regime. Unknown keys throw InvalidConfig.
struct SuiteTolerances {
    double clt_frobenius = 0.10;   // diffusive covariance, relative Frobenius
    double critical_oracle = 0.05; // critical covariance vs exact finite-n oracle
    double critical_limit = 0.25;  // exact oracle vs limit covariance
    double fluctuation = 0.20;     // superdiffusive fluctuation covariance
    double bounds_stability = 1.05; // fitted-constant ratio between grids
    double regime = 1e-9;          // eigenvalue regime classification
};
SuiteTolerances suite_tolerances(const std::map<std::string, double>& overrides);

// Runs the named suite on the given configuration with the frozen canonical
// replica counts and horizons. Suites whose regime does not match the
// configuration throw RegimeMismatch (the "all" suite runs every suite that
// applies).
VerificationReport run_suite(const WalkConfig& config, const std::string& suite,
                             std::uint64_t master_seed, int workers = 1,
                             const std::map<std::string, double>& tolerance_overrides = {});

} // namespace erwg
