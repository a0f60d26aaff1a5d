#pragma once

// ERWG trajectory generation.
//
// Two samplers with identical step law:
//  - literal: each elephant picks a uniform in-neighbour, a uniform past time
//    in {1..n}, and repeats that step with probability p_v else flips.
//    Keeps the full step history (O(nk) memory) as the definition requires.
//  - conditional: given F_n the next steps are independent with
//    X_{n+1}^{(j)} ~ Rad(1/2 + S_n B e_j' / (2n)); O(k) memory.
// Their equivalence in law is a theorem verified statistically, never assumed.
//
// Reproducibility contract: replica r of a run keyed by master_seed uses
// Rng::for_replica(master, r). Per step the draw order is elephant
// 0,1,...,k-1; the literal sampler draws (in-neighbour, past time, repeat
// coin) per elephant, the conditional sampler one uniform per elephant.
// Identical (config, seed, mechanism) reproduce trajectories byte-for-byte.

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "erwg/graph.hpp"
#include "erwg/rng.hpp"
#include "erwg/spectral.hpp"

namespace erwg {

enum class Mechanism { Literal, Conditional };

std::string mechanism_name(Mechanism m);

// Streaming sampler, O(k) state. Positions are exact 64-bit integers.
class ConditionalWalker {
  public:
    ConditionalWalker(const WalkConfig& config, Rng rng);
    ConditionalWalker(const WalkConfig& config, std::uint64_t seed)
        : ConditionalWalker(config, Rng(seed)) {}
    void step();
    long n() const { return n_; }
    const std::vector<std::int64_t>& S() const { return S_; }
    const std::vector<int>& last_step() const { return X_; }

  private:
    const WalkConfig* config_;
    Eigen::MatrixXd B_;
    Rng rng_;
    long n_ = 0;
    std::vector<std::int64_t> S_;
    std::vector<int> X_;
    std::vector<double> dot_; // scratch: (S_n B)_j
};

// Streaming sampler with retained step history.
class LiteralWalker {
  public:
    LiteralWalker(const WalkConfig& config, Rng rng, long horizon_hint = 0);
    LiteralWalker(const WalkConfig& config, std::uint64_t seed, long horizon_hint = 0)
        : LiteralWalker(config, Rng(seed), horizon_hint) {}
    void step();
    long n() const { return n_; }
    const std::vector<std::int64_t>& S() const { return S_; }
    const std::vector<int>& last_step() const { return X_; }
    // step t of elephant v, 1 <= t <= n
    int history(int v, long t) const { return hist_[static_cast<size_t>(v)][static_cast<size_t>(t - 1)]; }

  private:
    const WalkConfig* config_;
    Rng rng_;
    long n_ = 0;
    std::vector<std::int64_t> S_;
    std::vector<int> X_;
    std::vector<std::vector<std::int8_t>> hist_;
};

struct Trajectory {
    int k = 0;
    long horizon = 0;
    std::uint64_t seed = 0;
    Mechanism mechanism = Mechanism::Conditional;
    std::vector<std::int64_t> S; // (horizon+1) x k row-major, S_0 = 0
    std::vector<std::int8_t> X;  // horizon x k row-major, rows X_1..X_horizon

    std::int64_t s(long n, int j) const { return S[static_cast<size_t>(n) * k + j]; }
    Eigen::RowVectorXd position(long n) const;
    Eigen::RowVectorXd step_row(long n) const; // X_n, 1 <= n <= horizon
};

Trajectory simulate_literal(const WalkConfig& config, std::uint64_t seed, long horizon);
Trajectory simulate_conditional(const WalkConfig& config, std::uint64_t seed, long horizon);

// Geometric grid {floor(c * ratio^m)} intersected with [1, horizon], plus the
// horizon itself; sorted, deduplicated.
std::vector<long> checkpoint_times(long horizon, long c = 10, double ratio = 1.25);

struct ProjectedTrajectory {
    std::vector<long> times;
    Eigen::MatrixXcd S_hat; // rows: times, cols: projections; Shat_n = S_n T
    Eigen::MatrixXcd L;     // martingale values (d_n)^{-1} Shat_n - Shat_2, rows n = 2..horizon
};

ProjectedTrajectory project(const Trajectory& traj, const Spectrum& spectrum);

struct SaReport {
    double max_residual = 0.0;    // SA identity defect, should be ~ machine eps
    double max_step_norm = 0.0;   // max_n ||dM_{n+1}||_inf, always <= 2
    Eigen::MatrixXd delta_m;      // rows: dM_2..dM_{horizon}
};

// Checks Z_{n+1} = Z_n - h(Z_n)/(n+1) + dM_{n+1}/(n+1), h(x) = x(I - B).
SaReport sa_view(const Trajectory& traj, const Eigen::MatrixXd& B);

// Drives `fn(replica, checkpoint_index, n, S_pointer)` for every replica at
// every checkpoint. Replicas are split into contiguous blocks across workers;
// fn must only write to replica-indexed slots so results are independent of
// the worker count.
template <class Fn>
void for_each_replica(const WalkConfig& config, Mechanism mechanism, std::uint64_t master_seed,
                      std::uint64_t replicas, const std::vector<long>& checkpoints, Fn&& fn,
                      int workers = 1) {
    if (checkpoints.empty()) throw InvalidConfig("need at least one checkpoint");
    for (size_t i = 1; i < checkpoints.size(); ++i)
        if (checkpoints[i] <= checkpoints[i - 1])
            throw InvalidConfig("checkpoints must be strictly increasing");
    if (checkpoints.front() < 1) throw InvalidConfig("checkpoints start at n >= 1");
    if (workers < 1) workers = 1;

    auto run_block = [&](std::uint64_t lo, std::uint64_t hi) {
        const long horizon = checkpoints.back();
        for (std::uint64_t r = lo; r < hi; ++r) {
            Rng rng = Rng::for_replica(master_seed, r);
            if (mechanism == Mechanism::Conditional) {
                ConditionalWalker w(config, rng);
                size_t ci = 0;
                while (w.n() < horizon) {
                    w.step();
                    if (w.n() == checkpoints[ci]) {
                        fn(r, static_cast<int>(ci), w.n(), w.S().data());
                        ++ci;
                    }
                }
            } else {
                LiteralWalker w(config, rng, horizon);
                size_t ci = 0;
                while (w.n() < horizon) {
                    w.step();
                    if (w.n() == checkpoints[ci]) {
                        fn(r, static_cast<int>(ci), w.n(), w.S().data());
                        ++ci;
                    }
                }
            }
        }
    };

    if (workers == 1 || replicas < 2) {
        run_block(0, replicas);
        return;
    }
    std::vector<std::thread> pool;
    const std::uint64_t per = (replicas + static_cast<std::uint64_t>(workers) - 1) /
                              static_cast<std::uint64_t>(workers);
    for (int w = 0; w < workers; ++w) {
        const std::uint64_t lo = per * static_cast<std::uint64_t>(w);
        const std::uint64_t hi = std::min(replicas, lo + per);
        if (lo >= hi) break;
        pool.emplace_back(run_block, lo, hi);
    }
    for (auto& t : pool) t.join();
}

// Runs an ensemble and writes checkpoint rows `replica,n,S_1..S_k` plus a
// metadata JSON (config hash, master seed, replica count, horizon, version).
void write_ensemble_csv(const std::string& csv_path, const WalkConfig& config,
                        Mechanism mechanism, std::uint64_t master_seed, std::uint64_t replicas,
                        const std::vector<long>& checkpoints, int workers);

} // namespace erwg
