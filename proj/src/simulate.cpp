#include "erwg/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "erwg/errors.hpp"
#include "erwg/version.hpp"
#include "json.hpp"

namespace erwg {

std::string mechanism_name(Mechanism m) {
    return m == Mechanism::Literal ? "literal" : "conditional";
}

ConditionalWalker::ConditionalWalker(const WalkConfig& config, Rng rng)
    : config_(&config), B_(memory_matrix(config)), rng_(rng) {
    const int k = config.graph.k();
    S_.assign(static_cast<size_t>(k), 0);
    X_.assign(static_cast<size_t>(k), 0);
    dot_.assign(static_cast<size_t>(k), 0.0);
}

void ConditionalWalker::step() {
    const int k = config_->graph.k();
    if (n_ == 0) {
        for (int j = 0; j < k; ++j) X_[static_cast<size_t>(j)] = rng_.next_rademacher(config_->q[static_cast<size_t>(j)]);
    } else {
        // All probabilities are computed from the frozen S_n before any update.
        for (int j = 0; j < k; ++j) {
            double dot = 0.0;
            for (int i = 0; i < k; ++i) dot += static_cast<double>(S_[static_cast<size_t>(i)]) * B_(i, j);
            dot_[static_cast<size_t>(j)] = dot;
        }
        const double inv2n = 0.5 / static_cast<double>(n_);
        for (int j = 0; j < k; ++j) {
            double prob = 0.5 + dot_[static_cast<size_t>(j)] * inv2n;
            if (prob < -1e-12 || prob > 1.0 + 1e-12) throw ProbabilityOutOfRange(prob);
            if (prob < 0.0) prob = 0.0;
            if (prob > 1.0) prob = 1.0;
            X_[static_cast<size_t>(j)] = rng_.next_rademacher(prob);
        }
    }
    for (int j = 0; j < k; ++j) S_[static_cast<size_t>(j)] += X_[static_cast<size_t>(j)];
    ++n_;
}

LiteralWalker::LiteralWalker(const WalkConfig& config, Rng rng, long horizon_hint)
    : config_(&config), rng_(rng) {
    const int k = config.graph.k();
    S_.assign(static_cast<size_t>(k), 0);
    X_.assign(static_cast<size_t>(k), 0);
    hist_.resize(static_cast<size_t>(k));
    if (horizon_hint > 0)
        for (auto& h : hist_) h.reserve(static_cast<size_t>(horizon_hint));
}

void LiteralWalker::step() {
    const int k = config_->graph.k();
    if (n_ == 0) {
        for (int v = 0; v < k; ++v) X_[static_cast<size_t>(v)] = rng_.next_rademacher(config_->q[static_cast<size_t>(v)]);
    } else {
        for (int v = 0; v < k; ++v) {
            const auto& nbrs = config_->graph.in_neighbours(v);
            const int u = nbrs[rng_.next_below(nbrs.size())];
            const long t = 1 + static_cast<long>(rng_.next_below(static_cast<std::uint64_t>(n_)));
            const int base = hist_[static_cast<size_t>(u)][static_cast<size_t>(t - 1)];
            const bool repeat = rng_.next_u01() < config_->p[static_cast<size_t>(v)];
            X_[static_cast<size_t>(v)] = repeat ? base : -base;
        }
    }
    for (int v = 0; v < k; ++v) {
        hist_[static_cast<size_t>(v)].push_back(static_cast<std::int8_t>(X_[static_cast<size_t>(v)]));
        S_[static_cast<size_t>(v)] += X_[static_cast<size_t>(v)];
    }
    ++n_;
}

Eigen::RowVectorXd Trajectory::position(long n) const {
    Eigen::RowVectorXd row(k);
    for (int j = 0; j < k; ++j) row(j) = static_cast<double>(s(n, j));
    return row;
}

Eigen::RowVectorXd Trajectory::step_row(long n) const {
    Eigen::RowVectorXd row(k);
    for (int j = 0; j < k; ++j) row(j) = static_cast<double>(X[static_cast<size_t>(n - 1) * k + j]);
    return row;
}

namespace {

template <class Walker>
Trajectory run_dense(const WalkConfig& config, std::uint64_t seed, long horizon, Mechanism mech) {
    if (horizon < 1) throw InvalidConfig("horizon must be >= 1");
    const int k = config.graph.k();
    Trajectory traj;
    traj.k = k;
    traj.horizon = horizon;
    traj.seed = seed;
    traj.mechanism = mech;
    traj.S.assign(static_cast<size_t>(horizon + 1) * k, 0);
    traj.X.assign(static_cast<size_t>(horizon) * k, 0);
    Walker w(config, seed);
    for (long n = 1; n <= horizon; ++n) {
        w.step();
        for (int j = 0; j < k; ++j) {
            traj.S[static_cast<size_t>(n) * k + j] = w.S()[static_cast<size_t>(j)];
            traj.X[static_cast<size_t>(n - 1) * k + j] = static_cast<std::int8_t>(w.last_step()[static_cast<size_t>(j)]);
        }
    }
    return traj;
}

} // namespace

Trajectory simulate_literal(const WalkConfig& config, std::uint64_t seed, long horizon) {
    return run_dense<LiteralWalker>(config, seed, horizon, Mechanism::Literal);
}

Trajectory simulate_conditional(const WalkConfig& config, std::uint64_t seed, long horizon) {
    return run_dense<ConditionalWalker>(config, seed, horizon, Mechanism::Conditional);
}

std::vector<long> checkpoint_times(long horizon, long c, double ratio) {
    if (horizon < 1) throw InvalidConfig("horizon must be >= 1");
    if (c < 1 || ratio <= 1.0) throw InvalidConfig("checkpoint grid needs c >= 1, ratio > 1");
    std::vector<long> out;
    for (int m = 0;; ++m) {
        const double x = static_cast<double>(c) * std::pow(ratio, m);
        if (x > static_cast<double>(horizon)) break;
        const long t = static_cast<long>(std::floor(x));
        if (out.empty() || t != out.back()) out.push_back(t);
    }
    if (out.empty() || out.back() != horizon) out.push_back(horizon);
    return out;
}

ProjectedTrajectory project(const Trajectory& traj, const Spectrum& spectrum) {
    if (!spectrum.diagonalizable) throw NotDiagonalizable();
    const int k = traj.k;
    if (spectrum.k() != k) throw InvalidConfig("spectrum dimension does not match trajectory");
    ProjectedTrajectory out;
    out.times.resize(static_cast<size_t>(traj.horizon) + 1);
    for (long n = 0; n <= traj.horizon; ++n) out.times[static_cast<size_t>(n)] = n;
    out.S_hat.resize(traj.horizon + 1, k);
    for (long n = 0; n <= traj.horizon; ++n)
        out.S_hat.row(n) = traj.position(n).cast<std::complex<double>>() * spectrum.T;
    if (traj.horizon >= 2) {
        out.L.resize(traj.horizon - 1, k); // rows for n = 2..horizon
        for (long n = 2; n <= traj.horizon; ++n)
            for (int j = 0; j < k; ++j)
                out.L(n - 2, j) = out.S_hat(n, j) / d_scale(spectrum.eigenvalues(j), n) - out.S_hat(2, j);
    } else {
        out.L.resize(0, k);
    }
    return out;
}

SaReport sa_view(const Trajectory& traj, const Eigen::MatrixXd& B) {
    if (traj.horizon < 2) throw InvalidConfig("need horizon >= 2 for the SA view");
    const int k = traj.k;
    SaReport rep;
    rep.delta_m.resize(traj.horizon - 1, k);
    const Eigen::MatrixXd I_minus_B = Eigen::MatrixXd::Identity(k, k) - B;
    for (long n = 1; n < traj.horizon; ++n) {
        const Eigen::RowVectorXd Sn = traj.position(n);
        const Eigen::RowVectorXd Zn = Sn / static_cast<double>(n);
        const Eigen::RowVectorXd Znext = traj.position(n + 1) / static_cast<double>(n + 1);
        const Eigen::RowVectorXd dM = traj.step_row(n + 1) - (Sn * B) / static_cast<double>(n);
        rep.delta_m.row(n - 1) = dM;
        const Eigen::RowVectorXd rhs =
            Zn - (Zn * I_minus_B) / static_cast<double>(n + 1) + dM / static_cast<double>(n + 1);
        rep.max_residual = std::max(rep.max_residual, (Znext - rhs).cwiseAbs().maxCoeff());
        rep.max_step_norm = std::max(rep.max_step_norm, dM.cwiseAbs().maxCoeff());
    }
    if (rep.max_step_norm > 2.0 + 1e-12)
        throw Error("martingale increment exceeded the uniform bound 2");
    return rep;
}

void write_ensemble_csv(const std::string& csv_path, const WalkConfig& config,
                        Mechanism mechanism, std::uint64_t master_seed, std::uint64_t replicas,
                        const std::vector<long>& checkpoints, int workers) {
    const int k = config.graph.k();
    const size_t C = checkpoints.size();
    std::vector<std::int64_t> table(static_cast<size_t>(replicas) * C * static_cast<size_t>(k));
    for_each_replica(
        config, mechanism, master_seed, replicas, checkpoints,
        [&](std::uint64_t r, int ci, long, const std::int64_t* S) {
            std::int64_t* slot = table.data() + (static_cast<size_t>(r) * C + static_cast<size_t>(ci)) * static_cast<size_t>(k);
            for (int j = 0; j < k; ++j) slot[j] = S[j];
        },
        workers);

    std::ofstream out(csv_path);
    if (!out) throw Error("cannot open " + csv_path + " for writing");
    out << "replica,n";
    for (int j = 1; j <= k; ++j) out << ",S_" << j;
    out << "\n";
    for (std::uint64_t r = 0; r < replicas; ++r)
        for (size_t ci = 0; ci < C; ++ci) {
            out << r << ',' << checkpoints[ci];
            const std::int64_t* slot = table.data() + (static_cast<size_t>(r) * C + ci) * static_cast<size_t>(k);
            for (int j = 0; j < k; ++j) out << ',' << slot[j];
            out << "\n";
        }
    out.close();

    nlohmann::json meta;
    meta["config"] = config_to_json(config);
    meta["config_hash"] = config_hash(config);
    meta["mechanism"] = mechanism_name(mechanism);
    meta["master_seed"] = master_seed;
    meta["replicas"] = replicas;
    meta["horizon"] = checkpoints.back();
    meta["checkpoints"] = checkpoints;
    meta["version"] = kVersion;
    std::ofstream mout(csv_path + ".meta.json");
    if (!mout) throw Error("cannot open " + csv_path + ".meta.json for writing");
    mout << meta.dump(2) << "\n";
}

} // namespace erwg
