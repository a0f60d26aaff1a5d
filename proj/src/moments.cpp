#include "erwg/moments.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <fstream>
#include <map>

#include "erwg/errors.hpp"
#include "erwg/loggamma.hpp"

namespace erwg {

Eigen::MatrixXd mean_recursion(const WalkConfig& config, long n_max) {
    if (n_max < 1) throw InvalidConfig("n_max must be >= 1");
    const int k = config.graph.k();
    const Eigen::MatrixXd B = memory_matrix(config);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n_max + 1, k);
    for (int j = 0; j < k; ++j) out(1, j) = 2.0 * config.q[static_cast<size_t>(j)] - 1.0;
    for (long n = 1; n < n_max; ++n)
        out.row(n + 1) = out.row(n) + (out.row(n) * B) / static_cast<double>(n);
    return out;
}

std::vector<Eigen::MatrixXd> second_moment_recursion(const WalkConfig& config, long n_max) {
    if (n_max < 1) throw InvalidConfig("n_max must be >= 1");
    const int k = config.graph.k();
    const Eigen::MatrixXd B = memory_matrix(config);
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(k, k);
    std::vector<Eigen::MatrixXd> out(static_cast<size_t>(n_max) + 1);
    out[0] = Eigen::MatrixXd::Zero(k, k);
    Eigen::MatrixXd M(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
            M(i, j) = (i == j) ? 1.0
                               : (2.0 * config.q[static_cast<size_t>(i)] - 1.0) *
                                     (2.0 * config.q[static_cast<size_t>(j)] - 1.0);
    out[1] = M;
    for (long n = 1; n < n_max; ++n) {
        const Eigen::MatrixXd A = I + B / static_cast<double>(n);
        const Eigen::MatrixXd P = B.transpose() * M * B;
        M = A.transpose() * M * A + I;
        M.diagonal() -= P.diagonal() / (static_cast<double>(n) * static_cast<double>(n));
        out[static_cast<size_t>(n) + 1] = M;
    }
    return out;
}

Eigen::MatrixXd mean_propagator(const Eigen::MatrixXd& B, long m, long n) {
    if (m < 1 || n < m) throw InvalidConfig("need 1 <= m <= n");
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(B.rows(), B.cols());
    for (long l = m; l < n; ++l) P = P * (Eigen::MatrixXd::Identity(B.rows(), B.cols()) + B / static_cast<double>(l));
    return P;
}

Eigen::MatrixXd cross_moment(const WalkConfig& config, long m, long n) {
    if (m < 1 || n < m) throw InvalidConfig("need 1 <= m <= n");
    const Eigen::MatrixXd B = memory_matrix(config);
    const auto M = second_moment_recursion(config, m);
    return M[static_cast<size_t>(m)] * mean_propagator(B, m, n);
}

namespace {

// Gamma(lam+n) / (Gamma(lam+2) Gamma(n)) for real lam in [-1, 1], n >= 1.
double gamma_ratio(double lam, long n) {
    if (n == 1) return 1.0 / (lam + 1.0); // pole at lam = -1 must be short-circuited by caller
    if (lam == -1.0) return 1.0 / static_cast<double>(n - 1);
    return std::exp(std::lgamma(lam + static_cast<double>(n)) - std::lgamma(lam + 2.0) -
                    std::lgamma(static_cast<double>(n)));
}

} // namespace

TwoElephantMeans two_elephant_mean_closed_form(double p, double q1, double q2, long n) {
    if (n < 1) throw InvalidConfig("n must be >= 1");
    TwoElephantMeans out{0.0, 0.0};
    if (n == 1) {
        // E[S_1] depends only on q; avoids the 0*inf corner where a vanishing
        // coefficient meets the n=1 pole of the gamma ratio (p = 0 or 1).
        out.sum = 2.0 * (q1 + q2 - 1.0);
        out.diff = 2.0 * (q1 - q2);
        return out;
    }
    const double cs = 4.0 * p * (q1 + q2 - 1.0);
    const double cd = 4.0 * (1.0 - p) * (q1 - q2);
    if (cs != 0.0) out.sum = cs * gamma_ratio(2.0 * p - 1.0, n);
    if (cd != 0.0) out.diff = cd * gamma_ratio(1.0 - 2.0 * p, n);
    return out;
}

BruteForceDistribution brute_force_distribution(const WalkConfig& config, long n,
                                                Mechanism mechanism) {
    const int k = config.graph.k();
    if (n > 8 || k > 3) throw TooLarge();
    if (n < 1) throw InvalidConfig("n must be >= 1");

    // The vector of +1 counts N = (N_1..N_k) after m steps is Markov under
    // both mechanisms; elephants step conditionally independently.
    const Eigen::MatrixXd B = memory_matrix(config);
    std::map<std::vector<int>, double> states;
    states[std::vector<int>(static_cast<size_t>(k), 0)] = 1.0;
    std::vector<double> theta(static_cast<size_t>(k));
    for (long m = 0; m < n; ++m) {
        std::map<std::vector<int>, double> next;
        for (const auto& [counts, prob] : states) {
            for (int v = 0; v < k; ++v) {
                if (m == 0) {
                    theta[static_cast<size_t>(v)] = config.q[static_cast<size_t>(v)];
                } else if (mechanism == Mechanism::Literal) {
                    const auto& nbrs = config.graph.in_neighbours(v);
                    const double pv = config.p[static_cast<size_t>(v)];
                    double t = 0.0;
                    for (int u : nbrs)
                        t += (1.0 - pv) + (2.0 * pv - 1.0) * static_cast<double>(counts[static_cast<size_t>(u)]) /
                                              static_cast<double>(m);
                    theta[static_cast<size_t>(v)] = t / static_cast<double>(nbrs.size());
                } else {
                    // theta_v = 1/2 + (S_m B)_v / (2m) with S_u = 2 N_u - m
                    double dot = 0.0;
                    for (int u = 0; u < k; ++u)
                        dot += (2.0 * static_cast<double>(counts[static_cast<size_t>(u)]) - static_cast<double>(m)) * B(u, v);
                    theta[static_cast<size_t>(v)] = 0.5 + dot / (2.0 * static_cast<double>(m));
                }
            }
            for (int mask = 0; mask < (1 << k); ++mask) {
                double pr = prob;
                std::vector<int> nc = counts;
                for (int v = 0; v < k; ++v) {
                    if (mask & (1 << v)) {
                        pr *= theta[static_cast<size_t>(v)];
                        ++nc[static_cast<size_t>(v)];
                    } else {
                        pr *= 1.0 - theta[static_cast<size_t>(v)];
                    }
                }
                if (pr != 0.0) next[nc] += pr;
            }
        }
        states = std::move(next);
    }

    BruteForceDistribution out;
    out.mean = Eigen::RowVectorXd::Zero(k);
    out.second_moment = Eigen::MatrixXd::Zero(k, k);
    out.total = 0.0;
    for (const auto& [counts, prob] : states) {
        std::vector<std::int64_t> S(static_cast<size_t>(k));
        Eigen::RowVectorXd Sd(k);
        for (int v = 0; v < k; ++v) {
            S[static_cast<size_t>(v)] = 2L * counts[static_cast<size_t>(v)] - n;
            Sd(v) = static_cast<double>(S[static_cast<size_t>(v)]);
        }
        out.support.push_back(std::move(S));
        out.probability.push_back(prob);
        out.total += prob;
        out.mean += prob * Sd;
        out.second_moment += prob * (Sd.transpose() * Sd);
    }
    return out;
}

namespace {

using Rat = boost::multiprecision::cpp_rational;

struct RatMat {
    int k;
    std::vector<Rat> a; // row-major
    Rat& operator()(int i, int j) { return a[static_cast<size_t>(i) * k + j]; }
    const Rat& operator()(int i, int j) const { return a[static_cast<size_t>(i) * k + j]; }
    static RatMat zero(int k) { return RatMat{k, std::vector<Rat>(static_cast<size_t>(k) * k, Rat(0))}; }
    static RatMat identity(int k) {
        RatMat m = zero(k);
        for (int i = 0; i < k; ++i) m(i, i) = 1;
        return m;
    }
};

RatMat mul(const RatMat& x, const RatMat& y) {
    RatMat out = RatMat::zero(x.k);
    for (int i = 0; i < x.k; ++i)
        for (int l = 0; l < x.k; ++l) {
            if (x(i, l) == 0) continue;
            for (int j = 0; j < x.k; ++j) out(i, j) += x(i, l) * y(l, j);
        }
    return out;
}

RatMat transpose(const RatMat& x) {
    RatMat out = RatMat::zero(x.k);
    for (int i = 0; i < x.k; ++i)
        for (int j = 0; j < x.k; ++j) out(j, i) = x(i, j);
    return out;
}

} // namespace

RationalCheck rational_cross_check(const WalkConfig& config, long n_max) {
    if (n_max > 1000) throw TooLarge();
    if (n_max < 1) throw InvalidConfig("n_max must be >= 1");
    const int k = config.graph.k();

    RatMat B = RatMat::zero(k);
    for (int j = 0; j < k; ++j) {
        const Rat w = (Rat(2) * Rat(config.p[static_cast<size_t>(j)]) - 1) / config.graph.in_degree(j);
        for (int i : config.graph.in_neighbours(j)) B(i, j) = w;
    }
    std::vector<Rat> mean(static_cast<size_t>(k));
    RatMat M = RatMat::zero(k);
    for (int i = 0; i < k; ++i) {
        mean[static_cast<size_t>(i)] = Rat(2) * Rat(config.q[static_cast<size_t>(i)]) - 1;
        for (int j = 0; j < k; ++j)
            M(i, j) = (i == j) ? Rat(1)
                               : (Rat(2) * Rat(config.q[static_cast<size_t>(i)]) - 1) *
                                     (Rat(2) * Rat(config.q[static_cast<size_t>(j)]) - 1);
    }

    const Eigen::MatrixXd mean_d = mean_recursion(config, n_max);
    const auto M_d = second_moment_recursion(config, n_max);

    RationalCheck check{0.0, 0.0};
    auto record = [&](long n) {
        for (int j = 0; j < k; ++j) {
            const double err = std::abs(mean_d(n, j) - mean[static_cast<size_t>(j)].convert_to<double>());
            check.max_mean_error = std::max(check.max_mean_error, err);
        }
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) {
                const double err = std::abs(M_d[static_cast<size_t>(n)](i, j) - M(i, j).convert_to<double>());
                check.max_second_error = std::max(check.max_second_error, err);
            }
    };
    record(1);
    for (long n = 1; n < n_max; ++n) {
        RatMat A = RatMat::identity(k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) A(i, j) += B(i, j) / n;
        std::vector<Rat> nm(static_cast<size_t>(k));
        for (int j = 0; j < k; ++j) {
            Rat acc(0);
            for (int i = 0; i < k; ++i) acc += mean[static_cast<size_t>(i)] * A(i, j);
            nm[static_cast<size_t>(j)] = acc;
        }
        mean = std::move(nm);
        const RatMat P = mul(mul(transpose(B), M), B);
        RatMat next = mul(mul(transpose(A), M), A);
        const Rat n2 = Rat(n) * Rat(n);
        for (int i = 0; i < k; ++i) {
            next(i, i) += 1;
            next(i, i) -= P(i, i) / n2;
        }
        M = std::move(next);
        record(n + 1);
    }
    return check;
}

void write_moment_csv(const std::string& path, const WalkConfig& config, long n_max) {
    const int k = config.graph.k();
    const Eigen::MatrixXd mean = mean_recursion(config, n_max);
    const auto M = second_moment_recursion(config, n_max);
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "n";
    for (int j = 1; j <= k; ++j) out << ",mean_" << j;
    for (int i = 1; i <= k; ++i)
        for (int j = 1; j <= k; ++j) out << ",M_" << i << j;
    out << "\n";
    out.precision(17);
    for (long n = 1; n <= n_max; ++n) {
        out << n;
        for (int j = 0; j < k; ++j) out << ',' << mean(n, j);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) out << ',' << M[static_cast<size_t>(n)](i, j);
        out << "\n";
    }
}

} // namespace erwg
