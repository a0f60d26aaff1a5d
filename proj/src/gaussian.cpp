#include "erwg/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "erwg/errors.hpp"
#include "erwg/loggamma.hpp"

namespace erwg {

Eigen::MatrixXd c_product(long j, long n, const Eigen::MatrixXd& B) {
    if (j < 1 || j > n) throw InvalidConfig("need 1 <= j <= n");
    const int k = static_cast<int>(B.rows());
    Eigen::MatrixXd C = Eigen::MatrixXd::Identity(k, k);
    for (long l = j + 1; l <= n; ++l) {
        const double w = static_cast<double>(l - 1) / static_cast<double>(l);
        C = C * (w * Eigen::MatrixXd::Identity(k, k) + B / static_cast<double>(l));
    }
    return C;
}

Eigen::MatrixXd c_product_compensated(long j, long n, const Eigen::MatrixXd& B) {
    if (j < 1 || j > n) throw InvalidConfig("need 1 <= j <= n");
    const int k = static_cast<int>(B.rows());
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(k, k);
    for (long m = j; m < n; ++m)
        P = P * (Eigen::MatrixXd::Identity(k, k) + B / static_cast<double>(m));
    return (static_cast<double>(j) / static_cast<double>(n)) * P;
}

std::complex<double> scalar_c_product(std::complex<double> lambda, long j, long n) {
    if (j < 1 || j > n) throw InvalidConfig("need 1 <= j <= n");
    if (j == n) return 1.0;
    const std::complex<double> z =
        log_gamma(lambda + static_cast<double>(n)) - log_gamma(lambda + static_cast<double>(j)) +
        log_gamma(std::complex<double>(static_cast<double>(j) + 1.0, 0.0)) -
        log_gamma(std::complex<double>(static_cast<double>(n) + 1.0, 0.0));
    if (std::isinf(z.real()) && z.real() < 0) return 0.0; // a vanishing factor in the product
    return std::exp(z);
}

Eigen::MatrixXd gaussian_exact_covariance(const Eigen::MatrixXd& B, long n) {
    const int k = static_cast<int>(B.rows());
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(k, k);
    for (long j = 1; j <= n; ++j) {
        const Eigen::MatrixXd W = matrix_power(static_cast<double>(j) / static_cast<double>(n), -B);
        acc += W.transpose() * W;
    }
    return acc;
}

GaussianEnsemble gaussian_comparison(const Eigen::MatrixXd& B, long n, long replicas,
                                     std::uint64_t seed) {
    if (n < 1 || replicas < 1) throw InvalidConfig("need n >= 1 and replicas >= 1");
    const double eta = Eigen::EigenSolver<Eigen::MatrixXd>(B, false).eigenvalues().real().maxCoeff();
    if (eta > 0.5 + 1e-9) throw RegimeMismatch();
    const int k = static_cast<int>(B.rows());

    std::vector<Eigen::MatrixXd> W(static_cast<size_t>(n));
    GaussianEnsemble out;
    out.n = n;
    out.seed = seed;
    out.exact_cov = Eigen::MatrixXd::Zero(k, k);
    for (long j = 1; j <= n; ++j) {
        W[static_cast<size_t>(j - 1)] =
            matrix_power(static_cast<double>(j) / static_cast<double>(n), -B);
        out.exact_cov += W[static_cast<size_t>(j - 1)].transpose() * W[static_cast<size_t>(j - 1)];
    }

    out.samples.resize(replicas, k);
    out.empirical_cov = Eigen::MatrixXd::Zero(k, k);
    Eigen::RowVectorXd y(k), g(k);
    for (long r = 0; r < replicas; ++r) {
        Rng rng = Rng::for_replica(seed, static_cast<std::uint64_t>(r));
        g.setZero();
        for (long j = 1; j <= n; ++j) {
            for (int i = 0; i < k; ++i) y(i) = rng.next_normal();
            g.noalias() += y * W[static_cast<size_t>(j - 1)];
        }
        out.samples.row(r) = g;
        out.empirical_cov += g.transpose() * g;
    }
    out.empirical_cov /= static_cast<double>(replicas);
    return out;
}

BrownianPath brownian_rescale(const std::vector<double>& b, std::uint64_t seed) {
    for (double v : b)
        if (!(v > 0.0)) throw InvalidConfig("weights must be positive");
    BrownianPath out;
    out.times.reserve(b.size());
    out.values.reserve(b.size());
    Rng rng(seed);
    double t = 0.0, w = 0.0;
    for (double v : b) {
        t += v * v;
        w += v * rng.next_normal();
        out.times.push_back(t);
        out.values.push_back(w);
    }
    return out;
}

namespace {

constexpr double kNegligible = 1e-6; // fits below this are rounding noise, not envelopes

struct MaxPair {
    double reference = 0.0;
    double full = 0.0;
    void add(double r, bool in_reference) {
        if (r > full) full = r;
        if (in_reference && r > reference) reference = r;
    }
    double ratio() const {
        if (full <= kNegligible) return 1.0;
        return full / std::max(reference, 1e-300);
    }
};

// |e^z - 1| computed without cancellation for small z.
double abs_expm1(double x, double y) {
    const double em = std::expm1(x);
    const double s = std::sin(0.5 * y);
    return std::sqrt(em * em + 4.0 * std::exp(x) * s * s);
}

// sup over sampled x in [j, j+1] of |1 - (x/j)^{-lambda}|.
double oscillation(std::complex<double> lambda, long j) {
    double best = 0.0;
    for (int i = 1; i <= 8; ++i) {
        const double x = static_cast<double>(j) + static_cast<double>(i) / 8.0;
        const std::complex<double> w =
            std::exp(-lambda * std::log(x / static_cast<double>(j)));
        best = std::max(best, std::abs(1.0 - w));
    }
    return best;
}

void scalar_fits(std::complex<double> lambda, long n_reference, long n_full,
                 std::vector<BoundFit>& fits) {
    std::vector<std::complex<double>> lgl(static_cast<size_t>(n_full) + 1);
    std::vector<double> lgi(static_cast<size_t>(n_full) + 2), logi(static_cast<size_t>(n_full) + 1);
    for (long i = 1; i <= n_full; ++i) {
        lgl[static_cast<size_t>(i)] = log_gamma(lambda + static_cast<double>(i));
        logi[static_cast<size_t>(i)] = std::log(static_cast<double>(i));
    }
    for (long i = 1; i <= n_full + 1; ++i) lgi[static_cast<size_t>(i)] = std::lgamma(static_cast<double>(i));

    MaxPair decay, approx, osc;
    const std::complex<double> one_minus_lambda = 1.0 - lambda;
    for (long n = 2; n <= n_full; ++n) {
        const bool in_ref = n <= n_reference;
        for (long j = 1; j < n; ++j) {
            const double L = logi[static_cast<size_t>(j)] - logi[static_cast<size_t>(n)];
            const std::complex<double> z =
                (lgl[static_cast<size_t>(n)] - lgl[static_cast<size_t>(j)]) +
                (lgi[static_cast<size_t>(j) + 1] - lgi[static_cast<size_t>(n) + 1]) -
                one_minus_lambda * L;
            decay.add(std::exp(z.real()), in_ref);
            approx.add(static_cast<double>(j) * abs_expm1(z.real(), z.imag()), in_ref);
        }
    }
    for (long j = 1; j < n_full; ++j)
        osc.add(static_cast<double>(j) * oscillation(lambda, j), j < n_reference);

    fits.push_back({"scalar_decay", lambda, decay.full, decay.reference, decay.ratio()});
    fits.push_back({"scalar_power_approx", lambda, approx.full, approx.reference, approx.ratio()});
    fits.push_back({"scalar_grid_osc", lambda, osc.full, osc.reference, osc.ratio()});
}

// Symmetric matrices: every bound quantity reduces exactly per eigenvalue
// because the matrices involved share the orthonormal eigenbasis, so the
// spectral norm is the largest eigenvalue magnitude.
void symmetric_matrix_fits(const Eigen::MatrixXd& B, long n_reference, long n_full,
                           std::vector<BoundFit>& fits) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
    const Eigen::VectorXd lam = es.eigenvalues();
    const int k = static_cast<int>(lam.size());
    const double eta = lam.maxCoeff();

    std::vector<std::vector<double>> lgl(static_cast<size_t>(k));
    for (int r = 0; r < k; ++r) {
        lgl[static_cast<size_t>(r)].resize(static_cast<size_t>(n_full) + 1);
        for (long i = 1; i <= n_full; ++i)
            lgl[static_cast<size_t>(r)][static_cast<size_t>(i)] = std::lgamma(lam(r) + static_cast<double>(i));
    }
    std::vector<double> lgi(static_cast<size_t>(n_full) + 2), logi(static_cast<size_t>(n_full) + 1);
    for (long i = 1; i <= n_full; ++i) logi[static_cast<size_t>(i)] = std::log(static_cast<double>(i));
    for (long i = 1; i <= n_full + 1; ++i) lgi[static_cast<size_t>(i)] = std::lgamma(static_cast<double>(i));
    std::vector<std::vector<double>> osc_j(static_cast<size_t>(k));
    for (int r = 0; r < k; ++r) {
        osc_j[static_cast<size_t>(r)].resize(static_cast<size_t>(n_full));
        for (long j = 1; j < n_full; ++j)
            osc_j[static_cast<size_t>(r)][static_cast<size_t>(j)] =
                oscillation(std::complex<double>(lam(r), 0.0), j);
    }

    MaxPair decay, approx, osc;
    decay.add(1.0, true); // j = n: the product is I with norm 1 and zero defect
    for (long n = 2; n <= n_full; ++n) {
        const bool in_ref = n <= n_reference;
        for (long j = 1; j < n; ++j) {
            const double L = logi[static_cast<size_t>(j)] - logi[static_cast<size_t>(n)];
            const double facn = lgi[static_cast<size_t>(j) + 1] - lgi[static_cast<size_t>(n) + 1];
            double r31 = 0.0, r32 = 0.0, r33 = 0.0;
            for (int r = 0; r < k; ++r) {
                const double x = (lgl[static_cast<size_t>(r)][static_cast<size_t>(n)] -
                                  lgl[static_cast<size_t>(r)][static_cast<size_t>(j)]) +
                                 facn - (1.0 - lam(r)) * L;
                const double shape_gap = std::exp((eta - lam(r)) * L); // (j/n)^{eta - lam_r}
                r31 = std::max(r31, std::exp(x) * shape_gap);
                r32 = std::max(r32, std::abs(std::expm1(x)) * shape_gap);
                r33 = std::max(r33, osc_j[static_cast<size_t>(r)][static_cast<size_t>(j)] * shape_gap);
            }
            decay.add(r31, in_ref);
            approx.add(static_cast<double>(j) * r32, in_ref);
            osc.add(static_cast<double>(j) * r33, in_ref);
        }
    }
    const std::complex<double> tag(eta, 0.0);
    fits.push_back({"matrix_decay", tag, decay.full, decay.reference, decay.ratio()});
    fits.push_back({"matrix_power_approx", tag, approx.full, approx.reference, approx.ratio()});
    fits.push_back({"matrix_grid_osc", tag, osc.full, osc.reference, osc.ratio()});
}

// General matrices: direct products and SVD norms over a geometric n-subgrid.
void general_matrix_fits(const Eigen::MatrixXd& B, long n_reference, long n_full,
                         std::vector<BoundFit>& fits) {
    const int k = static_cast<int>(B.rows());
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(k, k);
    const double eta = Eigen::EigenSolver<Eigen::MatrixXd>(B, false).eigenvalues().real().maxCoeff();
    std::vector<long> ns;
    for (double x = 2.0; x <= static_cast<double>(n_full); x *= 1.25) {
        const long n = static_cast<long>(std::floor(x));
        if (ns.empty() || n != ns.back()) ns.push_back(n);
    }
    if (ns.empty() || ns.back() != n_full) ns.push_back(n_full);

    auto norm2 = [](const Eigen::MatrixXd& m) {
        return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()(0);
    };

    MaxPair decay, approx, osc;
    decay.add(1.0, true);
    for (long n : ns) {
        const bool in_ref = n <= n_reference;
        // descending-j recurrence: C_{j-1,n} = ((j-1)/j I + B/j) C_{j,n}
        Eigen::MatrixXd C = I;
        for (long j = n - 1; j >= 1; --j) {
            const double l = static_cast<double>(j + 1);
            C = ((l - 1.0) / l * I + B / l) * C;
            const double shape = std::pow(static_cast<double>(j) / static_cast<double>(n), 1.0 - eta);
            const Eigen::MatrixXd P = matrix_power(static_cast<double>(j) / static_cast<double>(n), I - B);
            decay.add(norm2(C) / shape, in_ref);
            approx.add(static_cast<double>(j) * norm2(C - P) / shape, in_ref);
            double sup = 0.0;
            const Eigen::MatrixXd Pj = matrix_power(static_cast<double>(j) / static_cast<double>(n), -B);
            for (int i = 1; i <= 8; ++i) {
                const double x = static_cast<double>(j) + static_cast<double>(i) / 8.0;
                sup = std::max(sup, norm2(Pj - matrix_power(x / static_cast<double>(n), -B)));
            }
            const double shape_osc = std::pow(static_cast<double>(j) / static_cast<double>(n), -eta);
            osc.add(static_cast<double>(j) * sup / shape_osc, in_ref);
        }
    }
    const std::complex<double> tag(eta, 0.0);
    fits.push_back({"matrix_decay", tag, decay.full, decay.reference, decay.ratio()});
    fits.push_back({"matrix_power_approx", tag, approx.full, approx.reference, approx.ratio()});
    fits.push_back({"matrix_grid_osc", tag, osc.full, osc.reference, osc.ratio()});
}

} // namespace

BoundReport proposition_bounds_check(const std::vector<std::complex<double>>& lambda_grid,
                                     const std::vector<Eigen::MatrixXd>& matrices,
                                     long n_reference, long n_full) {
    if (n_reference < 2 || n_full < n_reference) throw InvalidConfig("need 2 <= n_reference <= n_full");
    BoundReport report;
    report.n_reference = n_reference;
    report.n_full = n_full;
    for (const auto& lam : lambda_grid) {
        if (std::abs(lam) > 1.0 + 1e-12) throw InvalidConfig("scalar bounds need |lambda| <= 1");
        scalar_fits(lam, n_reference, n_full, report.fits);
    }
    for (const auto& B : matrices) {
        if (B.rows() != B.cols()) throw InvalidConfig("square matrix required");
        if ((B - B.transpose()).cwiseAbs().maxCoeff() <= 1e-12)
            symmetric_matrix_fits(B, n_reference, n_full, report.fits);
        else
            general_matrix_fits(B, n_reference, n_full, report.fits);
    }
    for (const auto& f : report.fits)
        report.max_violation_ratio = std::max(report.max_violation_ratio, f.violation_ratio);
    return report;
}

std::vector<std::complex<double>> unit_disk_grid(double step) {
    if (!(step > 0.0)) throw InvalidConfig("step must be positive");
    const int m = static_cast<int>(std::floor(1.0 / step + 0.5));
    std::vector<std::complex<double>> grid;
    for (int a = -m; a <= m; ++a)
        for (int b = -m; b <= m; ++b) {
            const std::complex<double> lam(a * step, b * step);
            if (std::abs(lam) <= 1.0 + 1e-12) grid.push_back(lam);
        }
    return grid;
}

void write_bound_csv(const std::string& path, const BoundReport& report) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out.precision(12);
    out << "lambda_re,lambda_im,bound_id,fitted_constant,violation_ratio\n";
    for (const auto& f : report.fits)
        out << f.lambda.real() << ',' << f.lambda.imag() << ',' << f.bound_id << ','
            << f.fitted_constant << ',' << f.violation_ratio << "\n";
}

} // namespace erwg
