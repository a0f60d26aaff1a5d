#include "erwg/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <nlohmann/json.hpp>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "erwg/loggamma.hpp"

namespace erwg {

std::string regime_name(Regime r) {
    switch (r) {
        case Regime::Diffusive: return "diffusive";
        case Regime::Critical: return "critical";
        default: return "superdiffusive";
    }
}

namespace {

bool is_symmetric(const Eigen::MatrixXd& B, double tol = 1e-12) {
    return (B - B.transpose()).cwiseAbs().maxCoeff() <= tol;
}

// Descending real part, ties broken by descending imaginary part.
std::vector<int> sort_order(const Eigen::VectorXcd& values) {
    std::vector<int> order(static_cast<size_t>(values.size()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (values(a).real() != values(b).real()) return values(a).real() > values(b).real();
        return values(a).imag() > values(b).imag();
    });
    return order;
}

// For a real matrix with a real simple spectrum the complex eigenvectors
// carry an arbitrary phase; rotate each column so its largest entry is real
// and positive, then drop the imaginary part.
Eigen::MatrixXd realize_eigenvectors(const Eigen::MatrixXcd& T) {
    Eigen::MatrixXd R(T.rows(), T.cols());
    for (int j = 0; j < T.cols(); ++j) {
        int arg_max = 0;
        for (int i = 1; i < T.rows(); ++i)
            if (std::abs(T(i, j)) > std::abs(T(arg_max, j))) arg_max = i;
        const std::complex<double> pivot = T(arg_max, j);
        const std::complex<double> phase =
            std::abs(pivot) > 0 ? std::conj(pivot) / std::abs(pivot) : 1.0;
        Eigen::VectorXcd col = T.col(j) * phase;
        R.col(j) = col.real();
        const double norm = R.col(j).norm();
        if (norm > 0) R.col(j) /= norm;
    }
    return R;
}

void set_multiplicity(Spectrum& s) {
    // Cluster eigenvalues at tolerance 1e-8; report nu only when the
    // clustering is unambiguous (symmetric solve or all clusters simple).
    const int k = s.k();
    std::vector<int> cluster_size(static_cast<size_t>(k), 1);
    for (int i = 0; i < k; ++i) {
        int c = 0;
        for (int j = 0; j < k; ++j)
            if (std::abs(s.eigenvalues(i) - s.eigenvalues(j)) <= 1e-8) ++c;
        cluster_size[static_cast<size_t>(i)] = c;
    }
    const bool all_simple =
        std::all_of(cluster_size.begin(), cluster_size.end(), [](int c) { return c == 1; });
    if (!s.symmetric && !all_simple) return; // ambiguous without exact annotation
    int nu = 0;
    for (int i = 0; i < k; ++i)
        if (std::abs(s.eigenvalues(i).real() - s.eta) <= 1e-9)
            nu = std::max(nu, cluster_size[static_cast<size_t>(i)]);
    s.nu = nu;
}

} // namespace

Spectrum analyze(const Eigen::MatrixXd& B) {
    Spectrum s;
    const int k = static_cast<int>(B.rows());
    s.symmetric = is_symmetric(B);

    Eigen::VectorXcd values(k);
    Eigen::MatrixXcd vectors(k, k);
    bool solver_ok = true;
    if (s.symmetric) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(B);
        solver_ok = solver.info() == Eigen::Success;
        if (solver_ok) {
            values = solver.eigenvalues().cast<std::complex<double>>();
            vectors = solver.eigenvectors().cast<std::complex<double>>();
        }
    } else {
        Eigen::EigenSolver<Eigen::MatrixXd> solver(B);
        solver_ok = solver.info() == Eigen::Success;
        if (solver_ok) {
            values = solver.eigenvalues();
            vectors = solver.eigenvectors();
        }
    }
    if (!solver_ok) {
        s.diagonalizable = false;
        s.eta = 0.0;
        s.rho = 1.0;
        return s;
    }

    const auto order = sort_order(values);
    s.eigenvalues.resize(k);
    s.T.resize(k, k);
    for (int j = 0; j < k; ++j) {
        s.eigenvalues(j) = values(order[static_cast<size_t>(j)]);
        s.T.col(j) = vectors.col(order[static_cast<size_t>(j)]);
    }
    s.eta = s.eigenvalues.real().maxCoeff();
    s.rho = 1.0 - s.eta;

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(s.T);
    const double smin = svd.singularValues().minCoeff();
    s.cond_T = smin > 0 ? svd.singularValues().maxCoeff() / smin
                        : std::numeric_limits<double>::infinity();
    s.diagonalizable = std::isfinite(s.cond_T) && s.cond_T <= 1e8;
    if (!s.diagonalizable) {
        s.T.resize(0, 0);
        set_multiplicity(s);
        return s;
    }

    s.T_inverse = s.T.inverse();
    const double residual =
        (s.T_inverse * B * s.T - Eigen::MatrixXcd(s.eigenvalues.asDiagonal()))
            .cwiseAbs()
            .maxCoeff();
    if (residual > 1e-9) throw Error("eigendecomposition residual exceeds 1e-9");

    const double max_imag = s.eigenvalues.imag().cwiseAbs().maxCoeff();
    s.real_diagonalizable = max_imag <= 1e-9;
    if (s.real_diagonalizable) {
        Eigen::MatrixXd R = s.symmetric ? Eigen::MatrixXd(s.T.real()) : realize_eigenvectors(s.T);
        const double real_residual =
            (B * R - R * Eigen::MatrixXd(s.eigenvalues.real().asDiagonal())).cwiseAbs().maxCoeff();
        if (real_residual <= 1e-9) {
            s.real_T = R;
            s.T = R.cast<std::complex<double>>();
            s.T_inverse = s.T.inverse();
        } else {
            s.real_diagonalizable = false;
        }
    }
    if (s.symmetric && s.real_T &&
        ((*s.real_T).transpose() * (*s.real_T) - Eigen::MatrixXd::Identity(k, k))
                .cwiseAbs()
                .maxCoeff() > 1e-10)
        throw Error("symmetric eigenbasis is not orthogonal to tolerance");

    set_multiplicity(s);
    return s;
}

Regime classify_value(double real_part, double tol) {
    if (std::abs(real_part - 0.5) <= tol) return Regime::Critical;
    return real_part < 0.5 ? Regime::Diffusive : Regime::Superdiffusive;
}

RegimeLabel classify(const Spectrum& spectrum, double tol) {
    if (!(tol > 0)) throw InvalidConfig("classification tolerance must be positive");
    RegimeLabel label;
    label.global = classify_value(spectrum.eta, tol);
    label.per_projection.reserve(static_cast<size_t>(spectrum.k()));
    for (int j = 0; j < spectrum.k(); ++j)
        label.per_projection.push_back(classify_value(spectrum.eigenvalues(j).real(), tol));
    return label;
}

std::complex<double> d_scale(std::complex<double> lambda, long n) {
    if (n < 2) throw InvalidConfig("d_scale requires n >= 2");
    if (std::abs(lambda) > 1.0 + 1e-12) throw InvalidConfig("d_scale requires |lambda| <= 1");
    const double dn = static_cast<double>(n);
    return std::exp(log_gamma(lambda + dn) - log_gamma(lambda + 2.0) -
                    std::complex<double>(std::lgamma(dn), 0.0));
}

double d_scale(double lambda, long n) {
    if (n < 2) throw InvalidConfig("d_scale requires n >= 2");
    if (std::abs(lambda) > 1.0 + 1e-12) throw InvalidConfig("d_scale requires |lambda| <= 1");
    return std::exp(std::lgamma(lambda + static_cast<double>(n)) - std::lgamma(lambda + 2.0) -
                    std::lgamma(static_cast<double>(n)));
}

Eigen::MatrixXd matrix_power(double x, const Eigen::MatrixXd& A) {
    if (!(x > 0)) throw InvalidConfig("matrix_power requires x > 0");
    const Eigen::MatrixXd pade = (std::log(x) * A).exp();
    if (!is_symmetric(A)) return pade;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A);
    Eigen::VectorXd powered = solver.eigenvalues();
    for (int i = 0; i < powered.size(); ++i) powered(i) = std::pow(x, powered(i));
    const Eigen::MatrixXd spectral =
        solver.eigenvectors() * powered.asDiagonal() * solver.eigenvectors().transpose();
    if ((spectral - pade).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, spectral.cwiseAbs().maxCoeff()))
        throw Error("matrix_power: Pade and spectral routes disagree beyond 1e-10");
    return spectral;
}

std::string spectrum_to_json(const Spectrum& s) {
    nlohmann::json j;
    auto values = nlohmann::json::array();
    for (int i = 0; i < s.k(); ++i)
        values.push_back({s.eigenvalues(i).real(), s.eigenvalues(i).imag()});
    j["eigenvalues"] = values;
    if (s.diagonalizable) {
        auto rows = nlohmann::json::array();
        for (int r = 0; r < s.k(); ++r) {
            auto row = nlohmann::json::array();
            for (int c = 0; c < s.k(); ++c) row.push_back({s.T(r, c).real(), s.T(r, c).imag()});
            rows.push_back(row);
        }
        j["T"] = rows;
    }
    j["diagonalizable"] = s.diagonalizable;
    j["real_diagonalizable"] = s.real_diagonalizable;
    j["symmetric"] = s.symmetric;
    j["eta"] = s.eta;
    j["rho"] = s.rho;
    j["cond_T"] = s.diagonalizable ? s.cond_T : 0.0;
    if (s.nu) j["nu"] = *s.nu;
    return j.dump(2);
}

} // namespace erwg
