#include "erwg/limits.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <cmath>
#include <limits>

#include "erwg/errors.hpp"
#include "erwg/jsonio.hpp"
#include "erwg/moments.hpp"

namespace erwg {

namespace {

double max_real_eigenvalue(const Eigen::MatrixXd& B) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(B, /*computeEigenvectors=*/false);
    return es.eigenvalues().real().maxCoeff();
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

} // namespace

Eigen::MatrixXd sigma1(const Eigen::MatrixXd& B, double tol) {
    const int k = static_cast<int>(B.rows());
    const double eta = max_real_eigenvalue(B);
    if (eta >= 0.5 - tol) throw NotDiffusive();
    const Eigen::MatrixXd A = B - 0.5 * Eigen::MatrixXd::Identity(k, k);

    // Vectorized Lyapunov solve: row r + k*c of K holds the equation for
    // (A'S + SA)(r,c) = -I(r,c) in the unknowns vec(S) (column-major).
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(k * k, k * k);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(k * k);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) {
            const int e = r + c * k;
            for (int m = 0; m < k; ++m) {
                K(e, m + c * k) += A(m, r);
                K(e, r + m * k) += A(m, c);
            }
            rhs(e) = (r == c) ? -1.0 : 0.0;
        }
    const Eigen::VectorXd x = Eigen::FullPivLU<Eigen::MatrixXd>(K).solve(rhs);
    Eigen::MatrixXd S(k, k);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) S(r, c) = x(r + c * k);
    S = symmetrized(S);
    const double residual =
        (A.transpose() * S + S * A + Eigen::MatrixXd::Identity(k, k)).norm();
    if (!(residual <= 1e-10))
        throw Error("Lyapunov solve residual " + std::to_string(residual) + " exceeds 1e-10");
    return S;
}

Eigen::MatrixXd sigma1_quadrature(const Eigen::MatrixXd& B, double t_max, long intervals) {
    const int k = static_cast<int>(B.rows());
    if (intervals < 2) throw InvalidConfig("quadrature needs at least 2 intervals");
    if (intervals % 2 != 0) ++intervals;
    const double eta = max_real_eigenvalue(B);
    if (eta >= 0.5) throw NotDiffusive();
    const Eigen::MatrixXd A = B - 0.5 * Eigen::MatrixXd::Identity(k, k);
    const double h = t_max / static_cast<double>(intervals);
    const Eigen::MatrixXd Eh = (A * h).exp();
    Eigen::MatrixXd P = Eigen::MatrixXd::Identity(k, k); // e^{A t} at the current node
    Eigen::MatrixXd acc = Eigen::MatrixXd::Identity(k, k); // f(0) = I, Simpson weight 1
    for (long i = 1; i < intervals; ++i) {
        P = P * Eh;
        acc += ((i % 2 == 1) ? 4.0 : 2.0) * (P.transpose() * P);
    }
    P = P * Eh;
    acc += P.transpose() * P;
    return symmetrized(acc * (h / 3.0));
}

Eigen::MatrixXd sigma2(const Eigen::MatrixXd& B, const Spectrum& spectrum, double tol) {
    if (std::abs(spectrum.eta - 0.5) > tol) throw NotCritical();
    if (!spectrum.real_diagonalizable || !spectrum.real_T) throw NotRealDiagonalizable();
    const Eigen::MatrixXd& T = *spectrum.real_T;
    const int k = static_cast<int>(T.rows());
    const Eigen::MatrixXd lam = spectrum.eigenvalues.real().asDiagonal();
    if ((B * T - T * lam).cwiseAbs().maxCoeff() > 1e-9)
        throw InvalidConfig("spectrum does not diagonalize the supplied matrix");
    const Eigen::MatrixXd gram = T.transpose() * T;
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(k, k);
    for (int p = 0; p < k; ++p)
        for (int q = 0; q < k; ++q) {
            const double sum = spectrum.eigenvalues(p).real() + spectrum.eigenvalues(q).real();
            if (std::abs(sum - 1.0) <= tol) G(p, q) = gram(p, q);
        }
    const Eigen::MatrixXd Tinv = spectrum.T_inverse.real();
    return symmetrized(Tinv.transpose() * G * Tinv);
}

double sigma_lambda(double lambda, const Spectrum& spectrum, int j, double tol) {
    if (j < 0 || j >= spectrum.k()) throw InvalidConfig("projection index out of range");
    if (!spectrum.real_diagonalizable || !spectrum.real_T)
        throw NotRealDiagonalizable();
    if (spectrum.eta >= 1.0 - tol) throw InvalidConfig("requires eta < 1");
    const std::complex<double> lj = spectrum.eigenvalues(j);
    if (std::abs(lj.imag()) > tol || std::abs(lj.real() - lambda) > 1e-9)
        throw InvalidConfig("lambda does not match the requested projection");
    const double gram_jj = spectrum.real_T->col(j).squaredNorm();
    switch (classify_value(lambda, tol)) {
        case Regime::Diffusive: return gram_jj / (1.0 - 2.0 * lambda);
        case Regime::Critical: return gram_jj;
        case Regime::Superdiffusive: {
            const double g = std::tgamma(lambda + 2.0);
            return g * g * gram_jj / (2.0 * lambda - 1.0);
        }
    }
    throw Error("unreachable");
}

SubBlockCovariances sub_block_covariances(const Spectrum& spectrum, double tol) {
    if (!spectrum.real_diagonalizable || !spectrum.real_T) throw NotRealDiagonalizable();
    if (spectrum.eta >= 1.0 - tol) throw InvalidConfig("requires eta < 1");
    SubBlockCovariances out;
    const int k = spectrum.k();
    for (int j = 0; j < k; ++j) {
        const double re = spectrum.eigenvalues(j).real();
        if (re < 0.5 - tol)
            out.diffusive.push_back(j);
        else if (std::abs(re - 0.5) <= tol)
            out.critical.push_back(j);
    }
    const int k1 = static_cast<int>(out.diffusive.size());
    const int k2 = static_cast<int>(out.critical.size());
    const int kt = k1 + k2;
    if (kt == 0) throw NoSubCriticalProjections();

    std::vector<int> perm = out.diffusive;
    perm.insert(perm.end(), out.critical.begin(), out.critical.end());
    for (int idx : perm) out.lambdas.push_back(spectrum.eigenvalues(idx).real());

    const Eigen::MatrixXd& T = *spectrum.real_T;
    out.gram.resize(kt, kt);
    for (int p = 0; p < kt; ++p)
        for (int q = 0; q < kt; ++q)
            out.gram(p, q) = T.col(perm[static_cast<size_t>(p)]).dot(T.col(perm[static_cast<size_t>(q)]));

    out.sigma2_tilde = Eigen::MatrixXd::Zero(kt, kt);
    for (int p = 0; p < kt; ++p)
        for (int q = 0; q < kt; ++q)
            if (std::abs(out.lambdas[static_cast<size_t>(p)] + out.lambdas[static_cast<size_t>(q)] - 1.0) <= tol)
                out.sigma2_tilde(p, q) = out.gram(p, q);

    if (k2 == 0) {
        Eigen::MatrixXd s1(kt, kt);
        for (int p = 0; p < kt; ++p)
            for (int q = 0; q < kt; ++q)
                s1(p, q) = out.gram(p, q) /
                           (1.0 - out.lambdas[static_cast<size_t>(p)] - out.lambdas[static_cast<size_t>(q)]);
        out.sigma1_tilde = symmetrized(s1);
    }
    if (k1 >= 1) {
        Eigen::MatrixXd s(k1, k1);
        for (int p = 0; p < k1; ++p)
            for (int q = 0; q < k1; ++q)
                s(p, q) = out.gram(p, q) /
                          (1.0 - out.lambdas[static_cast<size_t>(p)] - out.lambdas[static_cast<size_t>(q)]);
        out.sigma1_star = symmetrized(s);
    }
    if (k2 >= 1) out.critical_gram = symmetrized(out.gram.block(k1, k1, k2, k2));
    return out;
}

LilEllipsoid lil_ellipsoid(const Eigen::MatrixXd& sigma, const std::string& scaling) {
    if (sigma.rows() != sigma.cols() || sigma.rows() == 0) throw InvalidConfig("square matrix required");
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sigma);
    if (!lu.isInvertible()) throw Singular();
    const Eigen::MatrixXd Q = lu.inverse();
    const double residual =
        (sigma * Q - Eigen::MatrixXd::Identity(sigma.rows(), sigma.cols())).cwiseAbs().maxCoeff();
    if (!(residual <= 1e-9)) throw Singular();
    return LilEllipsoid{symmetrized(Q), scaling};
}

bool is_two_elephant(const WalkConfig& config) {
    if (config.graph.k() != 2) return false;
    const auto& e = config.graph.edges();
    if (e.size() != 2) return false;
    const bool forward = (e[0] == std::pair<int, int>{1, 2} && e[1] == std::pair<int, int>{2, 1}) ||
                         (e[0] == std::pair<int, int>{2, 1} && e[1] == std::pair<int, int>{1, 2});
    return forward && config.p[0] == config.p[1];
}

SuperdiffusiveProfile superdiffusive_profile(const Spectrum& spectrum, const WalkConfig& config,
                                             double tol) {
    SuperdiffusiveProfile out;
    const int k = spectrum.k();
    const Eigen::MatrixXd mean2 = mean_recursion(config, 2);
    const Eigen::RowVectorXcd shat2 =
        mean2.row(2).cast<std::complex<double>>() * spectrum.T;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int j = 0; j < k; ++j) {
        const std::complex<double> lam = spectrum.eigenvalues(j);
        if (lam.real() <= 0.5 + tol) continue;
        SuperdiffusiveProjection proj;
        proj.j = j;
        if (std::abs(lam.imag()) <= tol) {
            proj.lambda = lam.real();
            proj.limit_mean = shat2(j).real();
            proj.fluctuation_exponent = lam.real() - 0.5;
            proj.fluctuation_variance =
                (spectrum.real_diagonalizable && spectrum.eta < 1.0 - tol)
                    ? sigma_lambda(lam.real(), spectrum, j, tol)
                    : nan;
        } else {
            proj.lambda = nan;
            proj.limit_mean = nan;
            proj.fluctuation_exponent = lam.real() - 0.5;
            proj.fluctuation_variance = nan;
        }
        out.projections.push_back(proj);
    }
    if (out.projections.empty()) throw NotSuperdiffusive();

    if (is_two_elephant(config)) {
        const double p = config.p[0];
        const double q1 = config.q[0], q2 = config.q[1];
        if (2.0 * p - 1.0 > 0.5 + tol) { // the (1,1)-direction projection
            out.pair_sigma1 = std::tgamma(2.0 * p + 1.0) / std::sqrt(4.0 * p - 3.0);
            out.pair_mean_sum = 2.0 * p * (q1 + q2 - 1.0);
        }
        if (1.0 - 2.0 * p > 0.5 + tol) { // the (1,-1)-direction projection
            out.pair_sigma2 = std::tgamma(3.0 - 2.0 * p) / std::sqrt(1.0 - 4.0 * p);
            out.pair_mean_diff = 2.0 * (1.0 - p) * (q1 - q2);
        }
    }
    return out;
}

nlohmann::json limit_report(const WalkConfig& config, double tol) {
    const Eigen::MatrixXd B = memory_matrix(config);
    const Spectrum spec = analyze(B);
    const RegimeLabel label = classify(spec, tol);

    nlohmann::json out;
    out["eta"] = spec.eta;
    out["rho"] = spec.rho;
    out["regime"] = regime_name(label.global);
    {
        nlohmann::json per = nlohmann::json::array();
        for (auto r : label.per_projection) per.push_back(regime_name(r));
        out["per_projection_regime"] = per;
    }
    {
        nlohmann::json eig = nlohmann::json::array();
        for (int j = 0; j < spec.k(); ++j)
            eig.push_back({spec.eigenvalues(j).real(), spec.eigenvalues(j).imag()});
        out["eigenvalues"] = eig;
    }
    if (spec.nu) out["nu"] = *spec.nu;
    out["diagonalizable"] = spec.diagonalizable;
    out["real_diagonalizable"] = spec.real_diagonalizable;
    out["criticality_tolerance"] = tol;

    if (label.global == Regime::Diffusive) {
        const Eigen::MatrixXd s1 = sigma1(B, tol);
        out["sigma1"] = matrix_json(s1);
        try {
            const LilEllipsoid e = lil_ellipsoid(s1);
            out["ellipsoid_full"] = {{"Q", matrix_json(e.Q)}, {"scaling", e.scaling}};
        } catch (const Singular&) {
            out["ellipsoid_full"] = "singular";
        }
    }
    if (label.global == Regime::Critical) {
        if (spec.real_diagonalizable)
            out["sigma2"] = matrix_json(sigma2(B, spec, tol));
        else
            out["sigma2"] = "unsupported"; // non-(real-)diagonalizable critical case
    }
    {
        nlohmann::json sl = nlohmann::json::array();
        for (int j = 0; j < spec.k(); ++j) {
            const std::complex<double> lam = spec.eigenvalues(j);
            if (spec.real_diagonalizable && std::abs(lam.imag()) <= tol && spec.eta < 1.0 - tol)
                sl.push_back(sigma_lambda(lam.real(), spec, j, tol));
            else
                sl.push_back(nullptr);
        }
        out["sigma_lambda"] = sl;
    }
    if (spec.real_diagonalizable && spec.eta < 1.0 - tol) {
        try {
            const SubBlockCovariances sub = sub_block_covariances(spec, tol);
            nlohmann::json js;
            js["diffusive_indices"] = sub.diffusive;
            js["critical_indices"] = sub.critical;
            js["lambdas"] = sub.lambdas;
            js["gram"] = matrix_json(sub.gram);
            if (sub.sigma1_tilde) js["sigma1_tilde"] = matrix_json(*sub.sigma1_tilde);
            js["sigma2_tilde"] = matrix_json(sub.sigma2_tilde);
            if (sub.sigma1_star) {
                js["sigma1_star"] = matrix_json(*sub.sigma1_star);
                try {
                    const LilEllipsoid e = lil_ellipsoid(*sub.sigma1_star);
                    js["ellipsoid_diffusive"] = {{"Q", matrix_json(e.Q)}, {"scaling", e.scaling}};
                } catch (const Singular&) {
                    js["ellipsoid_diffusive"] = "singular";
                }
            }
            if (sub.critical_gram) {
                js["critical_gram"] = matrix_json(*sub.critical_gram);
                try {
                    const LilEllipsoid e =
                        lil_ellipsoid(*sub.critical_gram, "sqrt(2 n log n log log log n)");
                    js["ellipsoid_critical"] = {{"Q", matrix_json(e.Q)}, {"scaling", e.scaling}};
                } catch (const Singular&) {
                    js["ellipsoid_critical"] = "singular";
                }
            }
            out["sub_blocks"] = js;
        } catch (const NoSubCriticalProjections&) {
            // purely superdiffusive spectrum: nothing to report here
        }
    }
    if (spec.eta > 0.5 + tol) {
        const SuperdiffusiveProfile prof = superdiffusive_profile(spec, config, tol);
        nlohmann::json js = nlohmann::json::array();
        for (const auto& pr : prof.projections) {
            nlohmann::json e;
            e["index"] = pr.j;
            if (std::isnan(pr.lambda)) {
                e["lambda"] = nullptr;
                e["limit_mean"] = nullptr;
                e["fluctuation_variance"] = nullptr;
            } else {
                e["lambda"] = pr.lambda;
                e["limit_mean"] = pr.limit_mean;
                e["fluctuation_variance"] =
                    std::isnan(pr.fluctuation_variance) ? nlohmann::json(nullptr)
                                                        : nlohmann::json(pr.fluctuation_variance);
            }
            e["fluctuation_exponent"] = pr.fluctuation_exponent;
            js.push_back(e);
        }
        nlohmann::json sd;
        sd["projections"] = js;
        if (prof.pair_sigma1) sd["pair_sigma1"] = *prof.pair_sigma1;
        if (prof.pair_sigma2) sd["pair_sigma2"] = *prof.pair_sigma2;
        if (prof.pair_mean_sum) sd["pair_mean_sum"] = *prof.pair_mean_sum;
        if (prof.pair_mean_diff) sd["pair_mean_diff"] = *prof.pair_mean_diff;
        out["superdiffusive"] = sd;
    }
    out["sigma3"] = "unsupported"; // repeated-critical-eigenvalue covariance is out of scope
    return out;
}

} // namespace erwg
