#include "erwg/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numeric>

#include "erwg/errors.hpp"

namespace erwg {

double kolmogorov_tail(double lambda) {
    if (lambda <= 0.0) return 1.0;
    if (lambda < 1.18) {
        // dual theta series: fast for small lambda where the direct one is not
        const double x = M_PI * M_PI / (8.0 * lambda * lambda);
        const double cdf = std::sqrt(2.0 * M_PI) / lambda *
                           (std::exp(-x) + std::exp(-9.0 * x) + std::exp(-25.0 * x));
        return std::clamp(1.0 - cdf, 0.0, 1.0);
    }
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        sum += (j % 2 == 1 ? term : -term);
        if (term < 1e-16) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

// Stephens' finite-sample correction before applying the asymptotic tail.
double ks_p_value(double d, double effective_n) {
    const double s = std::sqrt(effective_n);
    return kolmogorov_tail((s + 0.12 + 0.11 / s) * d);
}

} // namespace

KsResult ks_test_standard_normal(std::vector<double> samples) {
    if (samples.empty()) throw InvalidConfig("KS test needs samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        const double f = normal_cdf(samples[i]);
        d = std::max(d, std::max(f - static_cast<double>(i) / n,
                                 static_cast<double>(i + 1) / n - f));
    }
    return {d, ks_p_value(d, n)};
}

KsResult ks_test_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw InvalidConfig("KS test needs samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    double d = 0.0;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return {d, ks_p_value(d, na * nb / (na + nb))};
}

ChiSquareResult chi_square_two_sample(const std::vector<long>& a, const std::vector<long>& b,
                                      long min_pooled_count) {
    if (a.size() != b.size() || a.empty()) throw InvalidConfig("aligned cell counts required");

    std::vector<std::pair<double, double>> pooled;
    double ca = 0.0, cb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        ca += static_cast<double>(a[i]);
        cb += static_cast<double>(b[i]);
        if (ca + cb >= static_cast<double>(min_pooled_count)) {
            pooled.emplace_back(ca, cb);
            ca = cb = 0.0;
        }
    }
    if (ca + cb > 0.0) {
        if (pooled.empty()) pooled.emplace_back(ca, cb);
        else {
            pooled.back().first += ca;
            pooled.back().second += cb;
        }
    }
    if (pooled.size() < 2) throw InvalidConfig("fewer than two cells after pooling");

    double na = 0.0, nb = 0.0;
    for (const auto& [x, y] : pooled) {
        na += x;
        nb += y;
    }
    const double total = na + nb;
    double stat = 0.0;
    for (const auto& [x, y] : pooled) {
        const double ea = (x + y) * na / total;
        const double eb = (x + y) * nb / total;
        stat += (x - ea) * (x - ea) / ea + (y - eb) * (y - eb) / eb;
    }
    const long dof = static_cast<long>(pooled.size()) - 1;
    const boost::math::chi_squared dist(static_cast<double>(dof));
    return {stat, boost::math::cdf(boost::math::complement(dist, stat)), dof,
            static_cast<long>(pooled.size())};
}

double percentile(std::vector<double> values, double pct) {
    if (values.empty()) throw InvalidConfig("percentile of empty sample");
    if (pct < 0.0 || pct > 100.0) throw InvalidConfig("percentile must be in [0, 100]");
    std::sort(values.begin(), values.end());
    const double pos = pct / 100.0 * static_cast<double>(values.size() - 1);
    const size_t lo = static_cast<size_t>(std::floor(pos));
    if (lo + 1 >= values.size()) return values.back();
    const double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[lo + 1] * frac;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidConfig("need two aligned points");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw InvalidConfig("degenerate abscissae");
    return sxy / sxx;
}

double variance_lcb(const std::vector<double>& samples, double z) {
    if (samples.size() < 2) throw InvalidConfig("need at least two samples");
    const double n = static_cast<double>(samples.size());
    const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
    double m2 = 0.0, m4 = 0.0;
    for (double s : samples) {
        const double d = s - mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m4 /= n;
    const double se = std::sqrt(std::max(m4 - m2 * m2, 0.0) / n);
    return m2 - z * se;
}

} // namespace erwg
