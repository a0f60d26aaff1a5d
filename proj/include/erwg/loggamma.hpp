#pragma once

// Complex log-gamma via the Lanczos approximation (g = 7, 9 coefficients).
//
// Accurate to ~1e-14 relative for Re(z) > 0.5; the reflection formula covers
// the left half-plane away from the poles at 0, -1, -2, .... Callers in this
// project only need Re(z) >= 1 (arguments of the form lambda + n with
// |lambda| <= 1 and n >= 2), but the reflection branch keeps the helper total.

#include <cmath>
#include <complex>
#include <limits>

namespace erwg {

inline std::complex<double> log_gamma(std::complex<double> z) {
    static const double g = 7.0;
    static const double coef[9] = {
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    };
    const double pi = 3.14159265358979323846264338327950288;

    if (z.real() < 0.5) {
        // Reflection: log Gamma(z) = log(pi / sin(pi z)) - log Gamma(1 - z).
        if (z.imag() == 0.0 && z.real() == std::floor(z.real()))
            return {std::numeric_limits<double>::infinity(), 0.0}; // pole
        return std::log(pi / std::sin(pi * z)) - log_gamma(1.0 - z);
    }

    z -= 1.0;
    std::complex<double> x = coef[0];
    for (int i = 1; i < 9; ++i) x += coef[i] / (z + static_cast<double>(i));
    const std::complex<double> t = z + g + 0.5;
    return 0.91893853320467274178032973640562 // log sqrt(2 pi)
           + (z + 0.5) * std::log(t) - t + std::log(x);
}

inline double log_gamma(double x) { return std::lgamma(x); }

} // namespace erwg
