#pragma once

#include <cmath>
#include <complex>

#include "arczeta/rational.hpp"

namespace arczeta {

namespace detail {

// Lanczos g = 7, 9-term coefficients (Godfrey's set). Roughly 1e-13 relative
// accuracy in double precision away from the poles.
inline constexpr double kLanczosG = 7.0;
inline constexpr double kLanczosCoeff[9] = {
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

inline bool near_nonpositive_integer(std::complex<double> s, double tol = 1e-13) {
    if (s.real() > 0.5) return false;
    double r = std::round(s.real());
    return r <= 0.0 && std::abs(s.real() - r) < tol && std::abs(s.imag()) < tol;
}

}  // namespace detail

/// Gamma(s) for complex s by the Lanczos approximation with reflection for
/// Re s < 0.5. Relative error <= ~1e-13 on the strip |Im s| <= 10,
/// -10 < Re s < 10, away from the poles.
inline std::complex<double> gamma_eval(std::complex<double> s) {
    if (detail::near_nonpositive_integer(s))
        throw Error("gamma_eval: pole of Gamma at a non-positive integer");
    const double pi = 3.14159265358979323846264338327950288;
    if (s.real() < 0.5) {
        // Gamma(s) Gamma(1-s) = pi / sin(pi s)
        return pi / (std::sin(pi * s) * gamma_eval(1.0 - s));
    }
    std::complex<double> z = s - 1.0;
    std::complex<double> x = detail::kLanczosCoeff[0];
    for (int i = 1; i < 9; ++i) x += detail::kLanczosCoeff[i] / (z + static_cast<double>(i));
    std::complex<double> t = z + detail::kLanczosG + 0.5;
    return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

}  // namespace arczeta
