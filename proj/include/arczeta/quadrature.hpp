#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <queue>
#include <vector>

#include "arczeta/rational.hpp"

namespace arczeta {

namespace detail {

// Gauss-Kronrod 7-15 nodes and weights (QUADPACK qk15 constants).
inline constexpr double kGK15_X[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
inline constexpr double kGK15_WK[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
inline constexpr double kGK15_WG[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Interval {
    double a, b;
    std::complex<double> value;
    double error;
    bool operator<(const Interval& o) const { return error < o.error; }
};

template <typename F>
inline Interval gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    std::complex<double> kronrod{0.0, 0.0}, gauss{0.0, 0.0};
    for (int i = 0; i < 8; ++i) {
        const double x = kGK15_X[i] * h;
        std::complex<double> fsum;
        if (i == 7) fsum = f(c);
        else fsum = f(c - x) + f(c + x);
        kronrod += kGK15_WK[i] * fsum;
        if (i % 2 == 1) gauss += kGK15_WG[i / 2] * fsum;
    }
    kronrod *= h;
    gauss *= h;
    return Interval{a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod integration of a complex-valued function on [a, b].
/// Bisects the interval with the largest local error until the summed error
/// estimate drops below tol (absolute) or the subdivision cap is hit.
template <typename F>
inline std::complex<double> integrate_gk(const F& f, double a, double b, double tol,
                                         int max_intervals = 4000) {
    std::priority_queue<detail::Interval> queue;
    queue.push(detail::gk15(f, a, b));
    std::complex<double> total = queue.top().value;
    double total_err = queue.top().error;
    int n = 1;
    while (total_err > tol && n < max_intervals) {
        detail::Interval worst = queue.top();
        queue.pop();
        total -= worst.value;
        total_err -= worst.error;
        double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // interval at double-precision resolution; keep its estimate
            total += worst.value;
            total_err += worst.error;
            break;
        }
        auto left = detail::gk15(f, worst.a, mid);
        auto right = detail::gk15(f, mid, worst.b);
        total += left.value + right.value;
        total_err += left.error + right.error;
        queue.push(left);
        queue.push(right);
        n += 1;
    }
    if (total_err > tol * 16.0 + 1e-300)
        throw Error("integrate_gk: adaptive quadrature failed to reach the requested tolerance");
    return total;
}

/// One radial factor:  integral_0^inf u^p e^{-u} du  for complex p with
/// Re p > -1, by adaptive quadrature only (no gamma-function call). The
/// endpoint singularity on [0,1] is flattened by u = v^k; the tail is cut at
/// R with the remainder bounded by 2 R^Re(p) e^{-R}.
inline std::complex<double> radial_factor(std::complex<double> p, double precision) {
    if (!(p.real() > -1.0 + 1e-12))
        throw Error("radial_factor: Re p <= -1, outside the convergence strip");

    // [0, 1] with u = v^k, du = k v^{k-1} dv: integrand k v^{k(p+1)-1} e^{-v^k}.
    int k = std::max(1, static_cast<int>(std::ceil(2.0 / (1.0 + p.real()))));
    k = std::min(k, 64);
    auto head = [&](double v) -> std::complex<double> {
        if (v <= 0.0) return {0.0, 0.0};
        std::complex<double> expnt = std::complex<double>(k) * (p + 1.0) - 1.0;
        std::complex<double> vp = std::exp(expnt * std::log(v));
        double vk = std::pow(v, k);
        return static_cast<double>(k) * vp * std::exp(-vk);
    };
    auto tail = [&](double u) -> std::complex<double> {
        return std::exp(p * std::log(u) - u);
    };

    auto compute = [&](double tol) -> std::complex<double> {
        // [1, R]: smooth, exponentially damped; remainder <= 2 R^Re(p) e^{-R}.
        double R = 30.0;
        while (R < 800.0 && 2.0 * std::exp(p.real() * std::log(R) - R) > tol * 1e-2) R *= 1.4;
        return integrate_gk(head, 0.0, 1.0, tol) + integrate_gk(tail, 1.0, R, tol);
    };

    // First pass at absolute tolerance, second pass rescaled to the observed
    // magnitude so the result is relatively accurate even when the integral is
    // small (oscillatory p). No gamma call anywhere on this path.
    std::complex<double> rough = compute(precision * 0.25);
    double mag = std::abs(rough);
    if (mag > 0.0 && mag < 1.0) {
        double tol = std::max(precision * mag * 0.25, 1e-15);
        return compute(tol);
    }
    return rough;
}

/// Independent oracle for monomials f = prod x_i^{a_i} under the standard
/// complex Gaussian weight: Z(s) = prod_i integral_0^inf u^{a_i s} e^{-u} du.
/// Computed by 1-D radial quadrature, not by a gamma-function library call,
/// so it cross-checks both the samplers and gamma_eval.
inline std::complex<double> radial_oracle_monomial(const std::vector<std::uint32_t>& a,
                                                   std::complex<double> s,
                                                   double precision = 1e-10) {
    if (a.empty()) throw Error("radial_oracle_monomial: empty exponent vector");
    std::complex<double> z{1.0, 0.0};
    for (auto ai : a) {
        if (ai < 1) throw Error("radial_oracle_monomial: exponents must be >= 1");
        std::complex<double> p = static_cast<double>(ai) * s;
        if (!(p.real() > -1.0))
            throw Error("radial_oracle_monomial: Re(a_i s) <= -1, outside the convergence strip");
        z *= radial_factor(p, precision);
    }
    return z;
}

}  // namespace arczeta
