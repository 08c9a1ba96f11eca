#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>
#include <vector>

#include "arczeta/bfunction.hpp"
#include "arczeta/gamma.hpp"
#include "arczeta/sampling.hpp"
#include "arczeta/snc.hpp"

namespace arczeta {

struct FitConditioningError : Error {
    using Error::Error;
};

/// Window holds too little (or no) sample mass to fit. Region-localization
/// callers catch this to report "nothing detected" on a shared window.
struct FitWindowError : Error {
    using Error::Error;
};

/// Candidate exponent with the largest admissible log power. A pole of Z at
/// -alpha of order k+1 is dual to a t^{2 alpha} (-log t)^k term of the
/// level-set mass F(t); Bernstein's bound keeps the alphas on a discrete
/// ladder, never inferred from data.
struct LadderEntry {
    Rational alpha;
    int max_logpow = 0;
};

struct Ladder {
    std::vector<LadderEntry> entries;

    std::size_t column_count() const {
        std::size_t k = 0;
        for (const auto& e : entries) k += static_cast<std::size_t>(e.max_logpow) + 1;
        return k;
    }
};

/// Ladder from a FULL b-function: locations are roots shifted by non-negative
/// integers down to `floor` (a negative rational); the admissible log power at
/// beta comes from mult_{s=-beta} prod_i b(s+i), i.e. the total multiplicity of
/// roots alpha <= beta with beta - alpha integral.
inline Ladder ladder_from_bfunction(const BFunction& b_full, const Rational& floor_location) {
    if (!(floor_location < Rational(0)))
        throw Error("ladder_from_bfunction: floor must be negative");
    Rational bound = -floor_location;
    std::set<Rational> betas;
    for (const auto& [alpha, mult] : b_full.roots()) {
        for (long j = 0;; ++j) {
            Rational beta = alpha + Rational(j);
            if (beta > bound) break;
            betas.insert(beta);
        }
    }
    Ladder ladder;
    for (const auto& beta : betas) {
        int total = 0;
        for (const auto& [alpha, mult] : b_full.roots())
            if (alpha <= beta && (beta - alpha).is_integer()) total += mult;
        ladder.entries.push_back(LadderEntry{beta, total - 1});
    }
    return ladder;
}

/// Keep only the entries with alpha <= max_alpha (the leading neighborhood).
inline Ladder truncate_ladder(const Ladder& ladder, const Rational& max_alpha) {
    Ladder out;
    for (const auto& e : ladder.entries)
        if (e.alpha <= max_alpha) out.entries.push_back(e);
    return out;
}

/// Ladder from exact snc candidates: order bounds become log-power caps.
inline Ladder ladder_from_candidates(const std::vector<CandidatePole>& candidates) {
    Ladder ladder;
    for (const auto& c : candidates)
        ladder.entries.push_back(LadderEntry{-c.location, c.order_bound - 1});
    std::sort(ladder.entries.begin(), ladder.entries.end(),
              [](const LadderEntry& a, const LadderEntry& b) { return a.alpha < b.alpha; });
    return ladder;
}

/// Fallback user grid: all rationals with denominator <= max_den in (0, limit],
/// log power 0. Usually too collinear for a stable fit; the conditioning guard
/// will say so.
inline Ladder ladder_grid(const Rational& limit, long max_den = 12) {
    std::set<Rational> values;
    for (long q = 1; q <= max_den; ++q)
        for (long p = 1; Rational(p, q) <= limit; ++p) values.insert(Rational(p, q));
    Ladder ladder;
    for (const auto& v : values) ladder.entries.push_back(LadderEntry{v, 0});
    return ladder;
}

struct FitTerm {
    Rational alpha;
    int logpow = 0;
    double coeff = 0.0;
    double coeff_stderr = 0.0;
};

struct AsymptoticModel {
    std::vector<FitTerm> terms;  // surviving terms only
    double t_lo = 0.0, t_hi = 0.0;
    double condition = 0.0;      // of the equilibrated design, last fit
    double chi2_reduced = 0.0;
    std::uint64_t n_kept = 0;    // effective sample size behind the CDF
    int grid_points = 0;
    double significance = 3.0;
};

namespace detail {

struct Column {
    Rational alpha;
    int logpow;
    double alpha_d;
};

/// Symmetric Jacobi eigenvalues (k x k, k small).
inline std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
    std::size_t n = a.size();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    double aip = a[i][p], aiq = a[i][q];
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    double api = a[p][i], aqi = a[q][i];
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
            }
    }
    std::vector<double> ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
    return ev;
}

/// Gauss-Jordan inverse with partial pivoting; returns false if singular.
inline bool invert(std::vector<std::vector<double>> a, std::vector<std::vector<double>>& inv) {
    std::size_t n = a.size();
    inv.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (std::abs(a[piv][col]) < 1e-300) return false;
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        double d = a[col][col];
        for (std::size_t c = 0; c < n; ++c) {
            a[col][c] /= d;
            inv[col][c] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = a[r][col];
            if (f == 0.0) continue;
            for (std::size_t c = 0; c < n; ++c) {
                a[r][c] -= f * a[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return true;
}

struct WlsResult {
    std::vector<double> coeff;
    std::vector<double> stderr_;
    double condition = 0.0;
    double chi2_reduced = 0.0;
};

inline WlsResult weighted_least_squares(const std::vector<Column>& cols,
                                        const std::vector<double>& t,
                                        const std::vector<double>& y,
                                        const std::vector<double>& w) {
    std::size_t m = t.size(), k = cols.size();
    std::vector<std::vector<double>> design(m, std::vector<double>(k));
    for (std::size_t i = 0; i < m; ++i) {
        double lg = -std::log(t[i]);
        for (std::size_t j = 0; j < k; ++j) {
            double v = std::exp(2.0 * cols[j].alpha_d * std::log(t[i]));
            for (int p = 0; p < cols[j].logpow; ++p) v *= lg;
            design[i][j] = v;
        }
    }
    // normal equations
    std::vector<std::vector<double>> nrm(k, std::vector<double>(k, 0.0));
    std::vector<double> rhs(k, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            double wij = w[i] * design[i][j];
            rhs[j] += wij * y[i];
            for (std::size_t l = j; l < k; ++l) nrm[j][l] += wij * design[i][l];
        }
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t l = 0; l < j; ++l) nrm[j][l] = nrm[l][j];

    // column equilibration to unit diagonal
    std::vector<double> scale(k);
    for (std::size_t j = 0; j < k; ++j) {
        if (!(nrm[j][j] > 0.0))
            throw FitConditioningError(
                "fit_tail: degenerate column in the design matrix; adjust the window or ladder");
        scale[j] = std::sqrt(nrm[j][j]);
    }
    std::vector<std::vector<double>> eq(k, std::vector<double>(k));
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t l = 0; l < k; ++l) eq[j][l] = nrm[j][l] / (scale[j] * scale[l]);

    auto ev = jacobi_eigenvalues(eq);
    double lmax = *std::max_element(ev.begin(), ev.end());
    double lmin = *std::min_element(ev.begin(), ev.end());
    WlsResult res;
    if (!(lmin > 0.0) || std::sqrt(lmax / lmin) > 1e12)
        throw FitConditioningError(
            "fit_tail: design condition number exceeds 1e12; use a shallower ladder (larger "
            "floor), fewer log powers, or a wider window");
    res.condition = std::sqrt(lmax / lmin);

    std::vector<std::vector<double>> eq_inv;
    if (!invert(eq, eq_inv))
        throw FitConditioningError("fit_tail: singular normal equations; adjust window or ladder");

    std::vector<double> rhs_eq(k);
    for (std::size_t j = 0; j < k; ++j) rhs_eq[j] = rhs[j] / scale[j];
    std::vector<double> c_eq(k, 0.0);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t l = 0; l < k; ++l) c_eq[j] += eq_inv[j][l] * rhs_eq[l];

    res.coeff.resize(k);
    for (std::size_t j = 0; j < k; ++j) res.coeff[j] = c_eq[j] / scale[j];

    double chi2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double fit = 0.0;
        for (std::size_t j = 0; j < k; ++j) fit += design[i][j] * res.coeff[j];
        double r = y[i] - fit;
        chi2 += w[i] * r * r;
    }
    double dof = static_cast<double>(m > k ? m - k : 1);
    res.chi2_reduced = chi2 / dof;
    // Covariance (X^T W X)^-1, inflated by sqrt(max(1, chi2_red)) to absorb
    // model misfit; the binomial weights already carry the sampling variance.
    double inflate = std::sqrt(std::max(1.0, res.chi2_reduced));
    res.stderr_.resize(k);
    for (std::size_t j = 0; j < k; ++j)
        res.stderr_[j] = std::sqrt(std::max(0.0, eq_inv[j][j])) / scale[j] * inflate;
    return res;
}

}  // namespace detail

/// Weighted least squares of the empirical F(t) against
/// sum c * t^{2 alpha} (-log t)^k on [t_lo, t_hi], weights 1/Var(F^hat)
/// (binomial). Terms below `significance` * stderr are dropped one at a time
/// (weakest first, higher log powers first on ties) and the model refit to a
/// fixpoint.
inline AsymptoticModel fit_tail(const EmpiricalCDF& cdf, const Ladder& ladder,
                                std::pair<double, double> window, int grid_points = 200,
                                double significance = 3.0) {
    auto [t_lo, t_hi] = window;
    if (!(t_lo > 0.0) || !(t_hi > t_lo)) throw FitWindowError("fit_tail: empty or invalid window");
    if (ladder.entries.empty()) throw Error("fit_tail: empty ladder");
    {
        std::set<Rational> seen;
        for (const auto& e : ladder.entries) {
            if (!(e.alpha > Rational(0))) throw Error("fit_tail: ladder alphas must be positive");
            if (e.max_logpow < 0) throw Error("fit_tail: negative log power");
            if (!seen.insert(e.alpha).second) throw Error("fit_tail: duplicate ladder alphas");
        }
    }
    std::size_t ncols = ladder.column_count();
    auto lo_it = std::lower_bound(cdf.sorted_values.begin(), cdf.sorted_values.end(), t_lo);
    auto hi_it = std::upper_bound(cdf.sorted_values.begin(), cdf.sorted_values.end(), t_hi);
    std::size_t in_window = static_cast<std::size_t>(hi_it - lo_it);
    if (in_window < 50 * ncols)
        throw FitWindowError("fit_tail: window holds " + std::to_string(in_window) +
                             " samples, needs >= " + std::to_string(50 * ncols));

    int m = std::max(grid_points, static_cast<int>(6 * ncols) + 8);
    std::vector<double> t(m), y(m), w(m);
    double n_eff = static_cast<double>(cdf.n_kept);
    for (int i = 0; i < m; ++i) {
        double frac = (m == 1) ? 0.0 : static_cast<double>(i) / (m - 1);
        t[i] = std::exp(std::log(t_lo) + frac * (std::log(t_hi) - std::log(t_lo)));
        y[i] = cdf.cdf_at(t[i]);
        double var = (y[i] * (1.0 - y[i]) + 0.25 / n_eff) / n_eff;
        w[i] = 1.0 / var;
    }

    std::vector<detail::Column> cols;
    for (const auto& e : ladder.entries)
        for (int p = 0; p <= e.max_logpow; ++p)
            cols.push_back(detail::Column{e.alpha, p, e.alpha.to_double()});

    AsymptoticModel model;
    model.t_lo = t_lo;
    model.t_hi = t_hi;
    model.n_kept = cdf.n_kept;
    model.grid_points = m;
    model.significance = significance;

    while (!cols.empty()) {
        auto res = detail::weighted_least_squares(cols, t, y, w);
        // weakest insignificant column; ties resolved toward dropping the
        // higher log power (simpler model wins)
        std::optional<std::size_t> weakest;
        double weakest_z = significance;
        for (std::size_t j = 0; j < cols.size(); ++j) {
            double z = (res.stderr_[j] > 0.0) ? std::abs(res.coeff[j]) / res.stderr_[j]
                                              : std::numeric_limits<double>::infinity();
            bool weaker = z < weakest_z ||
                          (weakest && z == weakest_z && cols[j].logpow > cols[*weakest].logpow);
            if (z < significance && (!weakest || weaker)) {
                weakest = j;
                weakest_z = z;
            }
        }
        if (!weakest) {
            for (std::size_t j = 0; j < cols.size(); ++j)
                model.terms.push_back(
                    FitTerm{cols[j].alpha, cols[j].logpow, res.coeff[j], res.stderr_[j]});
            model.condition = res.condition;
            model.chi2_reduced = res.chi2_reduced;
            return model;
        }
        cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(*weakest));
    }
    return model;  // nothing significant: empty model
}

enum class Provenance { numeric, exact };

struct PoleEntry {
    Rational location;  // negative, exact on the ladder
    int order = 1;
    /// Coefficient of the t^{2 alpha} (-log t)^{order-1} term of F (the
    /// level-set mass convention; positive for the overall leading term).
    double leading = 0.0;
    double leading_stderr = 0.0;
};

struct PoleReport {
    std::vector<PoleEntry> poles;  // sorted descending by location
    bool reduced = false;
    Provenance provenance = Provenance::numeric;

    const PoleEntry* largest() const { return poles.empty() ? nullptr : &poles.front(); }
    const PoleEntry* at(const Rational& location) const {
        for (const auto& p : poles)
            if (p.location == location) return &p;
        return nullptr;
    }
};

/// Surviving fit terms -> poles: order = 1 + max surviving log power at alpha,
/// leading = coefficient of that top term.
inline PoleReport poles_from_model(const AsymptoticModel& m) {
    PoleReport r;
    r.reduced = false;
    r.provenance = Provenance::numeric;
    std::map<Rational, const FitTerm*> top;
    for (const auto& term : m.terms) {
        auto it = top.find(term.alpha);
        if (it == top.end() || term.logpow > it->second->logpow) top[term.alpha] = &term;
    }
    for (const auto& [alpha, term] : top)
        r.poles.push_back(PoleEntry{-alpha, term->logpow + 1, term->coeff, term->coeff_stderr});
    std::sort(r.poles.begin(), r.poles.end(),
              [](const PoleEntry& a, const PoleEntry& b) { return b.location < a.location; });
    return r;
}

/// Divide by Gamma(s+1): one order of pole removed at every negative integer
/// (entries deleted at order 0); nothing else changes.
inline PoleReport reduce_by_gamma(const PoleReport& r) {
    if (r.reduced) throw Error("reduce_by_gamma: report already reduced");
    PoleReport out;
    out.reduced = true;
    out.provenance = r.provenance;
    for (auto p : r.poles) {
        if (p.location.is_integer()) {
            p.order -= 1;
            if (p.order == 0) continue;
        }
        out.poles.push_back(p);
    }
    return out;
}

/// Exact unreduced pole report for a monomial prod x_i^{a_i}:
/// Z(s) = prod Gamma(a_i s + 1), poles at -(j+1)/a_i with order = number of
/// factors hitting the location. Leading coefficients from the Laurent
/// expansion, converted to the F-term convention.
inline PoleReport exact_monomial_pole_report(const std::vector<std::uint32_t>& a,
                                             const Rational& floor_location) {
    if (a.empty()) throw Error("exact_monomial_pole_report: empty exponent vector");
    if (!(floor_location < Rational(0)))
        throw Error("exact_monomial_pole_report: floor must be negative");
    Rational bound = -floor_location;
    std::set<Rational> betas;
    for (auto ai : a)
        for (long j = 1;; ++j) {
            Rational beta(j, static_cast<long>(ai));
            if (beta > bound) break;
            betas.insert(beta);
        }
    PoleReport r;
    r.reduced = false;
    r.provenance = Provenance::exact;
    for (const auto& beta : betas) {
        int order = 0;
        for (auto ai : a)
            if ((beta * Rational(static_cast<long>(ai))).is_integer()) ++order;
        if (order == 0) continue;
        // Laurent coefficient L = lim (s+beta)^order Z(s) by extrapolated
        // evaluation; Z via gamma_eval.
        auto laurent_at = [&](double eps) {
            std::complex<double> s{-beta.to_double() + eps, 0.0};
            std::complex<double> z{1.0, 0.0};
            for (auto ai : a) z *= gamma_eval(static_cast<double>(ai) * s + 1.0);
            return z.real() * std::pow(eps, order);
        };
        double l1 = laurent_at(1e-5);
        double l2 = laurent_at(5e-6);
        double laurent = 2.0 * l2 - l1;  // first-order Richardson
        int k = order - 1;
        double factorial = 1.0;
        for (int i = 2; i <= k; ++i) factorial *= i;
        double convert = std::pow(2.0, k + 1) / (2.0 * beta.to_double() * factorial);
        r.poles.push_back(PoleEntry{-beta, order, laurent * convert,
                                    std::abs(l2 - l1) * convert * 2.0});
    }
    std::sort(r.poles.begin(), r.poles.end(),
              [](const PoleEntry& x, const PoleEntry& y) { return y.location < x.location; });
    return r;
}

/// End-to-end numeric pole detection.
struct PipelineResult {
    EmpiricalCDF cdf;
    AsymptoticModel model;
    PoleReport unreduced;
    PoleReport reduced;
    std::pair<double, double> window;
};

inline PipelineResult analyze_cdf(EmpiricalCDF cdf, const Ladder& ladder,
                                  std::pair<double, double> window_quantiles = {0.001, 0.05},
                                  std::optional<std::pair<double, double>> absolute_window = {},
                                  int grid_points = 200, double significance = 3.0) {
    PipelineResult out;
    out.cdf = std::move(cdf);
    if (absolute_window) {
        out.window = *absolute_window;
    } else {
        out.window = {out.cdf.quantile(window_quantiles.first),
                      out.cdf.quantile(window_quantiles.second)};
    }
    out.model = fit_tail(out.cdf, ladder, out.window, grid_points, significance);
    out.unreduced = poles_from_model(out.model);
    out.reduced = reduce_by_gamma(out.unreduced);
    return out;
}

inline PipelineResult detect_poles(const Polynomial& f, const SamplePlan& plan,
                                   const Ladder& ladder,
                                   std::pair<double, double> window_quantiles = {0.001, 0.05},
                                   std::optional<std::pair<double, double>> absolute_window = {},
                                   int grid_points = 200, double significance = 3.0) {
    return analyze_cdf(sample_abs_f(f, plan), ladder, window_quantiles, absolute_window,
                       grid_points, significance);
}

}  // namespace arczeta
