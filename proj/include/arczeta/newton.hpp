#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include "arczeta/exact_linalg.hpp"
#include "arczeta/polynomial.hpp"

namespace arczeta {

/// Supporting half-space normal . x >= offset of the Newton polyhedron.
/// Normals are primitive non-negative integer vectors (stored as rationals).
struct NewtonFacet {
    RationalVector normal;
    Rational offset;
};

/// Newton polyhedron conv( union_m (m + R>=0^n) ) over the support of f,
/// described by generators and the complete facet list.
struct NewtonPolyhedron {
    std::size_t nvars = 0;
    std::vector<MultiIndex> generators;
    std::vector<NewtonFacet> facets;
};

namespace detail {

inline Rational dot_mi(const RationalVector& w, const MultiIndex& m) {
    Rational s(0);
    for (std::size_t i = 0; i < w.size(); ++i)
        if (m[i] != 0) s += w[i] * Rational(static_cast<long>(m[i]));
    return s;
}

// Face dimension of {x in P : w.x = c}: affine rank of tight generators
// together with the tight coordinate rays.
inline std::size_t face_dimension(const std::vector<MultiIndex>& gens,
                                  const RationalVector& w, const Rational& c) {
    std::vector<const MultiIndex*> tight;
    for (const auto& g : gens)
        if (dot_mi(w, g) == c) tight.push_back(&g);
    if (tight.empty()) return 0;
    RationalMatrix rows;
    const MultiIndex& base = *tight.front();
    for (std::size_t t = 1; t < tight.size(); ++t) {
        RationalVector row;
        row.reserve(w.size());
        for (std::size_t i = 0; i < w.size(); ++i)
            row.emplace_back(Rational(static_cast<long>((*tight[t])[i]) - static_cast<long>(base[i])));
        rows.push_back(std::move(row));
    }
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (!w[i].is_zero()) continue;
        RationalVector ray(w.size(), Rational(0));
        ray[i] = Rational(1);
        rows.push_back(std::move(ray));
    }
    return rows.empty() ? 0 : rational_rank(std::move(rows));
}

struct FacetKeyLess {
    bool operator()(const NewtonFacet& a, const NewtonFacet& b) const {
        for (std::size_t i = 0; i < a.normal.size(); ++i) {
            if (a.normal[i] != b.normal[i]) return a.normal[i] < b.normal[i];
        }
        return a.offset < b.offset;
    }
};

/// Visit all j-element subsets of {0..total-1} in lexicographic order.
template <typename Fn>
inline void for_each_combination(std::size_t total, std::size_t j, Fn&& fn) {
    if (j > total) return;
    std::vector<std::size_t> sel(j);
    for (std::size_t i = 0; i < j; ++i) sel[i] = i;
    if (j == 0) { fn(sel); return; }
    for (;;) {
        fn(sel);
        std::size_t i = j;
        for (;;) {
            if (i == 0) return;
            --i;
            if (sel[i] < total - (j - i)) {
                ++sel[i];
                for (std::size_t t = i + 1; t < j; ++t) sel[t] = sel[t - 1] + 1;
                break;
            }
        }
    }
}

}  // namespace detail

/// Exact facet description of the Newton polyhedron. Dual enumeration:
/// candidate normals come from nullspaces of (subset of generators, subset of
/// coordinate rays) combinations and are validated by support checks plus a
/// face-dimension test. Exponential in the support size; fine at desk scale
/// (tens of points, n <= 6).
inline NewtonPolyhedron build_polyhedron(const std::set<MultiIndex, GradedLexLess>& supp) {
    if (supp.empty()) throw Error("build_polyhedron: empty support");
    std::size_t n = supp.begin()->size();
    std::vector<MultiIndex> gens(supp.begin(), supp.end());
    for (const auto& g : gens) {
        if (g.size() != n) throw Error("build_polyhedron: inconsistent multi-index lengths");
        if (total_degree(g) == 0)
            throw Error("build_polyhedron: support contains the origin (f(0) != 0, no singularity at 0)");
    }
    std::size_t k = gens.size();

    std::set<NewtonFacet, detail::FacetKeyLess> facets;

    auto consider = [&](const RationalVector& direction) {
        RationalVector w = primitive_direction(direction);
        bool nonneg = true, nonpos = true, zero = true;
        for (const auto& x : w) {
            if (x > Rational(0)) { nonpos = false; zero = false; }
            if (x < Rational(0)) { nonneg = false; zero = false; }
        }
        if (zero) return;
        if (!nonneg && nonpos) {
            for (auto& x : w) x = -x;
            nonneg = true;
        }
        if (!nonneg) return;  // recession cone R>=0^n forces w >= 0
        Rational c = detail::dot_mi(w, gens[0]);
        for (std::size_t i = 1; i < k; ++i) c = min(c, detail::dot_mi(w, gens[i]));
        if (detail::face_dimension(gens, w, c) == n - 1)
            facets.insert(NewtonFacet{std::move(w), std::move(c)});
    };

    // Coordinate normals first (j = 1 case of the enumeration).
    for (std::size_t i = 0; i < n; ++i) {
        RationalVector e(n, Rational(0));
        e[i] = Rational(1);
        consider(e);
    }

    // j generators + (n - j) coordinate rays, j >= 2: the normal is the
    // nullspace of the differences within the generator subset plus the rays.
    std::uint64_t budget = 4'000'000;
    for (std::size_t j = 2; j <= std::min(k, n); ++j) {
        detail::for_each_combination(k, j, [&](const std::vector<std::size_t>& gsel) {
            detail::for_each_combination(n, n - j, [&](const std::vector<std::size_t>& rsel) {
                if (budget-- == 0)
                    throw Error("build_polyhedron: support too large for exact hull enumeration");
                RationalMatrix rows;
                for (std::size_t t = 1; t < j; ++t) {
                    RationalVector row;
                    row.reserve(n);
                    for (std::size_t i = 0; i < n; ++i)
                        row.emplace_back(Rational(static_cast<long>(gens[gsel[t]][i]) -
                                                  static_cast<long>(gens[gsel[0]][i])));
                    rows.push_back(std::move(row));
                }
                for (auto r : rsel) {
                    RationalVector ray(n, Rational(0));
                    ray[r] = Rational(1);
                    rows.push_back(std::move(ray));
                }
                auto basis = rational_nullspace(std::move(rows), n);
                if (basis.size() == 1) consider(basis[0]);
            });
        });
    }

    NewtonPolyhedron np;
    np.nvars = n;
    np.generators = std::move(gens);
    np.facets.assign(facets.begin(), facets.end());

    // Support checks: every generator on or above every facet, every facet tight
    // somewhere.
    for (const auto& f : np.facets) {
        bool tight = false;
        for (const auto& g : np.generators) {
            Rational v = detail::dot_mi(f.normal, g);
            if (v < f.offset) throw Error("build_polyhedron: facet violates a support point");
            if (v == f.offset) tight = true;
        }
        if (!tight) throw Error("build_polyhedron: non-supporting facet");
    }
    if (np.facets.empty()) throw Error("build_polyhedron: no facets found");
    return np;
}

/// Where the diagonal (t,...,t) first meets the boundary: t0 is the max over
/// facets of offset / sum(normal), and the active facets attain it.
inline std::pair<Rational, std::vector<std::size_t>> diagonal_point(const NewtonPolyhedron& np) {
    if (np.facets.empty()) throw Error("diagonal_point: polyhedron without facets");
    std::optional<Rational> t0;
    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < np.facets.size(); ++i) {
        Rational s(0);
        for (const auto& w : np.facets[i].normal) s += w;
        if (s.is_zero()) throw Error("diagonal_point: facet with zero normal sum (corrupt data)");
        Rational t = np.facets[i].offset / s;
        if (!t0 || t > *t0) {
            t0 = t;
            active.assign(1, i);
        } else if (t == *t0) {
            active.push_back(i);
        }
    }
    return {*t0, active};
}

/// Codimension of tau0, the smallest face containing the diagonal point:
/// rank over Q of all facet normals tight at (t0,...,t0).
inline int tau0_codim(const NewtonPolyhedron& np, const Rational& t0,
                      const std::vector<std::size_t>& active) {
    (void)active;  // recomputed from scratch: "active" must include every tight facet
    RationalMatrix rows;
    for (const auto& f : np.facets) {
        Rational s(0);
        for (const auto& w : f.normal) s += w;
        if (t0 * s == f.offset) rows.push_back(f.normal);
    }
    if (rows.empty()) throw Error("tau0_codim: no facet tight at the diagonal point");
    return static_cast<int>(rational_rank(std::move(rows)));
}

struct NewtonReport {
    Rational t0;
    int tau0_codim = 0;
    std::vector<std::size_t> tau0_active_facets;
    int expected_order = 0;       // = tau0_codim (Denef-Sargos)
    Rational candidate_pole;      // = -1/t0
    bool t0_nonintegral_reciprocal = false;  // 1/t0 not an integer
    bool assumed_nondegenerate = false;      // caller assertion, never verified
    bool assumed_stable = false;             // caller assertion, never verified
};

/// Newton-side candidate for the largest pole: -1/t0 with expected order equal
/// to codim tau0. Nondegeneracy and stability of tau0 are caller assertions
/// recorded in the report.
inline NewtonReport denef_sargos_report(const Polynomial& f,
                                        bool assumed_nondegenerate = false,
                                        bool assumed_stable = false) {
    if (f.is_zero()) throw Error("denef_sargos_report: zero polynomial");
    if (!f.vanishes_at_origin())
        throw Error("denef_sargos_report: f(0) != 0, no singularity at the origin");
    auto np = build_polyhedron(f.support());
    auto [t0, active] = diagonal_point(np);
    NewtonReport r;
    r.t0 = t0;
    r.tau0_active_facets = active;
    r.tau0_codim = tau0_codim(np, t0, active);
    r.expected_order = r.tau0_codim;
    r.candidate_pole = -t0.reciprocal();
    r.t0_nonintegral_reciprocal = !t0.reciprocal().is_integer();
    r.assumed_nondegenerate = assumed_nondegenerate;
    r.assumed_stable = assumed_stable;
    return r;
}

}  // namespace arczeta
