#pragma once

#include <vector>

#include "arczeta/rational.hpp"

namespace arczeta {

using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;

/// Rank over Q by fraction-free-ish Gaussian elimination (exact).
inline std::size_t rational_rank(RationalMatrix m) {
    if (m.empty()) return 0;
    std::size_t rows = m.size(), cols = m[0].size();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && m[pivot][col].is_zero()) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[rank], m[pivot]);
        for (std::size_t r = rank + 1; r < rows; ++r) {
            if (m[r][col].is_zero()) continue;
            Rational factor = m[r][col] / m[rank][col];
            for (std::size_t c = col; c < cols; ++c) m[r][c] -= factor * m[rank][c];
        }
        ++rank;
    }
    return rank;
}

/// Nullspace of the row span: returns a basis of {w : M w = 0}. Exact.
inline std::vector<RationalVector> rational_nullspace(RationalMatrix m, std::size_t cols) {
    std::size_t rows = m.size();
    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && m[pivot][col].is_zero()) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[rank], m[pivot]);
        Rational inv = Rational(1) / m[rank][col];
        for (std::size_t c = col; c < cols; ++c) m[rank][c] *= inv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || m[r][col].is_zero()) continue;
            Rational factor = m[r][col];
            for (std::size_t c = col; c < cols; ++c) m[r][c] -= factor * m[rank][c];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivot_col) is_pivot[c] = true;
    std::vector<RationalVector> basis;
    for (std::size_t free_col = 0; free_col < cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        RationalVector v(cols, Rational(0));
        v[free_col] = Rational(1);
        for (std::size_t r = 0; r < rank; ++r)
            v[pivot_col[r]] = -m[r][free_col];
        basis.push_back(std::move(v));
    }
    return basis;
}

/// Scale a rational vector to the primitive integer vector with the same
/// direction (gcd 1); sign chosen so the first nonzero entry is positive.
inline RationalVector primitive_direction(const RationalVector& v) {
    mpz_class l(1);
    for (const auto& x : v) {
        mpz_class d = x.den();
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), l.get_mpz_t(), d.get_mpz_t());
        l = l / g * d;
    }
    std::vector<mpz_class> ints;
    ints.reserve(v.size());
    mpz_class g(0);
    for (const auto& x : v) {
        mpz_class n = x.num() * (l / x.den());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), n.get_mpz_t());
        ints.push_back(std::move(n));
    }
    if (g == 0) g = 1;
    int sign = 0;
    for (const auto& n : ints)
        if (n != 0) { sign = (n > 0) ? 1 : -1; break; }
    if (sign == 0) sign = 1;
    RationalVector out;
    out.reserve(v.size());
    for (const auto& n : ints) out.emplace_back(Rational(mpz_class(n / g * sign)));
    return out;
}

}  // namespace arczeta
