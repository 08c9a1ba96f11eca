#pragma once

#include <algorithm>
#include <complex>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "arczeta/rational.hpp"

namespace arczeta {

/// Exponent vector of a monomial; length is fixed by the ambient variable count.
using MultiIndex = std::vector<std::uint32_t>;

inline std::uint64_t total_degree(const MultiIndex& m) {
    std::uint64_t d = 0;
    for (auto e : m) d += e;
    return d;
}

/// Graded lexicographic order (degree first, then lex). Canonical term order
/// for printing, hashing and deterministic iteration.
struct GradedLexLess {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const {
        auto da = total_degree(a), db = total_degree(b);
        if (da != db) return da < db;
        return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
    }
};

/// Coefficient in Q(i): exact real and imaginary parts.
struct GaussianRational {
    Rational re;
    Rational im;

    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    bool is_real() const { return im.is_zero(); }

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    GaussianRational operator-() const { return {-re, -im}; }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    std::complex<double> to_complex() const { return {re.to_double(), im.to_double()}; }
};

/// Evaluation point in C^n.
struct ComplexPoint {
    std::vector<std::complex<double>> coordinates;

    std::size_t size() const { return coordinates.size(); }
};

enum class ShapeKind { monomial, brieskorn_pham, other };

/// Gates the exact b-function routines: which closed form (if any) applies.
struct ShapeTag {
    ShapeKind kind = ShapeKind::other;
    /// Monomial: the nonzero exponents in variable order.
    /// Brieskorn-Pham: the per-variable exponents a_i (all >= 2).
    std::vector<std::uint32_t> exponents;
};

/// Sparse multivariate polynomial over Q(i), fixed number of variables,
/// no zero coefficients stored.
class Polynomial {
public:
    using TermMap = std::map<MultiIndex, GaussianRational, GradedLexLess>;

    explicit Polynomial(std::size_t nvars) : nvars_(nvars) {
        if (nvars == 0) throw Error("polynomial needs at least one variable");
    }

    static Polynomial from_terms(std::size_t nvars, TermMap terms) {
        Polynomial p(nvars);
        for (auto& [m, c] : terms) {
            if (m.size() != nvars) throw Error("multi-index length does not match variable count");
            if (!c.is_zero()) p.terms_.emplace(m, c);
        }
        return p;
    }

    std::size_t nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    std::size_t term_count() const { return terms_.size(); }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() ||
               (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
    }
    bool vanishes_at_origin() const {
        MultiIndex zero(nvars_, 0);
        return terms_.find(zero) == terms_.end();
    }

    void add_term(const MultiIndex& m, const GaussianRational& c) {
        if (m.size() != nvars_) throw Error("multi-index length does not match variable count");
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            if (!c.is_zero()) terms_.emplace(m, c);
            return;
        }
        it->second = it->second + c;
        if (it->second.is_zero()) terms_.erase(it);
    }

    std::set<MultiIndex, GradedLexLess> support() const {
        if (is_zero()) throw Error("support of the zero polynomial");
        std::set<MultiIndex, GradedLexLess> s;
        for (const auto& [m, c] : terms_) s.insert(m);
        return s;
    }

    std::uint64_t degree() const {
        std::uint64_t d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, total_degree(m));
        return d;
    }

    std::complex<double> evaluate(const ComplexPoint& x) const {
        if (x.size() != nvars_) throw Error("evaluation point dimension mismatch");
        return evaluate(std::span<const std::complex<double>>(x.coordinates));
    }

    std::complex<double> evaluate(std::span<const std::complex<double>> x) const {
        if (x.size() != nvars_) throw Error("evaluation point dimension mismatch");
        std::complex<double> acc{0.0, 0.0};
        for (const auto& [m, c] : terms_) {
            std::complex<double> t = c.to_complex();
            for (std::size_t v = 0; v < nvars_; ++v) {
                std::complex<double> p{1.0, 0.0};
                std::complex<double> base = x[v];
                for (std::uint32_t e = m[v]; e > 0; e >>= 1) {
                    if (e & 1) p *= base;
                    base *= base;
                }
                t *= p;
            }
            acc += t;
        }
        return acc;
    }

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
        if (a.nvars_ != b.nvars_) throw Error("adding polynomials in different variable counts");
        Polynomial r = a;
        for (const auto& [m, c] : b.terms_) r.add_term(m, c);
        return r;
    }

    friend Polynomial operator-(const Polynomial& a, const Polynomial& b) {
        if (a.nvars_ != b.nvars_) throw Error("subtracting polynomials in different variable counts");
        Polynomial r = a;
        for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
        return r;
    }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        if (a.nvars_ != b.nvars_) throw Error("multiplying polynomials in different variable counts");
        Polynomial r(a.nvars_);
        for (const auto& [ma, ca] : a.terms_)
            for (const auto& [mb, cb] : b.terms_) {
                MultiIndex m(a.nvars_);
                for (std::size_t v = 0; v < a.nvars_; ++v) m[v] = ma[v] + mb[v];
                r.add_term(m, ca * cb);
            }
        return r;
    }

    friend bool operator==(const Polynomial& a, const Polynomial& b) {
        return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
    }

    ShapeTag classify_shape() const {
        if (is_zero()) throw Error("classify_shape of the zero polynomial");
        ShapeTag tag;
        if (terms_.size() == 1) {
            tag.kind = ShapeKind::monomial;
            for (auto e : terms_.begin()->first)
                if (e > 0) tag.exponents.push_back(e);
            return tag;
        }
        // Brieskorn-Pham: one term c_i * x_i^{a_i} per variable, every variable
        // present, all a_i >= 2.
        if (terms_.size() == nvars_) {
            std::vector<std::uint32_t> a(nvars_, 0);
            bool ok = true;
            for (const auto& [m, c] : terms_) {
                std::size_t nz = 0, idx = 0;
                for (std::size_t v = 0; v < nvars_; ++v)
                    if (m[v] > 0) { ++nz; idx = v; }
                if (nz != 1 || m[idx] < 2 || a[idx] != 0) { ok = false; break; }
                a[idx] = m[idx];
            }
            if (ok) {
                tag.kind = ShapeKind::brieskorn_pham;
                tag.exponents = std::move(a);
                return tag;
            }
        }
        return tag;
    }

    /// Canonical text form: graded-lex descending terms, explicit '*' products,
    /// coefficients split into real and imaginary grammar terms. Round-trips
    /// through parse_polynomial.
    std::string str(const std::vector<std::string>& names) const {
        if (names.size() != nvars_) throw Error("variable name list length mismatch");
        if (terms_.empty()) return "0";
        std::ostringstream out;
        bool first = true;
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            const auto& [m, c] = *it;
            if (!c.re.is_zero()) append_term(out, first, c.re, false, m, names);
            if (!c.im.is_zero()) append_term(out, first, c.im, true, m, names);
        }
        return out.str();
    }

    std::string str() const { return str(default_names(nvars_)); }

    /// Name-independent canonical key (x1..xn naming); used for corpus lookup.
    std::string canonical_key() const {
        std::vector<std::string> names;
        for (std::size_t v = 1; v <= nvars_; ++v) names.push_back("x" + std::to_string(v));
        return str(names);
    }

    static std::vector<std::string> default_names(std::size_t n) {
        static const char* xyzw[4] = {"x", "y", "z", "w"};
        std::vector<std::string> names;
        if (n <= 4) {
            for (std::size_t v = 0; v < n; ++v) names.push_back(xyzw[v]);
        } else {
            for (std::size_t v = 1; v <= n; ++v) names.push_back("x" + std::to_string(v));
        }
        return names;
    }

private:
    static void append_term(std::ostringstream& out, bool& first, const Rational& coeff,
                            bool imaginary, const MultiIndex& m, const std::vector<std::string>& names) {
        Rational a = coeff;
        bool neg = a < Rational(0);
        if (neg) a = -a;
        if (first) {
            if (neg) out << "-";
            first = false;
        } else {
            out << (neg ? " - " : " + ");
        }
        bool coeff_is_one = (a == Rational(1));
        bool has_powers = total_degree(m) > 0;
        bool wrote = false;
        if (!coeff_is_one || (!imaginary && !has_powers)) {
            out << a.str();
            wrote = true;
        }
        if (imaginary) {
            if (wrote) out << "*";
            out << "i";
            wrote = true;
        }
        for (std::size_t v = 0; v < m.size(); ++v) {
            if (m[v] == 0) continue;
            if (wrote) out << "*";
            out << names[v];
            if (m[v] > 1) out << "^" << m[v];
            wrote = true;
        }
    }

    std::size_t nvars_;
    TermMap terms_;
};

/// Flattened evaluator for the sampling hot loop: per-variable power tables,
/// coefficients pre-converted to double.
class PolynomialEvaluator {
public:
    explicit PolynomialEvaluator(const Polynomial& p) : nvars_(p.nvars()) {
        max_exp_.assign(nvars_, 0);
        for (const auto& [m, c] : p.terms()) {
            Term t;
            t.coeff = c.to_complex();
            t.exps.assign(m.begin(), m.end());
            for (std::size_t v = 0; v < nvars_; ++v)
                max_exp_[v] = std::max(max_exp_[v], m[v]);
            terms_.push_back(std::move(t));
        }
        std::size_t total = 0;
        for (std::size_t v = 0; v < nvars_; ++v) total += max_exp_[v] + 1;
        pow_scratch_.resize(total);
        offsets_.resize(nvars_);
        std::size_t off = 0;
        for (std::size_t v = 0; v < nvars_; ++v) {
            offsets_[v] = off;
            off += max_exp_[v] + 1;
        }
    }

    std::size_t nvars() const { return nvars_; }

    std::complex<double> operator()(const std::complex<double>* x) {
        for (std::size_t v = 0; v < nvars_; ++v) {
            auto* pw = pow_scratch_.data() + offsets_[v];
            pw[0] = {1.0, 0.0};
            for (std::uint32_t e = 1; e <= max_exp_[v]; ++e) pw[e] = pw[e - 1] * x[v];
        }
        std::complex<double> acc{0.0, 0.0};
        for (const auto& t : terms_) {
            std::complex<double> val = t.coeff;
            for (std::size_t v = 0; v < nvars_; ++v) {
                std::uint32_t e = t.exps[v];
                if (e) val *= pow_scratch_[offsets_[v] + e];
            }
            acc += val;
        }
        return acc;
    }

private:
    struct Term {
        std::complex<double> coeff;
        std::vector<std::uint32_t> exps;
    };
    std::size_t nvars_;
    std::vector<Term> terms_;
    std::vector<std::uint32_t> max_exp_;
    std::vector<std::size_t> offsets_;
    std::vector<std::complex<double>> pow_scratch_;
};

}  // namespace arczeta
