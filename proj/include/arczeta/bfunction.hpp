#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "arczeta/polynomial.hpp"

namespace arczeta {

/// Bernstein-Sato data as a root multiset. A root -alpha (always a negative
/// rational here) is stored under its positive magnitude alpha.
class BFunction {
public:
    using RootMap = std::map<Rational, int>;

    BFunction() = default;
    explicit BFunction(RootMap roots) {
        for (auto& [alpha, mult] : roots) {
            if (!(alpha > Rational(0))) throw Error("b-function root magnitudes must be positive");
            if (mult < 1) throw Error("b-function multiplicities must be >= 1");
        }
        roots_ = std::move(roots);
    }

    const RootMap& roots() const { return roots_; }
    bool empty() const { return roots_.empty(); }

    int multiplicity(const Rational& alpha) const {
        auto it = roots_.find(alpha);
        return it == roots_.end() ? 0 : it->second;
    }

    void add_root(const Rational& alpha, int mult = 1) {
        if (!(alpha > Rational(0))) throw Error("b-function root magnitudes must be positive");
        if (mult < 1) throw Error("b-function multiplicities must be >= 1");
        roots_[alpha] += mult;
    }

    friend bool operator==(const BFunction& a, const BFunction& b) { return a.roots_ == b.roots_; }

private:
    RootMap roots_;
};

/// b-function of a monomial prod x_i^{a_i}: the classical functional equation
/// prod d_i^{a_i} applied to the monomial power gives roots {j/a_i : 1 <= j <= a_i},
/// multiplicities from coincidences. Returns the full b (root 1 included).
inline BFunction bfun_monomial(const std::vector<std::uint32_t>& a) {
    if (a.empty()) throw Error("bfun_monomial: empty exponent vector");
    BFunction b;
    for (auto ai : a) {
        if (ai < 1) throw Error("bfun_monomial: exponents must be >= 1");
        for (std::uint32_t j = 1; j <= ai; ++j)
            b.add_root(Rational(static_cast<long>(j), static_cast<long>(ai)));
    }
    return b;
}

/// Reduced b-function of a Brieskorn-Pham polynomial sum c_i x_i^{a_i}
/// (quasi-homogeneous isolated singularity): root set
/// { sum_i (m_i+1)/a_i : 0 <= m_i <= a_i-2 }, each with multiplicity 1 even
/// when different m realize the same sum. Full b = result + root 1.
inline BFunction bfun_brieskorn_pham(const std::vector<std::uint32_t>& a) {
    if (a.empty()) throw Error("bfun_brieskorn_pham: empty exponent vector");
    for (auto ai : a)
        if (ai < 2) throw Error("bfun_brieskorn_pham: exponents must be >= 2");
    std::vector<std::uint32_t> m(a.size(), 0);
    std::map<Rational, int> roots;
    for (;;) {
        Rational sum(0);
        for (std::size_t i = 0; i < a.size(); ++i)
            sum += Rational(static_cast<long>(m[i]) + 1, static_cast<long>(a[i]));
        roots[sum] = 1;  // coincident sums still carry multiplicity 1
        std::size_t i = 0;
        for (; i < a.size(); ++i) {
            if (m[i] + 2 < a[i]) { ++m[i]; break; }
            m[i] = 0;
        }
        if (i == a.size()) break;
    }
    return BFunction(std::move(roots));
}

/// b_f(s) / (s+1): decrement the multiplicity at root 1. Since (s+1) divides
/// the b-function of every nonconstant f, a missing root 1 signals corrupt input.
inline BFunction reduce(const BFunction& b) {
    auto roots = b.roots();
    auto it = roots.find(Rational(1));
    if (it == roots.end()) throw Error("reduce: b(-1) != 0, not a b-function of a nonconstant f");
    if (--it->second == 0) roots.erase(it);
    return BFunction(std::move(roots));
}

/// Full b from reduced: adjoin root 1 with multiplicity +1.
inline BFunction unreduce(const BFunction& b_reduced) {
    auto roots = b_reduced.roots();
    roots[Rational(1)] += 1;
    return BFunction(std::move(roots));
}

struct MinimalExponentReport {
    /// nullopt encodes the +infinity sentinel (smooth case, empty reduced root set).
    std::optional<Rational> alpha_tilde;
    int multiplicity = 0;
    Rational lct{1};

    bool finite() const { return alpha_tilde.has_value(); }
};

/// Minimal exponent from a reduced b-function: the smallest stored magnitude
/// (largest root of b~), its multiplicity, and lct = min(alpha~, 1).
inline MinimalExponentReport minimal_exponent(const BFunction& b_reduced) {
    MinimalExponentReport r;
    if (b_reduced.empty()) {
        r.alpha_tilde = std::nullopt;
        r.multiplicity = 0;
        r.lct = Rational(1);
        return r;
    }
    const auto& [alpha, mult] = *b_reduced.roots().begin();
    r.alpha_tilde = alpha;
    r.multiplicity = mult;
    r.lct = min(alpha, Rational(1));
    return r;
}

/// Root multiset of the b-function attached to the graph-embedding generator
/// at level l: every reduced root magnitude alpha becomes alpha + l, and root 1
/// (multiplicity 1) is adjoined. At l = 0 this recovers the full b_f.
inline BFunction shift_graph_generator(const BFunction& b_reduced, unsigned l) {
    BFunction::RootMap roots;
    for (const auto& [alpha, mult] : b_reduced.roots())
        roots[alpha + Rational(static_cast<long>(l))] += mult;
    roots[Rational(1)] += 1;
    return BFunction(std::move(roots));
}

/// User-extensible corpus entry. "reduced" marks roots of b~ rather than b;
/// "partial" marks entries listing only the roots pinned by the literature,
/// with unlisted roots unknown rather than absent.
struct CorpusEntry {
    std::string name;
    BFunction roots;
    bool reduced = false;
    bool partial = false;
    /// Canonical key of the polynomial this entry describes, when known.
    std::optional<std::string> canonical_form;

    BFunction full() const { return reduced ? unreduce(roots) : roots; }
    BFunction reduced_part() const { return reduced ? roots : reduce(roots); }
};

class Corpus {
public:
    void insert(CorpusEntry entry) {
        entries_[entry.name] = std::move(entry);
    }

    const CorpusEntry& load(const std::string& name) const {
        auto it = entries_.find(name);
        if (it == entries_.end()) throw Error("unknown corpus entry '" + name + "'");
        return it->second;
    }

    const CorpusEntry* find_by_canonical_form(const std::string& key) const {
        for (const auto& [name, entry] : entries_)
            if (entry.canonical_form && *entry.canonical_form == key) return &entry;
        return nullptr;
    }

    const std::map<std::string, CorpusEntry>& entries() const { return entries_; }

private:
    std::map<std::string, CorpusEntry> entries_;
};

/// Corpus lookup by name; the loader for the JSON corpus file lives in json_io.hpp.
inline BFunction load_corpus_entry(const Corpus& corpus, const std::string& name) {
    return corpus.load(name).roots;
}

/// Exact b-function route for the shapes the library handles itself; falls back
/// to corpus lookup by canonical form. Returns the FULL b_f.
inline std::optional<BFunction> exact_bfunction(const Polynomial& f, const Corpus* corpus = nullptr) {
    auto tag = f.classify_shape();
    if (tag.kind == ShapeKind::monomial) return bfun_monomial(tag.exponents);
    if (tag.kind == ShapeKind::brieskorn_pham) return unreduce(bfun_brieskorn_pham(tag.exponents));
    if (corpus) {
        if (const auto* entry = corpus->find_by_canonical_form(f.canonical_key()))
            return entry->full();
    }
    return std::nullopt;
}

}  // namespace arczeta
