#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "arczeta/rational.hpp"

namespace arczeta {

/// One divisor of a log resolution: multiplicity a in pi*D, discrepancy k in
/// K_{X~/X}, and whether it is the strict transform of D.
struct DivisorDatum {
    std::string id;
    long a = 1;
    long k = 0;
    bool strict_transform = false;
};

/// Resolution numerics plus the incidence (dual) complex. Simplices are stored
/// downward-closed with every divisor present as a 0-simplex.
class ResolutionData {
public:
    ResolutionData(std::vector<DivisorDatum> divisors,
                   const std::vector<std::vector<std::string>>& simplices,
                   std::optional<std::size_t> ambient_dim = std::nullopt)
        : ambient_dim_(ambient_dim) {
        if (divisors.empty()) throw Error("resolution data needs at least one divisor");
        std::set<std::string> ids;
        for (const auto& d : divisors) {
            if (d.a < 1) throw Error("divisor '" + d.id + "': multiplicity a must be >= 1");
            if (d.k < 0) throw Error("divisor '" + d.id + "': discrepancy k must be >= 0");
            if (!ids.insert(d.id).second) throw Error("duplicate divisor id '" + d.id + "'");
        }
        divisors_ = std::move(divisors);
        // Normalize: downward closure, singletons always present.
        for (const auto& d : divisors_) simplices_.insert({d.id});
        for (const auto& s : simplices) {
            std::vector<std::string> sorted = s;
            std::sort(sorted.begin(), sorted.end());
            sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
            for (const auto& id : sorted)
                if (!ids.count(id)) throw Error("simplex references unknown divisor '" + id + "'");
            insert_with_subsets(sorted);
        }
    }

    const std::vector<DivisorDatum>& divisors() const { return divisors_; }
    const std::set<std::vector<std::string>>& simplices() const { return simplices_; }
    /// Dimension of the ambient space, when the data records it.
    std::optional<std::size_t> ambient_dim() const { return ambient_dim_; }

    const DivisorDatum& divisor(const std::string& id) const {
        for (const auto& d : divisors_)
            if (d.id == id) return d;
        throw Error("unknown divisor id '" + id + "'");
    }

private:
    void insert_with_subsets(const std::vector<std::string>& s) {
        if (s.empty()) return;
        std::size_t n = s.size();
        for (std::size_t mask = 1; mask < (std::size_t(1) << n); ++mask) {
            std::vector<std::string> sub;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (std::size_t(1) << i)) sub.push_back(s[i]);
            simplices_.insert(std::move(sub));
        }
    }

    std::optional<std::size_t> ambient_dim_;
    std::vector<DivisorDatum> divisors_;
    std::set<std::vector<std::string>> simplices_;
};

/// Exact candidate pole with its chart-wise order bound.
struct CandidatePole {
    Rational location;  // negative
    int order_bound = 1;
    struct Witness {
        std::vector<std::string> simplex;
        std::map<std::string, long> shifts;  // divisor id -> l with location = -(k+1+l)/a
    };
    std::vector<Witness> witnesses;
};

namespace detail {

/// Shift l >= 0 with magnitude = (k+1+l)/a, if any.
inline std::optional<long> shift_for(const DivisorDatum& d, const Rational& magnitude) {
    Rational l = magnitude * Rational(d.a) - Rational(d.k + 1);
    if (!l.is_integer() || l < Rational(0)) return std::nullopt;
    return static_cast<long>(l.floor().get_si());
}

}  // namespace detail

/// All candidate poles -(k_i+1+l)/a_i >= floor, sorted descending by location,
/// with order bound at beta = max over simplices of the number of member
/// divisors matching beta (with any shift l >= 0).
inline std::vector<CandidatePole> candidate_poles(const ResolutionData& res, const Rational& floor) {
    if (!(floor < Rational(0))) throw Error("candidate_poles: floor must be negative");
    Rational bound = -floor;  // magnitudes in (0, bound]

    std::set<Rational> magnitudes;
    for (const auto& d : res.divisors()) {
        for (long l = 0;; ++l) {
            Rational m = Rational(d.k + 1 + l, d.a);
            if (m > bound) break;
            magnitudes.insert(m);
        }
    }

    std::vector<CandidatePole> out;
    for (auto it = magnitudes.begin(); it != magnitudes.end(); ++it) {
        const Rational& m = *it;
        CandidatePole cp;
        cp.location = -m;
        int best = 0;
        for (const auto& simplex : res.simplices()) {
            std::map<std::string, long> shifts;
            for (const auto& id : simplex) {
                if (auto l = detail::shift_for(res.divisor(id), m)) shifts[id] = *l;
            }
            int count = static_cast<int>(shifts.size());
            if (count == 0 || count < static_cast<int>(simplex.size())) continue;
            // only fully-matching simplices witness joint vanishing
            if (count > best) {
                best = count;
                cp.witnesses.clear();
            }
            if (count == best)
                cp.witnesses.push_back(CandidatePole::Witness{simplex, std::move(shifts)});
        }
        if (best == 0) continue;
        cp.order_bound = best;
        out.push_back(std::move(cp));
    }
    std::sort(out.begin(), out.end(),
              [](const CandidatePole& a, const CandidatePole& b) { return b.location < a.location; });
    return out;
}

/// Log canonical threshold from resolution numerics: min over divisors of
/// (k+1)/a, capped at 1.
inline Rational lct_snc(const ResolutionData& res) {
    std::optional<Rational> m;
    for (const auto& d : res.divisors()) {
        Rational v(d.k + 1, d.a);
        if (!m || v < *m) m = v;
    }
    return min(*m, Rational(1));
}

/// min over exceptional (non-strict-transform) divisors of (k+1)/a; nullopt
/// encodes +infinity when every divisor is a strict transform. A lower bound
/// for the minimal exponent only; the inequality can be strict.
inline std::optional<Rational> min_exponent_lower_bound(const ResolutionData& res) {
    std::optional<Rational> m;
    for (const auto& d : res.divisors()) {
        if (d.strict_transform) continue;
        Rational v(d.k + 1, d.a);
        if (!m || v < *m) m = v;
    }
    return m;
}

/// Dimension of the induced dual subcomplex on J = {divisors computing alpha
/// with some shift l >= 0}; -1 when J is empty. The shift is determined by
/// alpha (l = alpha*a - k - 1), so membership is exact with no l bound.
inline int dual_complex_dim_at(const ResolutionData& res, const Rational& alpha) {
    if (!(alpha > Rational(0))) throw Error("dual_complex_dim_at: alpha must be positive");
    std::set<std::string> J;
    for (const auto& d : res.divisors())
        if (detail::shift_for(d, alpha)) J.insert(d.id);
    int dim = -1;
    for (const auto& simplex : res.simplices()) {
        bool inside = true;
        for (const auto& id : simplex)
            if (!J.count(id)) { inside = false; break; }
        if (inside) dim = std::max(dim, static_cast<int>(simplex.size()) - 1);
    }
    return dim;
}

enum class CheckStatus { pass, fail, inapplicable };

/// dim N(pi, alpha~) >= mult b_f (alpha~ integer >= 2) or mult - 1 (otherwise).
struct Cor17Report {
    CheckStatus status = CheckStatus::inapplicable;
    std::optional<Rational> alpha_tilde;
    int mult_bf = 0;
    bool integer_branch = false;  // alpha~ in Z_{>=2}
    int required_dim = 0;
    int computed_dim = -1;
};

inline Cor17Report check_cor17(const ResolutionData& res,
                               const std::optional<Rational>& alpha_tilde, int mult_bf) {
    Cor17Report r;
    r.alpha_tilde = alpha_tilde;
    r.mult_bf = mult_bf;
    if (!alpha_tilde) {
        r.status = CheckStatus::inapplicable;  // smooth case, alpha~ = +infinity
        return r;
    }
    r.integer_branch = alpha_tilde->is_integer() && *alpha_tilde >= Rational(2);
    r.required_dim = r.integer_branch ? mult_bf : mult_bf - 1;
    r.computed_dim = dual_complex_dim_at(res, *alpha_tilde);
    r.status = (r.computed_dim >= r.required_dim) ? CheckStatus::pass : CheckStatus::fail;
    return r;
}

}  // namespace arczeta
