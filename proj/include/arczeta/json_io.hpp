#pragma once

#include <complex>
#include <fstream>
#include <string>

#include <json.hpp>

#include "arczeta/bfunction.hpp"
#include "arczeta/fit.hpp"
#include "arczeta/newton.hpp"
#include "arczeta/parse.hpp"
#include "arczeta/sampling.hpp"
#include "arczeta/snc.hpp"
#include "arczeta/verify.hpp"

namespace arczeta {

using nlohmann::json;

// Rationals cross every JSON boundary as "p/q" strings, never floats.

inline json to_json(const Rational& r) { return r.str(); }

inline Rational rational_from_json(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
    throw Error("expected a rational as \"p/q\" string or integer, got " + j.dump());
}

inline json to_json(const Polynomial& p) {
    json terms = json::array();
    for (const auto& [m, c] : p.terms()) {
        json exp = json::array();
        for (auto e : m) exp.push_back(e);
        terms.push_back({{"exp", exp}, {"re", c.re.str()}, {"im", c.im.str()}});
    }
    return {{"nvars", p.nvars()}, {"terms", terms}};
}

inline Polynomial polynomial_from_json(const json& j) {
    std::size_t nvars = j.at("nvars").get<std::size_t>();
    Polynomial p(nvars);
    for (const auto& t : j.at("terms")) {
        MultiIndex m;
        for (const auto& e : t.at("exp")) m.push_back(e.get<std::uint32_t>());
        GaussianRational c{rational_from_json(t.at("re")),
                           t.contains("im") ? rational_from_json(t.at("im")) : Rational(0)};
        p.add_term(m, c);
    }
    return p;
}

inline json to_json(const BFunction& b) {
    json roots = json::array();
    for (const auto& [alpha, mult] : b.roots()) roots.push_back({alpha.str(), mult});
    return {{"roots", roots}};
}

inline BFunction bfunction_from_json(const json& j) {
    BFunction b;
    for (const auto& r : j.at("roots"))
        b.add_root(rational_from_json(r.at(0)), r.at(1).get<int>());
    return b;
}

inline json to_json(const MinimalExponentReport& r) {
    return {{"alpha_tilde", r.alpha_tilde ? json(r.alpha_tilde->str()) : json(nullptr)},
            {"multiplicity", r.multiplicity},
            {"lct", r.lct.str()}};
}

// Corpus file: { "name": {"roots": [["p/q", m], ...],
//                         "reduced": bool?, "partial": bool?, "f": "poly"? }, ... }
inline Corpus corpus_from_json(const json& j) {
    Corpus corpus;
    for (auto it = j.begin(); it != j.end(); ++it) {
        CorpusEntry entry;
        entry.name = it.key();
        entry.roots = bfunction_from_json(it.value());
        entry.reduced = it.value().value("reduced", false);
        entry.partial = it.value().value("partial", false);
        if (it.value().contains("f"))
            entry.canonical_form =
                parse_polynomial(it.value().at("f").get<std::string>()).canonical_key();
        corpus.insert(std::move(entry));
    }
    return corpus;
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error("malformed JSON in '" + path + "': " + e.what());
    }
    return j;
}

inline Corpus load_corpus_file(const std::string& path) {
    return corpus_from_json(load_json_file(path));
}

// Resolution file: {"divisors":[{"id":"E","a":2,"k":1,"strict_transform":false},...],
//                   "simplices":[["E","Dt"], ...]}
inline ResolutionData resolution_from_json(const json& j) {
    std::vector<DivisorDatum> divisors;
    for (const auto& d : j.at("divisors"))
        divisors.push_back(DivisorDatum{d.at("id").get<std::string>(), d.at("a").get<long>(),
                                        d.at("k").get<long>(),
                                        d.value("strict_transform", false)});
    std::vector<std::vector<std::string>> simplices;
    if (j.contains("simplices"))
        for (const auto& s : j.at("simplices"))
            simplices.push_back(s.get<std::vector<std::string>>());
    std::optional<std::size_t> ambient;
    if (j.contains("nvars")) ambient = j.at("nvars").get<std::size_t>();
    return ResolutionData(std::move(divisors), simplices, ambient);
}

inline ResolutionData load_resolution_file(const std::string& path) {
    return resolution_from_json(load_json_file(path));
}

inline json to_json(const std::vector<CandidatePole>& candidates) {
    json out = json::array();
    for (const auto& c : candidates) {
        json witnesses = json::array();
        for (const auto& w : c.witnesses) {
            json shifts = json::object();
            for (const auto& [id, l] : w.shifts) shifts[id] = l;
            witnesses.push_back({{"simplex", w.simplex}, {"shifts", shifts}});
        }
        out.push_back({{"location", c.location.str()},
                       {"order_bound", c.order_bound},
                       {"witnesses", witnesses}});
    }
    return out;
}

inline json to_json(const Cor17Report& r) {
    return {{"status", r.status == CheckStatus::pass
                           ? "pass"
                           : (r.status == CheckStatus::fail ? "fail" : "inapplicable")},
            {"alpha_tilde", r.alpha_tilde ? json(r.alpha_tilde->str()) : json(nullptr)},
            {"mult_bf", r.mult_bf},
            {"integer_branch", r.integer_branch},
            {"required_dim", r.required_dim},
            {"computed_dim", r.computed_dim}};
}

inline json to_json(const NewtonReport& r) {
    json facets = json::array();
    for (auto i : r.tau0_active_facets) facets.push_back(i);
    return {{"t0", r.t0.str()},
            {"one_over_t0", r.t0.reciprocal().str()},
            {"t0_nonintegral_reciprocal", r.t0_nonintegral_reciprocal},
            {"tau0_codim", r.tau0_codim},
            {"tau0_active_facets", facets},
            {"expected_order", r.expected_order},
            {"candidate_pole", r.candidate_pole.str()},
            {"assumed_nondegenerate", r.assumed_nondegenerate},
            {"assumed_stable", r.assumed_stable}};
}

inline json to_json(const NewtonPolyhedron& np) {
    json facets = json::array();
    for (const auto& f : np.facets) {
        json normal = json::array();
        for (const auto& w : f.normal) normal.push_back(w.str());
        facets.push_back({{"normal", normal}, {"offset", f.offset.str()}});
    }
    json gens = json::array();
    for (const auto& g : np.generators) {
        json m = json::array();
        for (auto e : g) m.push_back(e);
        gens.push_back(m);
    }
    return {{"nvars", np.nvars}, {"generators", gens}, {"facets", facets}};
}

inline json to_json(const Ladder& ladder) {
    json entries = json::array();
    for (const auto& e : ladder.entries) entries.push_back({e.alpha.str(), e.max_logpow});
    return {{"entries", entries}};
}

inline Ladder ladder_from_json(const json& j) {
    Ladder ladder;
    for (const auto& e : j.at("entries"))
        ladder.entries.push_back(LadderEntry{rational_from_json(e.at(0)), e.at(1).get<int>()});
    return ladder;
}

inline json to_json(const AsymptoticModel& m) {
    json terms = json::array();
    for (const auto& t : m.terms)
        terms.push_back({{"alpha", t.alpha.str()},
                         {"logpow", t.logpow},
                         {"coeff", t.coeff},
                         {"coeff_stderr", t.coeff_stderr}});
    return {{"terms", terms},
            {"window", {m.t_lo, m.t_hi}},
            {"condition", m.condition},
            {"chi2_reduced", m.chi2_reduced},
            {"grid_points", m.grid_points},
            {"significance", m.significance},
            {"n_kept", m.n_kept}};
}

inline json to_json(const PoleReport& r) {
    json poles = json::array();
    for (const auto& p : r.poles)
        poles.push_back({{"location", p.location.str()},
                         {"order", p.order},
                         {"leading", p.leading},
                         {"leading_stderr", p.leading_stderr}});
    return {{"poles", poles},
            {"reduced", r.reduced},
            {"provenance", r.provenance == Provenance::exact ? "exact" : "numeric"}};
}

inline json to_json(const ZetaEstimate& z) {
    return {{"value_re", z.value.real()},
            {"value_im", z.value.imag()},
            {"stderr", z.stderr_combined},
            {"n_drawn", z.n_drawn},
            {"n_kept", z.n_kept},
            {"variance_blowup", z.variance_blowup}};
}

inline json to_json(const VerificationReport& r) {
    return {{"claim", claim_name(r.claim)},
            {"status", status_name(r.status)},
            {"subject", r.subject},
            {"details", r.details}};
}

/// "re", "re+imi", "re-imi", "imi" forms, e.g. "0.5+0.5i", "-0.25", "2i".
inline std::complex<double> parse_complex(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw Error("empty complex literal");
    auto parse_d = [](const std::string& t) {
        std::size_t used = 0;
        double v = std::stod(t, &used);
        if (used != t.size()) throw Error("malformed number '" + t + "'");
        return v;
    };
    // pure imaginary or real
    std::size_t split = std::string::npos;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') split = i;
    }
    try {
        if (split == std::string::npos) {
            if (s.back() == 'i') {
                std::string im = s.substr(0, s.size() - 1);
                if (im.empty() || im == "+" || im == "-") im += "1";
                return {0.0, parse_d(im)};
            }
            return {parse_d(s), 0.0};
        }
        std::string re = s.substr(0, split);
        std::string im = s.substr(split);
        if (im.back() != 'i') throw Error("expected trailing 'i' in '" + text + "'");
        im.pop_back();
        if (im == "+" || im == "-") im += "1";
        return {parse_d(re), parse_d(im)};
    } catch (const std::invalid_argument&) {
        throw Error("malformed complex literal '" + text + "'");
    }
}

/// fit.csv: t, F_empirical, F_model on a log grid across the fit window.
inline void write_fit_csv(std::ostream& out, const EmpiricalCDF& cdf, const AsymptoticModel& m,
                          int points = 400) {
    out << "t,F_empirical,F_model\n";
    for (int i = 0; i < points; ++i) {
        double frac = (points == 1) ? 0.0 : static_cast<double>(i) / (points - 1);
        double t = std::exp(std::log(m.t_lo) + frac * (std::log(m.t_hi) - std::log(m.t_lo)));
        double model = 0.0;
        for (const auto& term : m.terms) {
            double v = std::exp(2.0 * term.alpha.to_double() * std::log(t)) * term.coeff;
            for (int p = 0; p < term.logpow; ++p) v *= -std::log(t);
            model += v;
        }
        out << t << "," << cdf.cdf_at(t) << "," << model << "\n";
    }
}

}  // namespace arczeta
