#pragma once

#include <future>
#include <optional>
#include <string>
#include <vector>

#include "arczeta/json_io.hpp"

namespace arczeta {

/// One corpus polynomial with its plans and the claims to check.
struct SuiteCase {
    std::string name;
    std::string f_text;
    std::optional<std::string> bfun_name;
    std::optional<ResolutionData> resolution;
    SamplePlan plan;
    std::optional<Rational> floor_location;
    std::vector<Claim> claims;
    bool run_region = false;
    std::vector<RegionCase> regions;
    std::optional<Rational> region_target;
    bool newton_matches_alpha = false;
    bool stretch = false;
    std::vector<std::complex<double>> shift_s_values{{0.0, 0.0}, {0.5, 0.0}, {1.0, 0.0}};
};

struct SuiteConfig {
    std::vector<SuiteCase> cases;
    Corpus corpus;
    bool include_stretch = false;
};

namespace detail {

inline std::optional<CorpusEntry> resolve_bfunction(const SuiteCase& c, const Corpus& corpus,
                                                    const Polynomial& f) {
    if (c.bfun_name) {
        CorpusEntry e = corpus.load(*c.bfun_name);
        return e;
    }
    auto tag = f.classify_shape();
    if (tag.kind == ShapeKind::monomial) {
        CorpusEntry e;
        e.name = "(monomial)";
        e.roots = bfun_monomial(tag.exponents);
        return e;
    }
    if (tag.kind == ShapeKind::brieskorn_pham) {
        CorpusEntry e;
        e.name = "(brieskorn-pham)";
        e.roots = bfun_brieskorn_pham(tag.exponents);
        e.reduced = true;
        return e;
    }
    if (const auto* hit = corpus.find_by_canonical_form(f.canonical_key())) return *hit;
    return std::nullopt;
}

inline VerificationReport missing_bfun_report(Claim claim, const Polynomial& f) {
    VerificationReport rep;
    rep.claim = claim;
    rep.subject = f.str();
    rep.status = VerifyStatus::inapplicable;
    rep.details = {{"reason", "no exact b-function available (not monomial/Brieskorn-Pham, no corpus entry)"}};
    return rep;
}

inline std::vector<VerificationReport> run_case(const SuiteCase& c, const Corpus& corpus,
                                                bool include_stretch) {
    std::vector<VerificationReport> out;
    Polynomial f = parse_polynomial(c.f_text);
    if (c.stretch && !include_stretch) {
        for (Claim claim : c.claims) {
            VerificationReport rep;
            rep.claim = claim;
            rep.subject = f.str();
            rep.status = VerifyStatus::inapplicable;
            rep.details = {{"reason", "stretch case (non-gating), run with --stretch to execute"}};
            out.push_back(std::move(rep));
        }
        return out;
    }

    auto entry = resolve_bfunction(c, corpus, f);
    std::optional<BFunction> b_full, b_reduced;
    if (entry) {
        b_full = entry->full();
        b_reduced = entry->reduced_part();
    }
    Rational floor_loc = c.floor_location
                             ? *c.floor_location
                             : -Rational(static_cast<long>(f.nvars()) + 1);
    auto me = b_reduced ? minimal_exponent(*b_reduced) : MinimalExponentReport{};

    for (Claim claim : c.claims) {
        switch (claim) {
            case Claim::min_exponent_pole: {
                if (!b_reduced) { out.push_back(missing_bfun_report(claim, f)); break; }
                out.push_back(verify_min_exponent(f, *b_reduced, c.plan, c.floor_location));
                break;
            }
            case Claim::largest_pole_is_lct: {
                if (!b_full) { out.push_back(missing_bfun_report(claim, f)); break; }
                auto ladder = ladder_from_bfunction(*b_full, floor_loc);
                out.push_back(verify_largest_pole_lct(f, me.lct, ladder, c.plan));
                break;
            }
            case Claim::gamma_reduction: {
                if (!b_full) { out.push_back(missing_bfun_report(claim, f)); break; }
                auto ladder = ladder_from_bfunction(*b_full, floor_loc);
                auto res = detect_poles(f, c.plan, ladder);
                auto rep = verify_gamma_reduction(f, res.unreduced, res.reduced);
                auto tag = f.classify_shape();
                if (tag.kind == ShapeKind::monomial) {
                    auto exact = exact_monomial_pole_report(tag.exponents, floor_loc);
                    auto exact_re = reduce_by_gamma(exact);
                    auto exact_rep = verify_gamma_reduction(f, exact, exact_re);
                    if (exact_rep.status == VerifyStatus::fail) rep.status = VerifyStatus::fail;
                    rep.details["exact"] = exact_rep.details;
                }
                out.push_back(std::move(rep));
                break;
            }
            case Claim::shift_identity:
                out.push_back(verify_shift_identity(f, c.plan, c.shift_s_values));
                break;
            case Claim::cor17: {
                VerificationReport rep;
                if (!c.resolution) {
                    rep.claim = claim;
                    rep.subject = f.str();
                    rep.status = VerifyStatus::inapplicable;
                    rep.details = {{"reason", "no resolution data supplied"}};
                    out.push_back(std::move(rep));
                    break;
                }
                int mult = (b_full && me.finite()) ? b_full->multiplicity(*me.alpha_tilde) : 0;
                rep = verify_cor17(*c.resolution, me.alpha_tilde, mult);
                rep.subject = f.str();
                out.push_back(std::move(rep));
                break;
            }
            case Claim::snc_consistency: {
                if (!c.resolution) {
                    VerificationReport rep;
                    rep.claim = claim;
                    rep.subject = f.str();
                    rep.status = VerifyStatus::inapplicable;
                    rep.details = {{"reason", "no resolution data supplied"}};
                    out.push_back(std::move(rep));
                    break;
                }
                out.push_back(verify_snc_consistency(f, *c.resolution, c.plan, floor_loc));
                break;
            }
            case Claim::newton_consistency: {
                bool expect = c.newton_matches_alpha ||
                              f.classify_shape().kind == ShapeKind::brieskorn_pham;
                out.push_back(verify_newton_consistency(f, me.alpha_tilde, expect && me.finite()));
                break;
            }
        }
    }

    if (c.run_region) {
        if (!b_full || !c.region_target)
            throw Error("suite case '" + c.name + "': region check needs a b-function and a target");
        auto ladder = ladder_from_bfunction(*b_full, floor_loc);
        out.push_back(verify_region_localization(f, c.regions, c.plan, ladder, *c.region_target));
    }
    return out;
}

}  // namespace detail

/// Execute every applicable claim of every case. Cases run in parallel;
/// reports are merged in case order, then claim order within the case.
inline std::vector<VerificationReport> run_suite(const SuiteConfig& config) {
    std::vector<std::future<std::vector<VerificationReport>>> futures;
    unsigned hw = std::thread::hardware_concurrency();
    bool parallel = hw > 1 && config.cases.size() > 1;
    futures.reserve(config.cases.size());
    for (const SuiteCase& c : config.cases) {
        const SuiteCase* cp = &c;
        futures.push_back(std::async(parallel ? std::launch::async : std::launch::deferred,
                                     [cp, &config]() {
                                         return detail::run_case(*cp, config.corpus,
                                                                 config.include_stretch);
                                     }));
    }
    std::vector<VerificationReport> out;
    for (auto& fu : futures) {
        auto reports = fu.get();
        out.insert(out.end(), reports.begin(), reports.end());
    }
    return out;
}

inline bool all_passed(const std::vector<VerificationReport>& reports) {
    for (const auto& r : reports)
        if (r.failed()) return false;
    return true;
}

/// Suite config JSON:
/// {"corpus": "path", "cases": [{"name", "f", "bfun"?, "resolution"?, "floor"?,
///  "plan": {"samples", "seed", "sampler"?}, "claims": [...],
///  "regions"?: [{"center": [..], "radius", "meets_locus", "label"?}],
///  "region_target"?, "newton_matches_alpha"?, "stretch"?}]}
/// Relative paths resolve against base_dir.
inline SuiteConfig suite_config_from_json(const json& j, const std::string& base_dir = ".") {
    auto resolve_path = [&](const std::string& p) {
        if (p.empty() || p.front() == '/') return p;
        return base_dir + "/" + p;
    };
    SuiteConfig config;
    if (j.contains("corpus")) config.corpus = load_corpus_file(resolve_path(j.at("corpus")));
    for (const auto& cj : j.value("cases", json::array())) {
        SuiteCase c;
        c.name = cj.value("name", std::string("case") + std::to_string(config.cases.size()));
        c.f_text = cj.at("f").get<std::string>();
        if (cj.contains("bfun")) c.bfun_name = cj.at("bfun").get<std::string>();
        if (cj.contains("resolution"))
            c.resolution = load_resolution_file(resolve_path(cj.at("resolution")));
        if (cj.contains("floor")) c.floor_location = rational_from_json(cj.at("floor"));
        if (cj.contains("plan")) {
            const auto& pj = cj.at("plan");
            c.plan.nsamples = pj.value("samples", std::uint64_t{1'000'000});
            if (!pj.contains("seed"))
                throw Error("suite case '" + c.name + "': plan.seed is mandatory for reproducibility");
            c.plan.seed = pj.at("seed").get<std::uint64_t>();
            std::string sampler = pj.value("sampler", "pseudo_random");
            if (sampler == "low_discrepancy") c.plan.sampler = SamplerKind::low_discrepancy;
            else if (sampler == "pseudo_random") c.plan.sampler = SamplerKind::pseudo_random;
            else throw Error("unknown sampler '" + sampler + "'");
        }
        for (const auto& cl : cj.value("claims", json::array())) {
            std::string name = cl.get<std::string>();
            if (name == "region_localization") c.run_region = true;
            else c.claims.push_back(claim_from_name(name));
        }
        for (const auto& rj : cj.value("regions", json::array())) {
            RegionCase rc;
            for (const auto& coord : rj.at("center"))
                rc.region.center.coordinates.push_back(
                    coord.is_string() ? parse_complex(coord.get<std::string>())
                                      : std::complex<double>(coord.get<double>(), 0.0));
            rc.region.radius = rj.at("radius").get<double>();
            rc.meets_locus = rj.at("meets_locus").get<bool>();
            rc.label = rj.value("label", "");
            c.regions.push_back(std::move(rc));
        }
        if (cj.contains("region_target")) c.region_target = rational_from_json(cj.at("region_target"));
        c.newton_matches_alpha = cj.value("newton_matches_alpha", false);
        c.stretch = cj.value("stretch", false);
        config.cases.push_back(std::move(c));
    }
    return config;
}

}  // namespace arczeta
