// arczeta: compute and cross-check Archimedean zeta invariants of polynomial
// singularities from the command line. stdout carries machine-readable JSON
// only; diagnostics go to stderr. Exit codes: 0 success, 1 verification
// failure, 2 usage or input error.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "arczeta/json_io.hpp"
#include "arczeta/suite.hpp"

namespace {

using namespace arczeta;

std::string dirname_of(const std::string& path) {
    auto pos = path.find_last_of('/');
    return pos == std::string::npos ? std::string(".") : path.substr(0, pos);
}

SampleRegion parse_region_flag(const std::string& text, std::size_t nvars) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == ',') { parts.push_back(cur); cur.clear(); }
        else cur += ch;
    }
    parts.push_back(cur);
    if (parts.size() != nvars + 1)
        throw Error("--region needs " + std::to_string(nvars) + " center coordinates plus a radius");
    SampleRegion region;
    for (std::size_t i = 0; i < nvars; ++i)
        region.center.coordinates.push_back(parse_complex(parts[i]));
    region.radius = std::stod(parts.back());
    return region;
}

void emit(const json& j) { std::cout << j.dump(2) << std::endl; }

struct ZetaCommon {
    std::string f_text;
    std::uint64_t samples = 1'000'000;
    std::int64_t seed = -1;
    std::string sampler = "pseudo_random";
    std::string region_text;

    SamplePlan plan(std::size_t nvars) const {
        SamplePlan p;
        p.nsamples = samples;
        if (seed < 0) {
            p.seed = 1;
            std::cerr << "note: no --seed given, using default seed 1\n";
        } else {
            p.seed = static_cast<std::uint64_t>(seed);
        }
        if (sampler == "low_discrepancy" || sampler == "qmc")
            p.sampler = SamplerKind::low_discrepancy;
        else if (sampler == "pseudo_random" || sampler == "pseudo")
            p.sampler = SamplerKind::pseudo_random;
        else
            throw Error("unknown sampler '" + sampler + "'");
        if (!region_text.empty()) p.region = parse_region_flag(region_text, nvars);
        return p;
    }
};

Ladder resolve_ladder(const std::string& spec, const Polynomial& f, const Corpus& corpus,
                      const Rational& floor_loc) {
    if (spec == "auto") {
        auto b = exact_bfunction(f, &corpus);
        if (!b)
            throw Error("--ladder auto: no exact b-function for this f (not monomial or "
                        "Brieskorn-Pham, no corpus match); supply --ladder <file> or grid");
        return ladder_from_bfunction(*b, floor_loc);
    }
    if (spec == "grid")
        return ladder_grid(Rational(static_cast<long>(f.nvars())));
    return ladder_from_json(load_json_file(spec));
}

int cmd_bfun(const std::string& f_text, const std::string& name, const std::string& corpus_path) {
    Corpus corpus = load_corpus_file(corpus_path);
    json out;
    std::optional<BFunction> full;
    if (!name.empty()) {
        const CorpusEntry& e = corpus.load(name);
        out["source"] = "corpus";
        out["name"] = e.name;
        out["partial"] = e.partial;
        out["bfunction"] = to_json(e.full());
        out["reduced_roots"] = to_json(e.reduced_part());
        out["minimal_exponent"] = to_json(minimal_exponent(e.reduced_part()));
        emit(out);
        return 0;
    }
    Polynomial f = parse_polynomial(f_text);
    auto tag = f.classify_shape();
    out["f"] = f_text;
    out["f_canonical"] = f.canonical_key();
    out["shape"] = tag.kind == ShapeKind::monomial
                       ? "monomial"
                       : (tag.kind == ShapeKind::brieskorn_pham ? "brieskorn_pham" : "other");
    if (tag.kind != ShapeKind::other) out["shape_exponents"] = tag.exponents;
    if (tag.kind == ShapeKind::monomial) {
        full = bfun_monomial(tag.exponents);
        out["source"] = "exact_monomial";
    } else if (tag.kind == ShapeKind::brieskorn_pham) {
        full = unreduce(bfun_brieskorn_pham(tag.exponents));
        out["source"] = "exact_brieskorn_pham";
    } else if (const auto* e = corpus.find_by_canonical_form(f.canonical_key())) {
        full = e->full();
        out["source"] = "corpus";
        out["name"] = e->name;
        out["partial"] = e->partial;
    } else {
        throw Error("no exact b-function for this f: not monomial or Brieskorn-Pham and no "
                    "corpus entry matches; add one to the corpus or pass --name");
    }
    out["bfunction"] = to_json(*full);
    out["reduced_roots"] = to_json(reduce(*full));
    out["minimal_exponent"] = to_json(minimal_exponent(reduce(*full)));
    emit(out);
    return 0;
}

int cmd_snc_analyze(const std::string& path, const std::string& floor_text,
                    const std::string& alpha_text, int mult) {
    ResolutionData res = load_resolution_file(path);
    // default floor -(n+1), taking n from the resolution file when present
    Rational floor_loc =
        floor_text.empty()
            ? -Rational(static_cast<long>(res.ambient_dim().value_or(3)) + 1)
            : Rational::parse(floor_text);
    json out;
    out["file"] = path;
    out["floor"] = floor_loc.str();
    out["candidates"] = to_json(candidate_poles(res, floor_loc));
    out["lct"] = lct_snc(res).str();
    auto lb = min_exponent_lower_bound(res);
    out["min_exponent_lower_bound"] = lb ? json(lb->str()) : json(nullptr);
    if (!alpha_text.empty()) {
        Rational alpha = Rational::parse(alpha_text);
        out["dual_complex_dim"] = dual_complex_dim_at(res, alpha);
        if (mult > 0) out["cor17"] = to_json(check_cor17(res, alpha, mult));
    }
    emit(out);
    if (!alpha_text.empty() && mult > 0 &&
        out["cor17"]["status"].get<std::string>() == "fail") {
        std::cerr << "cor17: FAIL\n";
        return 1;
    }
    return 0;
}

int cmd_newton_analyze(const std::string& f_text, bool nondegenerate, bool stable,
                       bool with_polyhedron) {
    Polynomial f = parse_polynomial(f_text);
    auto report = denef_sargos_report(f, nondegenerate, stable);
    json out = to_json(report);
    out["f"] = f_text;
    out["f_canonical"] = f.canonical_key();
    if (with_polyhedron) out["polyhedron"] = to_json(build_polyhedron(f.support()));
    emit(out);
    std::cerr << "t0 = " << report.t0.str() << ", codim tau0 = " << report.tau0_codim
              << ", candidate pole " << report.candidate_pole.str() << "\n";
    return 0;
}

int cmd_zeta_eval(const ZetaCommon& common, const std::string& s_text) {
    Polynomial f = parse_polynomial(common.f_text);
    auto s = parse_complex(s_text);
    auto plan = common.plan(f.nvars());
    auto est = eval_zeta_direct(f, plan, s);
    json out = to_json(est);
    out["f"] = common.f_text;
    out["s"] = s_text;
    out["seed"] = plan.seed;
    out["samples"] = plan.nsamples;
    emit(out);
    std::cerr << "Z_f(s) ~ " << est.value.real() << (est.value.imag() < 0 ? " - " : " + ")
              << std::abs(est.value.imag()) << "i  (stderr " << est.stderr_combined << ")\n";
    if (est.variance_blowup) std::cerr << "warning: variance blow-up (stderr/|mean| > 0.5)\n";
    return 0;
}

int cmd_zeta_poles(const ZetaCommon& common, const std::string& ladder_spec,
                   const std::string& floor_text, const std::string& window_text, bool reduced,
                   const std::string& out_path, const std::string& csv_path,
                   const std::string& corpus_path) {
    Polynomial f = parse_polynomial(common.f_text);
    Corpus corpus;
    std::ifstream probe(corpus_path);
    if (probe.good()) corpus = load_corpus_file(corpus_path);
    Rational floor_loc = floor_text.empty()
                             ? -Rational(static_cast<long>(f.nvars()) + 1)
                             : Rational::parse(floor_text);
    Ladder ladder = resolve_ladder(ladder_spec, f, corpus, floor_loc);
    std::pair<double, double> window_q{0.001, 0.05};
    if (!window_text.empty()) {
        auto comma = window_text.find(',');
        if (comma == std::string::npos) throw Error("--window expects qlo,qhi");
        window_q = {std::stod(window_text.substr(0, comma)),
                    std::stod(window_text.substr(comma + 1))};
    }
    auto plan = common.plan(f.nvars());
    auto res = detect_poles(f, plan, ladder, window_q);

    json out;
    out["f"] = common.f_text;
    out["seed"] = plan.seed;
    out["samples"] = plan.nsamples;
    out["sampler"] = plan.sampler == SamplerKind::low_discrepancy ? "low_discrepancy"
                                                                  : "pseudo_random";
    out["floor"] = floor_loc.str();
    out["ladder"] = to_json(ladder);
    out["model"] = to_json(res.model);
    out["window"] = {res.window.first, res.window.second};
    out["report"] = to_json(reduced ? res.reduced : res.unreduced);
    out["unreduced_report"] = to_json(res.unreduced);
    if (!out_path.empty()) {
        std::ofstream of(out_path);
        if (!of) throw Error("cannot write '" + out_path + "'");
        of << out.dump(2) << "\n";
    }
    if (!csv_path.empty()) {
        std::ofstream cf(csv_path);
        if (!cf) throw Error("cannot write '" + csv_path + "'");
        write_fit_csv(cf, res.cdf, res.model);
    }
    emit(out);
    const auto& rep = reduced ? res.reduced : res.unreduced;
    std::cerr << (reduced ? "reduced" : "unreduced") << " poles:";
    for (const auto& p : rep.poles)
        std::cerr << "  " << p.location.str() << " (order " << p.order << ")";
    std::cerr << "\n";
    return 0;
}

int cmd_verify_suite(const std::string& config_path, bool stretch, const std::string& out_path) {
    json j = load_json_file(config_path);
    SuiteConfig config = suite_config_from_json(j, dirname_of(config_path));
    config.include_stretch = stretch;
    auto reports = run_suite(config);
    json out = json::array();
    for (const auto& r : reports) out.push_back(to_json(r));
    if (!out_path.empty()) {
        std::ofstream of(out_path);
        if (!of) throw Error("cannot write '" + out_path + "'");
        of << out.dump(2) << "\n";
    }
    emit(out);
    for (const auto& r : reports)
        std::cerr << "[" << status_name(r.status) << "] " << claim_name(r.claim) << "  "
                  << r.subject << "\n";
    return all_passed(reports) ? 0 : 1;
}

int cmd_verify_min_exponent(const ZetaCommon& common, const std::string& bfun_name,
                            const std::string& floor_text, const std::string& corpus_path) {
    Polynomial f = parse_polynomial(common.f_text);
    Corpus corpus;
    std::ifstream probe(corpus_path);
    if (probe.good()) corpus = load_corpus_file(corpus_path);
    std::optional<BFunction> b_reduced;
    if (!bfun_name.empty()) {
        b_reduced = corpus.load(bfun_name).reduced_part();
    } else {
        auto full = exact_bfunction(f, &corpus);
        if (!full)
            throw Error("no b-function available; pass --bfun <corpus name> or extend the corpus");
        b_reduced = reduce(*full);
    }
    std::optional<Rational> floor_loc;
    if (!floor_text.empty()) floor_loc = Rational::parse(floor_text);
    auto plan = common.plan(f.nvars());
    auto rep = verify_min_exponent(f, *b_reduced, plan, floor_loc);
    emit(to_json(rep));
    std::cerr << "[" << status_name(rep.status) << "] min_exponent_pole  " << rep.subject << "\n";
    return rep.failed() ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Archimedean zeta functions of polynomial singularities: exact candidates, "
                 "b-function data, and Monte-Carlo pole detection"};
    app.require_subcommand(1);

    // bfun
    std::string bfun_f, bfun_name, corpus_path = "fixtures/corpus.json";
    auto* bfun = app.add_subcommand("bfun", "exact Bernstein-Sato data for f");
    bfun->add_option("--f", bfun_f, "polynomial text");
    bfun->add_option("--name", bfun_name, "corpus entry name");
    bfun->add_option("--corpus", corpus_path, "corpus JSON path");

    // snc analyze
    std::string snc_file, snc_floor, snc_alpha;
    int snc_mult = 0;
    auto* snc = app.add_subcommand("snc", "log-resolution combinatorics");
    auto* snc_an = snc->add_subcommand("analyze", "candidate poles, lct, dual complex");
    snc_an->add_option("file", snc_file, "resolution JSON")->required();
    snc_an->add_option("--floor", snc_floor, "truncation floor p/q (negative), default -(n+1)");
    snc_an->add_option("--alpha", snc_alpha, "evaluate dual complex at alpha = p/q");
    snc_an->add_option("--mult", snc_mult, "multiplicity of -alpha in b_f, for the cor17 check");

    // newton analyze
    std::string newton_f;
    bool newton_nondeg = false, newton_stable = false, newton_poly = false;
    auto* newton = app.add_subcommand("newton", "Newton-polyhedron diagonal analysis");
    auto* newton_an = newton->add_subcommand("analyze", "t0, tau0, expected order");
    newton_an->add_option("--f", newton_f, "polynomial text")->required();
    newton_an->add_flag("--assume-nondegenerate", newton_nondeg,
                        "record the caller's nondegeneracy assertion");
    newton_an->add_flag("--assume-stable", newton_stable,
                        "record the caller's tau0-stability assertion");
    newton_an->add_flag("--polyhedron", newton_poly, "include the facet list in the output");

    // zeta eval / poles
    ZetaCommon zc;
    std::string zeta_s = "1", ladder_spec = "auto", zeta_floor, window_text, out_path, csv_path;
    bool reduced = false;
    auto* zeta = app.add_subcommand("zeta", "numerical zeta engine");
    auto* zeval = zeta->add_subcommand("eval", "Monte-Carlo Z_f(s) with standard error");
    auto* zpoles = zeta->add_subcommand("poles", "detect poles from level-set asymptotics");
    for (auto* sub : {zeval, zpoles}) {
        sub->add_option("--f", zc.f_text, "polynomial text")->required();
        sub->add_option("--samples", zc.samples, "sample count");
        sub->add_option("--seed", zc.seed, "RNG seed (mandatory for reproducible suites)");
        sub->add_option("--sampler", zc.sampler, "pseudo_random | low_discrepancy");
        sub->add_option("--region", zc.region_text, "c1,...,cn,r ball restriction");
    }
    zeval->add_option("--s", zeta_s, "evaluation point, e.g. 0.5+0.5i");
    zpoles->add_option("--ladder", ladder_spec, "auto | grid | entries JSON path");
    zpoles->add_option("--floor", zeta_floor, "ladder floor p/q (negative)");
    zpoles->add_option("--window", window_text, "quantile window qlo,qhi");
    zpoles->add_flag("--reduced", reduced, "report reduced (Z~) poles");
    zpoles->add_option("--out", out_path, "write the JSON report here too");
    zpoles->add_option("--csv", csv_path, "write t,F_empirical,F_model");
    zpoles->add_option("--corpus", corpus_path, "corpus JSON path");

    // verify
    std::string suite_config, verify_f_bfun, verify_floor;
    bool stretch = false;
    auto* verify = app.add_subcommand("verify", "cross-module verification harness");
    auto* vsuite = verify->add_subcommand("suite", "run a suite config");
    vsuite->add_option("--config", suite_config, "suite JSON")->required();
    vsuite->add_flag("--stretch", stretch, "include non-gating stretch cases");
    vsuite->add_option("--out", out_path, "write reports here too");
    auto* vmin = verify->add_subcommand("min-exponent", "minimal-exponent pole law for one f");
    vmin->add_option("--f", zc.f_text, "polynomial text")->required();
    vmin->add_option("--bfun", verify_f_bfun, "corpus entry name");
    vmin->add_option("--samples", zc.samples, "sample count");
    vmin->add_option("--seed", zc.seed, "RNG seed");
    vmin->add_option("--sampler", zc.sampler, "pseudo_random | low_discrepancy");
    vmin->add_option("--floor", verify_floor, "ladder floor p/q");
    vmin->add_option("--corpus", corpus_path, "corpus JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (bfun->parsed()) {
            if (bfun_f.empty() && bfun_name.empty())
                throw arczeta::Error("bfun needs --f or --name");
            return cmd_bfun(bfun_f, bfun_name, corpus_path);
        }
        if (snc_an->parsed()) return cmd_snc_analyze(snc_file, snc_floor, snc_alpha, snc_mult);
        if (newton_an->parsed())
            return cmd_newton_analyze(newton_f, newton_nondeg, newton_stable, newton_poly);
        if (zeval->parsed()) return cmd_zeta_eval(zc, zeta_s);
        if (zpoles->parsed())
            return cmd_zeta_poles(zc, ladder_spec, zeta_floor, window_text, reduced, out_path,
                                  csv_path, corpus_path);
        if (vsuite->parsed()) return cmd_verify_suite(suite_config, stretch, out_path);
        if (vmin->parsed())
            return cmd_verify_min_exponent(zc, verify_f_bfun, verify_floor, corpus_path);
        std::cerr << app.help() << "\n";
        return 2;
    } catch (const arczeta::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
