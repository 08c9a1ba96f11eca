#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "arczeta/json_io.hpp"
#include "arczeta/suite.hpp"

using namespace arczeta;

namespace {

const std::string kFixtures = ARCZETA_FIXTURES_DIR;
const std::string kCli = ARCZETA_CLI_PATH;

struct CliResult {
    int exit_code;
    std::string out;
};

CliResult run_cli(const std::string& args) {
    std::string cmd = kCli + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

void check_type(const json& v, const std::string& t) {
    bool ok = (t == "object" && v.is_object()) || (t == "array" && v.is_array()) ||
              (t == "string" && v.is_string()) || (t == "boolean" && v.is_boolean()) ||
              (t == "integer" && v.is_number_integer()) || (t == "number" && v.is_number()) ||
              (t == "null" && v.is_null());
    if (!ok) throw Error("value " + v.dump().substr(0, 120) + " is not of type " + t);
}

/// Minimal JSON-schema checker: type / required / properties / items / enum /
/// minimum / the rational pattern / $refs into sibling schema files. Enough to
/// hold the shipped schemas to their word.
class SchemaChecker {
public:
    explicit SchemaChecker(const std::string& schema_dir) : dir_(schema_dir) {
        common_ = load_json_file(dir_ + "/common.json");
    }

    void check(const json& value, const json& schema) const {
        if (schema.contains("$ref")) {
            check(value, resolve(schema.at("$ref").get<std::string>()));
            return;
        }
        if (schema.contains("oneOf")) {
            for (const auto& sub : schema.at("oneOf")) {
                try {
                    check(value, sub);
                    return;
                } catch (const Error&) {
                }
            }
            throw Error("no oneOf branch matched: " + value.dump());
        }
        if (schema.contains("enum")) {
            for (const auto& e : schema.at("enum"))
                if (e == value) return;
            throw Error("value not in enum: " + value.dump());
        }
        if (schema.contains("type")) check_type(value, schema.at("type").get<std::string>());
        if (schema.contains("pattern") && value.is_string()) {
            // only the rational pattern ships; check it directly
            const std::string s = value.get<std::string>();
            std::size_t i = (s.size() && s[0] == '-') ? 1 : 0;
            bool digits = i < s.size();
            bool slash_seen = false;
            for (; i < s.size(); ++i) {
                if (s[i] == '/' && !slash_seen && i + 1 < s.size()) { slash_seen = true; continue; }
                if (!std::isdigit(static_cast<unsigned char>(s[i]))) digits = false;
            }
            if (!digits) throw Error("string fails rational pattern: " + s);
        }
        if (schema.contains("minimum") && value.is_number()) {
            if (value.get<double>() < schema.at("minimum").get<double>())
                throw Error("value below minimum: " + value.dump());
        }
        if (value.is_object()) {
            for (const auto& req : schema.value("required", json::array()))
                if (!value.contains(req.get<std::string>()))
                    throw Error("missing required key '" + req.get<std::string>() + "' in " +
                                value.dump().substr(0, 200));
            if (schema.contains("properties"))
                for (auto it = schema.at("properties").begin(); it != schema.at("properties").end();
                     ++it)
                    if (value.contains(it.key())) check(value.at(it.key()), it.value());
        }
        if (value.is_array() && schema.contains("items")) {
            const auto& items = schema.at("items");
            if (items.is_array()) {
                for (std::size_t i = 0; i < value.size() && i < items.size(); ++i)
                    check(value[i], items[i]);
                if (schema.contains("minItems") && value.size() < schema.at("minItems").get<std::size_t>())
                    throw Error("array too short");
            } else {
                for (const auto& v : value) check(v, items);
            }
        }
    }

    void check_file(const json& value, const std::string& schema_file) const {
        check(value, load_json_file(dir_ + "/" + schema_file));
    }

private:
    json resolve(const std::string& ref) const {
        // forms: common.json#/definitions/name  or  #/definitions/name
        auto hash = ref.find('#');
        const json* doc = &common_;
        std::string path = ref.substr(hash + 1);
        json self;
        if (hash != 0) {
            std::string file = ref.substr(0, hash);
            self = load_json_file(dir_ + "/" + file);
            doc = &self;
        }
        const json* cur = doc;
        std::stringstream ss(path);
        std::string part;
        while (std::getline(ss, part, '/')) {
            if (part.empty()) continue;
            cur = &cur->at(part);
        }
        return *cur;
    }

    std::string dir_;
    json common_;
};

}  // namespace

TEST_CASE("verify: min exponent pass and corrupt-corpus fail, x*y") {
    auto f = parse_polynomial("x*y");
    auto b_reduced = reduce(bfun_monomial({1, 1}));  // {1:1}
    SamplePlan plan;
    plan.nsamples = 1'000'000;
    plan.seed = 51;
    plan.sampler = SamplerKind::low_discrepancy;
    auto rep = verify_min_exponent(f, b_reduced, plan);
    CHECK(rep.status == VerifyStatus::pass);
    CHECK(rep.details["expected_location"] == "-1");

    // corrupted multiplicity: claims a double pole where the data has none
    BFunction wrong_mult;
    wrong_mult.add_root(Rational(1), 2);
    auto bad_mult = verify_min_exponent(f, wrong_mult, plan);
    CHECK(bad_mult.status == VerifyStatus::fail);
    CHECK(bad_mult.details["expected_order"] == 2);

    // corrupted location: claims alpha~ = 1/2; the t^1 column can soak up some
    // t^2 log t mass on a shallow window, but the deep-window cross-check sees
    // it fade
    BFunction wrong_loc;
    wrong_loc.add_root(Rational(1, 2), 1);
    SamplePlan big = plan;
    big.nsamples = 4'000'000;
    auto bad_loc = verify_min_exponent(f, wrong_loc, big);
    CHECK(bad_loc.status == VerifyStatus::fail);
    CHECK(bad_loc.details["expected_location"] == "-1/2");
    CHECK(bad_loc.details.contains("runs"));

    // smooth case is inapplicable
    auto smooth = verify_min_exponent(parse_polynomial("x"), BFunction{}, plan);
    CHECK(smooth.status == VerifyStatus::inapplicable);
}

TEST_CASE("verify: largest pole = -lct for x^2") {
    auto f = parse_polynomial("x^2");
    auto b = bfun_monomial({2});
    SamplePlan plan;
    plan.nsamples = 1'000'000;
    plan.seed = 52;
    auto ladder = ladder_from_bfunction(b, Rational(-2));
    auto rep = verify_largest_pole_lct(f, Rational(1, 2), ladder, plan);
    CHECK(rep.status == VerifyStatus::pass);
    auto wrong = verify_largest_pole_lct(f, Rational(1), ladder, plan);
    CHECK(wrong.status == VerifyStatus::fail);
}

TEST_CASE("verify: gamma reduction on exact and numeric reports") {
    auto f = parse_polynomial("x*y");
    auto exact = exact_monomial_pole_report({1, 1}, Rational(-2));
    auto rep = verify_gamma_reduction(f, exact, reduce_by_gamma(exact));
    CHECK(rep.status == VerifyStatus::pass);

    // tampered reduction must fail
    auto broken = reduce_by_gamma(exact);
    broken.poles[0].order += 1;
    CHECK(verify_gamma_reduction(f, exact, broken).status == VerifyStatus::fail);
}

TEST_CASE("verify: region localization separates the xy singular point") {
    auto f = parse_polynomial("x*y");
    SamplePlan plan;
    plan.nsamples = 3'000'000;
    plan.seed = 53;
    auto ladder = ladder_from_bfunction(bfun_monomial({1, 1}), Rational(-2));
    std::vector<RegionCase> regions = {
        {SampleRegion{ComplexPoint{{{0, 0}, {0, 0}}}, 0.8}, true, "origin"},
        {SampleRegion{ComplexPoint{{{1, 0}, {1, 0}}}, 0.4}, false, "off_axes"},
    };
    auto rep = verify_region_localization(f, regions, plan, ladder, Rational(-1));
    CHECK(rep.status == VerifyStatus::pass);
    // the off-axes region detects nothing at -1
    CHECK(rep.details["regions"][1]["orders"][0] == 0);
    // the origin region sees the full order 2
    CHECK(rep.details["regions"][0]["orders"][0] == 2);

    CHECK_THROWS_AS(
        verify_region_localization(f, {regions[0]}, plan, ladder, Rational(-1)), Error);
}

TEST_CASE("verify: snc consistency on the Whitney fixture") {
    auto res = load_resolution_file(kFixtures + "/whitney.json");
    auto f = parse_polynomial("x^2 - y^2*z");
    SamplePlan plan;
    plan.nsamples = 2'000'000;
    plan.seed = 54;
    plan.sampler = SamplerKind::low_discrepancy;
    auto rep = verify_snc_consistency(f, res, plan, Rational(-5, 2));
    CHECK(rep.status == VerifyStatus::pass);
    // detected locations are candidate locations with orders within bounds
    for (const auto& run : rep.details["runs"])
        for (const auto& row : run["poles"]) {
            CHECK(row["ok"] == true);
            CHECK(row["order"].get<int>() <= row["bound"].get<int>());
        }
}

TEST_CASE("verify: reports are reproducible bit-for-bit") {
    auto f = parse_polynomial("x*y");
    auto b_reduced = reduce(bfun_monomial({1, 1}));
    SamplePlan plan;
    plan.nsamples = 400'000;
    plan.seed = 55;
    auto r1 = verify_min_exponent(f, b_reduced, plan);
    auto r2 = verify_min_exponent(f, b_reduced, plan);
    CHECK(r1.details.dump() == r2.details.dump());
    CHECK(r1.status == r2.status);
}

TEST_CASE("verify: newton consistency and cor17 wrappers") {
    auto f = parse_polynomial("x^2 + y^3");
    auto rep = verify_newton_consistency(f, Rational(5, 6), true);
    CHECK(rep.status == VerifyStatus::pass);
    auto off = verify_newton_consistency(f, Rational(1, 2), true);
    CHECK(off.status == VerifyStatus::fail);
    auto na = verify_newton_consistency(f, std::nullopt, true);
    CHECK(na.status == VerifyStatus::inapplicable);

    auto res = load_resolution_file(kFixtures + "/whitney.json");
    CHECK(verify_cor17(res, Rational(1), 2).status == VerifyStatus::pass);
    CHECK(verify_cor17(res, std::nullopt, 0).status == VerifyStatus::inapplicable);
}

TEST_CASE("suite: tiny config end to end") {
    json config_json = {
        {"corpus", kFixtures + "/corpus.json"},
        {"cases",
         {{{"name", "nc"},
           {"f", "x*y"},
           {"plan", {{"samples", 600'000}, {"seed", 61}, {"sampler", "low_discrepancy"}}},
           {"floor", "-2"},
           {"claims", {"min_exponent_pole", "largest_pole_is_lct", "gamma_reduction",
                       "shift_identity", "newton_consistency"}},
           {"newton_matches_alpha", true}},
          {{"name", "stretchy"},
           {"f", "x^2 + y^3"},
           {"plan", {{"samples", 600'000}, {"seed", 62}}},
           {"claims", {"min_exponent_pole"}},
           {"stretch", true}}}}};
    auto config = suite_config_from_json(config_json, ".");
    auto reports = run_suite(config);
    REQUIRE(reports.size() == 6);
    int passes = 0, inapplicable = 0;
    for (const auto& r : reports) {
        CHECK(!r.failed());
        if (r.status == VerifyStatus::pass) ++passes;
        if (r.status == VerifyStatus::inapplicable) ++inapplicable;
    }
    CHECK(passes == 5);
    CHECK(inapplicable == 1);  // the stretch case is skipped
    CHECK(all_passed(reports));

    // empty config: empty list
    CHECK(run_suite(SuiteConfig{}).empty());

    // missing seed is an error (reproducibility is mandatory in suite mode)
    json noseed = {{"cases", {{{"name", "x"}, {"f", "x"}, {"plan", {{"samples", 20000}}},
                               {"claims", {"shift_identity"}}}}}};
    CHECK_THROWS_AS(suite_config_from_json(noseed, "."), Error);
}

TEST_CASE("cli: newton analyze matches the shipped schema") {
    SchemaChecker schemas(kFixtures + "/schemas");
    auto r = run_cli("newton analyze --f \"z2^2*z3^3*z4 + z1^2*z3*z4^3 + z1^2*z2^2*z3*z4\"");
    CHECK(r.exit_code == 0);
    json j = json::parse(r.out);
    schemas.check_file(j, "newton_report.json");
    CHECK(j["t0"] == "3/2");
    CHECK(j["one_over_t0"] == "2/3");
    CHECK(j["tau0_codim"] == 2);
    CHECK(j["t0_nonintegral_reciprocal"] == true);
}

TEST_CASE("cli: snc analyze with cor17") {
    SchemaChecker schemas(kFixtures + "/schemas");
    auto r = run_cli("snc analyze " + kFixtures + "/whitney.json --floor \"-2\" --alpha 1 --mult 2");
    CHECK(r.exit_code == 0);
    json j = json::parse(r.out);
    schemas.check_file(j, "snc_report.json");
    CHECK(j["lct"] == "1");
    CHECK(j["min_exponent_lower_bound"] == "1");
    CHECK(j["dual_complex_dim"] == 1);
    CHECK(j["cor17"]["status"] == "pass");
    REQUIRE(j["candidates"].size() == 3);
    CHECK(j["candidates"][0]["location"] == "-1");
    CHECK(j["candidates"][0]["order_bound"] == 2);
}

TEST_CASE("cli: bfun exact and corpus paths") {
    SchemaChecker schemas(kFixtures + "/schemas");
    auto r = run_cli("bfun --f \"x^2 + y^3\" --corpus " + kFixtures + "/corpus.json");
    CHECK(r.exit_code == 0);
    json j = json::parse(r.out);
    schemas.check_file(j, "bfun_report.json");
    CHECK(j["source"] == "exact_brieskorn_pham");
    CHECK(j["minimal_exponent"]["alpha_tilde"] == "5/6");

    auto w = run_cli("bfun --f \"x^2 - y^2*z\" --corpus " + kFixtures + "/corpus.json");
    CHECK(w.exit_code == 0);
    json jw = json::parse(w.out);
    CHECK(jw["source"] == "corpus");
    CHECK(jw["name"] == "whitney_umbrella");
    CHECK(jw["minimal_exponent"]["alpha_tilde"] == "1");

    auto miss = run_cli("bfun --name nonexistent --corpus " + kFixtures + "/corpus.json");
    CHECK(miss.exit_code == 2);
}

TEST_CASE("cli: zeta eval") {
    SchemaChecker schemas(kFixtures + "/schemas");
    auto r = run_cli("zeta eval --f x --s 1 --samples 200000 --seed 7");
    CHECK(r.exit_code == 0);
    json j = json::parse(r.out);
    schemas.check_file(j, "zeta_eval.json");
    double v = j["value_re"].get<double>(), se = j["stderr"].get<double>();
    CHECK(std::abs(v - 1.0) <= 4.0 * se);
    // determinism across runs
    auto r2 = run_cli("zeta eval --f x --s 1 --samples 200000 --seed 7");
    CHECK(r2.out == r.out);
}

TEST_CASE("cli: zeta poles with report and csv") {
    SchemaChecker schemas(kFixtures + "/schemas");
    std::string out = "/tmp/arczeta_test_report.json";
    std::string csv = "/tmp/arczeta_test_fit.csv";
    auto r = run_cli("zeta poles --f \"x*y\" --ladder auto --samples 600000 --seed 9 "
                     "--sampler low_discrepancy --floor \"-2\" --out " + out + " --csv " + csv);
    CHECK(r.exit_code == 0);
    json j = json::parse(r.out);
    schemas.check_file(j, "pole_report.json");
    CHECK(j["report"]["poles"][0]["location"] == "-1");
    CHECK(j["report"]["poles"][0]["order"] == 2);

    json file_copy = load_json_file(out);
    CHECK(file_copy == j);

    std::ifstream cf(csv);
    REQUIRE(cf.good());
    std::string header;
    std::getline(cf, header);
    CHECK(header == "t,F_empirical,F_model");
    int lines = 0;
    for (std::string line; std::getline(cf, line);) ++lines;
    CHECK(lines >= 100);
    std::remove(out.c_str());
    std::remove(csv.c_str());
}

TEST_CASE("cli: verify suite exit codes and usage errors") {
    // a passing one-case suite
    json cfg = {{"corpus", kFixtures + "/corpus.json"},
                {"cases", {{{"name", "quick"},
                            {"f", "x*y"},
                            {"plan", {{"samples", 400'000}, {"seed", 71}}},
                            {"floor", "-2"},
                            {"claims", {"largest_pole_is_lct"}}}}}};
    std::string path = "/tmp/arczeta_suite_quick.json";
    {
        std::ofstream of(path);
        of << cfg.dump();
    }
    SchemaChecker schemas(kFixtures + "/schemas");
    auto ok = run_cli("verify suite --config " + path);
    CHECK(ok.exit_code == 0);
    schemas.check_file(json::parse(ok.out), "verify_report.json");

    // corrupted corpus: wrong multiplicity for x*y drives a failure, exit 1
    json bad_corpus;
    bad_corpus["xy_wrong"]["f"] = "x*y";
    bad_corpus["xy_wrong"]["roots"] = json::array({json::array({"1", 3})});
    std::string cpath = "/tmp/arczeta_bad_corpus.json";
    {
        std::ofstream of(cpath);
        of << bad_corpus.dump();
    }
    json cfg_bad = {{"corpus", cpath},
                    {"cases", {{{"name", "broken"},
                                {"f", "x*y"},
                                {"bfun", "xy_wrong"},
                                {"plan", {{"samples", 400'000}, {"seed", 72}}},
                                {"claims", {"min_exponent_pole"}}}}}};
    std::string bpath = "/tmp/arczeta_suite_bad.json";
    {
        std::ofstream of(bpath);
        of << cfg_bad.dump();
    }
    auto bad = run_cli("verify suite --config " + bpath);
    CHECK(bad.exit_code == 1);
    json jb = json::parse(bad.out);
    CHECK(jb[0]["status"] == "fail");
    CHECK(jb[0]["details"].contains("expected_location"));
    CHECK(jb[0]["details"].contains("runs"));

    // usage error: unknown flag
    CHECK(run_cli("zeta eval --f x --nonsense 3").exit_code == 2);
    // input error: malformed polynomial
    CHECK(run_cli("newton analyze --f \"x^^2\"").exit_code == 2);
    std::remove(path.c_str());
    std::remove(cpath.c_str());
    std::remove(bpath.c_str());
}

TEST_CASE("cli: verify min-exponent single case") {
    auto r = run_cli("verify min-exponent --f \"x^2 + y^3\" --samples 2000000 --seed 73 "
                     "--sampler low_discrepancy --corpus " + kFixtures + "/corpus.json");
    CHECK(r.exit_code == 0);
    json j = json::parse(r.out);
    CHECK(j["claim"] == "min_exponent_pole");
    CHECK(j["status"] == "pass");
    CHECK(j["details"]["expected_location"] == "-5/6");
}
