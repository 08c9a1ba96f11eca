#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <set>

#include "arczeta/fit.hpp"
#include "arczeta/json_io.hpp"
#include "arczeta/parse.hpp"

using namespace arczeta;

namespace {

/// Synthetic empirical CDF at the exact quantiles of a given distribution
/// function (strictly increasing near 0), via its inverse.
EmpiricalCDF synthetic_cdf(std::size_t n, const std::function<double(double)>& inverse_cdf) {
    EmpiricalCDF cdf;
    cdf.sorted_values.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double p = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
        cdf.sorted_values.push_back(inverse_cdf(p));
    }
    cdf.n_drawn = cdf.n_kept = n;
    return cdf;
}

Ladder make_ladder(std::initializer_list<std::pair<Rational, int>> entries) {
    Ladder l;
    for (const auto& [a, k] : entries) l.entries.push_back(LadderEntry{a, k});
    return l;
}

const FitTerm* find_term(const AsymptoticModel& m, const Rational& alpha, int logpow) {
    for (const auto& t : m.terms)
        if (t.alpha == alpha && t.logpow == logpow) return &t;
    return nullptr;
}

}  // namespace

TEST_CASE("ladder_from_bfunction: Bernstein closure with log powers") {
    // Whitney: b = (s+1)^2 (s+3/2)
    BFunction b;
    b.add_root(Rational(1), 2);
    b.add_root(Rational(3, 2), 1);
    auto ladder = ladder_from_bfunction(b, Rational(-5, 2));
    REQUIRE(ladder.entries.size() == 4);
    CHECK(ladder.entries[0].alpha == Rational(1));
    CHECK(ladder.entries[0].max_logpow == 1);  // order bound 2 at every negative integer
    CHECK(ladder.entries[1].alpha == Rational(3, 2));
    CHECK(ladder.entries[1].max_logpow == 0);
    CHECK(ladder.entries[2].alpha == Rational(2));
    CHECK(ladder.entries[2].max_logpow == 1);
    CHECK(ladder.entries[3].alpha == Rational(5, 2));
    CHECK(ladder.entries[3].max_logpow == 0);

    CHECK_THROWS_AS(ladder_from_bfunction(b, Rational(1)), Error);
}

TEST_CASE("ladder_grid: bounded denominators") {
    auto ladder = ladder_grid(Rational(1), 4);
    // 1/4,1/3,1/2,2/3,3/4,1  plus 1/1 dedupe
    std::set<std::string> got;
    for (const auto& e : ladder.entries) got.insert(e.alpha.str());
    CHECK(got == std::set<std::string>{"1/4", "1/3", "1/2", "2/3", "3/4", "1"});
}

TEST_CASE("fit_tail on the exact f = x distribution") {
    // F(t) = 1 - exp(-t^2), so c(t^2) = 1 and c(t^4) = -1/2
    auto cdf = synthetic_cdf(300'000, [](double p) { return std::sqrt(-std::log1p(-p)); });
    auto model = fit_tail(cdf, make_ladder({{Rational(1), 0}, {Rational(2), 0}}), {0.02, 0.3});
    const auto* c1 = find_term(model, Rational(1), 0);
    const auto* c2 = find_term(model, Rational(2), 0);
    REQUIRE(c1 != nullptr);
    REQUIRE(c2 != nullptr);
    CHECK(std::abs(c1->coeff - 1.0) < 0.02);
    CHECK(std::abs(c2->coeff + 0.5) < 0.1);
    CHECK(model.condition < 1e6);
}

TEST_CASE("fit_tail on sampled |xy|: the log term and its constant sibling") {
    // F(t) = 2 t^2 (-log t) + (1 - 2 gamma_E) t^2 + O(t^4 log t)
    auto f = parse_polynomial("x*y");
    SamplePlan plan;
    plan.nsamples = 4'000'000;
    plan.seed = 31;
    plan.sampler = SamplerKind::low_discrepancy;
    auto cdf = sample_abs_f(f, plan);

    // spec's minimal ladder {(1,1)}: both the t^2 log t and t^2 terms come out
    auto minimal = fit_tail(cdf, make_ladder({{Rational(1), 1}}),
                            {cdf.quantile(0.001), cdf.quantile(0.02)});
    const auto* c11 = find_term(minimal, Rational(1), 1);
    const auto* c10 = find_term(minimal, Rational(1), 0);
    REQUIRE(c11 != nullptr);
    REQUIRE(c10 != nullptr);
    CHECK(c11->coeff > 3.0 * c11->coeff_stderr);
    CHECK(std::abs(c11->coeff - 2.0) < 0.2);

    // wider ladder absorbs the t^4 corrections; coefficients sharpen
    auto model = fit_tail(cdf, make_ladder({{Rational(1), 1}, {Rational(2), 1}}),
                          {cdf.quantile(0.001), cdf.quantile(0.05)});
    const auto* d11 = find_term(model, Rational(1), 1);
    const auto* d10 = find_term(model, Rational(1), 0);
    REQUIRE(d11 != nullptr);
    CHECK(std::abs(d11->coeff - 2.0) < 0.1);
    if (d10) {
        double expect = 1.0 - 2.0 * 0.57721566490153286;
        CHECK(std::abs(d10->coeff - expect) < 0.15);
    }
}

TEST_CASE("fit_tail input validation") {
    auto cdf = synthetic_cdf(20'000, [](double p) { return std::sqrt(-std::log1p(-p)); });
    CHECK_THROWS_AS(fit_tail(cdf, Ladder{}, {0.01, 0.1}), Error);
    CHECK_THROWS_AS(fit_tail(cdf, make_ladder({{Rational(1), 0}}), {0.1, 0.1}), FitWindowError);
    CHECK_THROWS_AS(fit_tail(cdf, make_ladder({{Rational(1), 0}}), {0.5, 0.1}), FitWindowError);
    // duplicate alphas rejected
    CHECK_THROWS_AS(fit_tail(cdf, make_ladder({{Rational(1), 0}, {Rational(1), 1}}), {0.01, 0.1}),
                    Error);
    // window with almost no mass
    CHECK_THROWS_AS(fit_tail(cdf, make_ladder({{Rational(1), 0}}), {1e-9, 2e-9}), FitWindowError);
}

TEST_CASE("fit_tail conditioning guard on the dense rational grid") {
    auto cdf = synthetic_cdf(100'000, [](double p) { return std::sqrt(-std::log1p(-p)); });
    auto dense = ladder_grid(Rational(2), 12);
    CHECK(dense.entries.size() > 40);
    CHECK_THROWS_AS(fit_tail(cdf, dense, {0.02, 0.3}), FitConditioningError);
}

TEST_CASE("poles_from_model and reduce_by_gamma") {
    AsymptoticModel m;
    m.terms = {FitTerm{Rational(1), 1, 2.0, 0.01}, FitTerm{Rational(1), 0, -0.15, 0.01},
               FitTerm{Rational(3, 2), 0, 0.8, 0.05}};
    auto rep = poles_from_model(m);
    REQUIRE(rep.poles.size() == 2);
    CHECK(rep.poles[0].location == Rational(-1));
    CHECK(rep.poles[0].order == 2);
    CHECK(rep.poles[0].leading == doctest::Approx(2.0));
    CHECK(rep.poles[1].location == Rational(-3, 2));
    CHECK(rep.poles[1].order == 1);

    auto red = reduce_by_gamma(rep);
    REQUIRE(red.poles.size() == 2);
    CHECK(red.poles[0].location == Rational(-1));
    CHECK(red.poles[0].order == 1);
    CHECK(red.poles[1].order == 1);
    CHECK_THROWS_AS(reduce_by_gamma(red), Error);

    // order-1 integer poles disappear entirely
    AsymptoticModel m2;
    m2.terms = {FitTerm{Rational(5, 6), 0, 1.6, 0.01}, FitTerm{Rational(1), 0, 0.5, 0.01}};
    auto red2 = reduce_by_gamma(poles_from_model(m2));
    REQUIRE(red2.poles.size() == 1);
    CHECK(red2.poles[0].location == Rational(-5, 6));
}

TEST_CASE("exact monomial pole reports") {
    auto smooth = exact_monomial_pole_report({1}, Rational(-3));
    REQUIRE(smooth.poles.size() == 3);
    CHECK(smooth.provenance == Provenance::exact);
    CHECK(smooth.poles[0].location == Rational(-1));
    CHECK(smooth.poles[0].order == 1);
    // F(t) = 1 - exp(-t^2): leading coefficient of t^2 is 1
    CHECK(std::abs(smooth.poles[0].leading - 1.0) < 1e-3);

    // Z~ of the smooth case is entire: the reduced report is empty
    CHECK(reduce_by_gamma(smooth).poles.empty());

    auto nc = exact_monomial_pole_report({1, 1}, Rational(-2));
    REQUIRE(nc.poles.size() == 2);
    CHECK(nc.poles[0].location == Rational(-1));
    CHECK(nc.poles[0].order == 2);
    CHECK(std::abs(nc.poles[0].leading - 2.0) < 1e-3);  // F ~ 2 t^2 (-log t)
    CHECK(nc.poles[1].location == Rational(-2));
    CHECK(nc.poles[1].order == 2);

    auto dbl = exact_monomial_pole_report({2}, Rational(-3, 2));
    REQUIRE(dbl.poles.size() == 3);
    CHECK(dbl.poles[0].location == Rational(-1, 2));
    CHECK(dbl.poles[0].order == 1);
    // F(t) = 1 - exp(-t): leading coefficient of t^{2 * 1/2} is 1
    CHECK(std::abs(dbl.poles[0].leading - 1.0) < 1e-3);

    // pole monotonicity on exact reports: beta a pole => beta - 1 a pole
    for (const auto& p : dbl.poles) {
        if (p.location - Rational(1) < Rational(-3, 2)) continue;
        CHECK(dbl.at(p.location - Rational(1)) != nullptr);
    }
}

TEST_CASE("detect_poles end to end is deterministic") {
    auto f = parse_polynomial("x*y");
    SamplePlan plan;
    plan.nsamples = 500'000;
    plan.seed = 3;
    auto b = bfun_monomial({1, 1});
    auto ladder = ladder_from_bfunction(b, Rational(-2));
    auto r1 = detect_poles(f, plan, ladder);
    auto r2 = detect_poles(f, plan, ladder);
    CHECK(to_json(r1.model).dump() == to_json(r2.model).dump());
    CHECK(to_json(r1.unreduced).dump() == to_json(r2.unreduced).dump());
    REQUIRE(!r1.unreduced.poles.empty());
    CHECK(r1.unreduced.poles[0].location == Rational(-1));
    CHECK(r1.unreduced.poles[0].order == 2);
    // leading term of a CDF expansion is positive and significant
    CHECK(r1.unreduced.poles[0].leading > 3.0 * r1.unreduced.poles[0].leading_stderr);
}
