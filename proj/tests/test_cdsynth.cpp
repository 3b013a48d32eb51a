#include "kp/cdsynth.hpp"

#include "kp/scenarios.hpp"
#include "support/fourier_motzkin.hpp"
#include "support/random_gen.hpp"

#include <doctest.h>

using namespace kp;

namespace {

// Direct cone-feasibility route: does the generated cone meet the forbidden
// set {(0, nu): nu >= 0, total nu = 1}? Classified independently via the
// Fourier-Motzkin oracle.
bool forbidden_reachable_fm(const Theory& t) {
    lp::LinearProgram prog;
    std::vector<int> y;
    for (int g = 0; g < static_cast<int>(t.generators.size()); ++g)
        y.push_back(prog.add_variable("y" + std::to_string(g), Rational(0), std::nullopt));
    std::map<std::string, int> nu;
    for (const auto& label : t.states.labels())
        nu[label] = prog.add_variable("nu_" + label, Rational(0), std::nullopt);
    for (const auto& label : t.states.labels()) {
        lp::Row dm_row, q_row;
        for (int g = 0; g < static_cast<int>(t.generators.size()); ++g) {
            const auto& pv = t.generators[static_cast<size_t>(g)].pv;
            if (pv.dm.at(label) != 0) dm_row.push_back({y[static_cast<size_t>(g)], pv.dm.at(label)});
            if (pv.q.at(label) != 0) q_row.push_back({y[static_cast<size_t>(g)], pv.q.at(label)});
        }
        prog.add_constraint(dm_row, lp::Rel::Eq, Rational(0));
        q_row.push_back({nu[label], Rational(-1)});
        prog.add_constraint(q_row, lp::Rel::Eq, Rational(0));
    }
    lp::Row norm;
    for (auto& [label, var] : nu) {
        (void)label;
        norm.push_back({var, Rational(1)});
    }
    prog.add_constraint(norm, lp::Rel::Eq, Rational(1));
    return kptest::fm_classify(prog).cls == kptest::FmClass::Feasible;
}

}  // namespace

TEST_CASE("a heat-absorbing cycle is a violation") {
    Theory t;
    t.states = StateSpace({"1", "2"});
    t.generators.push_back(
        {{SignedMeasure{}, subtract(dirac(t.states, "1"), dirac(t.states, "2"))}, true});
    t.generators.push_back({{SignedMeasure{}, dirac(t.states, "2")}, true});
    auto verdict = check_kp(t);
    const auto* v = as_violating(verdict);
    REQUIRE(v != nullptr);
    CHECK(is_nonnegative(v->heating));
    CHECK(total(v->heating) == 1);
    CHECK(verify_membership(t, {SignedMeasure{}, v->heating}, v->witness));
}

TEST_CASE("the empty theory is compliant with the uniform coldness") {
    Theory t;
    t.states = StateSpace({"a", "b", "c"});
    auto verdict = check_kp(t);
    const auto* c = as_compliant(verdict);
    REQUIRE(c != nullptr);
    CHECK(c->slack == Rational(1, 3));
    for (const auto& label : t.states.labels()) CHECK(c->pair.beta_at(label) == Rational(1, 3));
}

TEST_CASE("the sampled quadratic family is compliant with beta1 >= beta2") {
    auto t = builtin_theory("example_d1");
    auto verdict = check_kp(t);
    const auto* c = as_compliant(verdict);
    REQUIRE(c != nullptr);
    CHECK(c->pair.beta_at("1") >= c->pair.beta_at("2"));
    CHECK(c->slack == Rational(1, 2));
    CHECK(cd_feasible(t, c->pair));
}

TEST_CASE("cd_feasible") {
    Theory empty;
    empty.states = StateSpace({"1", "2"});
    CDPair any{{}, {{"1", 1}, {"2", 7}}};
    CHECK(cd_feasible(empty, any));

    auto hs = builtin_theory("halfspace");
    CDPair hs_pair{{{"2", 1}}, {{"1", 2}, {"2", 1}}};
    CHECK(cd_feasible(hs, hs_pair));

    auto d1 = builtin_theory("example_d1");
    CDPair bad{{{"2", 100}}, {{"1", 1}, {"2", 2}}};
    CHECK_FALSE(cd_feasible(d1, bad));

    CDPair nonpositive{{}, {{"1", 1}, {"2", 0}}};
    CHECK_THROWS_AS(cd_feasible(d1, nonpositive), std::invalid_argument);
}

TEST_CASE("cd_extremize: zero functional") {
    auto t = builtin_theory("example_d1");
    std::vector<CdTerm> obj{{CdTerm::Kind::Beta, "1", 1}, {CdTerm::Kind::Beta, "1", -1}};
    auto res = cd_extremize(t, obj, lp::Sense::Max);
    const auto* opt = lp::as_optimal(res.outcome);
    REQUIRE(opt != nullptr);
    CHECK(opt->value == 0);
}

TEST_CASE("cd_extremize: the sampled family's coldness gap has infimum 0") {
    auto t = builtin_theory("example_d1");
    std::vector<CdTerm> obj{{CdTerm::Kind::Beta, "1", 1}, {CdTerm::Kind::Beta, "2", -1}};
    auto res = cd_extremize(t, obj, lp::Sense::Min);
    const auto* opt = lp::as_optimal(res.outcome);
    REQUIRE(opt != nullptr);
    CHECK(opt->value == 0);
}

TEST_CASE("cd_extremize: the half-space admits only one scale direction") {
    auto t = builtin_theory("halfspace");
    std::vector<CdTerm> obj{{CdTerm::Kind::Beta, "1", 1}, {CdTerm::Kind::Beta, "2", -2}};
    auto res = cd_extremize(t, obj, lp::Sense::Max);
    const auto* opt = lp::as_optimal(res.outcome);
    REQUIRE(opt != nullptr);
    CHECK(opt->value == 0);
    REQUIRE(res.argpoint.has_value());
    CHECK(res.argpoint->beta_at("1") == Rational(2, 3));
    CHECK(res.argpoint->beta_at("2") == Rational(1, 3));
}

TEST_CASE("fuzz: compliance coincides with unreachability of the forbidden cone") {
    kptest::Rng rng(112233);
    int compliant = 0, violating = 0;
    for (int iter = 0; iter < 120; ++iter) {
        auto t = kptest::random_theory(rng);
        // Random theories are mostly compliant; pushing a pure absorption
        // generator into every third one exercises the violation path.
        if (iter % 3 == 0)
            t.generators.push_back({{SignedMeasure{}, dirac(t.states, t.states.label(0))}, true});
        auto verdict = check_kp(t);
        if (const auto* c = as_compliant(verdict)) {
            CHECK_FALSE(forbidden_reachable_fm(t));
            CHECK(cd_feasible(t, c->pair));
            CHECK(c->slack > 0);
            ++compliant;
        } else {
            const auto* v = as_violating(verdict);
            REQUIRE(v != nullptr);
            CHECK(forbidden_reachable_fm(t));
            CHECK(is_nonnegative(v->heating));
            CHECK(total(v->heating) == 1);
            CHECK(verify_membership(t, {SignedMeasure{}, v->heating}, v->witness));
            ++violating;
        }
    }
    CHECK(compliant > 20);
    CHECK(violating > 20);
}

TEST_CASE("fuzz: the feasible pair set is convex (mixing)") {
    kptest::Rng rng(445566);
    int mixed = 0;
    for (int iter = 0; iter < 200 && mixed < 25; ++iter) {
        auto t = kptest::random_theory(rng);
        auto verdict = check_kp(t);
        const auto* c = as_compliant(verdict);
        if (!c) continue;

        std::vector<CdTerm> obj;
        for (const auto& label : t.states.labels())
            obj.push_back({CdTerm::Kind::Beta, label, kptest::rand_rational(rng, -2, 2)});
        auto res = cd_extremize(t, obj, lp::Sense::Max);
        if (!res.argpoint) continue;

        // Blend the relaxation point with the strictly positive pair, then
        // mix the blend with the pair again: all must stay feasible.
        CDPair blend;
        for (const auto& label : t.states.labels()) {
            blend.beta[label] = (res.argpoint->beta_at(label) + c->pair.beta_at(label)) / 2;
            blend.eta[label] = (res.argpoint->eta_at(label) + c->pair.eta_at(label)) / 2;
        }
        CHECK(cd_feasible(t, blend));
        CDPair mix;
        for (const auto& label : t.states.labels()) {
            mix.beta[label] = (blend.beta_at(label) + c->pair.beta_at(label)) / 2;
            mix.eta[label] = (blend.eta_at(label) + c->pair.eta_at(label)) / 2;
        }
        CHECK(cd_feasible(t, mix));
        ++mixed;
    }
    CHECK(mixed >= 25);
}

TEST_CASE("reversible cone elements force equality in every pair produced") {
    auto t = builtin_theory("halfspace");
    auto verdict = check_kp(t);
    const auto* c = as_compliant(verdict);
    REQUIRE(c != nullptr);
    // Generators 0..3 are the +/- hyperplane elements.
    for (int g = 0; g < 4; ++g) CHECK(cd_value(c->pair, t.generators[static_cast<size_t>(g)].pv) == 0);
}

TEST_CASE("check_kp validates its input") {
    Theory bad;
    bad.states = StateSpace({"1"});
    SignedMeasure dm;
    dm.set("1", 1);
    bad.generators.push_back({{dm, {}}, true});
    CHECK_THROWS_AS(check_kp(bad), std::invalid_argument);
}
