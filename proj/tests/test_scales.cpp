#include "kp/scales.hpp"

#include "kp/scenarios.hpp"
#include "support/random_gen.hpp"

#include <doctest.h>

using namespace kp;

namespace {

std::map<std::string, Rational> beta2(const Rational& b1, const Rational& b2) {
    return {{"1", b1}, {"2", b2}};
}

}  // namespace

TEST_CASE("equal temperatures: Clausius and strong Clausius but not Clausius-Duhem") {
    auto t = builtin_theory("example_d1");
    auto v = classify_scale(t, beta2(1, 1));
    CHECK(v.clausius);
    CHECK(v.strong_clausius);
    CHECK_FALSE(v.clausius_duhem);
}

TEST_CASE("the no-cyclic-process variant accepts every positive beta as Clausius") {
    auto t = builtin_theory("example_d2");
    auto v = classify_scale(t, beta2(1, 2));  // T1 = 1 > T2 = 1/2
    CHECK(v.clausius);
    CHECK_FALSE(v.strong_clausius);
    CHECK_FALSE(v.clausius_duhem);

    // Its strong Clausius verdicts coincide with the closed variant's.
    auto d1 = builtin_theory("example_d1");
    for (long i = 1; i <= 4; ++i) {
        for (long j = 1; j <= 4; ++j) {
            auto b = beta2(Rational(i, 4), Rational(j, 4));
            CHECK(classify_scale(t, b).strong_clausius == classify_scale(d1, b).strong_clausius);
            CHECK(classify_scale(t, b).clausius);
        }
    }
}

TEST_CASE("wrong temperature order fails every scale notion") {
    auto t = builtin_theory("example_d1");
    auto v = classify_scale(t, beta2(1, 2));  // beta1 < beta2, so T1 > T2
    CHECK_FALSE(v.clausius);
    CHECK_FALSE(v.strong_clausius);
    CHECK_FALSE(v.clausius_duhem);
}

TEST_CASE("a compliant coldness from check_kp satisfies all three notions") {
    for (const char* name : {"halfspace", "two_state_transfer"}) {
        auto t = builtin_theory(name);
        auto verdict = check_kp(t);
        const auto* c = as_compliant(verdict);
        REQUIRE(c != nullptr);
        std::map<std::string, Rational> beta(c->pair.beta.begin(), c->pair.beta.end());
        auto v = classify_scale(t, beta);
        CHECK(v.clausius);
        CHECK(v.strong_clausius);
        CHECK(v.clausius_duhem);
    }
}

TEST_CASE("the closed-form pair test") {
    CHECK(example_d1_oracle(0, Rational(9, 4), 2, 1));   // exactly at the boundary
    CHECK_FALSE(example_d1_oracle(0, 100, 1, 1));        // needs beta1 > beta2
    CHECK_FALSE(example_d1_oracle(0, 2, 2, 1));          // 2 < 9/4
    CHECK(example_d1_oracle(0, 3, 2, 1));
    CHECK_THROWS_AS(example_d1_oracle(0, 1, 0, 1), std::invalid_argument);

    CHECK(example_d1_cd_scale(2, 1));
    CHECK_FALSE(example_d1_cd_scale(1, 1));
    auto pair = example_d1_cd_pair(2, 1);
    CHECK(pair.eta_at("2") - pair.eta_at("1") == Rational(9, 4));
}

TEST_CASE("nonpositive beta is rejected") {
    auto t = builtin_theory("example_d1");
    CHECK_THROWS_AS(classify_scale(t, beta2(1, 0)), std::invalid_argument);
    CHECK_THROWS_AS(classify_scale(t, {{"1", 1}}), std::invalid_argument);
}

TEST_CASE("sampling soundness of the quadratic family") {
    // Denser alpha grids only shrink the sampled feasible set toward the
    // closed form; oracle-accepted pairs pass every sampling, and pairs with
    // beta1 < beta2 fail every sampling that includes alpha = 0.
    std::vector<std::vector<Rational>> grids;
    for (int m : {1, 2, 4}) {
        std::vector<Rational> alphas;
        for (int k = -2 * m; k <= 2 * m; ++k) alphas.push_back(Rational(k, m));
        grids.push_back(alphas);
    }
    kptest::Rng rng(99991);
    for (int iter = 0; iter < 40; ++iter) {
        Rational b1 = kptest::rand_rational(rng, 1, 3, 4);
        Rational b2 = kptest::rand_rational(rng, 1, 3, 4);
        Rational eta2 = kptest::rand_rational(rng, -6, 6, 2);
        CDPair pair{{{"2", eta2}}, {{"1", b1}, {"2", b2}}};
        bool exact = example_d1_oracle(0, eta2, b1, b2);
        for (const auto& alphas : grids) {
            auto t = make_example_d1(alphas);
            bool sampled = cd_feasible(t, pair);
            if (exact) CHECK(sampled);
            if (b1 < b2) CHECK_FALSE(sampled);
        }
    }
}

TEST_CASE("density witness near the equal-temperature scale") {
    auto t = builtin_theory("example_d1");
    auto w1 = density_witness(t, beta2(1, 1), Rational(1, 10));
    REQUIRE(w1.has_value());
    CHECK(w1->beta_at("1") > w1->beta_at("2"));
    CHECK(w1->beta_at("1") - 1 <= Rational(1, 10));
    CHECK(1 - w1->beta_at("2") <= Rational(1, 10));
    // At the slack optimum the box is stretched to its corners.
    CHECK(w1->beta_at("1") == Rational(11, 10));
    CHECK(w1->beta_at("2") == Rational(9, 10));
    CHECK(w1->eta_at("2") - w1->eta_at("1") == 5);  // the closed-form boundary

    auto w2 = density_witness(t, beta2(1, 1), Rational(1, 100));
    REQUIRE(w2.has_value());
    CHECK(w2->beta_at("1") > w2->beta_at("2"));

    CHECK_FALSE(density_witness(t, beta2(1, 1), 0).has_value());

    // A scale that is already Clausius-Duhem admits a witness at any radius.
    auto w3 = density_witness(t, beta2(2, 1), Rational(1, 10));
    REQUIRE(w3.has_value());
    CHECK(example_d1_oracle(w3->eta_at("1"), w3->eta_at("2"), w3->beta_at("1"), w3->beta_at("2")));

    CHECK_THROWS_AS(density_witness(t, beta2(1, 2), Rational(1, 10)), std::invalid_argument);
}

TEST_CASE("density witness on a polyhedral theory") {
    auto t = builtin_theory("halfspace");
    auto verdict = check_kp(t);
    const auto* c = as_compliant(verdict);
    REQUIRE(c != nullptr);
    std::map<std::string, Rational> beta0(c->pair.beta.begin(), c->pair.beta.end());
    auto w = density_witness(t, beta0, Rational(1, 10));
    REQUIRE(w.has_value());
    CHECK(cd_feasible(t, *w));

    // The strong Clausius precondition is enforced.
    std::map<std::string, Rational> wrong{{"1", 1}, {"2", 3}};
    CHECK_FALSE(classify_scale(t, wrong).strong_clausius);
    CHECK_THROWS_AS(density_witness(t, wrong, Rational(1, 10)), std::invalid_argument);
}

TEST_CASE("fuzz: the implication chain holds for random scales and theories") {
    kptest::Rng rng(60606);
    for (int iter = 0; iter < 60; ++iter) {
        auto t = kptest::random_theory(rng);
        std::map<std::string, Rational> beta;
        for (const auto& label : t.states.labels())
            beta[label] = kptest::rand_rational(rng, 1, 4, 3);
        auto v = classify_scale(t, beta);  // asserts the chain internally
        if (v.clausius_duhem) CHECK(v.strong_clausius);
        if (v.strong_clausius) CHECK(v.clausius);
    }
}

TEST_CASE("fuzz: density theorem on random Kelvin-Planck theories") {
    kptest::Rng rng(70707);
    int tried = 0;
    for (int iter = 0; iter < 200 && tried < 20; ++iter) {
        auto t = kptest::random_theory(rng);
        auto verdict = check_kp(t);
        const auto* c = as_compliant(verdict);
        if (!c) continue;
        ++tried;
        std::map<std::string, Rational> beta0(c->pair.beta.begin(), c->pair.beta.end());
        // Strong Clausius holds for a genuine scale; a witness must exist in
        // any positive radius.
        auto w = density_witness(t, beta0, Rational(1, 7));
        REQUIRE(w.has_value());
        CHECK(cd_feasible(t, *w));
    }
    CHECK(tried >= 20);
}
