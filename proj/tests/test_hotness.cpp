#include "kp/hotness.hpp"

#include "kp/scenarios.hpp"
#include "support/random_gen.hpp"

#include <doctest.h>

using namespace kp;

namespace {

Theory two_state_reversible_pair() {
    Theory t;
    t.states = StateSpace({"1", "2", "3"});
    ProcessVector transfer{SignedMeasure{},
                           subtract(dirac(t.states, "1"), dirac(t.states, "2"))};
    t.generators.push_back({transfer, true});
    t.generators.push_back({negate(transfer), true});
    return t;
}

// Coldness gap over the closed relaxation: [min, max] of beta(a) - beta(b).
std::pair<Rational, Rational> beta_gap_range(const Theory& t, const std::string& a,
                                             const std::string& b) {
    std::vector<CdTerm> obj{{CdTerm::Kind::Beta, a, 1}, {CdTerm::Kind::Beta, b, -1}};
    auto lo = cd_extremize(t, obj, lp::Sense::Min);
    auto hi = cd_extremize(t, obj, lp::Sense::Max);
    const auto* lo_opt = lp::as_optimal(lo.outcome);
    const auto* hi_opt = lp::as_optimal(hi.outcome);
    REQUIRE(lo_opt != nullptr);
    REQUIRE(hi_opt != nullptr);
    return {lo_opt->value, hi_opt->value};
}

}  // namespace

TEST_CASE("a state has its own hotness") {
    auto t = builtin_theory("two_state_transfer");
    auto res = same_hotness(t, "1", "1");
    CHECK(res.same);
}

TEST_CASE("reversible transfers merge hotness") {
    auto t = two_state_reversible_pair();
    CHECK(same_hotness(t, "1", "2").same);
    auto p = hotness_partition(t);
    REQUIRE(p.classes.size() == 2);
    CHECK(p.classes[0] == std::vector<std::string>{"1", "2"});
    CHECK(p.classes[1] == std::vector<std::string>{"3"});
}

TEST_CASE("the sampled quadratic family keeps its two states apart") {
    auto t = builtin_theory("example_d1");
    auto res = same_hotness(t, "1", "2");
    CHECK_FALSE(res.same);
    auto p = hotness_partition(t);
    CHECK(p.classes.size() == 2);
}

TEST_CASE("no generators, all singleton levels") {
    Theory t;
    t.states = StateSpace({"1", "2", "3"});
    auto p = hotness_partition(t);
    CHECK(p.classes.size() == 3);
}

TEST_CASE("a single one-way transfer does not make its source hotter") {
    auto t = builtin_theory("two_state_transfer");
    // Augmenting with the reverse transfer only cancels; the pair stays
    // Kelvin-Planck, so neither level is hotter.
    CHECK_FALSE(hotter_than(t, "1", "2"));
    CHECK_FALSE(hotter_than(t, "2", "1"));
}

TEST_CASE("the half-space orders its levels strictly") {
    auto t = builtin_theory("halfspace");
    CHECK(hotter_than(t, "2", "1"));
    CHECK_FALSE(hotter_than(t, "1", "2"));  // antisymmetry
}

TEST_CASE("weak comparisons on the single transfer") {
    auto t = builtin_theory("two_state_transfer");
    auto res = weakly_hotter(t, "1", "2");
    REQUIRE(res.holds);
    CHECK(res.mu_prime == dirac(t.states, "1"));
    CHECK(res.mu == dirac(t.states, "2"));
    CHECK(res.nu.empty());
    CHECK_FALSE(weakly_hotter(t, "2", "1").holds);
    CHECK_FALSE(strongly_hotter(t, "1", "2"));
}

TEST_CASE("the half-space transfer can do work") {
    auto t = builtin_theory("halfspace");
    CHECK(weakly_hotter(t, "2", "1").holds);
    CHECK(strongly_hotter(t, "2", "1"));
}

TEST_CASE("a work-producing transfer is strongly hotter") {
    Theory t;
    t.states = StateSpace({"a", "b", "c"});
    SignedMeasure q1;
    q1.set("a", 1);
    q1.set("b", -1);
    t.generators.push_back({{SignedMeasure{}, q1}, true});
    SignedMeasure q2 = q1;
    q2.set("c", 1);
    t.generators.push_back({{SignedMeasure{}, q2}, true});
    REQUIRE(is_kp(t));
    CHECK(strongly_hotter(t, "a", "b"));
    CHECK(hotter_than(t, "a", "b") == true);  // strong implies strict
}

TEST_CASE("order reports") {
    Theory empty;
    empty.states = StateSpace({"1", "2"});
    auto r0 = order_report(empty);
    CHECK(r0.strict_edges.empty());
    CHECK(r0.weak_edges.empty());
    CHECK(r0.strong_edges.empty());

    auto hs = order_report(builtin_theory("halfspace"));
    REQUIRE(hs.partition.classes.size() == 2);
    int c1 = hs.partition.class_of("1"), c2 = hs.partition.class_of("2");
    CHECK(hs.strict_edges == std::set<std::pair<int, int>>{{c2, c1}});
    CHECK(hs.weak_edges == std::set<std::pair<int, int>>{{c2, c1}});
    CHECK(hs.strong_edges == std::set<std::pair<int, int>>{{c2, c1}});

    auto d1 = order_report(builtin_theory("example_d1"));
    int d1c1 = d1.partition.class_of("1"), d1c2 = d1.partition.class_of("2");
    CHECK(d1.weak_edges == std::set<std::pair<int, int>>{{d1c2, d1c1}});
    CHECK(d1.strict_edges.empty());
    CHECK(d1.strong_edges.empty());
}

TEST_CASE("hotness operations require a Kelvin-Planck theory") {
    Theory bad;
    bad.states = StateSpace({"1", "2"});
    bad.generators.push_back({{SignedMeasure{}, dirac(bad.states, "1")}, true});
    CHECK_THROWS_AS(same_hotness(bad, "1", "2"), std::invalid_argument);
    CHECK_THROWS_AS(hotness_partition(bad), std::invalid_argument);
    CHECK_THROWS_AS(order_report(bad), std::invalid_argument);
}

TEST_CASE("hotter_than rejects states of one level") {
    auto t = two_state_reversible_pair();
    CHECK_THROWS_AS(hotter_than(t, "1", "2"), std::invalid_argument);
}

TEST_CASE("fuzz: same-hotness coincides with a pinned coldness difference") {
    kptest::Rng rng(20240102);
    int kp_theories = 0, same_seen = 0;
    for (int iter = 0; iter < 400 && kp_theories < 60; ++iter) {
        auto t = kptest::random_theory(rng);
        // Merged hotness levels need reversible transfers, which random
        // generators almost never produce; plant one in half the corpus.
        if (iter % 2 == 0) {
            ProcessVector transfer{SignedMeasure{}, subtract(dirac(t.states, t.states.label(0)),
                                                             dirac(t.states, t.states.label(1)))};
            t.generators.push_back({transfer, true});
            t.generators.push_back({negate(transfer), true});
        }
        if (!is_kp(t)) continue;
        ++kp_theories;
        const auto& labels = t.states.labels();
        for (size_t i = 0; i < labels.size(); ++i) {
            for (size_t j = i + 1; j < labels.size(); ++j) {
                auto hot = same_hotness(t, labels[i], labels[j]);
                auto [lo, hi] = beta_gap_range(t, labels[i], labels[j]);
                bool pinned = lo == 0 && hi == 0;
                CHECK(hot.same == pinned);
                if (hot.same) {
                    ++same_seen;
                    // The common value is attained by a strictly positive
                    // scale: re-solve with a slack and the equality pinned.
                    auto cdlp = detail::make_cd_lp(t, detail::CdNorm::SumBetaOne, "", true);
                    cdlp.lp.add_constraint({{cdlp.beta_var.at(labels[i]), Rational(1)},
                                            {cdlp.beta_var.at(labels[j]), Rational(-1)}},
                                           lp::Rel::Eq, Rational(0));
                    cdlp.lp.set_objective({{cdlp.slack_var, Rational(1)}}, lp::Sense::Max);
                    auto out = lp::solve(cdlp.lp);
                    const auto* opt = lp::as_optimal(out);
                    REQUIRE(opt != nullptr);
                    CHECK(opt->value > 0);
                }
            }
        }
    }
    CHECK(kp_theories >= 60);
    CHECK(same_seen > 0);
}

TEST_CASE("fuzz: weakly hotter coincides with a nonnegative coldness gap") {
    kptest::Rng rng(20240103);
    int checked = 0;
    for (int iter = 0; iter < 300 && checked < 40; ++iter) {
        auto t = kptest::random_theory(rng);
        if (!is_kp(t)) continue;
        auto p = hotness_partition(t);
        if (p.classes.size() < 2) continue;
        ++checked;
        const std::string& a = p.classes[0].front();
        const std::string& b = p.classes[1].front();
        auto [lo_ab, hi_ab] = beta_gap_range(t, b, a);
        (void)hi_ab;
        // hot w> cold iff beta(cold) - beta(hot) >= 0 over every scale.
        CHECK(weakly_hotter(t, a, b).holds == (lo_ab >= 0));
    }
    CHECK(checked >= 40);
}

TEST_CASE("fuzz: every pair produced orders strictly-hotter representatives") {
    // Whenever hotter-than holds, any concrete Clausius-Duhem pair obtained
    // from the theory must give the hotter representative the higher
    // temperature (checked on finitely many produced pairs, not all scales).
    kptest::Rng rng(20240105);
    int edges_seen = 0;
    for (int iter = 0; iter < 200 && edges_seen < 10; ++iter) {
        auto t = kptest::random_theory(rng);
        auto verdict = check_kp(t);
        const auto* c = as_compliant(verdict);
        if (!c) continue;
        auto report = order_report(t);
        for (const auto& [hot, cold] : report.strict_edges) {
            ++edges_seen;
            const auto& hot_rep = report.partition.classes[static_cast<size_t>(hot)].front();
            const auto& cold_rep = report.partition.classes[static_cast<size_t>(cold)].front();
            // Higher temperature = lower coldness.
            CHECK(c->pair.beta_at(hot_rep) < c->pair.beta_at(cold_rep));
        }
    }
    CHECK(edges_seen >= 10);
}

TEST_CASE("fuzz: implication chain strong => strict => weak") {
    kptest::Rng rng(20240104);
    int checked = 0;
    for (int iter = 0; iter < 200 && checked < 30; ++iter) {
        auto t = kptest::random_theory(rng);
        if (!is_kp(t)) continue;
        auto report = order_report(t);  // asserts the chain internally
        if (report.partition.classes.size() >= 2) ++checked;
        for (const auto& e : report.strong_edges) CHECK(report.strict_edges.count(e) == 1);
        for (const auto& e : report.strict_edges) CHECK(report.weak_edges.count(e) == 1);
    }
    CHECK(checked >= 30);
}
