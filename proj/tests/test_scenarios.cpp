#include "kp/scenarios.hpp"

#include "kp/cdsynth.hpp"
#include "kp/hotness.hpp"
#include "kp/uniqueness.hpp"

#include <doctest.h>

#include <cmath>

using namespace kp;

namespace {

ProcessVector gen_xq(const Theory& t, const Rational& x, const Rational& q1, const Rational& q2) {
    ProcessVector pv;
    pv.dm = scale(x, subtract(dirac(t.states, "2"), dirac(t.states, "1")));
    SignedMeasure q;
    q.set("1", q1);
    q.set("2", q2);
    pv.q = q;
    return pv;
}

double tv_double(const ProcessVector& a, const ProcessVector& b) {
    return to_double(tv_distance(a, b));
}

}  // namespace

TEST_CASE("the default alpha grid generates the six published elements") {
    auto t = builtin_theory("example_d1");
    REQUIRE(t.generators.size() == 6);
    CHECK(t.generators[0].pv == gen_xq(t, 4, -3, -1));
    CHECK(t.generators[1].pv == gen_xq(t, 1, -2, 0));
    CHECK(t.generators[2].pv == gen_xq(t, 0, -1, 1));
    CHECK(t.generators[3].pv == gen_xq(t, 1, 0, 2));
    CHECK(t.generators[4].pv == gen_xq(t, 4, 1, 3));
    CHECK(t.generators[5].pv == gen_xq(t, 1, 0, 0));
    for (const auto& g : t.generators) CHECK(g.true_process);
    CHECK(t.family == ExactFamily::example_d1);

    auto t2 = builtin_theory("example_d2");
    REQUIRE(t2.generators.size() == 6);
    for (size_t i = 0; i < 6; ++i) CHECK(t2.generators[i].pv == t.generators[i].pv);
    CHECK_FALSE(t2.generators[2].true_process);  // alpha = 0 sample
    CHECK_FALSE(t2.generators[5].true_process);  // limit direction
    CHECK(t2.generators[0].true_process);

    for (const auto& name : builtin_theory_names())
        CHECK(validate_theory(builtin_theory(name)).empty());
}

TEST_CASE("the built-in half-space fixture behaves like a half-space") {
    auto t = builtin_theory("halfspace");
    CHECK(is_kp(t));
    CHECK(verdict_unique(temp_unique(t)));
    CDPair pair{{{"2", 1}}, {{"1", 2}, {"2", 1}}};
    CHECK(halfspace_equals(t, pair));
    CHECK(q_set_coincides(t));
}

TEST_CASE("the single-transfer fixture carries a weak edge only") {
    auto t = builtin_theory("two_state_transfer");
    REQUIRE(t.generators.size() == 1);
    auto report = order_report(t);
    CHECK(report.weak_edges.size() == 1);
    CHECK(report.strict_edges.empty());
    CHECK_THROWS_AS(builtin_theory("nope"), std::invalid_argument);
}

TEST_CASE("generalized half-space builder") {
    auto t = make_halfspace({"a", "b", "c"}, {{"b", 1}, {"c", 2}},
                            {{"a", 4}, {"b", 2}, {"c", 1}});
    CHECK(is_kp(t));
    CHECK(verdict_unique(temp_unique(t)));
    CDPair pair{{{"b", 1}, {"c", 2}}, {{"a", 4}, {"b", 2}, {"c", 1}}};
    CHECK(halfspace_equals(t, pair));
}

TEST_CASE("grids bin by nearest center") {
    QuantizationGrid grid({{0.0, 1.0, 2.0, 4.0}});
    CHECK(grid.bin({0.2}) == std::vector<int>{0});
    CHECK(grid.bin({1.4}) == std::vector<int>{1});   // centers 0.5, 1.5, 3.0
    CHECK(grid.bin({2.2}) == std::vector<int>{1});   // nearer 1.5 than 3.0
    CHECK(grid.bin({2.9}) == std::vector<int>{2});
    CHECK(grid.label({2}) == "[3]");
    CHECK_THROWS_AS(QuantizationGrid({{1.0, 1.0}}), std::invalid_argument);
}

TEST_CASE("constant tube fields reproduce the pure transfer exactly") {
    auto fields = constant_tube_fields(2.0, 1.0, 1.0);
    auto emission = appendix_a_sequence(4, fields, default_tube_grid());
    REQUIRE(emission.sequence.size() == 4);
    for (const auto& pv : emission.sequence) {
        CHECK(tv_double(pv, emission.limit) < 1e-12);
        CHECK(total(pv.dm) == 0);
    }
    CHECK(emission.limit.q.at("[2]") == 1);
    CHECK(emission.limit.q.at("[1]") == -1);
    CHECK(emission.max_renormalization < 1e-12);
}

TEST_CASE("linearly varying tube fields converge to the transfer") {
    auto emission = appendix_a_sequence(8, default_tube_fields(), default_tube_grid());
    double d2 = tv_double(emission.sequence[1], emission.limit);
    double d4 = tv_double(emission.sequence[3], emission.limit);
    double d8 = tv_double(emission.sequence[7], emission.limit);
    // The flux slope 0.2 in x yields deviation 0.4 xi_n = 0.4 / n^2.
    CHECK(std::abs(d2 - 0.1) < 1e-9);
    CHECK(std::abs(d4 - 0.025) < 1e-9);
    CHECK(std::abs(d8 - 0.00625) < 1e-9);
    CHECK(d4 < d2);
    CHECK(d8 < d4);
    CHECK(d8 < 1e-2);
    CHECK(emission.max_renormalization < 1e-9);
    for (const auto& pv : emission.sequence) CHECK(total(pv.dm) == 0);
}

TEST_CASE("the scaled change of condition obeys the density bound") {
    // A steep time slope moves mass across the bin boundary, so the binned
    // dm is nonzero but still dominated by alpha (rho' + rho) xi_n / (tau_n r00).
    TubeFields fields = default_tube_fields();
    fields.sigma_prime = [](double x, double t) { return 2.0 + 0.5 * x + 1.2 * t; };
    fields.sigma = [](double x, double t) { return 1.0 + 0.5 * x + 1.2 * t; };
    auto emission = appendix_a_sequence(8, fields, default_tube_grid());
    for (int n = 1; n <= 8; ++n) {
        double bound = (fields.rho_prime + fields.rho) / n;  // alpha = r00 = 1
        CHECK(to_double(l1_norm(emission.sequence[static_cast<size_t>(n - 1)].dm)) <=
              bound + 1e-9);
    }
    CHECK(l1_norm(emission.sequence[7].dm) < l1_norm(emission.sequence[1].dm));
}

TEST_CASE("r(0,0) must be positive") {
    auto fields = constant_tube_fields(2.0, 1.0, 0.0);
    CHECK_THROWS_AS(appendix_a_sequence(2, fields, default_tube_grid()), std::invalid_argument);
}

TEST_CASE("the default reactor model satisfies its invariants on the grid") {
    CHECK(reactor_model_violations(default_reactor_model(), default_reactor_grid()).empty());
}

TEST_CASE("reactor ramp elements converge to the reversible limit") {
    auto model = default_reactor_model();
    std::vector<double> c0{0.5, 0.5};
    std::vector<double> eps{0.1, 0.05, 0.025, 0.0125, 1e-4};
    auto emission = appendix_c_sequence(model, c0, 1.0, 2.0, eps, default_reactor_grid());
    REQUIRE(emission.sequence.size() == 5);

    // Limit: unit heating density over theta in [1, 2], all at c = (1/2, 1/2).
    CHECK(emission.limit.dm.at("[0.5,0.5,1.95]") == 1);
    CHECK(emission.limit.dm.at("[0.5,0.5,1.05]") == -1);
    Rational qtotal = 0;
    for (const auto& [label, v] : emission.limit.q.entries()) {
        CHECK(v == Rational(1, 10));
        qtotal += v;
    }
    CHECK(qtotal == 1);

    const auto& ref = emission.sequence[4];
    double e1 = tv_double(emission.sequence[0], ref);
    double e2 = tv_double(emission.sequence[1], ref);
    double e3 = tv_double(emission.sequence[2], ref);
    double e4 = tv_double(emission.sequence[3], ref);
    CHECK(e1 > 0);
    for (double ratio : {e2 / e1, e3 / e2, e4 / e3}) {
        CHECK(ratio > 0.3);
        CHECK(ratio < 0.7);
    }
}

TEST_CASE("zero kinetics make every ramp element equal to the limit") {
    auto model = default_reactor_model();
    model.rate = [](const std::vector<double>& c, double) {
        return std::vector<double>(c.size(), 0.0);
    };
    std::vector<double> eps{0.1, 0.01};
    auto emission =
        appendix_c_sequence(model, {0.5, 0.5}, 1.0, 2.0, eps, default_reactor_grid());
    for (const auto& pv : emission.sequence) CHECK(tv_double(pv, emission.limit) < 1e-9);
}

TEST_CASE("swapping the ramp endpoints negates the binned limit") {
    auto model = default_reactor_model();
    std::vector<double> eps{0.05};
    auto fwd = appendix_c_sequence(model, {0.5, 0.5}, 1.0, 2.0, eps, default_reactor_grid());
    auto bwd = appendix_c_sequence(model, {0.5, 0.5}, 2.0, 1.0, eps, default_reactor_grid());
    for (const auto& [label, v] : fwd.limit_q_float) {
        REQUIRE(bwd.limit_q_float.count(label) == 1);
        CHECK(std::abs(v + bwd.limit_q_float.at(label)) < 1e-9);
    }
    for (const auto& [label, v] : fwd.limit_dm_float) {
        REQUIRE(bwd.limit_dm_float.count(label) == 1);
        CHECK(std::abs(v + bwd.limit_dm_float.at(label)) < 1e-9);
    }
}

TEST_CASE("the reversible reactor limit forces equal entropy differences") {
    auto model = default_reactor_model();
    std::vector<double> eps{0.05};
    auto emission = appendix_c_sequence(model, {0.5, 0.5}, 1.0, 2.0, eps, default_reactor_grid());

    // A theory carrying +/- the limit plus a half-space structure over the
    // occupied bins: the uniform coldness pins eta differences along the
    // ramp to <beta, q0> for every feasible entropy.
    const auto& labels = emission.states.labels();
    const std::string hot = "[0.5,0.5,1.95]", cold = "[0.5,0.5,1.05]";
    std::map<std::string, Rational> eta0, beta0;
    for (const auto& l : labels) beta0[l] = 1;
    eta0[hot] = total(emission.limit.q);  // <beta0, q0> with eta0(cold) = 0
    Theory t = make_halfspace(labels, eta0, beta0);
    t.generators.push_back({emission.limit, true});
    t.generators.push_back({negate(emission.limit), true});
    REQUIRE(is_kp(t));

    auto conn = reversible_connect(t, hot, cold);
    REQUIRE(conn.has_value());

    // Max and min of eta(hot) - eta(cold) over feasible pairs with beta
    // pinned to the uniform coldness agree: the difference is forced.
    std::vector<CdConstraint> pin;
    for (const auto& l : labels)
        pin.push_back({{{CdTerm::Kind::Beta, l, 1}}, lp::Rel::Eq,
                       Rational(1, static_cast<long>(labels.size()))});
    std::vector<CdTerm> obj{{CdTerm::Kind::Eta, hot, 1}, {CdTerm::Kind::Eta, cold, -1}};
    auto lo = cd_extremize(t, obj, lp::Sense::Min, pin);
    auto hi = cd_extremize(t, obj, lp::Sense::Max, pin);
    const auto* lo_opt = lp::as_optimal(lo.outcome);
    const auto* hi_opt = lp::as_optimal(hi.outcome);
    REQUIRE(lo_opt != nullptr);
    REQUIRE(hi_opt != nullptr);
    CHECK(lo_opt->value == hi_opt->value);
    CHECK(lo_opt->value ==
          total(emission.limit.q) / Rational(static_cast<long>(labels.size())));
}

TEST_CASE("rationalization stays within the declared budget") {
    auto emission = appendix_a_sequence(4, default_tube_fields(), default_tube_grid());
    CHECK(emission.max_rationalization < 1e-6);
    auto model = default_reactor_model();
    auto rem = appendix_c_sequence(model, {0.5, 0.5}, 1.0, 2.0, {0.1}, default_reactor_grid());
    CHECK(rem.max_rationalization < 1e-6);
    CHECK(rem.max_renormalization < 1e-9);
}

TEST_CASE("reactor argument validation") {
    auto model = default_reactor_model();
    auto grid = default_reactor_grid();
    CHECK_THROWS_AS(appendix_c_sequence(model, {0.5}, 1.0, 2.0, {0.1}, grid),
                    std::invalid_argument);
    CHECK_THROWS_AS(appendix_c_sequence(model, {0.5, 0.5}, 1.0, 1.0, {0.1}, grid),
                    std::invalid_argument);
    CHECK_THROWS_AS(appendix_c_sequence(model, {0.5, 0.5}, 1.0, 2.0, {-0.1}, grid),
                    std::invalid_argument);
    CHECK_THROWS_AS(appendix_c_sequence(model, {0.5, 0.5}, 0.1, 2.0, {0.1}, grid),
                    std::invalid_argument);
}
