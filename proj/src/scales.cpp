#include "kp/scales.hpp"

#include <stdexcept>

namespace kp {

namespace {

using lp::Rel;
using lp::Row;
using lp::Sense;

void require_positive_beta(const Theory& t, const std::map<std::string, Rational>& beta) {
    for (const auto& label : t.states.labels()) {
        auto it = beta.find(label);
        if (it == beta.end() || it->second <= 0)
            throw std::invalid_argument("beta must be strictly positive at every state ('" + label +
                                        "')");
    }
}

Rational beta_dot(const std::map<std::string, Rational>& beta, const SignedMeasure& q) {
    return dot(beta, q);
}

// max <beta, q> over { q : (0, q) in cone, |q|_1 <= 1 }; <= 0 iff beta is a
// strong Clausius scale.
Rational strong_clausius_optimum(const Theory& t, const std::map<std::string, Rational>& beta) {
    lp::LinearProgram prog;
    std::vector<int> yvar;
    for (int g = 0; g < static_cast<int>(t.generators.size()); ++g)
        yvar.push_back(prog.add_variable("y" + std::to_string(g), Rational(0), std::nullopt));
    std::map<std::string, int> qplus, qminus;
    for (const auto& label : t.states.labels()) {
        qplus[label] = prog.add_variable("q+_" + label, Rational(0), std::nullopt);
        qminus[label] = prog.add_variable("q-_" + label, Rational(0), std::nullopt);
    }
    for (const auto& label : t.states.labels()) {
        Row dm_row, q_row;
        for (int g = 0; g < static_cast<int>(t.generators.size()); ++g) {
            const auto& pv = t.generators[static_cast<size_t>(g)].pv;
            if (pv.dm.at(label) != 0) dm_row.push_back({yvar[static_cast<size_t>(g)], pv.dm.at(label)});
            if (pv.q.at(label) != 0) q_row.push_back({yvar[static_cast<size_t>(g)], pv.q.at(label)});
        }
        prog.add_constraint(dm_row, Rel::Eq, Rational(0));
        q_row.push_back({qplus[label], Rational(-1)});
        q_row.push_back({qminus[label], Rational(1)});
        prog.add_constraint(q_row, Rel::Eq, Rational(0));
    }
    Row norm_row, obj;
    for (const auto& label : t.states.labels()) {
        norm_row.push_back({qplus[label], Rational(1)});
        norm_row.push_back({qminus[label], Rational(1)});
        const Rational b = beta.at(label);
        obj.push_back({qplus[label], b});
        obj.push_back({qminus[label], -b});
    }
    prog.add_constraint(norm_row, Rel::Le, Rational(1));
    prog.set_objective(obj, Sense::Max);
    auto out = lp::solve(prog);
    const auto* opt = lp::as_optimal(out);
    if (!opt) throw std::logic_error("strong Clausius LP must be bounded");
    return opt->value;
}

bool cd_exists_lp(const Theory& t, const std::map<std::string, Rational>& beta) {
    lp::LinearProgram prog;
    std::map<std::string, int> eta;
    for (const auto& label : t.states.labels()) eta[label] = prog.add_variable("eta_" + label);
    for (const auto& g : t.generators) {
        Row row;
        for (const auto& [label, v] : g.pv.dm.entries()) row.push_back({eta[label], v});
        prog.add_constraint(row, Rel::Ge, beta_dot(beta, g.pv.q));
    }
    return lp::solution_point(lp::solve(prog)) != nullptr;
}

}  // namespace

bool example_d1_oracle(const Rational& eta1, const Rational& eta2, const Rational& beta1,
                       const Rational& beta2) {
    if (beta1 <= 0 || beta2 <= 0) throw std::invalid_argument("beta must be strictly positive");
    if (beta1 <= beta2) return false;
    return eta2 - eta1 >= (beta1 + beta2) * (beta1 + beta2) / (4 * (beta1 - beta2));
}

bool example_d1_cd_scale(const Rational& beta1, const Rational& beta2) {
    if (beta1 <= 0 || beta2 <= 0) throw std::invalid_argument("beta must be strictly positive");
    return beta1 > beta2;
}

CDPair example_d1_cd_pair(const Rational& beta1, const Rational& beta2) {
    if (!example_d1_cd_scale(beta1, beta2))
        throw std::invalid_argument("no Clausius-Duhem pair exists for this beta");
    CDPair pair;
    pair.beta["1"] = beta1;
    pair.beta["2"] = beta2;
    pair.eta["2"] = (beta1 + beta2) * (beta1 + beta2) / (4 * (beta1 - beta2));
    return pair;
}

ScaleVerdict classify_scale(const Theory& t, const std::map<std::string, Rational>& beta) {
    require_valid(t);
    require_positive_beta(t, beta);

    ScaleVerdict v;
    v.clausius = true;
    for (const auto& g : t.generators) {
        if (!g.true_process || !g.pv.dm.empty()) continue;
        if (beta_dot(beta, g.pv.q) > 0) v.clausius = false;
    }
    v.strong_clausius = strong_clausius_optimum(t, beta) <= 0;

    if (t.family != ExactFamily::none)
        v.clausius_duhem = example_d1_cd_scale(beta.at("1"), beta.at("2"));
    else
        v.clausius_duhem = cd_exists_lp(t, beta);

    if ((v.clausius_duhem && !v.strong_clausius) || (v.strong_clausius && !v.clausius))
        throw std::logic_error("internal error: scale verdict implication chain broken");
    return v;
}

std::optional<CDPair> density_witness(const Theory& t, const std::map<std::string, Rational>& beta0,
                                      const Rational& eps) {
    require_valid(t);
    require_positive_beta(t, beta0);
    if (eps < 0) throw std::invalid_argument("eps must be nonnegative");
    if (!classify_scale(t, beta0).strong_clausius)
        throw std::invalid_argument("beta0 is not a strong Clausius scale");

    if (t.family != ExactFamily::none) {
        // Exact family: a pair within the box exists iff some beta there has
        // beta1 > beta2 (and stays positive); maximize the worst margin.
        lp::LinearProgram prog;
        int b1 = prog.add_variable("beta1", beta0.at("1") - eps, beta0.at("1") + eps);
        int b2 = prog.add_variable("beta2", beta0.at("2") - eps, beta0.at("2") + eps);
        int s = prog.add_variable("s");
        prog.add_constraint({{b1, Rational(1)}, {s, Rational(-1)}}, Rel::Ge, Rational(0));
        prog.add_constraint({{b2, Rational(1)}, {s, Rational(-1)}}, Rel::Ge, Rational(0));
        prog.add_constraint({{b1, Rational(1)}, {b2, Rational(-1)}, {s, Rational(-1)}}, Rel::Ge,
                            Rational(0));
        prog.set_objective({{s, Rational(1)}}, Sense::Max);
        auto out = lp::solve(prog);
        const auto* opt = lp::as_optimal(out);
        if (!opt || opt->value <= 0) return std::nullopt;
        return example_d1_cd_pair(opt->point[0], opt->point[1]);
    }

    auto cdlp = detail::make_cd_lp(t, detail::CdNorm::None, "", /*with_slack=*/true);
    for (const auto& label : t.states.labels()) {
        const Rational& b0 = beta0.at(label);
        int bv = cdlp.beta_var.at(label);
        cdlp.lp.add_constraint({{bv, Rational(1)}}, Rel::Le, b0 + eps);
        cdlp.lp.add_constraint({{bv, Rational(1)}}, Rel::Ge, b0 - eps);
    }
    cdlp.lp.set_objective({{cdlp.slack_var, Rational(1)}}, Sense::Max);
    auto out = lp::solve(cdlp.lp);
    const auto* opt = lp::as_optimal(out);
    if (!opt || opt->value <= 0) return std::nullopt;
    auto pair = detail::point_to_pair(cdlp, opt->point);
    if (!cd_feasible(t, pair))
        throw std::logic_error("internal error: density witness fails cd_feasible");
    return pair;
}

}  // namespace kp
