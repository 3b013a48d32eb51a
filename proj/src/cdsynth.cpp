#include "kp/cdsynth.hpp"

#include <stdexcept>

namespace kp {

using lp::Rel;
using lp::Row;
using lp::Sense;

Rational CDPair::eta_at(const std::string& label) const {
    auto it = eta.find(label);
    return it == eta.end() ? Rational(0) : it->second;
}

Rational CDPair::beta_at(const std::string& label) const {
    auto it = beta.find(label);
    return it == beta.end() ? Rational(0) : it->second;
}

bool beta_strictly_positive(const CDPair& pair, const StateSpace& states) {
    for (const auto& label : states.labels())
        if (pair.beta_at(label) <= 0) return false;
    return true;
}

Rational cd_value(const CDPair& pair, const ProcessVector& pv) {
    return dot(pair.eta, pv.dm) - dot(pair.beta, pv.q);
}

namespace detail {

CdLp make_cd_lp(const Theory& t, CdNorm norm, const std::string& anchor_label, bool with_slack) {
    CdLp out;
    for (const auto& label : t.states.labels())
        out.eta_var[label] = out.lp.add_variable("eta_" + label);
    for (const auto& label : t.states.labels()) {
        out.beta_var[label] = with_slack
                                  ? out.lp.add_variable("beta_" + label)
                                  : out.lp.add_variable("beta_" + label, Rational(0), std::nullopt);
    }
    if (with_slack) {
        out.slack_var = out.lp.add_variable("slack");
        for (const auto& label : t.states.labels())
            out.lp.add_constraint({{out.beta_var[label], Rational(1)}, {out.slack_var, Rational(-1)}},
                                  Rel::Ge, Rational(0));
    }

    for (const auto& g : t.generators) {
        Row row;
        for (const auto& [label, v] : g.pv.dm.entries()) row.push_back({out.eta_var[label], v});
        for (const auto& [label, v] : g.pv.q.entries()) row.push_back({out.beta_var[label], -v});
        out.lp.add_constraint(row, Rel::Ge, Rational(0));
    }

    if (norm == CdNorm::SumBetaOne) {
        Row row;
        for (const auto& label : t.states.labels()) row.push_back({out.beta_var[label], Rational(1)});
        out.lp.add_constraint(row, Rel::Eq, Rational(1));
    } else if (norm == CdNorm::Anchor) {
        out.lp.add_constraint({{out.beta_var.at(anchor_label), Rational(1)}}, Rel::Eq, Rational(1));
    }
    return out;
}

CDPair point_to_pair(const CdLp& cdlp, const std::vector<Rational>& point) {
    CDPair pair;
    for (const auto& [label, var] : cdlp.eta_var) {
        const Rational& v = point[static_cast<size_t>(var)];
        if (v != 0) pair.eta[label] = v;
    }
    for (const auto& [label, var] : cdlp.beta_var) pair.beta[label] = point[static_cast<size_t>(var)];
    return pair;
}

}  // namespace detail

KpVerdict check_kp(const Theory& t) {
    require_valid(t);

    auto cdlp = detail::make_cd_lp(t, detail::CdNorm::SumBetaOne, "", /*with_slack=*/true);
    cdlp.lp.set_objective({{cdlp.slack_var, Rational(1)}}, Sense::Max);
    auto out = lp::solve(cdlp.lp);

    if (const auto* opt = lp::as_optimal(out); opt && opt->value > 0) {
        KpCompliant c{detail::point_to_pair(cdlp, opt->point), opt->value};
        if (!cd_feasible(t, c.pair))
            throw std::logic_error("internal error: compliant pair fails its own inequality");
        return c;
    }

    // Kelvin-Planck fails, so the forbidden cone is reachable: find y >= 0,
    // nu >= 0 with sum y_g (dm_g, q_g) = (0, nu) and total(nu) = 1.
    lp::LinearProgram viol;
    std::vector<int> yvar;
    for (int g = 0; g < static_cast<int>(t.generators.size()); ++g)
        yvar.push_back(viol.add_variable("y" + std::to_string(g), Rational(0), std::nullopt));
    std::map<std::string, int> nuvar;
    for (const auto& label : t.states.labels())
        nuvar[label] = viol.add_variable("nu_" + label, Rational(0), std::nullopt);
    for (const auto& label : t.states.labels()) {
        Row dm_row, q_row;
        for (int g = 0; g < static_cast<int>(t.generators.size()); ++g) {
            const auto& pv = t.generators[static_cast<size_t>(g)].pv;
            if (pv.dm.at(label) != 0) dm_row.push_back({yvar[static_cast<size_t>(g)], pv.dm.at(label)});
            if (pv.q.at(label) != 0) q_row.push_back({yvar[static_cast<size_t>(g)], pv.q.at(label)});
        }
        viol.add_constraint(dm_row, Rel::Eq, Rational(0));
        q_row.push_back({nuvar[label], Rational(-1)});
        viol.add_constraint(q_row, Rel::Eq, Rational(0));
    }
    Row norm_row;
    for (const auto& [label, var] : nuvar) {
        (void)label;
        norm_row.push_back({var, Rational(1)});
    }
    viol.add_constraint(norm_row, Rel::Eq, Rational(1));

    auto vout = lp::solve(viol);
    const auto* point = lp::solution_point(vout);
    if (!point)
        throw std::logic_error("internal error: no compliance pair and no violation witness");

    KpViolating v;
    for (size_t g = 0; g < yvar.size(); ++g) {
        const Rational& c = (*point)[static_cast<size_t>(yvar[g])];
        if (c != 0) v.witness.coefficients[static_cast<int>(g)] = c;
    }
    for (const auto& [label, var] : nuvar) v.heating.set(label, (*point)[static_cast<size_t>(var)]);
    if (!verify_membership(t, {SignedMeasure{}, v.heating}, v.witness) ||
        !is_nonnegative(v.heating) || total(v.heating) != 1)
        throw std::logic_error("internal error: violation witness failed re-verification");
    return v;
}

bool is_kp(const Theory& t) { return std::holds_alternative<KpCompliant>(check_kp(t)); }

bool cd_feasible(const Theory& t, const CDPair& pair) {
    require_valid(t);
    if (!beta_strictly_positive(pair, t.states))
        throw std::invalid_argument("beta must be strictly positive at every state");
    for (const auto& g : t.generators)
        if (cd_value(pair, g.pv) < 0) return false;
    return true;
}

CdExtremum cd_extremize(const Theory& t, const std::vector<CdTerm>& objective, Sense sense,
                        const std::vector<CdConstraint>& extras) {
    require_valid(t);
    auto cdlp = detail::make_cd_lp(t, detail::CdNorm::SumBetaOne);

    auto term_var = [&](const CdTerm& term) {
        const auto& vars = term.kind == CdTerm::Kind::Eta ? cdlp.eta_var : cdlp.beta_var;
        auto it = vars.find(term.state);
        if (it == vars.end()) throw std::invalid_argument("objective references unknown state: " + term.state);
        return it->second;
    };

    for (const auto& extra : extras) {
        Row row;
        for (const auto& term : extra.terms) row.push_back({term_var(term), term.coeff});
        cdlp.lp.add_constraint(row, extra.rel, extra.rhs);
    }

    Row obj;
    for (const auto& term : objective) obj.push_back({term_var(term), term.coeff});
    cdlp.lp.set_objective(obj, sense);

    CdExtremum result{lp::solve(cdlp.lp), std::nullopt};
    if (const auto* opt = lp::as_optimal(result.outcome))
        result.argpoint = detail::point_to_pair(cdlp, opt->point);
    else if (const auto* ub = lp::as_unbounded(result.outcome))
        result.argpoint = detail::point_to_pair(cdlp, ub->point);
    return result;
}

}  // namespace kp
