#include "kp/cone.hpp"

#include <stdexcept>

namespace kp {

namespace {

using lp::LinearProgram;
using lp::Rel;
using lp::Row;

// Variable layout shared by the membership LPs: one nonnegative coefficient
// per generator, then any free q offsets.
struct MembershipLp {
    LinearProgram lp;
    std::vector<int> gen_vars;
    std::map<std::string, int> free_vars;
};

MembershipLp build_membership_lp(const Theory& t, const ProcessVector& fixed, const FreeSpec& spec) {
    MembershipLp out;
    for (int g = 0; g < static_cast<int>(t.generators.size()); ++g)
        out.gen_vars.push_back(
            out.lp.add_variable("y" + std::to_string(g), Rational(0), std::nullopt));
    for (const auto& label : spec.free_q) {
        t.states.index_of(label);
        out.free_vars[label] = spec.nonnegative
                                   ? out.lp.add_variable("f_" + label, Rational(0), std::nullopt)
                                   : out.lp.add_variable("f_" + label);
    }

    // dm rows: sum_g y_g dm_g(s) == fixed.dm(s); q rows likewise with the
    // free offset subtracted from the generator side.
    for (const auto& label : t.states.labels()) {
        Row dm_row, q_row;
        for (int g = 0; g < static_cast<int>(t.generators.size()); ++g) {
            const auto& pv = t.generators[static_cast<size_t>(g)].pv;
            Rational a = pv.dm.at(label);
            if (a != 0) dm_row.push_back({out.gen_vars[static_cast<size_t>(g)], a});
            Rational b = pv.q.at(label);
            if (b != 0) q_row.push_back({out.gen_vars[static_cast<size_t>(g)], b});
        }
        out.lp.add_constraint(dm_row, Rel::Eq, fixed.dm.at(label));
        auto fv = out.free_vars.find(label);
        if (fv != out.free_vars.end()) q_row.push_back({fv->second, Rational(-1)});
        out.lp.add_constraint(q_row, Rel::Eq, fixed.q.at(label));
    }
    return out;
}

MembershipWitness extract_witness(const MembershipLp& mlp, const std::vector<Rational>& point) {
    MembershipWitness w;
    for (size_t g = 0; g < mlp.gen_vars.size(); ++g) {
        const Rational& v = point[static_cast<size_t>(mlp.gen_vars[g])];
        if (v != 0) w.coefficients[static_cast<int>(g)] = v;
    }
    return w;
}

}  // namespace

ProcessVector witness_combination(const Theory& t, const MembershipWitness& w) {
    ProcessVector sum;
    for (const auto& [g, coeff] : w.coefficients) {
        if (g < 0 || g >= static_cast<int>(t.generators.size()))
            throw std::invalid_argument("witness references generator " + std::to_string(g));
        sum = add(sum, scale(coeff, t.generators[static_cast<size_t>(g)].pv));
    }
    return sum;
}

bool verify_membership(const Theory& t, const ProcessVector& target, const MembershipWitness& w) {
    for (const auto& [g, coeff] : w.coefficients) {
        (void)g;
        if (coeff < 0) return false;
    }
    return witness_combination(t, w) == target;
}

MemberResult member_with_certificate(const Theory& t, const ProcessVector& target) {
    require_valid(t);
    require_over(t, target);
    auto mlp = build_membership_lp(t, target, {});
    auto out = lp::solve(mlp.lp);

    MemberResult result;
    if (const auto* point = lp::solution_point(out)) {
        result.witness = extract_witness(mlp, *point);
        return result;
    }
    const auto* inf = lp::as_infeasible(out);
    if (!inf) throw std::logic_error("membership LP must be feasible or infeasible");

    // Farkas multipliers (a, b) on the interleaved (dm, q) equality rows
    // give phi(v, w) = <a, v> + <b, w> with phi >= 0 on every generator and
    // phi(target) < 0; in Clausius-Duhem orientation eta = a, beta = -b.
    SeparatingFunctional sep;
    const auto& labels = t.states.labels();
    for (size_t i = 0; i < labels.size(); ++i) {
        const Rational& a = inf->farkas[2 * i];
        const Rational& b = inf->farkas[2 * i + 1];
        if (a != 0) sep.eta[labels[i]] = a;
        if (b != 0) sep.beta[labels[i]] = -b;
    }
    result.separator = std::move(sep);
    return result;
}

std::optional<MembershipWitness> member(const Theory& t, const ProcessVector& target) {
    return member_with_certificate(t, target).witness;
}

std::optional<std::pair<MembershipWitness, SignedMeasure>> member_free(const Theory& t,
                                                                       const ProcessVector& fixed,
                                                                       const FreeSpec& spec) {
    require_valid(t);
    require_over(t, fixed);
    auto mlp = build_membership_lp(t, fixed, spec);
    if (spec.minimize_total) {
        if (!spec.nonnegative)
            throw std::invalid_argument("minimize_total requires nonnegative offsets");
        Row obj;
        for (const auto& [label, var] : mlp.free_vars) {
            (void)label;
            obj.push_back({var, Rational(1)});
        }
        if (obj.empty()) obj.push_back({0, Rational(0)});
        mlp.lp.set_objective(obj, lp::Sense::Min);
    }
    auto out = lp::solve(mlp.lp);
    const auto* point = lp::solution_point(out);
    if (!point) return std::nullopt;

    SignedMeasure offsets;
    for (const auto& [label, var] : mlp.free_vars)
        offsets.set(label, (*point)[static_cast<size_t>(var)]);
    return std::make_pair(extract_witness(mlp, *point), std::move(offsets));
}

bool contains_subspace(const Theory& t, const std::vector<ProcessVector>& basis) {
    for (const auto& b : basis) {
        if (!member(t, b)) return false;
        if (!member(t, negate(b))) return false;
    }
    return true;
}

}  // namespace kp
