#include "kp/uniqueness.hpp"

#include <algorithm>
#include <stdexcept>

namespace kp {

namespace {

using lp::Rel;
using lp::Row;
using lp::Sense;

std::vector<std::string> domain_in_order(const StateSpace& states,
                                         const std::optional<std::set<std::string>>& subdomain) {
    std::vector<std::string> out;
    for (const auto& label : states.labels()) {
        if (!subdomain || subdomain->count(label)) out.push_back(label);
    }
    if (subdomain && out.size() != subdomain->size())
        throw std::invalid_argument("subdomain contains unknown state labels");
    return out;
}

// Joint membership system for a target and its negative sharing scalar
// unknowns: rows for sum_g y_g (dm, q) = +target and sum_g z_g (dm, q) =
// -target, where the target may reference LP variables.
struct PairedLp {
    lp::LinearProgram lp;
    std::vector<int> yvar, zvar;
};

PairedLp make_paired_lp(const Theory& t) {
    PairedLp out;
    for (int g = 0; g < static_cast<int>(t.generators.size()); ++g)
        out.yvar.push_back(out.lp.add_variable("y" + std::to_string(g), Rational(0), std::nullopt));
    for (int g = 0; g < static_cast<int>(t.generators.size()); ++g)
        out.zvar.push_back(out.lp.add_variable("z" + std::to_string(g), Rational(0), std::nullopt));
    return out;
}

// Adds the four rows for one state: the y-system must hit the target, the
// z-system its negative. The target per coordinate is a constant plus LP
// terms: sum_g y_g pv_g(s) - terms = const (and mirrored for z).
void add_paired_rows(PairedLp& plp, const Theory& t, const std::string& label,
                     const Row& target_dm_terms, const Row& target_q_terms,
                     const Rational& const_dm, const Rational& const_q) {
    for (int side = 0; side < 2; ++side) {
        const auto& vars = side == 0 ? plp.yvar : plp.zvar;
        const Rational sign = side == 0 ? 1 : -1;
        Row dm_row, q_row;
        for (int g = 0; g < static_cast<int>(t.generators.size()); ++g) {
            const auto& pv = t.generators[static_cast<size_t>(g)].pv;
            if (pv.dm.at(label) != 0) dm_row.push_back({vars[static_cast<size_t>(g)], pv.dm.at(label)});
            if (pv.q.at(label) != 0) q_row.push_back({vars[static_cast<size_t>(g)], pv.q.at(label)});
        }
        for (const auto& term : target_dm_terms) dm_row.push_back({term.var, -sign * term.coeff});
        for (const auto& term : target_q_terms) q_row.push_back({term.var, -sign * term.coeff});
        plp.lp.add_constraint(dm_row, Rel::Eq, sign * const_dm);
        plp.lp.add_constraint(q_row, Rel::Eq, sign * const_q);
    }
}

MembershipWitness witness_from_point(const std::vector<int>& vars,
                                     const std::vector<Rational>& point) {
    MembershipWitness w;
    for (size_t g = 0; g < vars.size(); ++g) {
        const Rational& c = point[static_cast<size_t>(vars[g])];
        if (c != 0) w.coefficients[static_cast<int>(g)] = c;
    }
    return w;
}

}  // namespace

std::optional<CarnotElement> find_carnot(const Theory& t, const std::string& sigma_prime,
                                         const std::string& sigma) {
    require_valid(t);
    t.states.index_of(sigma_prime);
    t.states.index_of(sigma);
    if (sigma_prime == sigma)
        throw std::invalid_argument("a Carnot element needs two distinct states");

    // Feasible c' over the joint system {(0, c' d' - c d) and its negative
    // in the cone, c' + c = 1, c', c >= 0} form an interval; a Carnot
    // element exists iff the interval meets (0, 1).
    auto build = [&]() {
        PairedLp plp = make_paired_lp(t);
        int cp = plp.lp.add_variable("c'", Rational(0), std::nullopt);
        int c = plp.lp.add_variable("c", Rational(0), std::nullopt);
        for (const auto& label : t.states.labels()) {
            Row q_terms;
            if (label == sigma_prime) q_terms.push_back({cp, Rational(1)});
            if (label == sigma) q_terms.push_back({c, Rational(-1)});
            add_paired_rows(plp, t, label, {}, q_terms, Rational(0), Rational(0));
        }
        plp.lp.add_constraint({{cp, Rational(1)}, {c, Rational(1)}}, Rel::Eq, Rational(1));
        plp.lp.set_objective({{cp, Rational(1)}}, Sense::Max);
        return std::make_pair(std::move(plp), cp);
    };

    auto [max_lp, cp_var] = build();
    auto max_out = lp::solve(max_lp.lp);
    if (lp::as_infeasible(max_out)) return std::nullopt;
    const auto* max_opt = lp::as_optimal(max_out);
    if (!max_opt) throw std::logic_error("carnot interval LP must be bounded");
    Rational hi = max_opt->value;

    auto [min_lp, cp_var2] = build();
    min_lp.lp.set_objective({{cp_var2, Rational(1)}}, Sense::Min);
    auto min_out = lp::solve(min_lp.lp);
    const auto* min_opt = lp::as_optimal(min_out);
    if (!min_opt) throw std::logic_error("carnot interval LP must be bounded");
    Rational lo = min_opt->value;

    if (hi == 0 || lo == 1) return std::nullopt;  // only degenerate endpoints
    Rational cp = lo == hi ? lo : (lo + hi) / 2;

    CarnotElement elem;
    elem.sigma_prime = sigma_prime;
    elem.sigma = sigma;
    elem.c_prime = cp;
    elem.c = 1 - cp;
    ProcessVector target{SignedMeasure{}, subtract(scale(elem.c_prime, dirac(t.states, sigma_prime)),
                                                   scale(elem.c, dirac(t.states, sigma)))};
    auto fwd = member(t, target);
    auto bwd = member(t, negate(target));
    if (!fwd || !bwd) throw std::logic_error("carnot element failed membership re-verification");
    elem.forward = std::move(*fwd);
    elem.backward = std::move(*bwd);
    return elem;
}

std::optional<ReversibleConnection> reversible_connect(
    const Theory& t, const std::string& sigma_prime, const std::string& sigma,
    const std::optional<std::set<std::string>>& support) {
    require_valid(t);
    t.states.index_of(sigma_prime);
    t.states.index_of(sigma);
    if (support)
        for (const auto& s : *support) t.states.index_of(s);

    if (sigma_prime == sigma)
        return ReversibleConnection{sigma_prime, sigma, SignedMeasure{}, {}, {}};

    PairedLp plp = make_paired_lp(t);
    std::map<std::string, int> qvar;
    for (const auto& label : t.states.labels())
        if (!support || support->count(label)) qvar[label] = plp.lp.add_variable("q_" + label);

    SignedMeasure dm = subtract(dirac(t.states, sigma_prime), dirac(t.states, sigma));
    for (const auto& label : t.states.labels()) {
        Row q_terms;
        if (auto it = qvar.find(label); it != qvar.end()) q_terms.push_back({it->second, Rational(1)});
        add_paired_rows(plp, t, label, {}, q_terms, dm.at(label), Rational(0));
    }
    auto out = lp::solve(plp.lp);
    const auto* point = lp::solution_point(out);
    if (!point) return std::nullopt;

    ReversibleConnection conn;
    conn.sigma_prime = sigma_prime;
    conn.sigma = sigma;
    for (const auto& [label, var] : qvar) conn.q.set(label, (*point)[static_cast<size_t>(var)]);
    conn.forward = witness_from_point(plp.yvar, *point);
    conn.backward = witness_from_point(plp.zvar, *point);
    if (!verify_membership(t, {dm, conn.q}, conn.forward) ||
        !verify_membership(t, negate({dm, conn.q}), conn.backward))
        throw std::logic_error("reversible connection failed re-verification");
    return conn;
}

std::vector<ProcessVector> hyperplane_basis(const StateSpace& states, const CDPair& pair) {
    if (!beta_strictly_positive(pair, states))
        throw std::invalid_argument("beta must be strictly positive at every state");
    const int n = states.size();
    const int dim = 2 * n;  // (dm_1..dm_n, q_1..q_n)

    // Null space of two rows: [1..1 | 0..0] (total dm) and [eta | -beta].
    std::vector<std::vector<Rational>> rows(2, std::vector<Rational>(static_cast<size_t>(dim), 0));
    for (int i = 0; i < n; ++i) {
        rows[0][static_cast<size_t>(i)] = 1;
        rows[1][static_cast<size_t>(i)] = pair.eta_at(states.label(i));
        rows[1][static_cast<size_t>(n + i)] = -pair.beta_at(states.label(i));
    }

    // Gaussian elimination, first nonzero column as pivot.
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < dim && r < 2; ++c) {
        int pr = -1;
        for (int i = r; i < 2; ++i)
            if (rows[static_cast<size_t>(i)][static_cast<size_t>(c)] != 0) {
                pr = i;
                break;
            }
        if (pr < 0) continue;
        std::swap(rows[static_cast<size_t>(r)], rows[static_cast<size_t>(pr)]);
        Rational p = rows[static_cast<size_t>(r)][static_cast<size_t>(c)];
        for (auto& x : rows[static_cast<size_t>(r)]) x /= p;
        for (int i = 0; i < 2; ++i) {
            if (i == r) continue;
            Rational f = rows[static_cast<size_t>(i)][static_cast<size_t>(c)];
            if (f == 0) continue;
            for (int j = 0; j < dim; ++j)
                rows[static_cast<size_t>(i)][static_cast<size_t>(j)] -=
                    f * rows[static_cast<size_t>(r)][static_cast<size_t>(j)];
        }
        pivot_col.push_back(c);
        ++r;
    }

    std::vector<ProcessVector> basis;
    for (int c = 0; c < dim; ++c) {
        if (std::find(pivot_col.begin(), pivot_col.end(), c) != pivot_col.end()) continue;
        std::vector<Rational> v(static_cast<size_t>(dim), 0);
        v[static_cast<size_t>(c)] = 1;
        for (int i = 0; i < r; ++i)
            v[static_cast<size_t>(pivot_col[static_cast<size_t>(i)])] =
                -rows[static_cast<size_t>(i)][static_cast<size_t>(c)];
        ProcessVector pv;
        for (int i = 0; i < n; ++i) {
            pv.dm.set(states.label(i), v[static_cast<size_t>(i)]);
            pv.q.set(states.label(i), v[static_cast<size_t>(n + i)]);
        }
        basis.push_back(std::move(pv));
    }
    return basis;
}

TempVerdict temp_unique(const Theory& t, std::optional<std::set<std::string>> subdomain,
                        bool pairwise) {
    require_valid(t);
    auto domain = domain_in_order(t.states, subdomain);
    if (domain.size() < 2) return TempUnique{};

    TempUnique unique;
    std::string failing;
    const std::string& ref = domain.front();
    for (size_t i = 0; i + 1 < domain.size() && failing.empty(); ++i) {
        for (size_t j = i + 1; j < domain.size(); ++j) {
            if (!pairwise && i != 0) break;
            auto carnot = find_carnot(t, domain[j], domain[i]);
            if (!carnot) {
                failing = domain[j];
                break;
            }
            unique.evidence.push_back(std::move(*carnot));
        }
    }
    if (failing.empty()) return unique;

    // No Carnot element between ref and `failing`: two feasible pairs with
    // different beta(failing)/beta(ref) ratios exist. Anchor beta(ref) = 1,
    // stretch beta(failing) away from the compliant pair's ratio, and blend
    // to restore strict positivity.
    auto kp = check_kp(t);
    const auto* compliant = as_compliant(kp);
    if (!compliant)
        throw std::invalid_argument("temperature uniqueness requires a Kelvin-Planck theory");
    CDPair base = compliant->pair;
    Rational anchor_value = base.beta_at(ref);
    CDPair scaled;  // base rescaled to beta(ref) = 1; eta rescales inversely
    for (const auto& label : t.states.labels()) {
        scaled.beta[label] = base.beta_at(label) / anchor_value;
        Rational e = base.eta_at(label) / anchor_value;
        if (e != 0) scaled.eta[label] = e;
    }
    Rational target_ratio = scaled.beta_at(failing);

    auto solve_side = [&](Sense sense) {
        auto cdlp = detail::make_cd_lp(t, detail::CdNorm::Anchor, ref);
        cdlp.lp.set_objective({{cdlp.beta_var.at(failing), Rational(1)}}, sense);
        return std::make_pair(lp::solve(cdlp.lp), std::move(cdlp));
    };

    std::optional<CDPair> stretched;
    for (auto sense : {Sense::Max, Sense::Min}) {
        auto [out, cdlp] = solve_side(sense);
        if (const auto* ub = lp::as_unbounded(out)) {
            // Walk far enough along the ray to move the ratio past base's.
            auto point = ub->point;
            Rational v0 = point[static_cast<size_t>(cdlp.beta_var.at(failing))];
            Rational dv = ub->ray[static_cast<size_t>(cdlp.beta_var.at(failing))];
            Rational k = 1;
            if (dv > 0 && v0 + dv <= target_ratio) k = (target_ratio - v0) / dv + 1;
            if (dv < 0 && v0 + dv >= target_ratio) k = (target_ratio - v0) / dv + 1;
            for (size_t j = 0; j < point.size(); ++j) point[j] += k * ub->ray[j];
            auto cand = detail::point_to_pair(cdlp, point);
            if (cand.beta_at(failing) != target_ratio) {
                stretched = std::move(cand);
                break;
            }
        } else if (const auto* opt = lp::as_optimal(out)) {
            if (opt->value != target_ratio) {
                stretched = detail::point_to_pair(cdlp, opt->point);
                break;
            }
        }
    }
    if (!stretched)
        throw std::logic_error("internal error: no Carnot element yet the beta ratio is pinned");

    CDPair blended;
    for (const auto& label : t.states.labels()) {
        blended.beta[label] = (stretched->beta_at(label) + scaled.beta_at(label)) / 2;
        Rational e = (stretched->eta_at(label) + scaled.eta_at(label)) / 2;
        if (e != 0) blended.eta[label] = e;
    }
    if (!cd_feasible(t, scaled) || !cd_feasible(t, blended))
        throw std::logic_error("internal error: non-uniqueness evidence fails cd_feasible");
    return TempNonUnique{std::move(scaled), std::move(blended), failing};
}

bool cd_pair_unique(const Theory& t, const CDPair& pair) {
    if (!cd_feasible(t, pair))
        throw std::invalid_argument("pair is not Clausius-Duhem feasible for this theory");
    return contains_subspace(t, hyperplane_basis(t.states, pair));
}

bool halfspace_equals(const Theory& t, const CDPair& pair) {
    if (!cd_pair_unique(t, pair)) return false;
    for (const auto& label : t.states.labels()) {
        ProcessVector strict{SignedMeasure{}, negate(dirac(t.states, label))};
        if (member(t, strict)) return true;
    }
    return false;
}

bool q_set_coincides(const Theory& t) {
    require_valid(t);
    for (const auto& label : t.states.labels()) {
        ProcessVector target{SignedMeasure{}, negate(dirac(t.states, label))};
        if (!member(t, target)) return false;
    }
    return true;
}

std::optional<SignedMeasure> complete_to_cone(const Theory& t, const SignedMeasure& v,
                                              const SignedMeasure& w) {
    if (total(v) != 0) throw std::invalid_argument("change of condition must have total 0");
    FreeSpec spec;
    for (const auto& label : t.states.labels()) spec.free_q.insert(label);
    spec.nonnegative = true;
    spec.minimize_total = true;
    auto result = member_free(t, {v, w}, spec);
    if (!result) return std::nullopt;
    return result->second;
}

EntropyUniqueness entropy_unique(const Theory& t, std::optional<std::set<std::string>> subdomain) {
    require_valid(t);
    auto domain = domain_in_order(t.states, subdomain);
    EntropyUniqueness out;
    out.unique = true;
    if (domain.size() < 2) return out;
    std::optional<std::set<std::string>> support;
    if (subdomain) support = subdomain;
    for (size_t j = 1; j < domain.size(); ++j) {
        auto conn = reversible_connect(t, domain[j], domain.front(), support);
        if (!conn) {
            out.unique = false;
            out.connections.clear();
            return out;
        }
        out.connections.push_back(std::move(*conn));
    }
    return out;
}

std::optional<Rational> entropy_offset(const Theory& t, const CDPair& first, const CDPair& second,
                                       std::optional<std::set<std::string>> subdomain) {
    if (!cd_feasible(t, first) || !cd_feasible(t, second))
        throw std::invalid_argument("both pairs must be Clausius-Duhem feasible");
    auto domain = domain_in_order(t.states, subdomain);
    for (const auto& label : domain)
        if (first.beta_at(label) != second.beta_at(label))
            throw std::invalid_argument("pairs must share the same beta on the sub-domain");
    Rational offset = second.eta_at(domain.front()) - first.eta_at(domain.front());
    for (const auto& label : domain)
        if (second.eta_at(label) - first.eta_at(label) != offset) return std::nullopt;
    return offset;
}

}  // namespace kp
