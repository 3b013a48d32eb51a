#include "kp/hotness.hpp"

#include <functional>
#include <map>
#include <stdexcept>

namespace kp {

namespace {

using lp::Rel;
using lp::Row;
using lp::Sense;

void require_kp(const Theory& t) {
    if (!is_kp(t))
        throw std::invalid_argument("hotness relations are defined only for Kelvin-Planck theories");
}

SameHotness same_hotness_unchecked(const Theory& t, const std::string& a, const std::string& b) {
    SameHotness out;
    if (a == b) {
        out.same = true;
        out.witnesses = {MembershipWitness{}, MembershipWitness{}};
        return out;
    }
    ProcessVector fwd{SignedMeasure{}, subtract(dirac(t.states, a), dirac(t.states, b))};
    auto w1 = member(t, fwd);
    if (!w1) return out;
    auto w2 = member(t, negate(fwd));
    if (!w2) return out;
    out.same = true;
    out.witnesses = {std::move(*w1), std::move(*w2)};
    return out;
}

HotnessPartition partition_unchecked(const Theory& t) {
    const auto& labels = t.states.labels();
    const int n = t.states.size();
    std::vector<int> parent(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) parent[static_cast<size_t>(i)] = i;
    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<size_t>(x)] != x) x = parent[static_cast<size_t>(x)];
        return x;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (find(i) == find(j)) continue;
            if (same_hotness_unchecked(t, labels[static_cast<size_t>(i)],
                                       labels[static_cast<size_t>(j)])
                    .same)
                parent[static_cast<size_t>(find(j))] = find(i);
        }
    std::map<int, std::vector<std::string>> groups;
    for (int i = 0; i < n; ++i) groups[find(i)].push_back(labels[static_cast<size_t>(i)]);
    HotnessPartition p;
    for (auto& [root, members] : groups) {
        (void)root;
        p.classes.push_back(std::move(members));
    }
    return p;
}

bool hotter_unchecked(const Theory& t, const HotnessPartition& p, int hot_class, int cold_class) {
    // Passive transfer from the cooler class to the hotter one: absorbed at
    // the cold representative, emitted at the hot representative. Hotter
    // holds iff no Kelvin-Planck extension can contain it.
    const std::string& cold_rep = p.classes[static_cast<size_t>(cold_class)].front();
    const std::string& hot_rep = p.classes[static_cast<size_t>(hot_class)].front();
    Theory augmented = t;
    augmented.generators.push_back(
        {{SignedMeasure{}, subtract(dirac(t.states, cold_rep), dirac(t.states, hot_rep))}, false});
    return std::holds_alternative<KpViolating>(check_kp(augmented));
}

struct WeakLp {
    lp::LinearProgram lp;
    std::vector<int> yvar;
    std::map<std::string, int> mu_prime_var, mu_var, nu_var;
};

WeakLp build_weak_lp(const Theory& t, const std::vector<std::string>& hot_class,
                     const std::vector<std::string>& cold_class) {
    WeakLp out;
    for (int g = 0; g < static_cast<int>(t.generators.size()); ++g)
        out.yvar.push_back(out.lp.add_variable("y" + std::to_string(g), Rational(0), std::nullopt));
    for (const auto& s : hot_class)
        out.mu_prime_var[s] = out.lp.add_variable("mu'_" + s, Rational(0), std::nullopt);
    for (const auto& s : cold_class)
        out.mu_var[s] = out.lp.add_variable("mu_" + s, Rational(0), std::nullopt);
    for (const auto& s : t.states.labels())
        out.nu_var[s] = out.lp.add_variable("nu_" + s, Rational(0), std::nullopt);

    // sum_g y_g (dm_g, q_g) = (0, mu' - mu + nu)
    for (const auto& s : t.states.labels()) {
        Row dm_row, q_row;
        for (int g = 0; g < static_cast<int>(t.generators.size()); ++g) {
            const auto& pv = t.generators[static_cast<size_t>(g)].pv;
            if (pv.dm.at(s) != 0) dm_row.push_back({out.yvar[static_cast<size_t>(g)], pv.dm.at(s)});
            if (pv.q.at(s) != 0) q_row.push_back({out.yvar[static_cast<size_t>(g)], pv.q.at(s)});
        }
        out.lp.add_constraint(dm_row, Rel::Eq, Rational(0));
        if (auto it = out.mu_prime_var.find(s); it != out.mu_prime_var.end())
            q_row.push_back({it->second, Rational(-1)});
        if (auto it = out.mu_var.find(s); it != out.mu_var.end())
            q_row.push_back({it->second, Rational(1)});
        q_row.push_back({out.nu_var[s], Rational(-1)});
        out.lp.add_constraint(q_row, Rel::Eq, Rational(0));
    }
    Row tot_prime, tot;
    for (const auto& [s, v] : out.mu_prime_var) {
        (void)s;
        tot_prime.push_back({v, Rational(1)});
    }
    for (const auto& [s, v] : out.mu_var) {
        (void)s;
        tot.push_back({v, Rational(1)});
    }
    out.lp.add_constraint(tot_prime, Rel::Eq, Rational(1));
    out.lp.add_constraint(tot, Rel::Eq, Rational(1));
    return out;
}

WeaklyHotter weakly_unchecked(const Theory& t, const HotnessPartition& p, int hot_class,
                              int cold_class) {
    auto wlp = build_weak_lp(t, p.classes[static_cast<size_t>(hot_class)],
                             p.classes[static_cast<size_t>(cold_class)]);
    auto out = lp::solve(wlp.lp);
    WeaklyHotter result;
    const auto* point = lp::solution_point(out);
    if (!point) return result;
    result.holds = true;
    MembershipWitness w;
    for (size_t g = 0; g < wlp.yvar.size(); ++g) {
        const Rational& c = (*point)[static_cast<size_t>(wlp.yvar[g])];
        if (c != 0) w.coefficients[static_cast<int>(g)] = c;
    }
    result.witness = std::move(w);
    for (const auto& [s, v] : wlp.mu_prime_var) result.mu_prime.set(s, (*point)[static_cast<size_t>(v)]);
    for (const auto& [s, v] : wlp.mu_var) result.mu.set(s, (*point)[static_cast<size_t>(v)]);
    for (const auto& [s, v] : wlp.nu_var) result.nu.set(s, (*point)[static_cast<size_t>(v)]);
    return result;
}

bool strongly_unchecked(const Theory& t, const HotnessPartition& p, int hot_class, int cold_class) {
    auto wlp = build_weak_lp(t, p.classes[static_cast<size_t>(hot_class)],
                             p.classes[static_cast<size_t>(cold_class)]);
    Row obj;
    for (const auto& [s, v] : wlp.nu_var) {
        (void)s;
        obj.push_back({v, Rational(1)});
    }
    wlp.lp.set_objective(obj, Sense::Max);
    auto out = lp::solve(wlp.lp);
    if (lp::as_unbounded(out)) return true;
    const auto* opt = lp::as_optimal(out);
    return opt && opt->value > 0;
}

std::pair<int, int> resolve_distinct_classes(const HotnessPartition& p, const std::string& a,
                                             const std::string& b) {
    int ca = p.class_of(a), cb = p.class_of(b);
    if (ca == cb)
        throw std::invalid_argument("states '" + a + "' and '" + b + "' are of the same hotness");
    return {ca, cb};
}

}  // namespace

int HotnessPartition::class_of(const std::string& label) const {
    for (int i = 0; i < static_cast<int>(classes.size()); ++i)
        for (const auto& s : classes[static_cast<size_t>(i)])
            if (s == label) return i;
    throw std::invalid_argument("unknown state label: " + label);
}

SameHotness same_hotness(const Theory& t, const std::string& a, const std::string& b) {
    t.states.index_of(a);
    t.states.index_of(b);
    require_kp(t);
    return same_hotness_unchecked(t, a, b);
}

HotnessPartition hotness_partition(const Theory& t) {
    require_kp(t);
    return partition_unchecked(t);
}

bool hotter_than(const Theory& t, const std::string& in_hotter, const std::string& in_cooler) {
    require_kp(t);
    auto p = partition_unchecked(t);
    auto [hc, cc] = resolve_distinct_classes(p, in_hotter, in_cooler);
    return hotter_unchecked(t, p, hc, cc);
}

WeaklyHotter weakly_hotter(const Theory& t, const std::string& in_hotter,
                           const std::string& in_cooler) {
    require_kp(t);
    auto p = partition_unchecked(t);
    auto [hc, cc] = resolve_distinct_classes(p, in_hotter, in_cooler);
    return weakly_unchecked(t, p, hc, cc);
}

bool strongly_hotter(const Theory& t, const std::string& in_hotter, const std::string& in_cooler) {
    require_kp(t);
    auto p = partition_unchecked(t);
    auto [hc, cc] = resolve_distinct_classes(p, in_hotter, in_cooler);
    return strongly_unchecked(t, p, hc, cc);
}

OrderReport order_report(const Theory& t) {
    require_kp(t);
    OrderReport report;
    report.partition = partition_unchecked(t);
    const int k = static_cast<int>(report.partition.classes.size());
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            if (i == j) continue;
            if (hotter_unchecked(t, report.partition, i, j)) report.strict_edges.insert({i, j});
            if (weakly_unchecked(t, report.partition, i, j).holds) report.weak_edges.insert({i, j});
            if (strongly_unchecked(t, report.partition, i, j)) report.strong_edges.insert({i, j});
        }
    }

    // strong c strict c weak, and the strict order is a strict partial order.
    for (const auto& e : report.strong_edges)
        if (!report.strict_edges.count(e))
            throw std::logic_error("internal error: strongly hotter without hotter");
    for (const auto& e : report.strict_edges) {
        if (!report.weak_edges.count(e))
            throw std::logic_error("internal error: hotter without weakly hotter");
        if (report.strict_edges.count({e.second, e.first}))
            throw std::logic_error("internal error: hotter-than is not antisymmetric");
    }
    for (const auto& a : report.strict_edges)
        for (const auto& b : report.strict_edges)
            if (a.second == b.first && !report.strict_edges.count({a.first, b.second}))
                throw std::logic_error("internal error: hotter-than is not transitive");
    return report;
}

}  // namespace kp
