#include "kp/conjunction.hpp"

#include "kp/uniqueness.hpp"

#include <algorithm>
#include <stdexcept>

namespace kp {

namespace {

Rational part_total(const SignedMeasure& m, const std::set<std::string>& part) {
    Rational s = 0;
    for (const auto& [label, v] : m.entries())
        if (part.count(label)) s += v;
    return s;
}

// Scale of a Kelvin-Planck theory, anchored so that `anchor` has beta = 1.
CDPair anchored_scale(const Theory& t, const std::string& anchor, const char* what) {
    auto verdict = check_kp(t);
    const auto* compliant = as_compliant(verdict);
    if (!compliant) throw std::invalid_argument(std::string(what) + " violates Kelvin-Planck");
    CDPair out;
    Rational a = compliant->pair.beta_at(anchor);
    for (const auto& label : t.states.labels()) {
        out.beta[label] = compliant->pair.beta_at(label) / a;
        Rational e = compliant->pair.eta_at(label) / a;
        if (e != 0) out.eta[label] = e;
    }
    return out;
}

}  // namespace

Conjunction conjoin(const Theory& target, const Theory& probe, const std::vector<Contact>& contacts) {
    require_valid(target);
    require_valid(probe);
    for (const auto& label : target.states.labels())
        if (probe.states.contains(label))
            throw std::invalid_argument("state label collision between parts: " + label);

    Conjunction c;
    c.target_theory = target;
    c.probe_theory = probe;
    c.contacts = contacts;
    c.part1.insert(target.states.labels().begin(), target.states.labels().end());
    c.part2.insert(probe.states.labels().begin(), probe.states.labels().end());

    std::vector<std::string> labels = target.states.labels();
    labels.insert(labels.end(), probe.states.labels().begin(), probe.states.labels().end());
    std::map<std::string, std::vector<double>> metadata = target.states.metadata();
    for (const auto& [k, v] : probe.states.metadata()) metadata[k] = v;
    c.theory.states = StateSpace(labels, metadata);

    // Zero-extension embeds both generator lists unchanged.
    for (const auto& g : target.generators) c.theory.generators.push_back(g);
    for (const auto& g : probe.generators) c.theory.generators.push_back(g);

    for (const auto& contact : contacts) {
        if (!c.part1.count(contact.target))
            throw std::invalid_argument("contact endpoint '" + contact.target +
                                        "' is not a part-1 state");
        if (!c.part2.count(contact.probe))
            throw std::invalid_argument("contact endpoint '" + contact.probe +
                                        "' is not a part-2 state");
        ProcessVector transfer{SignedMeasure{}, subtract(dirac(c.theory.states, contact.target),
                                                         dirac(c.theory.states, contact.probe))};
        c.theory.generators.push_back({transfer, true});
        if (contact.bidirectional) c.theory.generators.push_back({negate(transfer), true});
    }

    auto violations = validate_conjunction(c);
    if (!violations.empty())
        throw std::invalid_argument("conjunction invariant failed: " + violations.front().message);
    return c;
}

std::vector<TheoryViolation> validate_conjunction(const Conjunction& c) {
    auto out = validate_theory(c.theory);
    for (int i = 0; i < static_cast<int>(c.theory.generators.size()); ++i) {
        const auto& dm = c.theory.generators[static_cast<size_t>(i)].pv.dm;
        if (part_total(dm, c.part1) != 0) out.push_back({i, "dm total on part 1 != 0"});
        if (part_total(dm, c.part2) != 0) out.push_back({i, "dm total on part 2 != 0"});
    }
    return out;
}

ThermometerCheck is_thermometer(const Conjunction& c) {
    auto partition = hotness_partition(c.theory);  // throws when not Kelvin-Planck
    ThermometerCheck out;
    out.is_thermometer = true;
    for (const auto& target_state : c.target_theory.states.labels()) {
        int cls = partition.class_of(target_state);
        std::string peer;
        for (const auto& member : partition.classes[static_cast<size_t>(cls)]) {
            if (c.part2.count(member)) {
                peer = member;
                break;
            }
        }
        if (peer.empty()) {
            out.is_thermometer = false;
            out.uncovered.push_back(target_state);
        } else {
            out.pairing[target_state] = peer;
        }
    }
    return out;
}

ImpartedOrder imparted_order(const Conjunction& c) {
    auto thermo = is_thermometer(c);
    if (!thermo.is_thermometer)
        throw std::invalid_argument("conjunction is not a thermometric conjunction (state '" +
                                    thermo.uncovered.front() + "' has no probe peer)");
    auto probe_order = order_report(c.probe_theory);
    const int pk = static_cast<int>(probe_order.partition.classes.size());
    for (int i = 0; i < pk; ++i)
        for (int j = i + 1; j < pk; ++j)
            if (!probe_order.strict_edges.count({i, j}) && !probe_order.strict_edges.count({j, i}))
                throw std::invalid_argument("probe hotness levels are not totally ordered");

    auto full = order_report(c.theory);
    // Restrict classes to part-1 states; keep classes that meet part 1.
    std::vector<int> kept;
    ImpartedOrder out;
    for (int i = 0; i < static_cast<int>(full.partition.classes.size()); ++i) {
        std::vector<std::string> members;
        for (const auto& s : full.partition.classes[static_cast<size_t>(i)])
            if (c.part1.count(s)) members.push_back(s);
        if (!members.empty()) {
            kept.push_back(i);
            out.partition.classes.push_back(std::move(members));
        }
    }
    for (size_t a = 0; a < kept.size(); ++a)
        for (size_t b = 0; b < kept.size(); ++b)
            if (full.strict_edges.count({kept[a], kept[b]}))
                out.strict_edges.insert({static_cast<int>(a), static_cast<int>(b)});

    for (size_t a = 0; a < kept.size(); ++a)
        for (size_t b = a + 1; b < kept.size(); ++b)
            if (!out.strict_edges.count({static_cast<int>(a), static_cast<int>(b)}) &&
                !out.strict_edges.count({static_cast<int>(b), static_cast<int>(a)}))
                throw std::logic_error("internal error: imparted order is not total");
    return out;
}

std::optional<ImpartedScale> imparted_scale(const Conjunction& c, std::string* reason) {
    auto thermo = is_thermometer(c);
    if (!thermo.is_thermometer) {
        if (reason) *reason = "not a thermometric conjunction";
        return std::nullopt;
    }
    if (!verdict_unique(temp_unique(c.probe_theory))) {
        if (reason) *reason = "thermometer is not ideal (its scale is not essentially unique)";
        return std::nullopt;
    }
    if (!verdict_unique(temp_unique(c.theory)))
        throw std::logic_error("internal error: ideal thermometer but conjunction scale not unique");

    const std::string& anchor = c.target_theory.states.labels().front();
    auto pair = anchored_scale(c.theory, anchor, "conjunction");
    ImpartedScale out;
    for (const auto& label : c.target_theory.states.labels()) out.beta[label] = pair.beta_at(label);
    return out;
}

ThermometerSufficiency thermometer_sufficiency(const Conjunction& c) {
    auto partition = hotness_partition(c.theory);
    ThermometerSufficiency out;

    // One-sided weak comparison between states, per the footnote form
    // (0, d_hot - d_cold + nu), nu >= 0.
    auto weakly_state = [&](const std::string& hot, const std::string& cold) {
        FreeSpec spec;
        for (const auto& s : c.theory.states.labels()) spec.free_q.insert(s);
        spec.nonnegative = true;
        ProcessVector fixed{SignedMeasure{},
                            subtract(dirac(c.theory.states, hot), dirac(c.theory.states, cold))};
        return member_free(c.theory, fixed, spec).has_value();
    };

    out.comparability = true;
    out.bracketing = true;
    for (const auto& s : c.target_theory.states.labels()) {
        bool above = false, below = false;
        for (const auto& p : c.probe_theory.states.labels()) {
            bool same = partition.class_of(s) == partition.class_of(p);
            bool pw = !same && weakly_state(p, s);
            bool sw = !same && weakly_state(s, p);
            if (!same && !pw && !sw) out.comparability = false;
            if (same || pw) above = true;
            if (same || sw) below = true;
        }
        if (!above || !below) out.bracketing = false;
    }
    return out;
}

Theory make_joint(const Conjunction& c1, const Conjunction& c2) {
    if (c1.target_theory.states.labels() != c2.target_theory.states.labels())
        throw std::invalid_argument("conjunctions do not share the same target states");
    for (const auto& label : c1.probe_theory.states.labels())
        if (c2.probe_theory.states.contains(label) || c1.part1.count(label))
            throw std::invalid_argument("probe label collision in joint: " + label);

    std::vector<std::string> labels = c1.target_theory.states.labels();
    labels.insert(labels.end(), c1.probe_theory.states.labels().begin(),
                  c1.probe_theory.states.labels().end());
    labels.insert(labels.end(), c2.probe_theory.states.labels().begin(),
                  c2.probe_theory.states.labels().end());
    Theory joint;
    joint.states = StateSpace(labels);
    for (const auto& g : c1.theory.generators) joint.generators.push_back(g);
    for (const auto& g : c2.theory.generators) joint.generators.push_back(g);
    require_valid(joint);
    return joint;
}

namespace {

bool essentially_contains(const Theory& joint, const Theory& part) {
    for (const auto& g : part.generators) {
        bool found = false;
        for (const auto& h : joint.generators)
            if (h.pv == g.pv) {
                found = true;
                break;
            }
        if (!found) return false;
    }
    return true;
}

}  // namespace

ConsistencyReport consistency_check(const Conjunction& c1, const Conjunction& c2,
                                    const Theory& joint) {
    if (!essentially_contains(joint, c1.theory) || !essentially_contains(joint, c2.theory))
        throw std::invalid_argument("joint theory does not essentially contain both conjunctions");

    ConsistencyReport report;
    auto verdict = check_kp(joint);
    if (const auto* viol = as_violating(verdict)) {
        report.kp_compatible = false;
        report.violation = *viol;
        return report;
    }
    report.kp_compatible = true;

    // Imparted strict orders on the shared target states must agree.
    auto o1 = imparted_order(c1);
    auto o2 = imparted_order(c2);
    report.orders_agree = true;
    const auto& targets = c1.target_theory.states.labels();
    for (const auto& a : targets) {
        for (const auto& b : targets) {
            if (a == b) continue;
            auto rel = [&](const ImpartedOrder& o) {
                int ca = o.partition.class_of(a), cb = o.partition.class_of(b);
                if (ca == cb) return 0;
                if (o.strict_edges.count({ca, cb})) return 1;
                if (o.strict_edges.count({cb, ca})) return -1;
                return 2;  // incomparable (cannot occur when the order is total)
            };
            if (rel(o1) != rel(o2)) {
                report.orders_agree = false;
                report.order_disagreements.push_back({a, b});
            }
        }
    }

    std::string reason;
    auto s1 = imparted_scale(c1, &reason);
    auto s2 = s1 ? imparted_scale(c2, &reason) : std::nullopt;
    report.both_ideal = s1.has_value() && s2.has_value();
    if (!report.both_ideal) return report;

    // Calibrate each conjunction at its own thermometer's first state and
    // compare the imparted coldness patterns on the target.
    auto cal1 = anchored_scale(c1.theory, c1.probe_theory.states.labels().front(), "conjunction 1");
    auto cal2 = anchored_scale(c2.theory, c2.probe_theory.states.labels().front(), "conjunction 2");
    report.scales_proportional = true;
    std::optional<Rational> kappa;  // beta2 / beta1 on the target
    for (const auto& s : targets) {
        Rational b1 = cal1.beta_at(s), b2 = cal2.beta_at(s);
        if (b1 <= 0 || b2 <= 0) throw std::logic_error("internal error: nonpositive imparted beta");
        Rational r = b2 / b1;
        if (!kappa)
            kappa = r;
        else if (*kappa != r)
            report.scales_proportional = false;
    }
    if (report.scales_proportional && kappa) report.alpha = 1 / *kappa;  // T ratio
    return report;
}

}  // namespace kp
