// kpt: decision procedures for finite Kelvin-Planck theories.
//
// Exit codes: 0 affirmative/compliant, 1 negative (with certificate),
// 2 input error.

#include "kp/conjunction.hpp"
#include "kp/hotness.hpp"
#include "kp/io.hpp"
#include "kp/scales.hpp"
#include "kp/scenarios.hpp"
#include "kp/uniqueness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace kp;
using nlohmann::json;

namespace {

struct Output {
    bool as_json = false;
    json report;
    std::ostringstream text;

    explicit Output(const std::string& command) { report["command"] = command; }

    void emit(int exit_code) {
        report["exit_code"] = exit_code;
        if (as_json)
            std::cout << canonical_text(report);
        else
            std::cout << text.str();
    }
};

std::string approx(const Rational& r) {
    std::ostringstream os;
    os << to_double(r);
    return os.str();
}

std::string show(const Rational& r) { return rational_to_string(r) + " (~" + approx(r) + ")"; }

json rational_json(const Rational& r) {
    json j;
    j["exact"] = rational_to_string(r);
    j["approx"] = to_double(r);
    return j;
}

json measure_report(const SignedMeasure& m) {
    json j = json::object();
    for (const auto& [label, v] : m.entries()) j[label] = rational_json(v);
    return j;
}

json witness_report(const MembershipWitness& w) {
    json j = json::object();
    for (const auto& [g, c] : w.coefficients) j[std::to_string(g)] = rational_json(c);
    return j;
}

json pair_report(const CDPair& p) {
    json j;
    j["eta"] = json::object();
    j["beta"] = json::object();
    j["T"] = json::object();
    for (const auto& [label, v] : p.eta) j["eta"][label] = rational_json(v);
    for (const auto& [label, v] : p.beta) {
        j["beta"][label] = rational_json(v);
        if (v > 0) j["T"][label] = rational_json(1 / v);
    }
    return j;
}

std::map<std::string, Rational> beta_of_pair_file(const std::string& path, const Theory& t) {
    auto pair = load_pair(path);
    std::map<std::string, Rational> beta;
    for (const auto& label : t.states.labels()) beta[label] = pair.beta_at(label);
    return beta;
}

std::optional<std::set<std::string>> parse_subdomain(const std::vector<std::string>& states) {
    if (states.empty()) return std::nullopt;
    return std::set<std::string>(states.begin(), states.end());
}

int run_validate(const std::string& file, Output& out) {
    json j = load_json(file);
    Theory t;
    try {
        t = theory_from_json(j);
    } catch (const std::invalid_argument& e) {
        out.text << "invalid: " << e.what() << "\n";
        out.report["verdict"] = "invalid";
        out.report["violations"] = json::array({e.what()});
        return 1;
    }
    out.text << "ok: " << t.states.size() << " states, " << t.generators.size()
             << " generators\n";
    out.report["verdict"] = "ok";
    return 0;
}

int run_check_kp(const Theory& t, Output& out) {
    auto verdict = check_kp(t);
    if (const auto* c = as_compliant(verdict)) {
        out.text << "compliant: Kelvin-Planck holds\n";
        out.text << "  min coldness slack " << show(c->slack) << "\n";
        for (const auto& label : t.states.labels())
            out.text << "  beta(" << label << ") = " << show(c->pair.beta_at(label)) << "  T("
                     << label << ") = " << show(1 / c->pair.beta_at(label)) << "\n";
        out.report["verdict"] = "compliant";
        out.report["pair"] = pair_report(c->pair);
        out.report["slack"] = rational_json(c->slack);
        return 0;
    }
    const auto* v = as_violating(verdict);
    out.text << "violating: a conic combination of processes absorbs heat only\n";
    out.text << "  heating measure:";
    for (const auto& [label, val] : v->heating.entries())
        out.text << " " << label << "=" << show(val);
    out.text << "\n  generator coefficients:";
    for (const auto& [g, c] : v->witness.coefficients)
        out.text << " #" << g << "*" << rational_to_string(c);
    out.text << "\n";
    out.report["verdict"] = "violating";
    out.report["heating"] = measure_report(v->heating);
    out.report["witness"] = witness_report(v->witness);
    return 1;
}

int run_selftest(unsigned long seed, Output& out) {
    using kptest_rng = std::mt19937_64;
    kptest_rng rng(seed);
    auto rand_int = [&](long lo, long hi) {
        return lo + static_cast<long>(rng() % static_cast<unsigned long>(hi - lo + 1));
    };
    auto rand_rat = [&](long lo, long hi) {
        long den = rand_int(1, 3);
        return Rational(rand_int(lo * den, hi * den), den);
    };
    auto random_theory = [&]() {
        const int n = static_cast<int>(rand_int(3, 4));
        std::vector<std::string> labels;
        for (int i = 0; i < n; ++i) labels.push_back("s" + std::to_string(i));
        Theory t;
        t.states = StateSpace(labels);
        const int ngens = static_cast<int>(rand_int(0, 6));
        for (int g = 0; g < ngens; ++g) {
            SignedMeasure dm, q;
            Rational acc = 0;
            for (int i = 0; i + 1 < n; ++i) {
                Rational v(rand_int(-3, 3));
                dm.set(labels[static_cast<size_t>(i)], v);
                acc += v;
            }
            dm.set(labels.back(), -acc);
            for (int i = 0; i < n; ++i) q.set(labels[static_cast<size_t>(i)], Rational(rand_int(-3, 3)));
            t.generators.push_back({{dm, q}, true});
        }
        return t;
    };

    int failures = 0;
    auto property = [&](const char* name, bool ok) {
        out.text << (ok ? "pass" : "FAIL") << "  " << name << "\n";
        out.report["properties"][name] = ok;
        if (!ok) ++failures;
    };

    // Conic additivity and scaling of membership.
    {
        bool ok = true;
        for (int iter = 0; iter < 25 && ok; ++iter) {
            auto t = random_theory();
            if (t.generators.empty()) continue;
            ProcessVector x, y;
            for (const auto& g : t.generators) {
                if (rand_int(0, 1)) x = add(x, scale(rand_rat(0, 2), g.pv));
                if (rand_int(0, 1)) y = add(y, scale(rand_rat(0, 2), g.pv));
            }
            ok = member(t, x) && member(t, y) && member(t, add(x, y)) &&
                 member(t, scale(rand_rat(1, 3), x));
        }
        property("cone membership is conic (closed under + and positive scaling)", ok);
    }

    // Kelvin-Planck verdicts carry verifiable certificates.
    {
        bool ok = true;
        for (int iter = 0; iter < 25 && ok; ++iter) {
            auto t = random_theory();
            if (iter % 3 == 0)
                t.generators.push_back({{SignedMeasure{}, dirac(t.states, t.states.label(0))}, true});
            auto verdict = check_kp(t);
            if (const auto* c = as_compliant(verdict))
                ok = cd_feasible(t, c->pair) && c->slack > 0;
            else {
                const auto* v = as_violating(verdict);
                ok = v && is_nonnegative(v->heating) && total(v->heating) == 1 &&
                     verify_membership(t, {SignedMeasure{}, v->heating}, v->witness);
            }
        }
        property("check-kp produces machine-verifiable certificates", ok);
    }

    // Same hotness iff the coldness difference is pinned to zero.
    {
        bool ok = true;
        int seen = 0;
        for (int iter = 0; iter < 60 && ok && seen < 15; ++iter) {
            auto t = random_theory();
            if (iter % 2 == 0) {
                ProcessVector tr{SignedMeasure{}, subtract(dirac(t.states, t.states.label(0)),
                                                           dirac(t.states, t.states.label(1)))};
                t.generators.push_back({tr, true});
                t.generators.push_back({negate(tr), true});
            }
            if (!is_kp(t)) continue;
            ++seen;
            const auto& a = t.states.label(0);
            const auto& b = t.states.label(1);
            std::vector<CdTerm> obj{{CdTerm::Kind::Beta, a, 1}, {CdTerm::Kind::Beta, b, -1}};
            auto lo = cd_extremize(t, obj, lp::Sense::Min);
            auto hi = cd_extremize(t, obj, lp::Sense::Max);
            const auto* lo_opt = lp::as_optimal(lo.outcome);
            const auto* hi_opt = lp::as_optimal(hi.outcome);
            if (!lo_opt || !hi_opt) {
                ok = false;
                break;
            }
            bool pinned = lo_opt->value == 0 && hi_opt->value == 0;
            ok = same_hotness(t, a, b).same == pinned;
        }
        property("same hotness equals a temperature difference pinned to zero", ok);
    }

    // Ordering chain strong => strict => weak.
    {
        bool ok = true;
        for (int iter = 0; iter < 12 && ok; ++iter) {
            auto t = random_theory();
            if (!is_kp(t)) continue;
            auto report = order_report(t);
            for (const auto& e : report.strong_edges)
                ok = ok && report.strict_edges.count(e) > 0;
            for (const auto& e : report.strict_edges)
                ok = ok && report.weak_edges.count(e) > 0;
        }
        property("hotter-than chain: strong => strict => weak", ok);
    }

    // Scale verdict implication chain on random scales.
    {
        bool ok = true;
        for (int iter = 0; iter < 25 && ok; ++iter) {
            auto t = random_theory();
            std::map<std::string, Rational> beta;
            for (const auto& label : t.states.labels()) beta[label] = rand_rat(1, 4);
            auto v = classify_scale(t, beta);
            ok = (!v.clausius_duhem || v.strong_clausius) && (!v.strong_clausius || v.clausius);
        }
        property("scale verdicts: Clausius-Duhem => strong Clausius => Clausius", ok);
    }

    // Feasible pair set is convex.
    {
        bool ok = true;
        int seen = 0;
        for (int iter = 0; iter < 60 && ok && seen < 10; ++iter) {
            auto t = random_theory();
            auto verdict = check_kp(t);
            const auto* c = as_compliant(verdict);
            if (!c) continue;
            ++seen;
            std::vector<CdTerm> obj;
            for (const auto& label : t.states.labels())
                obj.push_back({CdTerm::Kind::Beta, label, rand_rat(-2, 2)});
            auto res = cd_extremize(t, obj, lp::Sense::Max);
            if (!res.argpoint) continue;
            CDPair mix;
            for (const auto& label : t.states.labels()) {
                mix.beta[label] = (res.argpoint->beta_at(label) + c->pair.beta_at(label)) / 2;
                mix.eta[label] = (res.argpoint->eta_at(label) + c->pair.eta_at(label)) / 2;
            }
            ok = cd_feasible(t, mix);
        }
        property("the Clausius-Duhem pair set is convex", ok);
    }

    out.text << (failures == 0 ? "selftest ok\n" : "selftest FAILED\n");
    out.report["verdict"] = failures == 0 ? "ok" : "failed";
    return failures == 0 ? 0 : 1;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::pair<double, double>>& rows) {
    std::ostringstream os;
    os << header << "\n";
    for (const auto& [k, v] : rows) os << k << "," << v << "\n";
    if (path.empty() || path == "-")
        std::cout << os.str();
    else
        save_text(path, os.str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact decision procedures for finite Kelvin-Planck theories"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "emit a JSON report on stdout");

    std::string theory_file, pair_file, pair2_file, dm_file, q_file, out_file, csv_file;
    std::string state_a, state_b, builtin_name, beta_file;
    std::vector<std::string> subdomain;
    bool weak = false, strong = false, order = false, partition_only = false, scale = false;
    bool pairwise = false, one_directional = false;
    std::string t1_file, t2_file, contacts_file, c1_file, c2_file, joint_file;
    std::string eps_spec = "0.1,0.05,0.025,0.0125,0.0001";
    int n_max = 8;
    unsigned long seed = 20240601;
    std::string eps_value = "1/10";

    auto* validate = app.add_subcommand("validate", "validate a theory file");
    validate->add_option("file", theory_file)->required();

    auto* checkkp = app.add_subcommand("check-kp", "Kelvin-Planck check with certificate");
    checkkp->add_option("file", theory_file)->required();

    auto* cdpair = app.add_subcommand("cd-pair", "test a Clausius-Duhem pair against a theory");
    cdpair->add_option("file", theory_file)->required();
    cdpair->add_option("--pair", pair_file)->required();

    auto* hotness = app.add_subcommand("hotness", "hotness partition and order report");
    hotness->add_option("file", theory_file)->required();
    hotness->add_flag("--partition", partition_only);
    hotness->add_flag("--order", order);

    auto* compare = app.add_subcommand("compare", "is state --a hotter than state --b?");
    compare->add_option("file", theory_file)->required();
    compare->add_option("--a", state_a)->required();
    compare->add_option("--b", state_b)->required();
    compare->add_flag("--weak", weak);
    compare->add_flag("--strong", strong);

    auto* carnot = app.add_subcommand("carnot", "find a Carnot element between two states");
    carnot->add_option("file", theory_file)->required();
    carnot->add_option("--from", state_a)->required();
    carnot->add_option("--to", state_b)->required();

    auto* unique = app.add_subcommand("unique", "essential uniqueness questions");
    unique->require_subcommand(1);
    auto* utemp = unique->add_subcommand("temp", "temperature scale uniqueness");
    utemp->add_option("file", theory_file)->required();
    utemp->add_option("--subdomain", subdomain)->delimiter(',');
    utemp->add_flag("--pairwise", pairwise);
    auto* uent = unique->add_subcommand("entropy", "entropy uniqueness for a scale");
    uent->add_option("file", theory_file)->required();
    uent->add_option("--pair", pair_file)->required();
    uent->add_option("--pair2", pair2_file);
    uent->add_option("--subdomain", subdomain)->delimiter(',');

    auto* halfspace = app.add_subcommand("halfspace", "does the cone equal the pair's half-space?");
    halfspace->add_option("file", theory_file)->required();
    halfspace->add_option("--pair", pair_file)->required();

    auto* qset = app.add_subcommand("qset", "does the cone contain (0, -M+)?");
    qset->add_option("file", theory_file)->required();

    auto* complete = app.add_subcommand("complete", "complete (dm, q) into the cone with nu >= 0");
    complete->add_option("file", theory_file)->required();
    complete->add_option("--dm", dm_file)->required();
    complete->add_option("--q", q_file)->required();

    auto* conjoin_cmd = app.add_subcommand("conjoin", "merge two theories with contacts");
    conjoin_cmd->add_option("--t1", t1_file)->required();
    conjoin_cmd->add_option("--t2", t2_file)->required();
    conjoin_cmd->add_option("--contacts", contacts_file)->required();
    conjoin_cmd->add_flag("--one-directional", one_directional);
    conjoin_cmd->add_option("--out", out_file);

    auto* thermometer = app.add_subcommand("thermometer", "is part 2 a thermometer for part 1?");
    thermometer->add_option("file", theory_file)->required();

    auto* imparted = app.add_subcommand("imparted", "order or scale imparted on part 1");
    imparted->add_option("file", theory_file)->required();
    imparted->add_flag("--order", order);
    imparted->add_flag("--scale", scale);

    auto* consistency = app.add_subcommand("consistency", "compare two thermometric conjunctions");
    consistency->add_option("--c1", c1_file)->required();
    consistency->add_option("--c2", c2_file)->required();
    consistency->add_option("--joint", joint_file);

    auto* scales_cmd = app.add_subcommand("scales", "Clausius scale classification");
    scales_cmd->require_subcommand(1);
    auto* classify = scales_cmd->add_subcommand("classify", "classify a coldness assignment");
    classify->add_option("file", theory_file)->required();
    classify->add_option("--beta", beta_file)->required();
    auto* density = scales_cmd->add_subcommand("density", "Clausius-Duhem pair near a strong scale");
    density->add_option("file", theory_file)->required();
    density->add_option("--beta", beta_file)->required();
    density->add_option("--eps", eps_value);

    auto* scenario = app.add_subcommand("scenario", "numeric process families and fixtures");
    scenario->require_subcommand(1);
    auto* sc_builtin = scenario->add_subcommand("builtin", "emit a fixture theory");
    sc_builtin->add_option("name", builtin_name)->required();
    sc_builtin->add_option("--out", out_file);
    auto* sc_a = scenario->add_subcommand("appendix-a", "conduction tube sequence");
    sc_a->add_option("--n-max", n_max);
    sc_a->add_option("--out", out_file);
    sc_a->add_option("--csv", csv_file);
    auto* sc_c = scenario->add_subcommand("appendix-c", "reactor ramp sequence");
    sc_c->add_option("--eps", eps_spec);
    sc_c->add_option("--out", out_file);
    sc_c->add_option("--csv", csv_file);

    auto* selftest = app.add_subcommand("selftest", "seeded property suite");
    selftest->add_option("--seed", seed);

    // Let --json (declared on the root) be given after any subcommand.
    std::function<void(CLI::App*)> allow_fallthrough = [&](CLI::App* a) {
        a->fallthrough();
        for (auto* child : a->get_subcommands({})) allow_fallthrough(child);
    };
    allow_fallthrough(&app);

    CLI11_PARSE(app, argc, argv);

    auto sub = app.get_subcommands().front();
    std::string command_name = sub->get_name();
    while (!sub->get_subcommands().empty()) {
        sub = sub->get_subcommands().front();
        command_name += " " + sub->get_name();
    }
    Output out(command_name);
    out.as_json = as_json;

    try {
        int code = 2;
        if (sub == validate) {
            code = run_validate(theory_file, out);
        } else if (sub == checkkp) {
            code = run_check_kp(load_theory(theory_file), out);
        } else if (sub == cdpair) {
            auto t = load_theory(theory_file);
            auto pair = load_pair(pair_file);
            bool ok = cd_feasible(t, pair);
            out.text << (ok ? "feasible: the pair satisfies every generator\n"
                            : "infeasible: some generator violates the inequality\n");
            out.report["verdict"] = ok ? "feasible" : "infeasible";
            if (!ok)
                for (int g = 0; g < static_cast<int>(t.generators.size()); ++g)
                    if (cd_value(pair, t.generators[static_cast<size_t>(g)].pv) < 0)
                        out.report["violated_generators"].push_back(g);
            code = ok ? 0 : 1;
        } else if (sub == hotness) {
            auto t = load_theory(theory_file);
            if (order || !partition_only) {
                auto report = order_report(t);
                json classes = json::array();
                for (const auto& cls : report.partition.classes) classes.push_back(cls);
                out.report["partition"] = classes;
                out.text << "hotness levels:";
                for (const auto& cls : report.partition.classes) {
                    out.text << " {";
                    for (size_t i = 0; i < cls.size(); ++i)
                        out.text << (i ? "," : "") << cls[i];
                    out.text << "}";
                }
                out.text << "\n";
                auto edges_out = [&](const char* name,
                                     const std::set<std::pair<int, int>>& edges) {
                    json arr = json::array();
                    out.text << name << ":";
                    for (const auto& [a, b] : edges) {
                        arr.push_back({a, b});
                        out.text << " " << a << ">" << b;
                    }
                    out.text << "\n";
                    out.report[name] = arr;
                };
                edges_out("strict_edges", report.strict_edges);
                edges_out("weak_edges", report.weak_edges);
                edges_out("strong_edges", report.strong_edges);
            } else {
                auto p = hotness_partition(t);
                json classes = json::array();
                out.text << "hotness levels:";
                for (const auto& cls : p.classes) {
                    classes.push_back(cls);
                    out.text << " {";
                    for (size_t i = 0; i < cls.size(); ++i)
                        out.text << (i ? "," : "") << cls[i];
                    out.text << "}";
                }
                out.text << "\n";
                out.report["partition"] = classes;
            }
            code = 0;
        } else if (sub == compare) {
            auto t = load_theory(theory_file);
            bool holds;
            const char* relation;
            if (strong) {
                holds = strongly_hotter(t, state_a, state_b);
                relation = "strongly hotter";
            } else if (weak) {
                holds = weakly_hotter(t, state_a, state_b).holds;
                relation = "weakly hotter";
            } else {
                holds = hotter_than(t, state_a, state_b);
                relation = "hotter";
            }
            out.text << state_a << (holds ? " is " : " is not ") << relation << " than "
                     << state_b << "\n";
            out.report["relation"] = relation;
            out.report["holds"] = holds;
            code = holds ? 0 : 1;
        } else if (sub == carnot) {
            auto t = load_theory(theory_file);
            auto elem = find_carnot(t, state_a, state_b);
            if (elem) {
                out.text << "carnot element between " << state_a << " and " << state_b
                         << ": c'/c = " << show(elem->c_prime / elem->c) << "\n";
                out.report["verdict"] = "found";
                out.report["c_prime"] = rational_json(elem->c_prime);
                out.report["c"] = rational_json(elem->c);
                out.report["ratio"] = rational_json(elem->c_prime / elem->c);
                code = 0;
            } else {
                out.text << "no carnot element between " << state_a << " and " << state_b << "\n";
                out.report["verdict"] = "none";
                code = 1;
            }
        } else if (sub == utemp) {
            auto t = load_theory(theory_file);
            auto verdict = temp_unique(t, parse_subdomain(subdomain), pairwise);
            if (const auto* u = as_unique(verdict)) {
                out.text << "unique: every scale is a positive multiple of a fixed one\n";
                out.report["verdict"] = "unique";
                out.report["carnot_pairs"] = static_cast<int>(u->evidence.size());
                code = 0;
            } else {
                const auto* nu = as_non_unique(verdict);
                out.text << "non-unique: two scales disagree at state " << nu->witness_state
                         << "\n";
                out.report["verdict"] = "non_unique";
                out.report["witness_state"] = nu->witness_state;
                out.report["first"] = pair_report(nu->first);
                out.report["second"] = pair_report(nu->second);
                code = 1;
            }
        } else if (sub == uent) {
            auto t = load_theory(theory_file);
            auto pair = load_pair(pair_file);
            if (!cd_feasible(t, pair)) throw std::invalid_argument("--pair is not CD-feasible");
            auto domain = parse_subdomain(subdomain);
            auto eu = entropy_unique(t, domain);
            out.report["verdict"] = eu.unique ? "unique" : "non_unique";
            out.text << (eu.unique ? "unique" : "non-unique")
                     << ": entropy differences are " << (eu.unique ? "" : "not ")
                     << "pinned by reversible connections\n";
            if (!pair2_file.empty()) {
                auto pair2 = load_pair(pair2_file);
                auto offset = entropy_offset(t, pair, pair2, domain);
                if (offset) {
                    out.text << "offset eta2 - eta1 = " << show(*offset) << "\n";
                    out.report["offset"] = rational_json(*offset);
                } else {
                    out.text << "the two entropies do not differ by a constant\n";
                    out.report["offset"] = nullptr;
                }
            }
            code = eu.unique ? 0 : 1;
        } else if (sub == halfspace) {
            auto t = load_theory(theory_file);
            auto pair = load_pair(pair_file);
            bool eq = halfspace_equals(t, pair);
            out.text << (eq ? "the cone coincides with the pair's closed half-space\n"
                            : "the cone is smaller than the pair's closed half-space\n");
            out.report["verdict"] = eq;
            code = eq ? 0 : 1;
        } else if (sub == qset) {
            auto t = load_theory(theory_file);
            bool eq = q_set_coincides(t);
            out.text << (eq ? "the cone contains (0, -M+): it equals its CD-compliant set\n"
                            : "some pure emission (0, -delta) is missing from the cone\n");
            out.report["verdict"] = eq;
            code = eq ? 0 : 1;
        } else if (sub == complete) {
            auto t = load_theory(theory_file);
            auto v = load_measure(dm_file);
            auto w = load_measure(q_file);
            auto nu = complete_to_cone(t, v, w);
            if (nu) {
                out.text << "completion nu:";
                if (nu->empty()) out.text << " 0";
                for (const auto& [label, val] : nu->entries())
                    out.text << " " << label << "=" << show(val);
                out.text << "\n";
                out.report["verdict"] = "completed";
                out.report["nu"] = measure_report(*nu);
                code = 0;
            } else {
                out.text << "no nonnegative completion exists\n";
                out.report["verdict"] = "none";
                code = 1;
            }
        } else if (sub == conjoin_cmd) {
            auto t1 = load_theory(t1_file);
            auto t2 = load_theory(t2_file);
            auto cj = load_json(contacts_file);
            std::vector<Contact> contacts;
            const auto& arr = cj.is_array() ? cj : cj.at("contacts");
            for (const auto& item : arr) {
                Contact c;
                if (item.is_array()) {
                    c.target = item.at(0).get<std::string>();
                    c.probe = item.at(1).get<std::string>();
                } else {
                    c.target = item.at("target").get<std::string>();
                    c.probe = item.at("probe").get<std::string>();
                    if (item.contains("bidirectional"))
                        c.bidirectional = item.at("bidirectional").get<bool>();
                }
                if (one_directional) c.bidirectional = false;
                contacts.push_back(std::move(c));
            }
            auto c = conjoin(t1, t2, contacts);
            auto text = canonical_text(conjunction_to_json(c));
            out.report["states"] = c.theory.states.size();
            out.report["generators"] = static_cast<int>(c.theory.generators.size());
            if (!out_file.empty()) {
                save_text(out_file, text);
                out.text << "conjunction: " << c.theory.states.size() << " states, "
                         << c.theory.generators.size() << " generators -> " << out_file << "\n";
            } else if (as_json) {
                out.report["conjunction"] = conjunction_to_json(c);
            } else {
                std::cout << text;
            }
            code = 0;
        } else if (sub == thermometer) {
            auto c = load_conjunction(theory_file);
            auto check = is_thermometer(c);
            if (check.is_thermometer) {
                out.text << "thermometer: every target state has a probe peer\n";
                for (const auto& [s, p] : check.pairing)
                    out.text << "  " << s << " ~ " << p << "\n";
                json pairing = json::object();
                for (const auto& [s, p] : check.pairing) pairing[s] = p;
                out.report["verdict"] = true;
                out.report["pairing"] = pairing;
                code = 0;
            } else {
                out.text << "not a thermometer; uncovered:";
                for (const auto& s : check.uncovered) out.text << " " << s;
                out.text << "\n";
                out.report["verdict"] = false;
                out.report["uncovered"] = check.uncovered;
                code = 1;
            }
        } else if (sub == imparted) {
            auto c = load_conjunction(theory_file);
            if (scale && order)
                throw std::invalid_argument("choose one of --order and --scale");
            if (scale) {
                std::string reason;
                auto s = imparted_scale(c, &reason);
                if (s) {
                    out.text << "imparted coldness on part 1 (anchored at the first state):\n";
                    for (const auto& [label, b] : s->beta)
                        out.text << "  beta(" << label << ") = " << show(b) << "  T(" << label
                                 << ") = " << show(1 / b) << "\n";
                    json beta = json::object();
                    for (const auto& [label, b] : s->beta) beta[label] = rational_json(b);
                    out.report["verdict"] = "scale";
                    out.report["beta"] = beta;
                    code = 0;
                } else {
                    out.text << "no imparted scale: " << reason << "\n";
                    out.report["verdict"] = "none";
                    out.report["reason"] = reason;
                    code = 1;
                }
            } else {
                auto io = imparted_order(c);
                out.text << "imparted order on part 1 (hotter > cooler):\n";
                json classes = json::array();
                for (const auto& cls : io.partition.classes) classes.push_back(cls);
                json edges = json::array();
                for (const auto& [a, b] : io.strict_edges) {
                    edges.push_back({a, b});
                    out.text << "  {" << io.partition.classes[static_cast<size_t>(a)].front()
                             << "} > {" << io.partition.classes[static_cast<size_t>(b)].front()
                             << "}\n";
                }
                out.report["classes"] = classes;
                out.report["strict_edges"] = edges;
                code = 0;
            }
        } else if (sub == consistency) {
            auto c1 = load_conjunction(c1_file);
            auto c2 = load_conjunction(c2_file);
            Theory joint = joint_file.empty() ? make_joint(c1, c2) : load_theory(joint_file);
            auto report = consistency_check(c1, c2, joint);
            if (!report.kp_compatible) {
                out.text << "not Kelvin-Planck compatible: the joint theory violates the "
                            "second law\n";
                out.report["verdict"] = "not_kp_compatible";
                out.report["heating"] = measure_report(report.violation->heating);
                out.report["witness"] = witness_report(report.violation->witness);
                code = 1;
            } else {
                out.report["verdict"] = "compatible";
                out.report["orders_agree"] = report.orders_agree;
                out.text << "orders " << (report.orders_agree ? "agree" : "DISAGREE") << "\n";
                if (report.both_ideal) {
                    out.report["scales_proportional"] = report.scales_proportional;
                    if (report.alpha) {
                        out.text << "imparted scales proportional, T2 = " << show(*report.alpha)
                                 << " * T1\n";
                        out.report["alpha"] = rational_json(*report.alpha);
                    } else {
                        out.text << "imparted scales are NOT proportional\n";
                    }
                }
                code = report.orders_agree && (!report.both_ideal || report.scales_proportional)
                           ? 0
                           : 1;
            }
        } else if (sub == classify) {
            auto t = load_theory(theory_file);
            auto beta = beta_of_pair_file(beta_file, t);
            auto v = classify_scale(t, beta);
            out.text << "clausius: " << (v.clausius ? "yes" : "no") << "\n"
                     << "strong clausius: " << (v.strong_clausius ? "yes" : "no") << "\n"
                     << "clausius-duhem: " << (v.clausius_duhem ? "yes" : "no") << "\n";
            out.report["clausius"] = v.clausius;
            out.report["strong_clausius"] = v.strong_clausius;
            out.report["clausius_duhem"] = v.clausius_duhem;
            code = 0;
        } else if (sub == density) {
            auto t = load_theory(theory_file);
            auto beta = beta_of_pair_file(beta_file, t);
            auto w = density_witness(t, beta, parse_rational(eps_value));
            if (w) {
                out.text << "witness pair within eps:\n";
                for (const auto& label : t.states.labels())
                    out.text << "  beta(" << label << ") = " << show(w->beta_at(label))
                             << ", eta(" << label << ") = " << show(w->eta_at(label)) << "\n";
                out.report["verdict"] = "found";
                out.report["pair"] = pair_report(*w);
                code = 0;
            } else {
                out.text << "no Clausius-Duhem pair within eps\n";
                out.report["verdict"] = "none";
                code = 1;
            }
        } else if (sub == sc_builtin) {
            auto t = builtin_theory(builtin_name);
            auto text = canonical_text(theory_to_json(t));
            out.report["name"] = builtin_name;
            if (!out_file.empty()) {
                save_text(out_file, text);
                out.text << "emitted builtin theory '" << builtin_name << "' to " << out_file
                         << "\n";
            } else if (as_json) {
                out.report["theory"] = theory_to_json(t);
            } else {
                std::cout << text;
            }
            code = 0;
        } else if (sub == sc_a) {
            auto emission = appendix_a_sequence(n_max, default_tube_fields(), default_tube_grid());
            Theory t;
            t.states = emission.states;
            for (const auto& pv : emission.sequence) t.generators.push_back({pv, true});
            t.generators.push_back({emission.limit, false});
            if (!out_file.empty()) save_theory(out_file, t);
            std::vector<std::pair<double, double>> rows;
            for (int n = 1; n <= n_max; ++n)
                rows.push_back({static_cast<double>(n),
                                to_double(tv_distance(
                                    emission.sequence[static_cast<size_t>(n - 1)], emission.limit))});
            out.report["n_max"] = n_max;
            for (const auto& [k, v] : rows) out.report["convergence"].push_back({k, v});
            if (as_json && csv_file.empty()) {
            } else {
                write_csv(csv_file, "n,tv_distance", rows);
            }
            code = 0;
        } else if (sub == sc_c) {
            std::vector<double> eps;
            std::stringstream ss(eps_spec);
            std::string item;
            while (std::getline(ss, item, ',')) eps.push_back(std::stod(item));
            auto emission = appendix_c_sequence(default_reactor_model(), {0.5, 0.5}, 1.0, 2.0, eps,
                                                default_reactor_grid());
            Theory t;
            t.states = emission.states;
            for (const auto& pv : emission.sequence) t.generators.push_back({pv, true});
            t.generators.push_back({emission.limit, false});
            if (!out_file.empty()) save_theory(out_file, t);
            std::vector<std::pair<double, double>> rows;
            for (size_t i = 0; i < eps.size(); ++i)
                rows.push_back(
                    {eps[i], to_double(tv_distance(emission.sequence[i], emission.limit))});
            out.report["eps"] = eps;
            for (const auto& [k, v] : rows) out.report["convergence"].push_back({k, v});
            if (as_json && csv_file.empty()) {
            } else {
                write_csv(csv_file, "eps,tv_distance", rows);
            }
            code = 0;
        } else if (sub == selftest) {
            code = run_selftest(seed, out);
        }
        out.emit(code);
        return code;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
