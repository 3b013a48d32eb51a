// Python bindings for the main operations. Rationals cross the boundary as
// exact "p/q" strings; the kpthermo package converts them to Fraction.

#include "kp/conjunction.hpp"
#include "kp/hotness.hpp"
#include "kp/io.hpp"
#include "kp/scales.hpp"
#include "kp/scenarios.hpp"
#include "kp/uniqueness.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace kp;

namespace {

using StrMap = std::map<std::string, std::string>;

SignedMeasure measure_in(const StrMap& m) {
    SignedMeasure out;
    for (const auto& [label, v] : m) out.set(label, parse_rational(v));
    return out;
}

StrMap measure_out(const SignedMeasure& m) {
    StrMap out;
    for (const auto& [label, v] : m.entries()) out[label] = rational_to_string(v);
    return out;
}

StrMap map_out(const std::map<std::string, Rational>& m) {
    StrMap out;
    for (const auto& [label, v] : m) out[label] = rational_to_string(v);
    return out;
}

CDPair pair_in(const StrMap& eta, const StrMap& beta) {
    CDPair pair;
    for (const auto& [label, v] : eta) pair.eta[label] = parse_rational(v);
    for (const auto& [label, v] : beta) pair.beta[label] = parse_rational(v);
    return pair;
}

std::map<std::string, Rational> beta_in(const StrMap& beta) {
    std::map<std::string, Rational> out;
    for (const auto& [label, v] : beta) out[label] = parse_rational(v);
    return out;
}

py::object witness_out(const MembershipWitness& w) {
    py::dict d;
    for (const auto& [g, c] : w.coefficients) d[py::int_(g)] = rational_to_string(c);
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact decision procedures for finite Kelvin-Planck theories";

    py::class_<Theory>(m, "Theory")
        .def_property_readonly("states",
                               [](const Theory& t) { return t.states.labels(); })
        .def_property_readonly("num_generators",
                               [](const Theory& t) { return t.generators.size(); })
        .def("generator",
             [](const Theory& t, int g) {
                 const auto& gen = t.generators.at(static_cast<size_t>(g));
                 return py::make_tuple(measure_out(gen.pv.dm), measure_out(gen.pv.q),
                                       gen.true_process);
             })
        .def("to_json", [](const Theory& t) { return canonical_text(theory_to_json(t)); })
        .def("__repr__", [](const Theory& t) {
            return "<Theory: " + std::to_string(t.states.size()) + " states, " +
                   std::to_string(t.generators.size()) + " generators>";
        });

    m.def("theory_from_json",
          [](const std::string& text) { return theory_from_json(nlohmann::json::parse(text)); });
    m.def("load_theory", [](const std::string& path) { return load_theory(path); });
    m.def("builtin", [](const std::string& name) { return builtin_theory(name); });
    m.def("builtin_names", [] { return builtin_theory_names(); });
    m.def("make_theory", [](const std::vector<std::string>& labels,
                            const std::vector<std::tuple<StrMap, StrMap, bool>>& generators) {
        Theory t;
        t.states = StateSpace(labels);
        for (const auto& [dm, q, true_process] : generators)
            t.generators.push_back({{measure_in(dm), measure_in(q)}, true_process});
        require_valid(t);
        return t;
    });
    m.def("validate", [](const Theory& t) {
        std::vector<std::pair<int, std::string>> out;
        for (const auto& v : validate_theory(t)) out.push_back({v.generator_index, v.message});
        return out;
    });

    m.def("check_kp", [](const Theory& t) {
        auto verdict = check_kp(t);
        py::dict d;
        if (const auto* c = as_compliant(verdict)) {
            d["verdict"] = "compliant";
            d["eta"] = map_out(c->pair.eta);
            d["beta"] = map_out(c->pair.beta);
            d["slack"] = rational_to_string(c->slack);
        } else {
            const auto* v = as_violating(verdict);
            d["verdict"] = "violating";
            d["heating"] = measure_out(v->heating);
            d["witness"] = witness_out(v->witness);
        }
        return d;
    });
    m.def("is_kp", [](const Theory& t) { return is_kp(t); });
    m.def("cd_feasible", [](const Theory& t, const StrMap& eta, const StrMap& beta) {
        return cd_feasible(t, pair_in(eta, beta));
    });

    m.def("member", [](const Theory& t, const StrMap& dm, const StrMap& q) -> py::object {
        auto w = member(t, {measure_in(dm), measure_in(q)});
        if (!w) return py::none();
        return witness_out(*w);
    });

    m.def("same_hotness", [](const Theory& t, const std::string& a, const std::string& b) {
        return same_hotness(t, a, b).same;
    });
    m.def("hotness_partition", [](const Theory& t) { return hotness_partition(t).classes; });
    m.def("hotter_than", [](const Theory& t, const std::string& a, const std::string& b) {
        return hotter_than(t, a, b);
    });
    m.def("weakly_hotter", [](const Theory& t, const std::string& a, const std::string& b) {
        return weakly_hotter(t, a, b).holds;
    });
    m.def("strongly_hotter", [](const Theory& t, const std::string& a, const std::string& b) {
        return strongly_hotter(t, a, b);
    });
    m.def("order_report", [](const Theory& t) {
        auto r = order_report(t);
        py::dict d;
        d["classes"] = r.partition.classes;
        auto edges = [](const std::set<std::pair<int, int>>& e) {
            std::vector<std::pair<int, int>> out(e.begin(), e.end());
            return out;
        };
        d["strict"] = edges(r.strict_edges);
        d["weak"] = edges(r.weak_edges);
        d["strong"] = edges(r.strong_edges);
        return d;
    });

    m.def("find_carnot",
          [](const Theory& t, const std::string& a, const std::string& b) -> py::object {
              auto c = find_carnot(t, a, b);
              if (!c) return py::none();
              return py::make_tuple(rational_to_string(c->c_prime), rational_to_string(c->c));
          });
    m.def("temp_unique", [](const Theory& t, bool pairwise) {
        return verdict_unique(temp_unique(t, std::nullopt, pairwise));
    }, py::arg("theory"), py::arg("pairwise") = false);
    m.def("reversible_connect",
          [](const Theory& t, const std::string& a, const std::string& b) -> py::object {
              auto conn = reversible_connect(t, a, b);
              if (!conn) return py::none();
              return py::cast(measure_out(conn->q));
          });
    m.def("cd_pair_unique", [](const Theory& t, const StrMap& eta, const StrMap& beta) {
        return cd_pair_unique(t, pair_in(eta, beta));
    });
    m.def("halfspace_equals", [](const Theory& t, const StrMap& eta, const StrMap& beta) {
        return halfspace_equals(t, pair_in(eta, beta));
    });
    m.def("q_set_coincides", [](const Theory& t) { return q_set_coincides(t); });
    m.def("complete_to_cone",
          [](const Theory& t, const StrMap& dm, const StrMap& q) -> py::object {
              auto nu = complete_to_cone(t, measure_in(dm), measure_in(q));
              if (!nu) return py::none();
              return py::cast(measure_out(*nu));
          });
    m.def("entropy_unique", [](const Theory& t) { return entropy_unique(t).unique; });

    m.def("classify_scale", [](const Theory& t, const StrMap& beta) {
        auto v = classify_scale(t, beta_in(beta));
        py::dict d;
        d["clausius"] = v.clausius;
        d["strong_clausius"] = v.strong_clausius;
        d["clausius_duhem"] = v.clausius_duhem;
        return d;
    });
    m.def("density_witness",
          [](const Theory& t, const StrMap& beta0, const std::string& eps) -> py::object {
              auto w = density_witness(t, beta_in(beta0), parse_rational(eps));
              if (!w) return py::none();
              py::dict d;
              d["eta"] = map_out(w->eta);
              d["beta"] = map_out(w->beta);
              return d;
          });
    m.def("example_d1_oracle", [](const std::string& eta1, const std::string& eta2,
                                  const std::string& beta1, const std::string& beta2) {
        return example_d1_oracle(parse_rational(eta1), parse_rational(eta2),
                                 parse_rational(beta1), parse_rational(beta2));
    });

    m.def("make_halfspace", [](const std::vector<std::string>& labels, const StrMap& eta,
                               const StrMap& beta) {
        std::map<std::string, Rational> e, b;
        for (const auto& [k, v] : eta) e[k] = parse_rational(v);
        for (const auto& [k, v] : beta) b[k] = parse_rational(v);
        return make_halfspace(labels, e, b);
    });
    m.def("conjoin", [](const Theory& t1, const Theory& t2,
                        const std::vector<std::pair<std::string, std::string>>& contacts) {
        std::vector<Contact> cs;
        for (const auto& [a, b] : contacts) cs.push_back({a, b, true});
        return conjoin(t1, t2, cs).theory;
    });
}
