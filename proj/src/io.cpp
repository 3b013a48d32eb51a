#include "kp/io.hpp"

#include <fstream>
#include <stdexcept>

namespace kp {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument(what); }

const json& expect(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) fail(std::string("missing field '") + key + "'");
    return j.at(key);
}

Rational rational_field(const json& j) {
    if (!j.is_string()) fail("rationals must be strings like \"p/q\" or \"n\"");
    return parse_rational(j.get<std::string>());
}

}  // namespace

json measure_to_json(const SignedMeasure& m) {
    json out = json::object();
    for (const auto& [label, v] : m.entries()) out[label] = rational_to_string(v);
    return out;
}

SignedMeasure measure_from_json(const json& j) {
    if (!j.is_object()) fail("a measure must be an object of state -> rational");
    SignedMeasure m;
    for (auto it = j.begin(); it != j.end(); ++it) m.set(it.key(), rational_field(it.value()));
    return m;
}

json theory_to_json(const Theory& t) {
    json out;
    out["states"] = t.states.labels();
    json gens = json::array();
    for (const auto& g : t.generators) {
        json item;
        item["dm"] = measure_to_json(g.pv.dm);
        item["q"] = measure_to_json(g.pv.q);
        item["true_process"] = g.true_process;
        gens.push_back(std::move(item));
    }
    out["generators"] = std::move(gens);
    if (!t.states.metadata().empty()) {
        json md = json::object();
        for (const auto& [label, coords] : t.states.metadata()) md[label] = coords;
        out["metadata"] = std::move(md);
    }
    if (t.family == ExactFamily::example_d1) out["family"] = "example_d1";
    if (t.family == ExactFamily::example_d2) out["family"] = "example_d2";
    return out;
}

Theory theory_from_json(const json& j) {
    Theory t;
    const auto& states = expect(j, "states");
    if (!states.is_array() || states.empty()) fail("'states' must be a nonempty array of labels");
    std::vector<std::string> labels;
    for (const auto& s : states) {
        if (!s.is_string()) fail("state labels must be strings");
        labels.push_back(s.get<std::string>());
    }
    std::map<std::string, std::vector<double>> metadata;
    if (j.contains("metadata")) {
        for (auto it = j.at("metadata").begin(); it != j.at("metadata").end(); ++it)
            metadata[it.key()] = it.value().get<std::vector<double>>();
    }
    t.states = StateSpace(labels, metadata);

    const auto& gens = expect(j, "generators");
    if (!gens.is_array()) fail("'generators' must be an array");
    for (const auto& g : gens) {
        Generator gen;
        gen.pv.dm = measure_from_json(expect(g, "dm"));
        gen.pv.q = measure_from_json(expect(g, "q"));
        gen.true_process = g.contains("true_process") ? g.at("true_process").get<bool>() : true;
        t.generators.push_back(std::move(gen));
    }
    if (j.contains("family")) {
        const auto fam = j.at("family").get<std::string>();
        if (fam == "example_d1")
            t.family = ExactFamily::example_d1;
        else if (fam == "example_d2")
            t.family = ExactFamily::example_d2;
        else
            fail("unknown family tag: " + fam);
    }
    auto violations = validate_theory(t);
    if (!violations.empty())
        fail("invalid theory (generator " + std::to_string(violations.front().generator_index) +
             "): " + violations.front().message);
    return t;
}

json pair_to_json(const CDPair& p) {
    json out;
    json eta = json::object(), beta = json::object();
    for (const auto& [label, v] : p.eta) eta[label] = rational_to_string(v);
    for (const auto& [label, v] : p.beta) beta[label] = rational_to_string(v);
    out["eta"] = std::move(eta);
    out["beta"] = std::move(beta);
    return out;
}

CDPair pair_from_json(const json& j) {
    CDPair p;
    for (auto it = expect(j, "eta").begin(); it != expect(j, "eta").end(); ++it)
        p.eta[it.key()] = rational_field(it.value());
    for (auto it = expect(j, "beta").begin(); it != expect(j, "beta").end(); ++it)
        p.beta[it.key()] = rational_field(it.value());
    return p;
}

json conjunction_to_json(const Conjunction& c) {
    json out = theory_to_json(c.theory);
    json parts;
    parts["part1"] = std::vector<std::string>(c.part1.begin(), c.part1.end());
    parts["part2"] = std::vector<std::string>(c.part2.begin(), c.part2.end());
    out["parts"] = std::move(parts);
    json contacts = json::array();
    for (const auto& contact : c.contacts) {
        json item;
        item["target"] = contact.target;
        item["probe"] = contact.probe;
        item["bidirectional"] = contact.bidirectional;
        contacts.push_back(std::move(item));
    }
    out["contacts"] = std::move(contacts);
    json part_theories;
    part_theories["target"] = theory_to_json(c.target_theory);
    part_theories["probe"] = theory_to_json(c.probe_theory);
    out["part_theories"] = std::move(part_theories);
    return out;
}

Conjunction conjunction_from_json(const json& j) {
    Theory target = theory_from_json(expect(expect(j, "part_theories"), "target"));
    Theory probe = theory_from_json(expect(expect(j, "part_theories"), "probe"));
    std::vector<Contact> contacts;
    for (const auto& item : expect(j, "contacts")) {
        Contact c;
        c.target = expect(item, "target").get<std::string>();
        c.probe = expect(item, "probe").get<std::string>();
        c.bidirectional = item.contains("bidirectional") ? item.at("bidirectional").get<bool>() : true;
        contacts.push_back(std::move(c));
    }
    return conjoin(target, probe, contacts);
}

std::string canonical_text(const json& j) { return j.dump(2) + "\n"; }

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        fail("parse error in " + path + ": " + e.what());
    }
    return j;
}

void save_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) fail("cannot write file: " + path);
    out << text;
}

Theory load_theory(const std::string& path) { return theory_from_json(load_json(path)); }

void save_theory(const std::string& path, const Theory& t) {
    save_text(path, canonical_text(theory_to_json(t)));
}

CDPair load_pair(const std::string& path) { return pair_from_json(load_json(path)); }

SignedMeasure load_measure(const std::string& path) { return measure_from_json(load_json(path)); }

Conjunction load_conjunction(const std::string& path) {
    return conjunction_from_json(load_json(path));
}

void save_conjunction(const std::string& path, const Conjunction& c) {
    save_text(path, canonical_text(conjunction_to_json(c)));
}

}  // namespace kp
