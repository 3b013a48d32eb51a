#include "kp/measure.hpp"

#include <cmath>
#include <stdexcept>

namespace kp {

StateSpace::StateSpace(std::vector<std::string> labels,
                       std::map<std::string, std::vector<double>> metadata)
    : labels_(std::move(labels)), metadata_(std::move(metadata)) {
    if (labels_.empty()) throw std::invalid_argument("state space must be nonempty");
    for (int i = 0; i < static_cast<int>(labels_.size()); ++i) {
        if (!index_.emplace(labels_[static_cast<size_t>(i)], i).second)
            throw std::invalid_argument("duplicate state label: " + labels_[static_cast<size_t>(i)]);
    }
    for (const auto& [label, coords] : metadata_) {
        (void)coords;
        if (!contains(label)) throw std::invalid_argument("metadata for unknown state: " + label);
    }
}

int StateSpace::index_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) throw std::invalid_argument("unknown state label: " + label);
    return it->second;
}

SignedMeasure::SignedMeasure(std::map<std::string, Rational> entries) : entries_(std::move(entries)) {
    for (auto it = entries_.begin(); it != entries_.end();) {
        if (it->second == 0)
            it = entries_.erase(it);
        else
            ++it;
    }
}

Rational SignedMeasure::at(const std::string& label) const {
    auto it = entries_.find(label);
    return it == entries_.end() ? Rational(0) : it->second;
}

void SignedMeasure::set(const std::string& label, const Rational& value) {
    if (value == 0)
        entries_.erase(label);
    else
        entries_[label] = value;
}

SignedMeasure dirac(const StateSpace& states, const std::string& label) {
    states.index_of(label);
    SignedMeasure m;
    m.set(label, 1);
    return m;
}

Rational total(const SignedMeasure& m) {
    Rational s = 0;
    for (const auto& [label, v] : m.entries()) {
        (void)label;
        s += v;
    }
    return s;
}

SignedMeasure add(const SignedMeasure& a, const SignedMeasure& b) {
    SignedMeasure out = a;
    for (const auto& [label, v] : b.entries()) out.set(label, out.at(label) + v);
    return out;
}

SignedMeasure subtract(const SignedMeasure& a, const SignedMeasure& b) {
    SignedMeasure out = a;
    for (const auto& [label, v] : b.entries()) out.set(label, out.at(label) - v);
    return out;
}

SignedMeasure scale(const Rational& c, const SignedMeasure& m) {
    SignedMeasure out;
    if (c == 0) return out;
    for (const auto& [label, v] : m.entries()) out.set(label, c * v);
    return out;
}

SignedMeasure negate(const SignedMeasure& m) { return scale(Rational(-1), m); }

Rational dot(const std::map<std::string, Rational>& f, const SignedMeasure& m) {
    Rational s = 0;
    for (const auto& [label, v] : m.entries()) {
        auto it = f.find(label);
        if (it != f.end()) s += it->second * v;
    }
    return s;
}

Rational l1_norm(const SignedMeasure& m) {
    Rational s = 0;
    for (const auto& [label, v] : m.entries()) {
        (void)label;
        s += v < 0 ? -v : v;
    }
    return s;
}

bool is_nonnegative(const SignedMeasure& m) {
    for (const auto& [label, v] : m.entries()) {
        (void)label;
        if (v < 0) return false;
    }
    return true;
}

bool supported_on(const SignedMeasure& m, const StateSpace& states) {
    for (const auto& [label, v] : m.entries()) {
        (void)v;
        if (!states.contains(label)) return false;
    }
    return true;
}

Rational rational_from_double(double x, const Integer& max_den, double* error) {
    if (!std::isfinite(x)) throw std::invalid_argument("cannot rationalize a non-finite value");
    if (max_den < 1) throw std::invalid_argument("max_den must be positive");

    const bool neg = x < 0;
    double v = neg ? -x : x;

    // Stern-Brocot walk with batched descent; exact mediant bookkeeping.
    Integer pa = 0, qa = 1, pb = 1, qb = 0;  // 0/1 and 1/0 bracket v
    double frac = v;
    while (true) {
        double ip = std::floor(frac);
        Integer a(static_cast<long long>(ip));
        Integer qn = qa + a * qb;
        if (qb != 0 && qn > max_den) break;
        Integer pn = pa + a * pb;
        std::swap(pa, pb);
        std::swap(qa, qb);
        pb = pn;
        qb = qn;
        double rem = frac - ip;
        if (rem < 1e-18) break;
        frac = 1.0 / rem;
        if (!std::isfinite(frac)) break;
    }
    Rational best(pb, qb == 0 ? Integer(1) : qb);
    // Semiconvergent refinement from the last convergent pair.
    if (qb != 0 && qa != 0) {
        Integer k = (max_den - qa) / qb;
        if (k > 0) {
            Rational cand(pa + k * pb, qa + k * qb);
            if (boost::multiprecision::abs(Rational(cand - v)) <
                boost::multiprecision::abs(Rational(best - v)))
                best = cand;
        }
    }
    if (neg) best = -best;
    if (error) *error = std::abs(to_double(best) - x);
    return best;
}

}  // namespace kp
