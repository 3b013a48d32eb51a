#pragma once

#include "kp/rational.hpp"

#include <map>
#include <string>
#include <vector>

namespace kp {

// Finite ordered set of state labels, optionally carrying coordinate tuples
// for states produced by quantizing a continuous scenario.
class StateSpace {
public:
    StateSpace() = default;
    explicit StateSpace(std::vector<std::string> labels,
                        std::map<std::string, std::vector<double>> metadata = {});

    int size() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(int i) const { return labels_.at(static_cast<size_t>(i)); }
    bool contains(const std::string& label) const { return index_.count(label) > 0; }
    int index_of(const std::string& label) const;  // throws on unknown label
    const std::map<std::string, std::vector<double>>& metadata() const { return metadata_; }

    bool operator==(const StateSpace& other) const {
        return labels_ == other.labels_ && metadata_ == other.metadata_;
    }

private:
    std::vector<std::string> labels_;
    std::map<std::string, int> index_;
    std::map<std::string, std::vector<double>> metadata_;
};

// Sparse signed measure on a finite state space: label -> rational value,
// absent label = zero. Zero entries are never stored, so map equality is
// measure equality.
class SignedMeasure {
public:
    SignedMeasure() = default;
    explicit SignedMeasure(std::map<std::string, Rational> entries);

    const std::map<std::string, Rational>& entries() const { return entries_; }
    Rational at(const std::string& label) const;
    void set(const std::string& label, const Rational& value);
    bool empty() const { return entries_.empty(); }

    bool operator==(const SignedMeasure& other) const { return entries_ == other.entries_; }

private:
    std::map<std::string, Rational> entries_;
};

SignedMeasure dirac(const StateSpace& states, const std::string& label);

Rational total(const SignedMeasure& m);
SignedMeasure add(const SignedMeasure& a, const SignedMeasure& b);
SignedMeasure subtract(const SignedMeasure& a, const SignedMeasure& b);
SignedMeasure scale(const Rational& c, const SignedMeasure& m);
SignedMeasure negate(const SignedMeasure& m);

// Integral of a state function against the measure: sum f(sigma) m(sigma).
Rational dot(const std::map<std::string, Rational>& f, const SignedMeasure& m);

Rational l1_norm(const SignedMeasure& m);
bool is_nonnegative(const SignedMeasure& m);

// True when every referenced label belongs to `states`.
bool supported_on(const SignedMeasure& m, const StateSpace& states);

}  // namespace kp
