#pragma once

#include "kp/cdsynth.hpp"
#include "kp/cone.hpp"
#include "kp/theory.hpp"

#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace kp {

// Hotness relations are defined only for Kelvin-Planck theories; every
// operation here throws std::invalid_argument on a violating theory.

struct HotnessPartition {
    // Disjoint nonempty classes covering the state space. Classes keep the
    // state-space order internally and are sorted by their first member.
    std::vector<std::vector<std::string>> classes;

    int class_of(const std::string& label) const;  // throws on unknown label
};

struct SameHotness {
    bool same = false;
    // Witnesses for (0, d_a - d_b) and (0, d_b - d_a) when same.
    std::optional<std::pair<MembershipWitness, MembershipWitness>> witnesses;
};

SameHotness same_hotness(const Theory& t, const std::string& a, const std::string& b);

HotnessPartition hotness_partition(const Theory& t);

// h' > h decided by augment-and-recheck: add the passive heat transfer
// (0, d_cold - d_hot) between class representatives and test whether every
// extension containing it violates Kelvin-Planck. Arguments are any states
// of the two (distinct) classes.
bool hotter_than(const Theory& t, const std::string& in_hotter, const std::string& in_cooler);

// h' w> h: some cyclic element (0, mu' - mu + nu) with mu' >= 0 on h',
// mu >= 0 on h, both of total 1, and nu >= 0 anywhere.
struct WeaklyHotter {
    bool holds = false;
    std::optional<MembershipWitness> witness;
    SignedMeasure mu_prime, mu, nu;
};
WeaklyHotter weakly_hotter(const Theory& t, const std::string& in_hotter,
                           const std::string& in_cooler);

// As weakly_hotter but maximizing total(nu): holds iff the optimum is
// positive (the transfer can do work).
bool strongly_hotter(const Theory& t, const std::string& in_hotter, const std::string& in_cooler);

struct OrderReport {
    HotnessPartition partition;
    // Ordered class-index pairs (hotter, cooler).
    std::set<std::pair<int, int>> strict_edges, weak_edges, strong_edges;
};

// All three edge sets over all class pairs. The strict order is verified
// irreflexive and transitive, and strong c strict c weak is asserted.
OrderReport order_report(const Theory& t);

}  // namespace kp
