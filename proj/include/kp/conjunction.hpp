#pragma once

#include "kp/cdsynth.hpp"
#include "kp/hotness.hpp"
#include "kp/theory.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace kp {

// Thermal contact between a target state and a probe (thermometer) state.
// Bidirectional contacts add both passive transfers +/-(0, d_target -
// d_probe), making the two states the same hotness by construction;
// forward-only contacts add just (0, d_target - d_probe), a weak coupling.
struct Contact {
    std::string target;  // state of part 1
    std::string probe;   // state of part 2
    bool bidirectional = true;
};

// Conjoined theory over the disjoint union of two state spaces. Every
// generator keeps zero mass balance on each part separately.
struct Conjunction {
    Theory theory;
    Theory target_theory;  // part 1 as given
    Theory probe_theory;   // part 2 as given
    std::vector<Contact> contacts;
    std::set<std::string> part1, part2;
};

Conjunction conjoin(const Theory& target, const Theory& probe, const std::vector<Contact>& contacts);

// The conjunction invariant: each generator has dm(part1) = dm(part2) = 0.
std::vector<TheoryViolation> validate_conjunction(const Conjunction& c);

struct ThermometerCheck {
    bool is_thermometer = false;
    std::map<std::string, std::string> pairing;  // target state -> probe state
    std::vector<std::string> uncovered;          // target states with no probe peer
};

// Every target state must share a hotness level with some probe state in
// the conjoined theory. Requires a Kelvin-Planck conjunction.
ThermometerCheck is_thermometer(const Conjunction& c);

// Order report of the conjoined theory restricted to part-1 states.
// Preconditions (thermometer property; probe levels totally ordered by the
// probe's own hotter-than) are checked and reported via exceptions; the
// restricted order is verified total.
struct ImpartedOrder {
    HotnessPartition partition;  // classes restricted to part-1 states
    std::set<std::pair<int, int>> strict_edges;
};
ImpartedOrder imparted_order(const Conjunction& c);

// Coldness imparted on part 1 by an ideal thermometer, normalized so the
// lowest-index part-1 state has beta = 1. None (with reason) when the
// thermometer is not ideal.
struct ImpartedScale {
    std::map<std::string, Rational> beta;
};
std::optional<ImpartedScale> imparted_scale(const Conjunction& c, std::string* reason = nullptr);

// Checkable sufficiency conditions for the thermometer property on finite
// data: (comparability) any target/probe states of different hotness are
// weakly comparable through a one-sided transfer, and (bracketing) every
// target state is weakly bracketed by probe states.
struct ThermometerSufficiency {
    bool comparability = false;
    bool bracketing = false;
};
ThermometerSufficiency thermometer_sufficiency(const Conjunction& c);

// Canonical joint theory of two conjunctions sharing the same target:
// the disjoint union of all three state spaces carrying both generator
// lists. Throws if the targets differ or probe labels collide.
Theory make_joint(const Conjunction& c1, const Conjunction& c2);

struct ConsistencyReport {
    bool kp_compatible = false;
    std::optional<KpViolating> violation;  // when not compatible

    bool orders_agree = false;
    std::vector<std::pair<std::string, std::string>> order_disagreements;

    bool both_ideal = false;
    bool scales_proportional = false;
    // T-scale ratio: imparted T of c2 = alpha * imparted T of c1, each
    // calibrated at its own thermometer's first state.
    std::optional<Rational> alpha;
};

ConsistencyReport consistency_check(const Conjunction& c1, const Conjunction& c2,
                                    const Theory& joint);

}  // namespace kp
