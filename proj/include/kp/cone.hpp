#pragma once

#include "kp/ratlp.hpp"
#include "kp/theory.hpp"

#include <map>
#include <optional>
#include <set>
#include <utility>

namespace kp {

// Nonnegative generator coefficients whose weighted sum reconstructs the
// target exactly. Only nonzero coefficients are stored.
struct MembershipWitness {
    std::map<int, Rational> coefficients;
};

// Reconstructs the weighted generator sum.
ProcessVector witness_combination(const Theory& t, const MembershipWitness& w);

// Exact re-verification: coefficients nonnegative and combination == target.
bool verify_membership(const Theory& t, const ProcessVector& target, const MembershipWitness& w);

// Linear functional g(dm, q) = <eta, dm> - <beta, q> with g >= 0 on every
// generator and g < 0 at the rejected target. beta need not be positive;
// this is the diagnostic separating functional from the LP dual.
struct SeparatingFunctional {
    std::map<std::string, Rational> eta;
    std::map<std::string, Rational> beta;
};

struct MemberResult {
    std::optional<MembershipWitness> witness;
    std::optional<SeparatingFunctional> separator;
};

// Is target in the cone generated by t's generators?
std::optional<MembershipWitness> member(const Theory& t, const ProcessVector& target);
MemberResult member_with_certificate(const Theory& t, const ProcessVector& target);

// Membership with selected q-coordinates left free: decides whether offsets
// f on `free_q` exist with (fixed.dm, fixed.q + f) in the cone. Offsets may
// be sign-constrained to f >= 0, and optionally chosen to minimize their
// total (meaningful only with the sign constraint).
struct FreeSpec {
    std::set<std::string> free_q;
    bool nonnegative = false;
    bool minimize_total = false;
};
std::optional<std::pair<MembershipWitness, SignedMeasure>> member_free(const Theory& t,
                                                                       const ProcessVector& fixed,
                                                                       const FreeSpec& spec);

// True iff every basis vector and its negative are members.
bool contains_subspace(const Theory& t, const std::vector<ProcessVector>& basis);

}  // namespace kp
