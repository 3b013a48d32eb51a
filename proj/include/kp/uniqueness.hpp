#pragma once

#include "kp/cdsynth.hpp"
#include "kp/cone.hpp"
#include "kp/theory.hpp"

#include <optional>
#include <set>
#include <variant>

namespace kp {

// Reversible cyclic element (0, c' d_sigma' - c d_sigma) with both
// directions witnessed. For any Clausius-Duhem pair of the theory the
// ratio c'/c pins T(sigma')/T(sigma).
struct CarnotElement {
    std::string sigma_prime, sigma;
    Rational c_prime, c;
    MembershipWitness forward, backward;
};

// Reversible element (d_sigma' - d_sigma, q), optionally with q supported
// on a given state subset.
struct ReversibleConnection {
    std::string sigma_prime, sigma;
    SignedMeasure q;
    MembershipWitness forward, backward;
};

std::optional<CarnotElement> find_carnot(const Theory& t, const std::string& sigma_prime,
                                         const std::string& sigma);

std::optional<ReversibleConnection> reversible_connect(
    const Theory& t, const std::string& sigma_prime, const std::string& sigma,
    const std::optional<std::set<std::string>>& support = std::nullopt);

// Essential uniqueness of the temperature scale on a sub-domain. Unique
// verdicts carry Carnot evidence per pair against the reference state;
// non-unique verdicts exhibit two feasible pairs whose beta restrictions to
// the sub-domain are not proportional.
struct TempUnique {
    std::vector<CarnotElement> evidence;
};
struct TempNonUnique {
    CDPair first, second;
    std::string witness_state;  // ratio against the reference state differs
};
using TempVerdict = std::variant<TempUnique, TempNonUnique>;

inline const TempUnique* as_unique(const TempVerdict& v) { return std::get_if<TempUnique>(&v); }
inline const TempNonUnique* as_non_unique(const TempVerdict& v) {
    return std::get_if<TempNonUnique>(&v);
}
// Pointers into temporaries dangle; keep the verdict alive.
const TempUnique* as_unique(TempVerdict&&) = delete;
const TempNonUnique* as_non_unique(TempVerdict&&) = delete;

inline bool verdict_unique(const TempVerdict& v) { return std::holds_alternative<TempUnique>(v); }

// Reference-state mode checks Carnot elements from the lowest-index state of
// the sub-domain to every other (sufficient: the Carnot relation is an
// equivalence); pairwise mode checks every pair.
TempVerdict temp_unique(const Theory& t, std::optional<std::set<std::string>> subdomain = std::nullopt,
                        bool pairwise = false);

// Rational basis of the 2n-2 dimensional hyperplane
//   { (dm, q) : <eta, dm> = <beta, q>, total(dm) = 0 }.
std::vector<ProcessVector> hyperplane_basis(const StateSpace& states, const CDPair& pair);

// The generated cone contains the pair's CD-equality hyperplane iff the pair
// is essentially the only one (up to scale and an additive entropy shift).
bool cd_pair_unique(const Theory& t, const CDPair& pair);

// True iff the cone coincides with the closed half-space of the pair:
// hyperplane containment plus one strictly irreversible direction.
bool halfspace_equals(const Theory& t, const CDPair& pair);

// True iff (0, -delta_sigma) is a member for every state: exactly when the
// cone coincides with the set of vectors satisfying every CD inequality.
bool q_set_coincides(const Theory& t);

// Smallest-total nu >= 0 with (v, w + nu) in the cone, if any.
std::optional<SignedMeasure> complete_to_cone(const Theory& t, const SignedMeasure& v,
                                              const SignedMeasure& w);

// Entropy essential uniqueness on a sub-domain: decided by reversible
// connections with support inside the sub-domain.
struct EntropyUniqueness {
    bool unique = false;
    std::vector<ReversibleConnection> connections;  // evidence when unique
};
EntropyUniqueness entropy_unique(const Theory& t,
                                 std::optional<std::set<std::string>> subdomain = std::nullopt);

// For two CD-feasible pairs sharing the same beta: the forced constant
// offset eta2 - eta1 on the sub-domain, when it is constant there.
std::optional<Rational> entropy_offset(const Theory& t, const CDPair& first, const CDPair& second,
                                       std::optional<std::set<std::string>> subdomain = std::nullopt);

}  // namespace kp
