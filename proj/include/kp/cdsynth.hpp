#pragma once

#include "kp/cone.hpp"
#include "kp/ratlp.hpp"
#include "kp/theory.hpp"

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace kp {

// Entropy/coldness pair (eta, beta) with beta = 1/T, kept in coldness form
// so every constraint stays linear. Missing eta entries read as 0. A genuine
// Clausius-Duhem pair has beta > 0 at every state; points coming from the
// closed LP relaxation may sit on the boundary.
struct CDPair {
    std::map<std::string, Rational> eta;
    std::map<std::string, Rational> beta;

    Rational eta_at(const std::string& label) const;
    Rational beta_at(const std::string& label) const;
};

bool beta_strictly_positive(const CDPair& pair, const StateSpace& states);

// <eta, dm> - <beta, q> for one process vector.
Rational cd_value(const CDPair& pair, const ProcessVector& pv);

struct KpCompliant {
    CDPair pair;
    Rational slack;  // min coldness over states at the optimum
};
struct KpViolating {
    MembershipWitness witness;  // reconstructs (0, heating) from generators
    SignedMeasure heating;      // >= 0, nonzero, total normalized to 1
};
using KpVerdict = std::variant<KpCompliant, KpViolating>;

inline const KpCompliant* as_compliant(const KpVerdict& v) { return std::get_if<KpCompliant>(&v); }
inline const KpViolating* as_violating(const KpVerdict& v) { return std::get_if<KpViolating>(&v); }
// Pointers into temporaries dangle; keep the verdict alive.
const KpCompliant* as_compliant(KpVerdict&&) = delete;
const KpViolating* as_violating(KpVerdict&&) = delete;

// Kelvin-Planck check: maximizes s subject to <eta, dm_k> >= <beta, q_k> for
// every generator, beta(s) >= s, sum beta = 1. A positive optimum certifies
// compliance with that pair; otherwise a conic combination landing in the
// forbidden cone (0, nu >= 0, nu != 0) is extracted and returned.
KpVerdict check_kp(const Theory& t);
bool is_kp(const Theory& t);

// True iff the pair satisfies the Clausius-Duhem inequality on every
// generator (hence on the whole generated cone). Requires beta > 0.
bool cd_feasible(const Theory& t, const CDPair& pair);

// Linear functionals over the (eta, beta) symbols.
struct CdTerm {
    enum class Kind { Eta, Beta } kind;
    std::string state;
    Rational coeff;
};
struct CdConstraint {
    std::vector<CdTerm> terms;
    lp::Rel rel;
    Rational rhs;
};

// Optimum of a linear functional over the closed relaxation
//   { CD constraints on generators, beta >= 0, sum beta = 1 } + extras.
// Strictly positive beta are dense in the relaxation whenever the theory is
// Kelvin-Planck, so the value equals the inf/sup over genuine pairs, but
// attainment may need boundary beta: a value of 0 means "infimum 0 over
// scales", never "some scale achieves 0".
struct CdExtremum {
    lp::Outcome outcome;
    std::optional<CDPair> argpoint;  // present when the LP produced a point
};
CdExtremum cd_extremize(const Theory& t, const std::vector<CdTerm>& objective, lp::Sense sense,
                        const std::vector<CdConstraint>& extras = {});

namespace detail {

// Shared builder for the Clausius-Duhem constraint system.
struct CdLp {
    lp::LinearProgram lp;
    std::map<std::string, int> eta_var, beta_var;
    int slack_var = -1;
};
enum class CdNorm { SumBetaOne, Anchor, None };

// beta variables get a 0 lower bound unless with_slack is set (the slack
// rows beta(s) >= slack then govern positivity).
CdLp make_cd_lp(const Theory& t, CdNorm norm, const std::string& anchor_label = "",
                bool with_slack = false);

CDPair point_to_pair(const CdLp& cdlp, const std::vector<Rational>& point);

}  // namespace detail

}  // namespace kp
