#pragma once

#include "kp/cdsynth.hpp"
#include "kp/theory.hpp"

#include <map>
#include <optional>
#include <string>

namespace kp {

// Verdict for one positive coldness assignment beta:
//   clausius        <beta, q> <= 0 for every cyclic true process
//   strong_clausius <beta, q> <= 0 for every cyclic element of the cone
//   clausius_duhem  some eta makes (eta, beta) a Clausius-Duhem pair
// The implications clausius_duhem => strong_clausius => clausius always
// hold and are asserted.
struct ScaleVerdict {
    bool clausius = false;
    bool strong_clausius = false;
    bool clausius_duhem = false;
};

// For theories tagged with the exact quadratic family (the two-state
// examples), the Clausius-Duhem column is decided by the closed form
// beta(1) > beta(2) instead of the sampled generators, which are a strict
// relaxation of the full family.
ScaleVerdict classify_scale(const Theory& t, const std::map<std::string, Rational>& beta);

// Clausius-Duhem pair within max-norm distance eps of beta0, when one
// exists; beta0 must be a strong Clausius scale. The returned pair carries
// positive slack by construction.
std::optional<CDPair> density_witness(const Theory& t, const std::map<std::string, Rational>& beta0,
                                      const Rational& eps);

// Closed-form Clausius-Duhem test for the exact two-state quadratic family:
// (eta, beta) is a pair iff beta1 > beta2 and
// eta2 - eta1 >= (beta1 + beta2)^2 / (4 (beta1 - beta2)).
bool example_d1_oracle(const Rational& eta1, const Rational& eta2, const Rational& beta1,
                       const Rational& beta2);

// The exists-eta form: a scale iff beta1 > beta2.
bool example_d1_cd_scale(const Rational& beta1, const Rational& beta2);

// A pair at the closed-form boundary for a given admissible beta.
CDPair example_d1_cd_pair(const Rational& beta1, const Rational& beta2);

}  // namespace kp
