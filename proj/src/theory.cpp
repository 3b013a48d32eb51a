#include "kp/theory.hpp"

#include <stdexcept>

namespace kp {

ProcessVector add(const ProcessVector& a, const ProcessVector& b) {
    return {add(a.dm, b.dm), add(a.q, b.q)};
}

ProcessVector scale(const Rational& c, const ProcessVector& v) {
    return {scale(c, v.dm), scale(c, v.q)};
}

ProcessVector negate(const ProcessVector& v) { return {negate(v.dm), negate(v.q)}; }

std::vector<TheoryViolation> validate_theory(const Theory& t) {
    std::vector<TheoryViolation> out;
    if (t.states.size() == 0) {
        out.push_back({-1, "state space is empty"});
        return out;
    }
    for (int i = 0; i < static_cast<int>(t.generators.size()); ++i) {
        const auto& g = t.generators[static_cast<size_t>(i)];
        if (!supported_on(g.pv.dm, t.states))
            out.push_back({i, "dm references a label outside the state space"});
        if (!supported_on(g.pv.q, t.states))
            out.push_back({i, "q references a label outside the state space"});
        if (total(g.pv.dm) != 0)
            out.push_back({i, "dm total != 0"});
    }
    return out;
}

bool is_valid(const Theory& t) { return validate_theory(t).empty(); }

void require_valid(const Theory& t) {
    auto violations = validate_theory(t);
    if (!violations.empty()) {
        const auto& v = violations.front();
        throw std::invalid_argument("invalid theory (generator " + std::to_string(v.generator_index) +
                                    "): " + v.message);
    }
}

void require_over(const Theory& t, const ProcessVector& v) {
    if (!supported_on(v.dm, t.states) || !supported_on(v.q, t.states))
        throw std::invalid_argument("process vector references labels outside the theory's state space");
}

}  // namespace kp
