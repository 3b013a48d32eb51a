#pragma once

#include "kp/measure.hpp"

#include <string>
#include <vector>

namespace kp {

// A process element (dm, q): change of condition plus heating measure.
// Valid process vectors have total(dm) == 0.
struct ProcessVector {
    SignedMeasure dm;
    SignedMeasure q;

    bool operator==(const ProcessVector& other) const = default;
};

ProcessVector add(const ProcessVector& a, const ProcessVector& b);
ProcessVector scale(const Rational& c, const ProcessVector& v);
ProcessVector negate(const ProcessVector& v);

struct Generator {
    ProcessVector pv;
    bool true_process = true;
};

// Two built-in theories come from a quadratically generated family whose
// exact Clausius-Duhem scale set is known in closed form; the tag lets the
// scales module consult that closed form instead of the sampled generators.
enum class ExactFamily { none, example_d1, example_d2 };

// Finite state space plus a finite generator list. The generated cone is
// closed and convex automatically (finitely generated cones are closed), so
// every statement about the closure of the process cone is decided on the
// generators with no closure computation.
struct Theory {
    StateSpace states;
    std::vector<Generator> generators;
    ExactFamily family = ExactFamily::none;
};

struct TheoryViolation {
    int generator_index;  // -1 for a theory-level problem
    std::string message;
};

// Single validation point: every other module accepts exactly the theories
// this function accepts.
std::vector<TheoryViolation> validate_theory(const Theory& t);
bool is_valid(const Theory& t);

// Throws std::invalid_argument listing the first violation.
void require_valid(const Theory& t);

// Throws when the vector references labels outside t.states.
void require_over(const Theory& t, const ProcessVector& v);

}  // namespace kp
