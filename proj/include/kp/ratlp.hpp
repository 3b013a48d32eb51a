#pragma once

#include "kp/rational.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace kp::lp {

enum class Rel { Le, Eq, Ge };
enum class Sense { Max, Min };

struct Term {
    int var;
    Rational coeff;
};
using Row = std::vector<Term>;

// Canonical presentation used by certificates: user constraints in input
// order with >= rows negated to <=, followed by one row per declared bound.
struct CanonRow {
    std::vector<Rational> coeffs;  // dense, one per variable
    bool is_eq;
    Rational rhs;
};

class LinearProgram {
public:
    int add_variable(std::string name);
    int add_variable(std::string name, std::optional<Rational> lower, std::optional<Rational> upper);
    void add_constraint(Row row, Rel rel, Rational rhs);
    void set_objective(Row row, Sense sense);

    int num_variables() const { return static_cast<int>(names_.size()); }
    int num_constraints() const { return static_cast<int>(rows_.size()); }
    const std::string& variable_name(int v) const { return names_.at(static_cast<size_t>(v)); }
    bool has_objective() const { return objective_.has_value(); }
    Sense sense() const;
    std::vector<Rational> objective_dense() const;

    std::vector<CanonRow> canonical_rows() const;

private:
    struct Constraint {
        Row row;
        Rel rel;
        Rational rhs;
    };
    void check_row(const Row& row) const;

    std::vector<std::string> names_;
    std::vector<std::optional<Rational>> lower_, upper_;
    std::vector<Constraint> rows_;
    std::optional<std::pair<Row, Sense>> objective_;
};

// Every outcome carries an exactly checkable certificate.
//
//   Optimal     point feasible; value = c.point; `dual` is indexed by
//               canonical_rows(): dual[i] >= 0 on <= rows for Max
//               (<= 0 for Min), free on = rows; sum_i dual[i]*row_i = c
//               as functionals and sum_i dual[i]*rhs_i = value.
//   Feasible    point satisfies every canonical row (no objective given).
//   Infeasible  `farkas` over canonical rows: >= 0 on <= rows, free on =
//               rows; sum farkas[i]*row_i = 0 and sum farkas[i]*rhs_i < 0.
//   Unbounded   point feasible; ray satisfies a.ray <= 0 on <= rows,
//               a.ray = 0 on = rows, and strictly improves the objective.
struct Optimal {
    std::vector<Rational> point;
    Rational value;
    std::vector<Rational> dual;
};
struct Feasible {
    std::vector<Rational> point;
};
struct Infeasible {
    std::vector<Rational> farkas;
};
struct Unbounded {
    std::vector<Rational> point;
    std::vector<Rational> ray;
};
using Outcome = std::variant<Optimal, Feasible, Infeasible, Unbounded>;

struct SolveStats {
    long pivots = 0;
};

// Exact primal simplex, Bland's rule, deterministic for fixed input.
// The returned certificate is re-verified internally before returning.
Outcome solve(const LinearProgram& lp, SolveStats* stats = nullptr);

// Re-verifies a certificate by exact arithmetic only; never re-solves.
bool check_certificate(const LinearProgram& lp, const Outcome& out);

const char* outcome_name(const Outcome& out);

inline const Optimal* as_optimal(const Outcome& o) { return std::get_if<Optimal>(&o); }
inline const Feasible* as_feasible(const Outcome& o) { return std::get_if<Feasible>(&o); }
inline const Infeasible* as_infeasible(const Outcome& o) { return std::get_if<Infeasible>(&o); }
inline const Unbounded* as_unbounded(const Outcome& o) { return std::get_if<Unbounded>(&o); }

// The solution point of a Feasible or Optimal outcome, if any.
const std::vector<Rational>* solution_point(const Outcome& o);

}  // namespace kp::lp
