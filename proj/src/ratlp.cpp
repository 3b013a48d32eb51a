#include "kp/ratlp.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace kp::lp {

namespace {

constexpr long kPivotLimit = 2'000'000;

std::vector<Rational> densify(const Row& row, int n) {
    std::vector<Rational> out(static_cast<size_t>(n), Rational(0));
    for (const auto& t : row) out[static_cast<size_t>(t.var)] += t.coeff;
    return out;
}

}  // namespace

int LinearProgram::add_variable(std::string name) {
    return add_variable(std::move(name), std::nullopt, std::nullopt);
}

int LinearProgram::add_variable(std::string name, std::optional<Rational> lower,
                                std::optional<Rational> upper) {
    names_.push_back(std::move(name));
    lower_.push_back(std::move(lower));
    upper_.push_back(std::move(upper));
    return static_cast<int>(names_.size()) - 1;
}

void LinearProgram::check_row(const Row& row) const {
    for (const auto& t : row)
        if (t.var < 0 || t.var >= num_variables())
            throw std::invalid_argument("constraint references undeclared variable " +
                                        std::to_string(t.var));
}

void LinearProgram::add_constraint(Row row, Rel rel, Rational rhs) {
    check_row(row);
    rows_.push_back({std::move(row), rel, std::move(rhs)});
}

void LinearProgram::set_objective(Row row, Sense sense) {
    check_row(row);
    objective_ = {std::move(row), sense};
}

Sense LinearProgram::sense() const {
    if (!objective_) throw std::logic_error("program has no objective");
    return objective_->second;
}

std::vector<Rational> LinearProgram::objective_dense() const {
    if (!objective_) throw std::logic_error("program has no objective");
    return densify(objective_->first, num_variables());
}

std::vector<CanonRow> LinearProgram::canonical_rows() const {
    std::vector<CanonRow> out;
    const int n = num_variables();
    for (const auto& c : rows_) {
        CanonRow r{densify(c.row, n), c.rel == Rel::Eq, c.rhs};
        if (c.rel == Rel::Ge) {
            for (auto& v : r.coeffs) v = -v;
            r.rhs = -r.rhs;
        }
        out.push_back(std::move(r));
    }
    for (int v = 0; v < n; ++v) {
        if (lower_[static_cast<size_t>(v)]) {
            CanonRow r{std::vector<Rational>(static_cast<size_t>(n), Rational(0)), false,
                       -*lower_[static_cast<size_t>(v)]};
            r.coeffs[static_cast<size_t>(v)] = -1;
            out.push_back(std::move(r));
        }
        if (upper_[static_cast<size_t>(v)]) {
            CanonRow r{std::vector<Rational>(static_cast<size_t>(n), Rational(0)), false,
                       *upper_[static_cast<size_t>(v)]};
            r.coeffs[static_cast<size_t>(v)] = 1;
            out.push_back(std::move(r));
        }
    }
    return out;
}

namespace {

// Dense simplex tableau over exact rationals. Columns: split user variables
// (x+ then x- per variable), one slack per <= row, artificials as needed.
class Simplex {
public:
    Simplex(const LinearProgram& lp, SolveStats* stats)
        : lp_(lp), canon_(lp.canonical_rows()), nuser_(lp.num_variables()), stats_(stats) {}

    Outcome run();

private:
    static constexpr int kNoCol = -1;

    const LinearProgram& lp_;
    std::vector<CanonRow> canon_;
    int nuser_;
    SolveStats* stats_;

    int ncols_ = 0;                       // total internal columns
    int nstruct_ = 0;                     // 2 * nuser_
    std::vector<std::vector<Rational>> t_;  // rows: ncols_ coeffs + rhs
    std::vector<int> basis_;
    std::vector<bool> negated_;
    std::vector<int> slack_col_, art_col_;
    std::vector<bool> is_artificial_;
    std::vector<Rational> cost_;     // current phase costs per column
    std::vector<Rational> redcost_;  // maintained reduced-cost row

    Rational& rhs(int i) { return t_[static_cast<size_t>(i)].back(); }
    int nrows() const { return static_cast<int>(t_.size()); }

    void build();
    void recompute_redcost();
    void pivot(int row, int col);
    // Bland: entering = lowest-index eligible column with negative reduced
    // cost; leaving = lowest ratio, ties by lowest basis column index.
    // Returns false at phase optimum, throws Unbounded info via out param.
    bool iterate(bool* unbounded_hit, int* unbounded_col);
    void drive_out_artificials();

    std::vector<Rational> extract_point() const;
    std::vector<Rational> extract_pi(bool phase1) const;
    std::vector<Rational> user_multipliers(const std::vector<Rational>& pi) const;

    Outcome make_infeasible();
    Outcome make_unbounded(int col);
    Outcome make_solution();
};

void Simplex::build() {
    const int m = static_cast<int>(canon_.size());
    nstruct_ = 2 * nuser_;
    int nslack = 0;
    for (const auto& r : canon_)
        if (!r.is_eq) ++nslack;
    ncols_ = nstruct_ + nslack;

    negated_.assign(static_cast<size_t>(m), false);
    slack_col_.assign(static_cast<size_t>(m), kNoCol);
    art_col_.assign(static_cast<size_t>(m), kNoCol);
    basis_.assign(static_cast<size_t>(m), kNoCol);

    int next_slack = nstruct_;
    t_.assign(static_cast<size_t>(m), {});
    for (int i = 0; i < m; ++i) {
        auto& row = t_[static_cast<size_t>(i)];
        row.assign(static_cast<size_t>(ncols_) + 1, Rational(0));
        const auto& cr = canon_[static_cast<size_t>(i)];
        for (int v = 0; v < nuser_; ++v) {
            const Rational& a = cr.coeffs[static_cast<size_t>(v)];
            if (a == 0) continue;
            row[static_cast<size_t>(2 * v)] = a;
            row[static_cast<size_t>(2 * v + 1)] = -a;
        }
        if (!cr.is_eq) {
            slack_col_[static_cast<size_t>(i)] = next_slack;
            row[static_cast<size_t>(next_slack)] = 1;
            ++next_slack;
        }
        row.back() = cr.rhs;
        if (row.back() < 0) {
            for (auto& x : row) x = -x;
            negated_[static_cast<size_t>(i)] = true;
        }
    }

    // Seed the basis: a +1 slack where available, otherwise an artificial.
    is_artificial_.assign(static_cast<size_t>(ncols_), false);
    for (int i = 0; i < m; ++i) {
        int sc = slack_col_[static_cast<size_t>(i)];
        if (sc != kNoCol && t_[static_cast<size_t>(i)][static_cast<size_t>(sc)] == 1) {
            basis_[static_cast<size_t>(i)] = sc;
            continue;
        }
        int ac = ncols_++;
        art_col_[static_cast<size_t>(i)] = ac;
        is_artificial_.push_back(true);
        for (int k = 0; k < m; ++k) {
            t_[static_cast<size_t>(k)].insert(t_[static_cast<size_t>(k)].end() - 1,
                                              Rational(k == i ? 1 : 0));
        }
        basis_[static_cast<size_t>(i)] = ac;
    }
}

void Simplex::recompute_redcost() {
    redcost_ = cost_;
    redcost_.push_back(0);  // objective offset slot, unused
    for (int i = 0; i < nrows(); ++i) {
        const Rational& cb = cost_[static_cast<size_t>(basis_[static_cast<size_t>(i)])];
        if (cb == 0) continue;
        const auto& row = t_[static_cast<size_t>(i)];
        for (size_t j = 0; j < row.size(); ++j) redcost_[j] -= cb * row[j];
    }
}

void Simplex::pivot(int r, int c) {
    if (stats_ && ++stats_->pivots > kPivotLimit)
        throw std::runtime_error("pivot limit exceeded");
    auto& prow = t_[static_cast<size_t>(r)];
    const Rational p = prow[static_cast<size_t>(c)];
    for (auto& x : prow) x /= p;
    for (int i = 0; i < nrows(); ++i) {
        if (i == r) continue;
        auto& row = t_[static_cast<size_t>(i)];
        const Rational f = row[static_cast<size_t>(c)];
        if (f == 0) continue;
        for (size_t j = 0; j < row.size(); ++j) row[j] -= f * prow[j];
    }
    const Rational fr = redcost_[static_cast<size_t>(c)];
    if (fr != 0)
        for (size_t j = 0; j < redcost_.size(); ++j) redcost_[j] -= fr * prow[j];
    basis_[static_cast<size_t>(r)] = c;
}

bool Simplex::iterate(bool* unbounded_hit, int* unbounded_col) {
    *unbounded_hit = false;
    while (true) {
        int enter = kNoCol;
        for (int j = 0; j < ncols_; ++j) {
            if (is_artificial_[static_cast<size_t>(j)]) continue;
            if (redcost_[static_cast<size_t>(j)] < 0) {
                enter = j;
                break;
            }
        }
        if (enter == kNoCol) return true;

        int leave = -1;
        Rational best_ratio;
        for (int i = 0; i < nrows(); ++i) {
            const Rational& a = t_[static_cast<size_t>(i)][static_cast<size_t>(enter)];
            if (a <= 0) continue;
            Rational ratio = t_[static_cast<size_t>(i)].back() / a;
            if (leave < 0 || ratio < best_ratio ||
                (ratio == best_ratio &&
                 basis_[static_cast<size_t>(i)] < basis_[static_cast<size_t>(leave)])) {
                leave = i;
                best_ratio = ratio;
            }
        }
        if (leave < 0) {
            *unbounded_hit = true;
            *unbounded_col = enter;
            return false;
        }
        pivot(leave, enter);
    }
}

void Simplex::drive_out_artificials() {
    for (int i = 0; i < nrows(); ++i) {
        int b = basis_[static_cast<size_t>(i)];
        if (!is_artificial_[static_cast<size_t>(b)]) continue;
        for (int j = 0; j < ncols_; ++j) {
            if (is_artificial_[static_cast<size_t>(j)]) continue;
            if (t_[static_cast<size_t>(i)][static_cast<size_t>(j)] != 0) {
                pivot(i, j);
                break;
            }
        }
        // If no structural entry remains the row is redundant; its
        // artificial stays basic at zero and the row never pivots again.
    }
}

std::vector<Rational> Simplex::extract_point() const {
    std::vector<Rational> internal(static_cast<size_t>(ncols_), Rational(0));
    for (int i = 0; i < nrows(); ++i)
        internal[static_cast<size_t>(basis_[static_cast<size_t>(i)])] =
            t_[static_cast<size_t>(i)].back();
    std::vector<Rational> x(static_cast<size_t>(nuser_), Rational(0));
    for (int v = 0; v < nuser_; ++v)
        x[static_cast<size_t>(v)] =
            internal[static_cast<size_t>(2 * v)] - internal[static_cast<size_t>(2 * v + 1)];
    return x;
}

std::vector<Rational> Simplex::extract_pi(bool phase1) const {
    // Simplex multipliers per row, read off the reduced costs of each row's
    // artificial (cost 1 in phase 1, 0 in phase 2) or +1 slack column.
    std::vector<Rational> pi(static_cast<size_t>(nrows()), Rational(0));
    for (int i = 0; i < nrows(); ++i) {
        int ac = art_col_[static_cast<size_t>(i)];
        if (ac != kNoCol) {
            const Rational& r = redcost_[static_cast<size_t>(ac)];
            pi[static_cast<size_t>(i)] = phase1 ? Rational(1) - r : -r;
        } else {
            int sc = slack_col_[static_cast<size_t>(i)];
            pi[static_cast<size_t>(i)] = -redcost_[static_cast<size_t>(sc)];
        }
    }
    return pi;
}

std::vector<Rational> Simplex::user_multipliers(const std::vector<Rational>& pi) const {
    std::vector<Rational> u(pi.size());
    for (size_t i = 0; i < pi.size(); ++i) u[i] = negated_[i] ? -pi[i] : pi[i];
    return u;
}

Outcome Simplex::make_infeasible() {
    auto pi = extract_pi(true);
    auto u = user_multipliers(pi);
    for (auto& v : u) v = -v;
    return Infeasible{std::move(u)};
}

Outcome Simplex::make_unbounded(int col) {
    std::vector<Rational> dir(static_cast<size_t>(ncols_), Rational(0));
    dir[static_cast<size_t>(col)] = 1;
    for (int i = 0; i < nrows(); ++i)
        dir[static_cast<size_t>(basis_[static_cast<size_t>(i)])] =
            -t_[static_cast<size_t>(i)][static_cast<size_t>(col)];
    std::vector<Rational> ray(static_cast<size_t>(nuser_), Rational(0));
    for (int v = 0; v < nuser_; ++v)
        ray[static_cast<size_t>(v)] =
            dir[static_cast<size_t>(2 * v)] - dir[static_cast<size_t>(2 * v + 1)];
    return Unbounded{extract_point(), std::move(ray)};
}

Outcome Simplex::make_solution() {
    auto x = extract_point();
    if (!lp_.has_objective()) return Feasible{std::move(x)};

    const auto c = lp_.objective_dense();
    Rational value = 0;
    for (int v = 0; v < nuser_; ++v) value += c[static_cast<size_t>(v)] * x[static_cast<size_t>(v)];

    auto pi = extract_pi(false);
    auto y = user_multipliers(pi);
    if (lp_.sense() == Sense::Max)
        for (auto& v : y) v = -v;
    return Optimal{std::move(x), std::move(value), std::move(y)};
}

Outcome Simplex::run() {
    build();

    bool have_artificials = false;
    for (int i = 0; i < nrows(); ++i)
        if (art_col_[static_cast<size_t>(i)] != kNoCol) have_artificials = true;

    if (have_artificials) {
        cost_.assign(static_cast<size_t>(ncols_), Rational(0));
        for (int j = 0; j < ncols_; ++j)
            if (is_artificial_[static_cast<size_t>(j)]) cost_[static_cast<size_t>(j)] = 1;
        recompute_redcost();
        bool unb = false;
        int ucol = -1;
        iterate(&unb, &ucol);
        if (unb) throw std::logic_error("phase 1 cannot be unbounded");
        Rational w = 0;
        for (int i = 0; i < nrows(); ++i)
            if (is_artificial_[static_cast<size_t>(basis_[static_cast<size_t>(i)])])
                w += t_[static_cast<size_t>(i)].back();
        if (w > 0) return make_infeasible();
        drive_out_artificials();
    }

    if (!lp_.has_objective()) return make_solution();

    // Phase 2 minimizes the internal cost: user Max is negated.
    const auto c = lp_.objective_dense();
    const bool maximize = lp_.sense() == Sense::Max;
    cost_.assign(static_cast<size_t>(ncols_), Rational(0));
    for (int v = 0; v < nuser_; ++v) {
        Rational m = maximize ? -c[static_cast<size_t>(v)] : c[static_cast<size_t>(v)];
        cost_[static_cast<size_t>(2 * v)] = m;
        cost_[static_cast<size_t>(2 * v + 1)] = -m;
    }
    recompute_redcost();
    bool unb = false;
    int ucol = -1;
    iterate(&unb, &ucol);
    if (unb) return make_unbounded(ucol);
    return make_solution();
}

bool row_satisfied(const CanonRow& r, const std::vector<Rational>& x) {
    Rational lhs = 0;
    for (size_t v = 0; v < r.coeffs.size(); ++v) lhs += r.coeffs[v] * x[v];
    return r.is_eq ? lhs == r.rhs : lhs <= r.rhs;
}

}  // namespace

Outcome solve(const LinearProgram& lp, SolveStats* stats) {
    SolveStats local;
    Simplex s(lp, stats ? stats : &local);
    Outcome out = s.run();
    if (!check_certificate(lp, out))
        throw std::logic_error("internal error: solver produced an invalid certificate");
    return out;
}

bool check_certificate(const LinearProgram& lp, const Outcome& out) {
    const auto canon = lp.canonical_rows();
    const int n = lp.num_variables();

    auto feasible_point = [&](const std::vector<Rational>& x) {
        if (static_cast<int>(x.size()) != n) return false;
        for (const auto& r : canon)
            if (!row_satisfied(r, x)) return false;
        return true;
    };

    if (const auto* f = as_feasible(out)) return feasible_point(f->point);

    if (const auto* inf = as_infeasible(out)) {
        if (inf->farkas.size() != canon.size()) return false;
        std::vector<Rational> combo(static_cast<size_t>(n), Rational(0));
        Rational rhs = 0;
        for (size_t i = 0; i < canon.size(); ++i) {
            const Rational& u = inf->farkas[i];
            if (!canon[i].is_eq && u < 0) return false;
            for (int v = 0; v < n; ++v)
                combo[static_cast<size_t>(v)] += u * canon[i].coeffs[static_cast<size_t>(v)];
            rhs += u * canon[i].rhs;
        }
        for (const auto& cv : combo)
            if (cv != 0) return false;
        return rhs < 0;
    }

    if (const auto* opt = as_optimal(out)) {
        if (!lp.has_objective()) return false;
        if (!feasible_point(opt->point)) return false;
        const auto c = lp.objective_dense();
        Rational value = 0;
        for (int v = 0; v < n; ++v)
            value += c[static_cast<size_t>(v)] * opt->point[static_cast<size_t>(v)];
        if (value != opt->value) return false;
        if (opt->dual.size() != canon.size()) return false;
        const bool maximize = lp.sense() == Sense::Max;
        std::vector<Rational> combo(static_cast<size_t>(n), Rational(0));
        Rational dual_value = 0;
        for (size_t i = 0; i < canon.size(); ++i) {
            const Rational& y = opt->dual[i];
            if (!canon[i].is_eq && (maximize ? y < 0 : y > 0)) return false;
            for (int v = 0; v < n; ++v)
                combo[static_cast<size_t>(v)] += y * canon[i].coeffs[static_cast<size_t>(v)];
            dual_value += y * canon[i].rhs;
        }
        for (int v = 0; v < n; ++v)
            if (combo[static_cast<size_t>(v)] != c[static_cast<size_t>(v)]) return false;
        return dual_value == opt->value;
    }

    if (const auto* ub = as_unbounded(out)) {
        if (!lp.has_objective()) return false;
        if (!feasible_point(ub->point)) return false;
        if (static_cast<int>(ub->ray.size()) != n) return false;
        for (const auto& r : canon) {
            Rational d = 0;
            for (int v = 0; v < n; ++v)
                d += r.coeffs[static_cast<size_t>(v)] * ub->ray[static_cast<size_t>(v)];
            if (r.is_eq ? d != 0 : d > 0) return false;
        }
        const auto c = lp.objective_dense();
        Rational dc = 0;
        for (int v = 0; v < n; ++v) dc += c[static_cast<size_t>(v)] * ub->ray[static_cast<size_t>(v)];
        return lp.sense() == Sense::Max ? dc > 0 : dc < 0;
    }
    return false;
}

const char* outcome_name(const Outcome& out) {
    if (as_optimal(out)) return "optimal";
    if (as_feasible(out)) return "feasible";
    if (as_infeasible(out)) return "infeasible";
    return "unbounded";
}

const std::vector<Rational>* solution_point(const Outcome& o) {
    if (const auto* opt = as_optimal(o)) return &opt->point;
    if (const auto* f = as_feasible(o)) return &f->point;
    return nullptr;
}

}  // namespace kp::lp
