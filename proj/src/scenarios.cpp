#include "kp/scenarios.hpp"

#include "kp/uniqueness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace kp {

// ---------------------------------------------------------------------------
// Fixtures
// ---------------------------------------------------------------------------

namespace {

Theory example_family(const std::vector<Rational>& alphas, bool zero_alpha_is_process) {
    Theory t;
    t.states = StateSpace({"1", "2"});
    auto d1 = dirac(t.states, "1");
    auto d2 = dirac(t.states, "2");
    for (const auto& a : alphas) {
        ProcessVector pv;
        pv.dm = scale(a * a, subtract(d2, d1));
        pv.q = add(scale(a - 1, d1), scale(a + 1, d2));
        t.generators.push_back({pv, a != 0 || zero_alpha_is_process});
    }
    // xi -> infinity direction: pure change of condition, no heating.
    t.generators.push_back({{subtract(d2, d1), SignedMeasure{}}, zero_alpha_is_process});
    return t;
}

std::vector<Rational> default_alpha_grid() {
    return {Rational(-2), Rational(-1), Rational(0), Rational(1), Rational(2)};
}

}  // namespace

Theory make_example_d1(const std::vector<Rational>& alphas) {
    Theory t = example_family(alphas, true);
    t.family = ExactFamily::example_d1;
    return t;
}

Theory make_example_d2(const std::vector<Rational>& alphas) {
    Theory t = example_family(alphas, false);
    t.family = ExactFamily::example_d2;
    return t;
}

Theory make_halfspace(const std::vector<std::string>& labels,
                      const std::map<std::string, Rational>& eta0,
                      const std::map<std::string, Rational>& beta0) {
    Theory t;
    t.states = StateSpace(labels);
    CDPair pair{eta0, beta0};
    auto basis = hyperplane_basis(t.states, pair);
    for (const auto& b : basis) {
        t.generators.push_back({b, true});
        t.generators.push_back({negate(b), true});
    }
    t.generators.push_back({{SignedMeasure{}, negate(dirac(t.states, labels.front()))}, true});
    return t;
}

Theory builtin_theory(const std::string& name) {
    if (name == "example_d1") return make_example_d1(default_alpha_grid());
    if (name == "example_d2") return make_example_d2(default_alpha_grid());
    if (name == "halfspace") {
        Theory t;
        t.states = StateSpace({"1", "2"});
        auto d1 = dirac(t.states, "1");
        auto d2 = dirac(t.states, "2");
        auto mk = [&](const Rational& x, const Rational& q1, const Rational& q2) {
            ProcessVector pv;
            pv.dm = scale(x, subtract(d2, d1));
            pv.q = add(scale(q1, d1), scale(q2, d2));
            return pv;
        };
        // +/- the hyperplane of eta0 = (0,1), beta0 = (2,1), plus (0, -d1).
        t.generators.push_back({mk(2, 1, 0), true});
        t.generators.push_back({negate(mk(2, 1, 0)), true});
        t.generators.push_back({mk(1, 0, 1), true});
        t.generators.push_back({negate(mk(1, 0, 1)), true});
        t.generators.push_back({mk(0, -1, 0), true});
        return t;
    }
    if (name == "two_state_transfer") {
        Theory t;
        t.states = StateSpace({"1", "2"});
        t.generators.push_back(
            {{SignedMeasure{}, subtract(dirac(t.states, "1"), dirac(t.states, "2"))}, true});
        return t;
    }
    throw std::invalid_argument("unknown builtin theory: " + name);
}

std::vector<std::string> builtin_theory_names() {
    return {"example_d1", "example_d2", "halfspace", "two_state_transfer"};
}

// ---------------------------------------------------------------------------
// Quantization
// ---------------------------------------------------------------------------

QuantizationGrid::QuantizationGrid(std::vector<std::vector<double>> edges) : edges_(std::move(edges)) {
    if (edges_.empty()) throw std::invalid_argument("grid needs at least one coordinate");
    for (const auto& e : edges_) {
        if (e.size() < 2) throw std::invalid_argument("each coordinate needs at least two edges");
        for (size_t i = 0; i + 1 < e.size(); ++i)
            if (!(e[i] < e[i + 1])) throw std::invalid_argument("bin edges must be strictly increasing");
        std::vector<double> c;
        for (size_t i = 0; i + 1 < e.size(); ++i) c.push_back((e[i] + e[i + 1]) / 2);
        centers_.push_back(std::move(c));
    }
}

std::vector<int> QuantizationGrid::bin(const std::vector<double>& point) const {
    if (static_cast<int>(point.size()) != dims())
        throw std::invalid_argument("point dimension does not match the grid");
    std::vector<int> out(point.size());
    for (size_t d = 0; d < point.size(); ++d) {
        const auto& cs = centers_[d];
        int best = 0;
        double best_dist = std::abs(point[d] - cs[0]);
        for (int i = 1; i < static_cast<int>(cs.size()); ++i) {
            double dist = std::abs(point[d] - cs[static_cast<size_t>(i)]);
            if (dist < best_dist) {
                best = i;
                best_dist = dist;
            }
        }
        out[d] = best;
    }
    return out;
}

std::vector<double> QuantizationGrid::center(const std::vector<int>& bin) const {
    std::vector<double> out;
    for (size_t d = 0; d < bin.size(); ++d) out.push_back(centers_[d][static_cast<size_t>(bin[d])]);
    return out;
}

std::string QuantizationGrid::label(const std::vector<int>& bin) const {
    std::string out = "[";
    auto c = center(bin);
    for (size_t d = 0; d < c.size(); ++d) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", c[d]);
        out += buf;
        if (d + 1 < c.size()) out += ",";
    }
    return out + "]";
}

Rational tv_distance(const ProcessVector& a, const ProcessVector& b) {
    return l1_norm(subtract(a.dm, b.dm)) + l1_norm(subtract(a.q, b.q));
}

// ---------------------------------------------------------------------------
// Shared quadrature helpers (floating side, quarantined from decisions)
// ---------------------------------------------------------------------------

namespace {

constexpr int kSimpsonPanels = 256;

// Composite Simpson accumulation of a weighted point mass stream: calls
// emit(node, weight) for each node of the rule on [a, b].
template <typename Emit>
void simpson(double a, double b, const Emit& emit) {
    const double h = (b - a) / kSimpsonPanels;
    for (int k = 0; k <= kSimpsonPanels; ++k) {
        double w = (k == 0 || k == kSimpsonPanels) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        emit(a + k * h, w * h / 3.0);
    }
}

using BinKey = std::vector<int>;

struct Accumulator {
    std::map<BinKey, double> dm, q;
    void add_dm(const BinKey& b, double w) { dm[b] += w; }
    void add_q(const BinKey& b, double w) { q[b] += w; }
};

// Collects every occupied bin, in bin-index order, into a state space.
StateSpace states_from_bins(const QuantizationGrid& grid, const std::vector<const Accumulator*>& accs,
                            const std::vector<BinKey>& extra) {
    std::set<BinKey> keys(extra.begin(), extra.end());
    for (const auto* a : accs) {
        for (const auto& [k, v] : a->dm) {
            (void)v;
            keys.insert(k);
        }
        for (const auto& [k, v] : a->q) {
            (void)v;
            keys.insert(k);
        }
    }
    std::vector<std::string> labels;
    std::map<std::string, std::vector<double>> metadata;
    for (const auto& k : keys) {
        labels.push_back(grid.label(k));
        metadata[labels.back()] = grid.center(k);
    }
    return StateSpace(labels, metadata);
}

// Rationalize one accumulator into a process vector: drop ~0 bins, repair
// the dm total in float (recording its size), then force the exact-zero
// total after rationalizing.
ProcessVector finalize(const QuantizationGrid& grid, Accumulator& acc, double* renorm,
                       double* rat_err) {
    constexpr double kDropTol = 1e-13;
    for (auto it = acc.dm.begin(); it != acc.dm.end();)
        it = std::abs(it->second) < kDropTol ? acc.dm.erase(it) : std::next(it);
    for (auto it = acc.q.begin(); it != acc.q.end();)
        it = std::abs(it->second) < kDropTol ? acc.q.erase(it) : std::next(it);

    double residual = 0;
    for (const auto& [k, v] : acc.dm) {
        (void)k;
        residual += v;
    }
    if (!acc.dm.empty() && residual != 0) {
        auto largest = acc.dm.begin();
        for (auto it = acc.dm.begin(); it != acc.dm.end(); ++it)
            if (std::abs(it->second) > std::abs(largest->second)) largest = it;
        largest->second -= residual;
    }
    if (renorm) *renorm = std::max(*renorm, std::abs(residual));

    ProcessVector pv;
    double worst = 0;
    for (const auto& [k, v] : acc.dm) {
        double e = 0;
        pv.dm.set(grid.label(k), rational_from_double(v, kScenarioMaxDenominator, &e));
        worst = std::max(worst, e);
    }
    for (const auto& [k, v] : acc.q) {
        double e = 0;
        pv.q.set(grid.label(k), rational_from_double(v, kScenarioMaxDenominator, &e));
        worst = std::max(worst, e);
    }
    if (rat_err) *rat_err = std::max(*rat_err, worst);

    // Exact zero-total repair on the largest dm entry.
    Rational rtotal = total(pv.dm);
    if (rtotal != 0) {
        std::string largest;
        Rational mag = -1;
        for (const auto& [label, v] : pv.dm.entries()) {
            Rational a = v < 0 ? -v : v;
            if (a > mag) {
                mag = a;
                largest = label;
            }
        }
        pv.dm.set(largest, pv.dm.at(largest) - rtotal);
    }
    return pv;
}

}  // namespace

// ---------------------------------------------------------------------------
// Conduction tube (steady fields, shrinking sub-body)
// ---------------------------------------------------------------------------

TubeFields constant_tube_fields(double s_prime, double s, double r0) {
    TubeFields f;
    f.sigma_prime = [s_prime](double, double) { return s_prime; };
    f.sigma = [s](double, double) { return s; };
    f.r = [r0](double, double) { return r0; };
    return f;
}

TubeFields default_tube_fields() {
    TubeFields f;
    f.sigma_prime = [](double x, double t) { return 2.0 + 0.5 * x + 0.25 * t; };
    f.sigma = [](double x, double t) { return 1.0 + 0.5 * x + 0.25 * t; };
    f.r = [](double x, double t) { return 1.0 + 0.2 * x + 0.1 * t; };
    return f;
}

QuantizationGrid default_tube_grid() { return QuantizationGrid({{0.5, 1.5, 2.5}}); }

TubeEmission appendix_a_sequence(int n_max, const TubeFields& fields, const QuantizationGrid& grid) {
    if (n_max < 1) throw std::invalid_argument("n_max must be at least 1");
    if (grid.dims() != 1) throw std::invalid_argument("the tube scenario uses a 1-d state grid");
    const double r00 = fields.r(0.0, 0.0);
    if (!(r00 > 0)) throw std::invalid_argument("r(0,0) must be positive");

    std::vector<Accumulator> accs(static_cast<size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        const double tau = 1.0 / n;
        const double xi = 1.0 / (static_cast<double>(n) * n);
        auto& acc = accs[static_cast<size_t>(n - 1)];
        const double scale = fields.alpha / (2.0 * fields.area * r00 * tau);

        // Heating: A int_{-tau}^{tau} [f(sigma'(-xi,t)) r(-xi,t) -
        // f(sigma(xi,t)) r(xi,t)] dt, binned per node.
        simpson(-tau, tau, [&](double tnode, double w) {
            acc.add_q(grid.bin({fields.sigma_prime(-xi, tnode)}),
                      scale * fields.area * fields.r(-xi, tnode) * w);
            acc.add_q(grid.bin({fields.sigma(xi, tnode)}),
                      -scale * fields.area * fields.r(xi, tnode) * w);
        });
        // Change of condition: densities times the state shift between the
        // two time endpoints, over each half of the sub-body.
        simpson(-xi, 0.0, [&](double x, double w) {
            acc.add_dm(grid.bin({fields.sigma_prime(x, tau)}), scale * fields.rho_prime * fields.area * w);
            acc.add_dm(grid.bin({fields.sigma_prime(x, -tau)}),
                       -scale * fields.rho_prime * fields.area * w);
        });
        simpson(0.0, xi, [&](double x, double w) {
            acc.add_dm(grid.bin({fields.sigma(x, tau)}), scale * fields.rho * fields.area * w);
            acc.add_dm(grid.bin({fields.sigma(x, -tau)}), -scale * fields.rho * fields.area * w);
        });
    }

    const BinKey hot_bin = grid.bin({fields.sigma_prime(0.0, 0.0)});
    const BinKey cold_bin = grid.bin({fields.sigma(0.0, 0.0)});
    std::vector<const Accumulator*> acc_ptrs;
    for (const auto& a : accs) acc_ptrs.push_back(&a);

    TubeEmission out;
    out.states = states_from_bins(grid, acc_ptrs, {hot_bin, cold_bin});
    for (auto& acc : accs)
        out.sequence.push_back(finalize(grid, acc, &out.max_renormalization, &out.max_rationalization));

    double aerr = 0;
    Rational alpha = rational_from_double(fields.alpha, kScenarioMaxDenominator, &aerr);
    out.max_rationalization = std::max(out.max_rationalization, aerr);
    out.limit.q = scale(alpha, subtract(dirac(out.states, grid.label(hot_bin)),
                                        dirac(out.states, grid.label(cold_bin))));
    return out;
}

// ---------------------------------------------------------------------------
// Homogeneous reactor with a temperature ramp
// ---------------------------------------------------------------------------

ReactorModel default_reactor_model() {
    ReactorModel m;
    m.n = 2;
    m.molecular_weights = {1.0, 1.0};
    m.rate = [](const std::vector<double>& c, double theta) {
        return std::vector<double>{-theta * c[0] + c[1], theta * c[0] - c[1]};
    };
    m.internal_energy = [](const std::vector<double>& c, double theta) {
        return c[0] * (1.0 + theta) + c[1] * (2.0 + theta);
    };
    m.du_dtheta = [](const std::vector<double>& c, double) { return c[0] + c[1]; };
    m.grad_u_c = [](const std::vector<double>&, double theta) {
        return std::vector<double>{1.0 + theta, 2.0 + theta};
    };
    m.density = 1.0;
    m.volume = 1.0;
    m.density_cap = 2.0;
    m.theta_min = 0.5;
    m.theta_max = 4.0;
    return m;
}

QuantizationGrid default_reactor_grid() {
    std::vector<double> c_edges{-0.05, 0.25, 0.75, 1.05};
    std::vector<double> theta_edges;
    for (int i = 0; i <= 10; ++i) theta_edges.push_back(1.0 + 0.1 * i);
    return QuantizationGrid({c_edges, c_edges, theta_edges});
}

std::vector<std::string> reactor_model_violations(const ReactorModel& model,
                                                  const QuantizationGrid& grid) {
    std::vector<std::string> out;
    if (grid.dims() != model.n + 1) {
        out.push_back("grid dimension must be species count + 1");
        return out;
    }
    // Sample every bin-center combination.
    std::vector<int> bin(static_cast<size_t>(grid.dims()), 0);
    while (true) {
        auto pt = grid.center(bin);
        std::vector<double> c(pt.begin(), pt.end() - 1);
        double theta = pt.back();
        auto f = model.rate(c, theta);
        double mf = 0;
        for (int i = 0; i < model.n; ++i) mf += model.molecular_weights[static_cast<size_t>(i)] * f[static_cast<size_t>(i)];
        if (std::abs(mf) > 1e-9) out.push_back("mass production M.f != 0 at " + grid.label(bin));
        if (!(model.du_dtheta(c, theta) > 0)) out.push_back("du/dtheta <= 0 at " + grid.label(bin));
        for (int i = 0; i < model.n; ++i) {
            auto czero = c;
            czero[static_cast<size_t>(i)] = 0;
            if (model.rate(czero, theta)[static_cast<size_t>(i)] < -1e-12)
                out.push_back("absent species consumed at " + grid.label(bin));
        }
        int d = 0;
        for (; d < grid.dims(); ++d) {
            if (++bin[static_cast<size_t>(d)] < static_cast<int>(grid.centers()[static_cast<size_t>(d)].size())) break;
            bin[static_cast<size_t>(d)] = 0;
        }
        if (d == grid.dims()) break;
    }
    return out;
}

namespace {

// RK4 trajectories of the species balances under the ramp, sampled at 200
// fixed steps; values between nodes are linearly interpolated.
struct RampTrajectory {
    double eps, theta0, theta_star;
    std::vector<std::vector<double>> c;  // 201 nodes

    std::vector<double> at(double t) const {
        const int steps = static_cast<int>(c.size()) - 1;
        double pos = t / eps * steps;
        int k = std::clamp(static_cast<int>(pos), 0, steps - 1);
        double frac = pos - k;
        std::vector<double> out(c[static_cast<size_t>(k)].size());
        for (size_t i = 0; i < out.size(); ++i)
            out[i] = c[static_cast<size_t>(k)][i] * (1 - frac) + c[static_cast<size_t>(k + 1)][i] * frac;
        return out;
    }
    double theta_at(double t) const { return theta0 + (theta_star - theta0) * t / eps; }
};

RampTrajectory integrate_ramp(const ReactorModel& model, const std::vector<double>& c0,
                              double theta0, double theta_star, double eps) {
    constexpr int kSteps = 200;
    RampTrajectory traj{eps, theta0, theta_star, {}};
    traj.c.reserve(kSteps + 1);
    traj.c.push_back(c0);
    const double h = eps / kSteps;
    auto deriv = [&](const std::vector<double>& c, double t) {
        return model.rate(c, traj.theta_at(t));
    };
    auto axpy = [](const std::vector<double>& x, double a, const std::vector<double>& y) {
        std::vector<double> out(x.size());
        for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] + a * y[i];
        return out;
    };
    std::vector<double> c = c0;
    for (int k = 0; k < kSteps; ++k) {
        double t = k * h;
        auto k1 = deriv(c, t);
        auto k2 = deriv(axpy(c, h / 2, k1), t + h / 2);
        auto k3 = deriv(axpy(c, h / 2, k2), t + h / 2);
        auto k4 = deriv(axpy(c, h, k3), t + h);
        for (size_t i = 0; i < c.size(); ++i)
            c[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        // The trajectory must stay inside the admissible composition set.
        double mass = 0;
        for (size_t i = 0; i < c.size(); ++i) {
            if (c[i] < -1e-9)
                throw std::domain_error("reactor step rejected: concentration left the simplex");
            mass += model.molecular_weights[i] * c[i];
        }
        if (mass > model.density_cap)
            throw std::domain_error("reactor step rejected: density cap exceeded");
        traj.c.push_back(c);
    }
    return traj;
}

// Splits [0, eps] at the times where the ramp crosses a theta bin edge, so
// each Simpson slice stays inside one theta bin.
std::vector<std::pair<double, double>> theta_slices(const QuantizationGrid& grid, double theta0,
                                                    double theta_star, double eps) {
    std::vector<double> cuts{0.0, eps};
    const double lo = std::min(theta0, theta_star), hi = std::max(theta0, theta_star);
    // Edges between consecutive centers are the decision boundaries of
    // nearest-center binning.
    const auto& centers = grid.centers().back();
    for (size_t i = 0; i + 1 < centers.size(); ++i) {
        double boundary = (centers[i] + centers[i + 1]) / 2;
        if (boundary <= lo || boundary >= hi) continue;
        double t = eps * (boundary - theta0) / (theta_star - theta0);
        if (t > 0 && t < eps) cuts.push_back(t);
    }
    std::sort(cuts.begin(), cuts.end());
    std::vector<std::pair<double, double>> out;
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] > cuts[i]) out.push_back({cuts[i], cuts[i + 1]});
    return out;
}

}  // namespace

ReactorEmission appendix_c_sequence(const ReactorModel& model, const std::vector<double>& c0,
                                    double theta0, double theta_star,
                                    const std::vector<double>& eps_list,
                                    const QuantizationGrid& grid) {
    if (static_cast<int>(c0.size()) != model.n)
        throw std::invalid_argument("c0 dimension does not match the species count");
    if (grid.dims() != model.n + 1)
        throw std::invalid_argument("grid dimension must be species count + 1");
    if (theta0 == theta_star) throw std::invalid_argument("theta0 and theta* must differ");
    for (double th : {theta0, theta_star})
        if (!(th > model.theta_min && th < model.theta_max))
            throw std::invalid_argument("theta endpoints must be interior to the model interval");

    const double alpha = model.volume * model.density;

    auto state_point = [&](const std::vector<double>& c, double theta) {
        std::vector<double> pt = c;
        pt.push_back(theta);
        return pt;
    };

    std::vector<Accumulator> accs;
    std::vector<BinKey> endpoints;
    endpoints.push_back(grid.bin(state_point(c0, theta0)));
    endpoints.push_back(grid.bin(state_point(c0, theta_star)));

    for (double eps : eps_list) {
        if (!(eps > 0)) throw std::invalid_argument("epsilon must be positive");
        auto traj = integrate_ramp(model, c0, theta0, theta_star, eps);
        Accumulator acc;
        const double theta_dot = (theta_star - theta0) / eps;
        for (auto [a, b] : theta_slices(grid, theta0, theta_star, eps)) {
            // Slice nodes sit exactly on bin decision boundaries; pin the
            // theta bin per slice so no boundary node leaks mass sideways.
            const int theta_bin = grid.bin(state_point(c0, traj.theta_at((a + b) / 2))).back();
            simpson(a, b, [&](double t, double w) {
                auto c = traj.at(t);
                double theta = traj.theta_at(t);
                auto f = model.rate(c, theta);
                auto gu = model.grad_u_c(c, theta);
                double chem = 0;
                for (size_t i = 0; i < f.size(); ++i) chem += gu[i] * f[i];
                double heat_rate = model.du_dtheta(c, theta) * theta_dot + chem;
                auto bin = grid.bin(state_point(c, theta));
                bin.back() = theta_bin;
                acc.add_q(bin, model.volume * heat_rate * w);
            });
        }
        acc.add_dm(grid.bin(state_point(traj.c.back(), theta_star)), alpha);
        acc.add_dm(grid.bin(state_point(c0, theta0)), -alpha);
        endpoints.push_back(grid.bin(state_point(traj.c.back(), theta_star)));
        accs.push_back(std::move(acc));
    }

    // Analytic limit: heating density du/dtheta (c0, .) V along the ramp
    // line, same slice decomposition; dm jumps straight between endpoints.
    Accumulator limit_acc;
    for (auto [a, b] : theta_slices(grid, theta0, theta_star, 1.0)) {
        // Slices parameterized over [0, 1]; theta(s) = theta0 + (theta* - theta0) s.
        const double theta_mid = theta0 + (theta_star - theta0) * (a + b) / 2;
        const int theta_bin = grid.bin(state_point(c0, theta_mid)).back();
        simpson(a, b, [&](double s, double w) {
            double theta = theta0 + (theta_star - theta0) * s;
            auto bin = grid.bin(state_point(c0, theta));
            bin.back() = theta_bin;
            limit_acc.add_q(bin,
                            model.volume * model.du_dtheta(c0, theta) * (theta_star - theta0) * w);
        });
    }
    limit_acc.add_dm(grid.bin(state_point(c0, theta_star)), alpha);
    limit_acc.add_dm(grid.bin(state_point(c0, theta0)), -alpha);

    ReactorEmission out;
    out.epsilons = eps_list;
    std::vector<const Accumulator*> acc_ptrs;
    for (const auto& a : accs) acc_ptrs.push_back(&a);
    acc_ptrs.push_back(&limit_acc);
    out.states = states_from_bins(grid, acc_ptrs, endpoints);

    for (const auto& [k, v] : limit_acc.q) out.limit_q_float[grid.label(k)] = v;
    for (const auto& [k, v] : limit_acc.dm) out.limit_dm_float[grid.label(k)] = v;

    for (auto& acc : accs)
        out.sequence.push_back(finalize(grid, acc, &out.max_renormalization, &out.max_rationalization));
    out.limit = finalize(grid, limit_acc, &out.max_renormalization, &out.max_rationalization);
    return out;
}

}  // namespace kp
