#pragma once

#include "kp/theory.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace kp {

// ---------------------------------------------------------------------------
// Built-in fixture theories.
//
// example_d1: two states, the alpha-sampled quadratic family
//   dm = a^2 (d2 - d1), q = (a-1) d1 + (a+1) d2
// over the default grid a in {-2,-1,0,1,2}, plus the limit direction
// (d2 - d1, 0). example_d2 has the same generator list but only nonzero-a
// samples are true processes. halfspace: two states with eta0 = (0, 1),
// beta0 = (2, 1), generated by the CD-equality hyperplane and one strictly
// irreversible element (0, -d1). two_state_transfer: the single generator
// (0, d1 - d2).
// ---------------------------------------------------------------------------
Theory builtin_theory(const std::string& name);
std::vector<std::string> builtin_theory_names();

Theory make_example_d1(const std::vector<Rational>& alphas);
Theory make_example_d2(const std::vector<Rational>& alphas);

// Half-space theory on arbitrary states: generators are +/- a rational basis
// of the hyperplane { <eta0, dm> = <beta0, q>, total(dm) = 0 } plus the
// strict element (0, -delta_first). Requires beta0 > 0 everywhere.
Theory make_halfspace(const std::vector<std::string>& labels,
                      const std::map<std::string, Rational>& eta0,
                      const std::map<std::string, Rational>& beta0);

// ---------------------------------------------------------------------------
// Quantization of continuous scenario states onto a finite state space.
// Bins are given by strictly increasing per-coordinate edges; points are
// assigned to the bin with the nearest center (ties to the lower index).
// ---------------------------------------------------------------------------
class QuantizationGrid {
public:
    explicit QuantizationGrid(std::vector<std::vector<double>> edges);

    int dims() const { return static_cast<int>(centers_.size()); }
    const std::vector<std::vector<double>>& centers() const { return centers_; }
    std::vector<int> bin(const std::vector<double>& point) const;
    std::vector<double> center(const std::vector<int>& bin) const;
    std::string label(const std::vector<int>& bin) const;

private:
    std::vector<std::vector<double>> edges_;
    std::vector<std::vector<double>> centers_;
};

// Floating scenario output is rationalized with bounded denominators before
// it may enter any decision module.
inline constexpr long kScenarioMaxDenominator = 1000000;

// Exact L1 distance between process vectors: |dm_a - dm_b| + |q_a - q_b|.
Rational tv_distance(const ProcessVector& a, const ProcessVector& b);

// ---------------------------------------------------------------------------
// Steady conduction tube (slender two-sided tube, insulated along its
// extent). State fields sigma'(x, t) on [-L, 0] and sigma(x, t) on [0, L]
// are 1-d state coordinates; r(x, t) is the heat flux through the section
// at x. The n-th element integrates the sub-body |x| <= xi_n = 1/n^2 over
// |t| <= tau_n = 1/n and scales by alpha / (2 A r(0,0) tau_n); the sequence
// converges to (0, alpha (delta_sigma' - delta_sigma)).
// ---------------------------------------------------------------------------
struct TubeFields {
    std::function<double(double, double)> sigma_prime;  // x in [-L, 0]
    std::function<double(double, double)> sigma;        // x in [0, L]
    std::function<double(double, double)> r;
    double rho_prime = 1.0;
    double rho = 1.0;
    double area = 1.0;
    double length = 1.0;
    double alpha = 1.0;
};

// Constant-state fields (exact limit at every n) and gently sloped fields
// used by the convergence suite.
TubeFields constant_tube_fields(double s_prime, double s, double r0);
TubeFields default_tube_fields();
QuantizationGrid default_tube_grid();

struct TubeEmission {
    StateSpace states;
    std::vector<ProcessVector> sequence;  // n = 1 .. n_max
    ProcessVector limit;
    double max_renormalization = 0.0;    // |total dm| removed per element, max
    double max_rationalization = 0.0;    // worst rationalization error
};

TubeEmission appendix_a_sequence(int n_max, const TubeFields& fields, const QuantizationGrid& grid);

// ---------------------------------------------------------------------------
// Homogeneous closed reactor. States are (c_1..c_n, theta); the grid's last
// coordinate is theta. A temperature ramp theta0 -> theta* over [0, eps]
// drives the species balances (RK4, 200 fixed steps); the heating rate
// follows from the energy balance. Eps-elements converge to the reversible
// limit (alpha (d[c0,theta*] - d[c0,theta0]), q0) with dq0 =
// du/dtheta (c0, .) V dtheta.
// ---------------------------------------------------------------------------
struct ReactorModel {
    int n = 0;
    std::vector<double> molecular_weights;
    std::function<std::vector<double>(const std::vector<double>&, double)> rate;
    std::function<double(const std::vector<double>&, double)> internal_energy;
    std::function<double(const std::vector<double>&, double)> du_dtheta;
    std::function<std::vector<double>(const std::vector<double>&, double)> grad_u_c;
    double density = 1.0;       // rho, fixed by the initial condition
    double volume = 1.0;        // V
    double density_cap = 2.0;   // rho*
    double theta_min = 0.5, theta_max = 4.0;
};

// Two species A <-> B with rate (-theta c1 + c2, theta c1 - c2) and
// u = c1 (1 + theta) + c2 (2 + theta).
ReactorModel default_reactor_model();
QuantizationGrid default_reactor_grid();

// Checks the model invariants on bin centers: M . f == 0, du/dtheta > 0,
// and f_i >= 0 whenever c_i == 0. Returns human-readable violations.
std::vector<std::string> reactor_model_violations(const ReactorModel& model,
                                                  const QuantizationGrid& grid);

struct ReactorEmission {
    StateSpace states;
    std::vector<double> epsilons;
    std::vector<ProcessVector> sequence;  // one per epsilon
    ProcessVector limit;
    std::map<std::string, double> limit_q_float;  // pre-rationalization
    std::map<std::string, double> limit_dm_float;
    double max_renormalization = 0.0;
    double max_rationalization = 0.0;
};

ReactorEmission appendix_c_sequence(const ReactorModel& model, const std::vector<double>& c0,
                                    double theta0, double theta_star,
                                    const std::vector<double>& eps_list,
                                    const QuantizationGrid& grid);

}  // namespace kp
