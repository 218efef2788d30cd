#pragma once

#include <vector>

#include "lci/gompertz.hpp"
#include "lci/interp.hpp"
#include "lci/loads.hpp"
#include "lci/preferences.hpp"
#include "lci/profiles.hpp"

namespace lci {

struct SolverConfig {
    double horizon_T = 85.0;      // years from scenario start to maximum age
    double dt = 0.0125;           // time step, must divide horizon_T
    int wealth_nodes = 400;       // J
    InterpKind interpolation = InterpKind::monotone_cubic;
    double control_tolerance = 1e-8;  // relative tolerance of control search
    int integration_order = 16;       // Gauss points for the a-coefficients
    double w_max = 3.0e6;             // upper wealth bound seed (grows at r backward)
    double borrow_fraction = 0.9;     // borrowing cap as a fraction of remaining income
};

// Discounted survival/death weights over one step [t_i, t_i + dt]:
//   a1 = int e^(-beta s) Fbar(t_i + s | t_i) ds     (alive-utility weight)
//   a2 = int e^(-beta s) f(t_i + s | t_i) ds        (bequest weight)
//   a3 = e^(-beta dt) Fbar(t_i + dt | t_i)          (continuation weight)
struct StepCoefficients {
    double a1 = 0.0;
    double a2 = 0.0;
    double a3 = 0.0;
};

StepCoefficients step_coefficients(const GompertzParams& params, double beta, double t,
                                   double dt, int integration_order = 16);

// A fully specified solve instance. The mortality entry age x is the
// scenario's starting age; profile_offset shifts the earnings and
// survivor-needs clocks (entry age - 25) so post-retirement scenarios reuse
// the same life-cycle profiles.
struct Scenario {
    GompertzParams mortality{88.23, 9.38, 25.0};
    Preferences prefs;
    LoadSchedule schedule;
    IncomeProfile income;
    double profile_offset = 0.0;
    double initial_wealth = 0.0;
};

struct ValueSlice {
    int index = 0;   // time index i
    double t = 0.0;  // years since scenario start
    std::vector<double> wealth;
    std::vector<double> value;
    std::vector<double> c_opt;
    std::vector<double> p_opt;
    std::vector<char> feasible;
};

// Per-time wealth-grid bounds (N + 1 entries each).
struct WealthBounds {
    std::vector<double> lower;
    std::vector<double> upper;
};

WealthBounds wealth_bounds(const Scenario& scenario, const SolverConfig& config);

// J nodes spanning [lo, hi], uniformly spaced in the signed square root of
// wealth (dense near zero / the admissibility floor).
std::vector<double> wealth_grid(double lo, double hi, int nodes);

struct NodeDecision {
    double c = 0.0;
    double p = 0.0;
    double value = 0.0;
    bool feasible = false;
};

// Single-node Bellman optimization against the next slice's interpolant.
NodeDecision optimize_node(const Scenario& scenario, const SolverConfig& config, double t,
                           double w, const StepCoefficients& coeffs,
                           const Interpolant& next_value, double w_lo_next);

std::vector<ValueSlice> backward_induction(const Scenario& scenario,
                                           const SolverConfig& config);

struct TrajectoryPoint {
    double age = 0.0;          // x + t
    double t = 0.0;            // years since scenario start
    double wealth = 0.0;       // W(t)
    double consumption = 0.0;  // c*(t)
    double premium = 0.0;      // p*(t), > 0 insurance, < 0 annuity
    double sum_insured = 0.0;  // p/eta (p > 0), p/theta (p < 0), else 0
    double legacy = 0.0;       // Z(t)
};

struct Trajectory {
    std::vector<TrajectoryPoint> points;  // one per step plus the terminal state
};

Trajectory forward_simulate(const Scenario& scenario, const SolverConfig& config,
                            const std::vector<ValueSlice>& slices, double w0);

// Maximal constant-sign phases of the premium path: sign +1 where p > tol,
// -1 where p < -tol, 0 where |p| <= tol. age_end is exclusive (equals the
// next phase's age_begin; the last phase ends at the horizon).
struct PhaseInterval {
    double age_begin = 0.0;
    double age_end = 0.0;
    int sign = 0;
};

std::vector<PhaseInterval> participation_report(const Trajectory& traj,
                                                double tolerance = 1.0);

// -p*(age) when the premium at that age is negative, else 0 ($/year).
double annuity_demand(const Trajectory& traj, double age);

}  // namespace lci
