#include "lci/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lci/errors.hpp"
#include "lci/quadrature.hpp"

namespace lci {

namespace {

constexpr double kCEps = 0.01;  // $ closure of the strict c > 0 constraint
constexpr double kZEps = 0.01;  // $ closure of the strict legacy constraint
const double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInvPhi = 0.6180339887498949;  // golden ratio reciprocal

int step_count(const SolverConfig& cfg) {
    const double steps = cfg.horizon_T / cfg.dt;
    const int n = static_cast<int>(std::lround(steps));
    if (n <= 0 || std::abs(steps - n) > 1e-9 * std::max(1.0, steps))
        throw ValidationError("solver: dt must divide horizon_T");
    return n;
}

// Everything held fixed while optimizing the nodes of one time slice.
struct SliceContext {
    double dt = 0.0;
    double r = 0.0;
    double sigma = 2.0;
    double ctol = 1e-8;  // relative control tolerance
    double y = 0.0;      // income rate over the step
    double eta = 0.0;
    double theta = 0.0;
    double floor = 0.0;  // legacy floor including the closure margin
    double pb = 0.0;     // phi_bar
    double pbcb = 0.0;   // phi_bar * c_b(tau)
    StepCoefficients k;
    const Interpolant* next = nullptr;
    double w_lo_next = 0.0;
};

SliceContext make_context(const Scenario& sc, const SolverConfig& cfg, double t,
                          const StepCoefficients& k, const Interpolant* next,
                          double w_lo_next) {
    SliceContext s;
    s.dt = cfg.dt;
    s.r = sc.prefs.r;
    s.sigma = sc.prefs.sigma;
    s.ctol = std::max(cfg.control_tolerance, 1e-12);
    const double tau = t + sc.profile_offset;
    s.y = sc.income(tau);
    s.eta = sc.schedule.eta(t);
    s.theta = sc.schedule.theta(t);
    s.floor = legacy_floor(tau, sc.prefs) + kZEps;
    s.pb = sc.prefs.phi_bar();
    s.pbcb = s.pb * sc.prefs.cb(tau);
    s.k = k;
    s.next = next;
    s.w_lo_next = w_lo_next;
    return s;
}

double bequest_value_ctx(const SliceContext& s, double Z) {
    const double base = s.pbcb + Z;
    if (!(base > 0.0)) return kNegInf;
    if (s.sigma == 2.0) return -s.pb * s.pb / base;
    return std::pow(s.pb, s.sigma) * std::pow(base, 1.0 - s.sigma) / (1.0 - s.sigma);
}

double bequest_marginal_ctx(const SliceContext& s, double Z) {
    const double base = s.pbcb + Z;
    if (!(base > 0.0)) return std::numeric_limits<double>::infinity();
    if (s.sigma == 2.0) return s.pb * s.pb / (base * base);
    return std::pow(s.pb, s.sigma) * std::pow(base, -s.sigma);
}

double utility_ctx(const SliceContext& s, double c) {
    if (s.sigma == 2.0) return 1.0 - 1.0 / c;
    return std::expm1((1.0 - s.sigma) * std::log(c)) / (1.0 - s.sigma);
}

double marginal_utility_ctx(const SliceContext& s, double c) {
    if (s.sigma == 2.0) return 1.0 / (c * c);
    return std::pow(c, -s.sigma);
}

struct InnerResult {
    double value = kNegInf;
    double c = kCEps;
    double w_next = 0.0;
};

// max over c of a1 U(c) + a3 Vhat(A - c dt), where A is cash on hand after
// the premium outflow; c is confined to [kCEps, (A - w_lo_next)/dt].
InnerResult best_consumption(const SliceContext& s, double A) {
    double c_cap = (A - s.w_lo_next) / s.dt;
    if (c_cap < kCEps) {
        if (c_cap < kCEps - 1e-6) return {};  // infeasible: cannot fund c > 0
        c_cap = kCEps;
    }
    const auto score = [&](double c) {
        const double wn = std::max(A - c * s.dt, s.w_lo_next);
        return s.k.a1 * marginal_utility_ctx(s, c) - s.k.a3 * s.dt * s.next->derivative(wn);
    };
    double c;
    if (score(c_cap) >= 0.0) {
        c = c_cap;  // spend down to the borrowing limit
    } else if (score(kCEps) <= 0.0) {
        c = kCEps;
    } else {
        double lo = kCEps, hi = c_cap;
        const double tol = s.ctol * std::max(1.0, c_cap);
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            if (score(mid) > 0.0)
                lo = mid;
            else
                hi = mid;
        }
        c = 0.5 * (lo + hi);
    }
    InnerResult out;
    out.c = c;
    out.w_next = std::max(A - c * s.dt, s.w_lo_next);
    out.value = s.k.a1 * utility_ctx(s, c) + s.k.a3 * (*s.next)(out.w_next);
    return out;
}

struct PolicyValue {
    double value = kNegInf;
    double c = kCEps;
    double p = 0.0;
};

// Value of premium rate p in one regime; rate is the legacy slope divisor
// (eta for insurance, theta for annuities).
PolicyValue premium_value(const SliceContext& s, double w, double p, double rate) {
    PolicyValue pv;
    pv.p = p;
    double bequest_term = 0.0;
    if (s.k.a2 > 0.0) {
        const double Z = w + (p == 0.0 ? 0.0 : p / rate);
        const double bv = bequest_value_ctx(s, Z);
        if (bv == kNegInf) return pv;
        bequest_term = s.k.a2 * bv;
    }
    const double A = w * (1.0 + s.r * s.dt) + (s.y - p) * s.dt;
    const InnerResult ir = best_consumption(s, A);
    if (ir.value == kNegInf) return pv;
    pv.value = ir.value + bequest_term;
    pv.c = ir.c;
    return pv;
}

// Golden-section maximization of the per-regime objective over p in [lo, hi].
PolicyValue golden_premium(const SliceContext& s, double w, double lo, double hi,
                           double rate) {
    PolicyValue best = premium_value(s, w, lo, rate);
    {
        const PolicyValue ph = premium_value(s, w, hi, rate);
        if (ph.value > best.value) best = ph;
    }
    double a = lo, b = hi;
    double x1 = b - kInvPhi * (b - a);
    double x2 = a + kInvPhi * (b - a);
    PolicyValue f1 = premium_value(s, w, x1, rate);
    PolicyValue f2 = premium_value(s, w, x2, rate);
    if (f1.value > best.value) best = f1;
    if (f2.value > best.value) best = f2;
    const double tol = s.ctol * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
    while (b - a > tol) {
        if (f1.value >= f2.value) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kInvPhi * (b - a);
            f1 = premium_value(s, w, x1, rate);
            if (f1.value > best.value) best = f1;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kInvPhi * (b - a);
            f2 = premium_value(s, w, x2, rate);
            if (f2.value > best.value) best = f2;
        }
    }
    return best;
}

// The Bellman sup at one (t, w) node, split into the p = 0 boundary and the
// two concave regimes either side of the legacy kink. One-sided derivatives
// at p = 0 (with the inner consumption problem enveloped out) decide which
// regime can contain the maximum, since the objective is concave across the
// kink: the left slope always weakly exceeds the right slope.
NodeDecision optimize_node_ctx(const SliceContext& s, double w) {
    NodeDecision best;
    best.value = kNegInf;
    const double A0 = w * (1.0 + s.r * s.dt) + s.y * s.dt;
    const double p_hi = (A0 - s.w_lo_next) / s.dt - kCEps;

    if (w >= s.floor) {
        const InnerResult ir0 = best_consumption(s, A0);
        if (ir0.value > kNegInf) {
            double v0 = ir0.value;
            bool ok = true;
            if (s.k.a2 > 0.0) {
                const double bv = bequest_value_ctx(s, w);
                if (bv == kNegInf)
                    ok = false;
                else
                    v0 += s.k.a2 * bv;
            }
            if (ok) {
                best.c = ir0.c;
                best.p = 0.0;
                best.value = v0;
                best.feasible = true;
            }
        }
        if (best.feasible && s.k.a2 > 0.0) {
            const double Vp = s.next->derivative(ir0.w_next);
            const double Bp = s.k.a2 * bequest_marginal_ctx(s, w);
            const double continuation_slope = s.k.a3 * s.dt * Vp;
            const double right = Bp / s.eta - continuation_slope;
            const double left = Bp / s.theta - continuation_slope;
            if (right > 0.0 && p_hi > 0.0) {
                const PolicyValue pv = golden_premium(s, w, 0.0, p_hi, s.eta);
                if (pv.value > best.value) best = {pv.c, pv.p, pv.value, true};
            } else if (left < 0.0) {
                const double p_lo = s.theta * (s.floor - w);  // <= 0 here
                if (p_lo < 0.0) {
                    const PolicyValue pv = golden_premium(s, w, p_lo, 0.0, s.theta);
                    if (pv.value > best.value) best = {pv.c, pv.p, pv.value, true};
                }
            }
        } else if (!best.feasible && s.k.a2 > 0.0) {
            // c is unaffordable at p = 0; annuitizing part of the legacy can
            // still rescue the node by converting bequest into cash flow.
            const double p_lo = s.theta * (s.floor - w);
            if (p_lo < 0.0) {
                const PolicyValue pv = golden_premium(s, w, p_lo, 0.0, s.theta);
                if (pv.value > kNegInf) best = {pv.c, pv.p, pv.value, true};
            }
        }
    } else {
        // Below the legacy floor life insurance is mandatory.
        const double p_lo = s.eta * (s.floor - w);
        if (p_lo <= p_hi) {
            const PolicyValue pv = golden_premium(s, w, p_lo, p_hi, s.eta);
            if (pv.value > kNegInf) best = {pv.c, pv.p, pv.value, true};
        }
    }
    return best;
}

// Interpolant over the feasible nodes of a slice; *w_lo_out reports the
// lowest feasible wealth (the effective admissibility bound for the
// preceding step's controls).
Interpolant slice_interpolant(const ValueSlice& slice, InterpKind kind, double* w_lo_out) {
    std::vector<double> xs, ys;
    xs.reserve(slice.wealth.size());
    ys.reserve(slice.wealth.size());
    for (std::size_t j = 0; j < slice.wealth.size(); ++j) {
        if (slice.feasible[j]) {
            xs.push_back(slice.wealth[j]);
            ys.push_back(slice.value[j]);
        }
    }
    if (xs.size() < 2)
        throw InfeasibilityError("solver: slice at t = " + std::to_string(slice.t) +
                                 " has fewer than two feasible nodes");
    *w_lo_out = xs.front();
    return Interpolant(std::move(xs), std::move(ys), kind);
}

}  // namespace

StepCoefficients step_coefficients(const GompertzParams& params, double beta, double t,
                                   double dt, int integration_order) {
    if (!(dt > 0.0)) throw ValidationError("step_coefficients: dt must be positive");
    StepCoefficients k;
    k.a1 = gauss_legendre(
        [&](double s) { return std::exp(-beta * (s - t)) * survival_between(params, t, s); },
        t, t + dt, integration_order);
    k.a2 = gauss_legendre(
        [&](double s) {
            return std::exp(-beta * (s - t)) * hazard(params, s) * survival_between(params, t, s);
        },
        t, t + dt, integration_order);
    k.a3 = std::exp(-beta * dt) * survival_between(params, t, t + dt);
    return k;
}

WealthBounds wealth_bounds(const Scenario& sc, const SolverConfig& cfg) {
    const int N = step_count(cfg);
    const double dt = cfg.dt;
    const double r = sc.prefs.r;

    // Remaining discounted income H(t), accumulated backward cell by cell.
    std::vector<double> H(N + 1, 0.0);
    for (int i = N - 1; i >= 0; --i) {
        const double t = i * dt;
        const double cell = gauss_legendre(
            [&](double u) {
                return sc.income(u + sc.profile_offset) * std::exp(-r * (u - t));
            },
            t, t + dt, 8);
        H[i] = H[i + 1] * std::exp(-r * dt) + cell;
    }

    // Minimal admissible wealth: the cheapest control (floor consumption plus
    // any mandatory insurance) must still reach next step's minimum.
    std::vector<double> adm(N + 1, 0.0);
    adm[N] = legacy_floor(cfg.horizon_T + sc.profile_offset, sc.prefs) + kZEps;
    for (int i = N - 1; i >= 0; --i) {
        const double t = i * dt;
        const double tau = t + sc.profile_offset;
        const double y = sc.income(tau);
        const double floor = legacy_floor(tau, sc.prefs) + kZEps;
        const double eta = sc.schedule.eta(t);
        const double target = adm[i + 1];
        const double no_insurance = (target - (y - kCEps) * dt) / (1.0 + r * dt);
        if (no_insurance >= floor)
            adm[i] = no_insurance;
        else
            adm[i] = (target - (y - kCEps) * dt + eta * floor * dt) / (1.0 + (r + eta) * dt);
    }

    WealthBounds wb;
    wb.lower.resize(N + 1);
    wb.upper.resize(N + 1);
    for (int i = 0; i <= N; ++i) {
        const double t = i * dt;
        wb.lower[i] = std::max(adm[i], -cfg.borrow_fraction * H[i]);
        wb.upper[i] = cfg.w_max * std::exp(r * (cfg.horizon_T - t));
        if (!(wb.upper[i] > wb.lower[i] + 1.0))
            throw ValidationError("solver: degenerate wealth bounds at t = " +
                                  std::to_string(t));
    }
    return wb;
}

std::vector<double> wealth_grid(double lo, double hi, int nodes) {
    if (nodes < 2) throw ValidationError("solver: need at least two wealth nodes");
    if (!(hi > lo)) throw ValidationError("solver: wealth bounds must be increasing");
    const auto to_xi = [](double w) { return w >= 0.0 ? std::sqrt(w) : -std::sqrt(-w); };
    const double xi_lo = to_xi(lo), xi_hi = to_xi(hi);
    std::vector<double> grid(nodes);
    for (int j = 0; j < nodes; ++j) {
        const double u = static_cast<double>(j) / (nodes - 1);
        const double xi = xi_lo + u * (xi_hi - xi_lo);
        grid[j] = xi >= 0.0 ? xi * xi : -xi * xi;
    }
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

NodeDecision optimize_node(const Scenario& scenario, const SolverConfig& config, double t,
                           double w, const StepCoefficients& coeffs,
                           const Interpolant& next_value, double w_lo_next) {
    const SliceContext s =
        make_context(scenario, config, t, coeffs, &next_value, w_lo_next);
    return optimize_node_ctx(s, w);
}

std::vector<ValueSlice> backward_induction(const Scenario& sc, const SolverConfig& cfg) {
    const int N = step_count(cfg);
    const WealthBounds wb = wealth_bounds(sc, cfg);
    std::vector<ValueSlice> slices(static_cast<std::size_t>(N) + 1);

    ValueSlice& last = slices[N];
    last.index = N;
    last.t = cfg.horizon_T;
    last.wealth = wealth_grid(wb.lower[N], wb.upper[N], cfg.wealth_nodes);
    const double tau_T = cfg.horizon_T + sc.profile_offset;
    for (double wj : last.wealth) {
        last.value.push_back(bequest_utility(tau_T, wj, sc.prefs));
        last.c_opt.push_back(0.0);
        last.p_opt.push_back(0.0);
        last.feasible.push_back(1);
    }

    for (int i = N - 1; i >= 0; --i) {
        const double t = i * cfg.dt;
        double w_lo_next = 0.0;
        const Interpolant next =
            slice_interpolant(slices[i + 1], cfg.interpolation, &w_lo_next);
        const StepCoefficients k =
            step_coefficients(sc.mortality, sc.prefs.beta, t, cfg.dt, cfg.integration_order);
        const SliceContext s = make_context(sc, cfg, t, k, &next, w_lo_next);

        ValueSlice& slice = slices[i];
        slice.index = i;
        slice.t = t;
        slice.wealth = wealth_grid(wb.lower[i], wb.upper[i], cfg.wealth_nodes);
        slice.value.resize(slice.wealth.size());
        slice.c_opt.resize(slice.wealth.size());
        slice.p_opt.resize(slice.wealth.size());
        slice.feasible.resize(slice.wealth.size());
        bool any_feasible = false;
        for (std::size_t j = 0; j < slice.wealth.size(); ++j) {
            const NodeDecision d = optimize_node_ctx(s, slice.wealth[j]);
            slice.value[j] = d.feasible ? d.value : kNegInf;
            slice.c_opt[j] = d.c;
            slice.p_opt[j] = d.p;
            slice.feasible[j] = d.feasible ? 1 : 0;
            any_feasible = any_feasible || d.feasible;
        }
        if (!any_feasible)
            throw InfeasibilityError("solver: entire slice infeasible at t = " +
                                     std::to_string(t));
    }
    return slices;
}

Trajectory forward_simulate(const Scenario& sc, const SolverConfig& cfg,
                            const std::vector<ValueSlice>& slices, double w0) {
    const int N = step_count(cfg);
    if (slices.size() != static_cast<std::size_t>(N) + 1)
        throw ValidationError("forward_simulate: slice count does not match config");
    Trajectory traj;
    traj.points.reserve(static_cast<std::size_t>(N) + 1);
    const double r = sc.prefs.r;
    double w = w0;
    for (int i = 0; i < N; ++i) {
        const double t = i * cfg.dt;
        if (!std::isfinite(w))
            throw InfeasibilityError("forward step " + std::to_string(i) +
                                     ": wealth is not finite");
        double w_lo_next = 0.0;
        const Interpolant next =
            slice_interpolant(slices[i + 1], cfg.interpolation, &w_lo_next);
        const StepCoefficients k =
            step_coefficients(sc.mortality, sc.prefs.beta, t, cfg.dt, cfg.integration_order);
        const SliceContext s = make_context(sc, cfg, t, k, &next, w_lo_next);
        const NodeDecision d = optimize_node_ctx(s, w);
        if (!d.feasible)
            throw InfeasibilityError("forward step " + std::to_string(i) +
                                     ": no admissible control at realized wealth");
        TrajectoryPoint pt;
        pt.age = sc.mortality.x + t;
        pt.t = t;
        pt.wealth = w;
        pt.consumption = d.c;
        pt.premium = d.p;
        pt.sum_insured = d.p > 0.0 ? d.p / s.eta : (d.p < 0.0 ? d.p / s.theta : 0.0);
        pt.legacy = w + pt.sum_insured;
        traj.points.push_back(pt);
        w = w * (1.0 + r * cfg.dt) + (s.y - d.c - d.p) * cfg.dt;
    }
    TrajectoryPoint end;
    end.age = sc.mortality.x + cfg.horizon_T;
    end.t = cfg.horizon_T;
    end.wealth = w;
    end.legacy = w;
    traj.points.push_back(end);
    return traj;
}

std::vector<PhaseInterval> participation_report(const Trajectory& traj, double tolerance) {
    std::vector<PhaseInterval> out;
    const auto& pts = traj.points;
    if (pts.size() < 2) return out;
    const std::size_t m = pts.size() - 1;  // control points; the last is terminal
    const auto sgn = [&](double p) { return p > tolerance ? 1 : (p < -tolerance ? -1 : 0); };
    int cur = sgn(pts[0].premium);
    std::size_t start = 0;
    for (std::size_t i = 1; i <= m; ++i) {
        const bool closing = (i == m);
        const int si = closing ? cur + 2 : sgn(pts[i].premium);
        if (si != cur) {
            out.push_back({pts[start].age, pts[i].age, cur});
            start = i;
            cur = si;
        }
    }
    return out;
}

double annuity_demand(const Trajectory& traj, double age) {
    const auto& pts = traj.points;
    if (pts.size() < 2) throw ValidationError("annuity_demand: empty trajectory");
    const double t0 = pts.front().age;
    const double dt = pts[1].age - pts[0].age;
    const long idx = std::lround((age - t0) / dt);
    if (idx < 0 || idx + 1 >= static_cast<long>(pts.size()))
        throw ValidationError("annuity_demand: age outside the trajectory");
    const double p = pts[static_cast<std::size_t>(idx)].premium;
    return p < 0.0 ? -p : 0.0;
}

}  // namespace lci
