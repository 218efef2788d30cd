// Independent exhaustive optimizer for one Bellman node, shared by the unit
// tests and the acceptance gate: zoomed grid search over (p, c) with the same
// admissibility closures as the solver contract ($0.01 margins), sharing only
// the step coefficients and the next-slice interpolant with the code under
// test. Utility and bequest values are computed from their own inline
// formulas rather than through the library.
#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "lci/interp.hpp"
#include "lci/solver.hpp"

namespace lci_test {

inline double brute_force_node(const lci::Scenario& sc, const lci::SolverConfig& cfg,
                               double t, double w, const lci::StepCoefficients& k,
                               const lci::Interpolant& next, double w_lo_next) {
    const double dt = cfg.dt;
    const double tau = t + sc.profile_offset;
    const double y = sc.income(tau);
    const double eta = sc.schedule.eta(t);
    const double theta = sc.schedule.theta(t);
    const double pb = sc.prefs.phi_bar();
    const double pbcb = pb * sc.prefs.cb(tau);
    const double floor = std::max(0.0, -pbcb) + 0.01;
    const double sigma = sc.prefs.sigma;
    const double A0 = w * (1.0 + sc.prefs.r * dt) + y * dt;
    const double p_hi = (A0 - w_lo_next) / dt - 0.01;
    const double p_lo = (w >= floor) ? theta * (floor - w) : eta * (floor - w);
    if (p_lo > p_hi) return -std::numeric_limits<double>::infinity();

    auto utility = [&](double c) {
        return sigma == 2.0 ? 1.0 - 1.0 / c
                            : std::expm1((1.0 - sigma) * std::log(c)) / (1.0 - sigma);
    };
    auto bequest = [&](double Z) {
        const double base = pbcb + Z;
        if (!(base > 0.0)) return -std::numeric_limits<double>::infinity();
        return sigma == 2.0 ? -pb * pb / base
                            : std::pow(pb, sigma) * std::pow(base, 1.0 - sigma) /
                                  (1.0 - sigma);
    };
    auto eval = [&](double p, double c) {
        const double A = A0 - p * dt;
        const double c_cap = (A - w_lo_next) / dt;
        if (c > c_cap || c < 0.01) return -std::numeric_limits<double>::infinity();
        double total = k.a1 * utility(c);
        if (k.a2 > 0.0) {
            const double Z = p > 0.0 ? w + p / eta : (p < 0.0 ? w + p / theta : w);
            const double bv = bequest(Z);
            if (bv == -std::numeric_limits<double>::infinity())
                return -std::numeric_limits<double>::infinity();
            total += k.a2 * bv;
        }
        const double wn = std::max(A - c * dt, w_lo_next);
        return total + k.a3 * next(wn);
    };

    double pa = p_lo, pz = p_hi;
    double ca = 0.01, cz = std::max(0.011, (A0 - p_lo * dt - w_lo_next) / dt);
    double best = -std::numeric_limits<double>::infinity();
    double bp = 0.0, bc = ca;
    const int n = 60;
    for (int round = 0; round < 6; ++round) {
        std::vector<double> ps, cs;
        for (int i = 0; i <= n; ++i) ps.push_back(pa + (pz - pa) * i / n);
        if (pa < 0.0 && pz > 0.0) ps.push_back(0.0);  // the legacy kink
        for (int i = 0; i <= n; ++i) cs.push_back(ca + (cz - ca) * i / n);
        for (double p : ps)
            for (double c : cs) {
                const double v = eval(p, c);
                if (v > best) {
                    best = v;
                    bp = p;
                    bc = c;
                }
            }
        const double pr = (pz - pa) * 2.0 / n, cr = (cz - ca) * 2.0 / n;
        pa = std::max(p_lo, bp - pr);
        pz = std::min(p_hi, bp + pr);
        ca = std::max(0.01, bc - cr);
        cz = bc + cr;
    }
    return best;
}

}  // namespace lci_test
