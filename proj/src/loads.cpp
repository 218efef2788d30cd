#include "lci/loads.hpp"

#include <cmath>
#include <stdexcept>

#include "lci/exp_integral.hpp"

namespace lci {

double LoadSchedule::eta(double t) const { return hazard(base, t) * kappa_ins; }

double LoadSchedule::theta(double t) const { return hazard(base, t) / kappa_ann; }

double LoadSchedule::m_ins() const { return base.m - base.b * std::log(kappa_ins); }

double LoadSchedule::m_ann() const { return base.m + base.b * std::log(kappa_ann); }

EpvQuote annuity_epv(double kappa_ann, double r, const GompertzParams& g) {
    if (!(r > 0.0)) {
        throw std::domain_error("annuity_epv: perpetuity diverges for r <= 0");
    }
    if (!(kappa_ann >= 1.0)) {
        throw std::domain_error("annuity_epv: kappa must be >= 1");
    }
    const double c = std::exp((g.x - g.m) / g.b) / kappa_ann;
    const double value = g.b * std::exp(c) * gen_exp_integral(1.0 + r * g.b, c);
    return {value, EpvKind::annuity, kappa_ann};
}

EpvQuote insurance_epv(double kappa_ins, double r, const GompertzParams& g) {
    if (!(kappa_ins >= 1.0)) {
        throw std::domain_error("insurance_epv: kappa must be >= 1");
    }
    if (r < 0.0) {
        throw std::domain_error("insurance_epv: negative discount rate");
    }
    const double c = std::exp((g.x - g.m) / g.b) * kappa_ins;
    double value;
    if (r == 0.0) {
        value = 1.0;  // E_0(c) = exp(-c)/c, so the closed form collapses exactly
    } else {
        value = c * std::exp(c) * gen_exp_integral(r * g.b, c);
    }
    return {value, EpvKind::insurance, kappa_ins};
}

namespace {

// The calibration residual h(kappa) = (1-L)*EPV(kappa) - EPV(1) is strictly
// increasing in kappa for both products, so a guarded secant iteration with
// bracket maintenance (bisection fallback) converges unconditionally.
template <typename Epv>
double solve_kappa(double L, const Epv& epv) {
    if (!(L >= 0.0 && L < 1.0)) {
        throw std::domain_error("solve_kappa: load must lie in [0, 1)");
    }
    if (L == 0.0) return 1.0;
    const double fair = epv(1.0);
    const auto h = [&](double kappa) { return (1.0 - L) * epv(kappa) - fair; };
    double lo = 1.0, hi = 1.0e6;
    double h_lo = h(lo);  // = -L * fair < 0
    double h_hi = h(hi);
    if (h_hi < 0.0) {
        throw std::runtime_error("solve_kappa: no solution in [1, 1e6] for this load");
    }
    double a = lo, b = hi, ha = h_lo, hb = h_hi;
    for (int it = 0; it < 200; ++it) {
        double mid = (hb != ha) ? b - hb * (b - a) / (hb - ha) : 0.5 * (a + b);
        if (!(mid > a && mid < b)) mid = 0.5 * (a + b);
        const double hm = h(mid);
        if (hm == 0.0 || b - a < 1e-12 * std::max(1.0, mid)) return mid;
        if (hm < 0.0) {
            a = mid;
            ha = hm;
        } else {
            b = mid;
            hb = hm;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

double solve_kappa_ann(double L, double r, const GompertzParams& g) {
    return solve_kappa(L, [&](double k) { return annuity_epv(k, r, g).value; });
}

double solve_kappa_ins(double L, double r, const GompertzParams& g) {
    return solve_kappa(L, [&](double k) { return insurance_epv(k, r, g).value; });
}

ImpliedLoads implied_load_by_age(const LoadSchedule& schedule, double purchase_age) {
    GompertzParams at_age = schedule.base;
    at_age.x = purchase_age;
    const double r = schedule.pricing_rate;
    const double ins_fair = insurance_epv(1.0, r, at_age).value;
    const double ins_loaded = insurance_epv(schedule.kappa_ins, r, at_age).value;
    const double ann_fair = annuity_epv(1.0, r, at_age).value;
    const double ann_loaded = annuity_epv(schedule.kappa_ann, r, at_age).value;
    return {1.0 - ins_fair / ins_loaded, 1.0 - ann_fair / ann_loaded};
}

}  // namespace lci
