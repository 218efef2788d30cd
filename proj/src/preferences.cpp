#include "lci/preferences.hpp"

#include <limits>
#include <stdexcept>

#include "lci/errors.hpp"

namespace lci {

namespace {
// Closure margin for the strict admissibility inequalities, in dollars.
constexpr double kEps = 0.01;
}  // namespace

double consumption_utility(double c, double sigma) {
    if (!(c > 0.0)) throw std::domain_error("consumption_utility: c must be positive");
    if (sigma == 2.0) return 1.0 - 1.0 / c;  // common case, avoids pow
    return std::expm1((1.0 - sigma) * std::log(c)) / (1.0 - sigma);
}

double consumption_marginal(double c, double sigma) {
    if (!(c > 0.0)) throw std::domain_error("consumption_marginal: c must be positive");
    if (sigma == 2.0) return 1.0 / (c * c);
    return std::pow(c, -sigma);
}

double bequest_utility(double t, double z, const Preferences& prefs) {
    const double pb = prefs.phi_bar();
    const double base = pb * prefs.cb(t) + z;
    if (!(base > 0.0))
        throw std::domain_error("bequest_utility: legacy below admissible floor");
    const double s = prefs.sigma;
    if (s == 2.0) return -pb * pb / base;
    return std::pow(pb, s) * std::pow(base, 1.0 - s) / (1.0 - s);
}

double bequest_marginal(double t, double z, const Preferences& prefs) {
    const double pb = prefs.phi_bar();
    const double base = pb * prefs.cb(t) + z;
    if (!(base > 0.0))
        throw std::domain_error("bequest_marginal: legacy below admissible floor");
    const double s = prefs.sigma;
    if (s == 2.0) return pb * pb / (base * base);
    return std::pow(pb, s) * std::pow(base, -s);
}

double legacy(const LegacyInputs& in) {
    if (in.premium_rate > 0.0) return in.wealth + in.premium_rate / in.eta_t;
    if (in.premium_rate < 0.0) return in.wealth + in.premium_rate / in.theta_t;
    return in.wealth;
}

double legacy_floor(double t, const Preferences& prefs) {
    return std::max(0.0, -prefs.phi_bar() * prefs.cb(t));
}

AdmissibleRegion admissible_bounds(double t, double W, const Preferences& prefs,
                                   const LoadSchedule& schedule, double max_outflow) {
    const double floor = legacy_floor(t, prefs) + kEps;
    AdmissibleRegion region;
    region.c_min = kEps;
    // The legacy is piecewise linear and increasing in p with Z(0) = W, so the
    // binding branch depends on which side of the floor W sits.
    if (W >= floor) {
        region.p_min = schedule.theta(t) * (floor - W);  // <= 0: annuities allowed
    } else {
        region.p_min = schedule.eta(t) * (floor - W);  // > 0: insurance mandatory
    }
    region.p_max = max_outflow - region.c_min;
    if (region.p_min > region.p_max)
        throw InfeasibilityError("no premium/consumption pair satisfies the legacy constraint");
    return region;
}

}  // namespace lci
