#pragma once

#include <cmath>
#include <limits>

#include "lci/loads.hpp"
#include "lci/profiles.hpp"

namespace lci {

enum class BequestMode {
    crra,  // survivor-needs term identically zero
    hara,  // survivor-needs follow a DependencyProfile
};

struct Preferences {
    double r = 0.032;                   // risk-free rate / year
    double sigma = 2.0;                 // relative risk aversion (> 0, != 1)
    double beta = -std::log(0.975);     // time preference rate / year
    double phi = 0.95;                  // marginal propensity to bequeath
    BequestMode bequest_mode = BequestMode::hara;
    DependencyProfile dependency;       // used only in hara mode

    double phi_bar() const { return phi / (1.0 - phi); }
    // Survivor-needs level entering the bequest term at time t.
    double cb(double t) const {
        return bequest_mode == BequestMode::crra ? 0.0 : dependency(t);
    }
};

struct LegacyInputs {
    double wealth = 0.0;        // W, dollars
    double premium_rate = 0.0;  // p, dollars / year (insurance > 0, annuity < 0)
    double eta_t = 0.0;         // insurance premium rate / year
    double theta_t = 0.0;       // annuity payout rate / year
};

// U(c) = (c^(1-sigma) - 1) / (1 - sigma); c <= 0 is a domain error.
double consumption_utility(double c, double sigma);
// U'(c) = c^(-sigma).
double consumption_marginal(double c, double sigma);

// B(t, z) = phi_bar^sigma * (phi_bar * c_b(t) + z)^(1-sigma) / (1-sigma);
// requires phi_bar * c_b(t) + z > 0.
double bequest_utility(double t, double z, const Preferences& prefs);
// dB/dz = phi_bar^sigma * (phi_bar * c_b(t) + z)^(-sigma).
double bequest_marginal(double t, double z, const Preferences& prefs);

// Z = W + p/eta (p > 0), W (p = 0), W + p/theta (p < 0).
double legacy(const LegacyInputs& inputs);

// Legacy floor max{0, -phi_bar * c_b(t)}: Z must stay strictly above it.
double legacy_floor(double t, const Preferences& prefs);

// Feasible control region at (t, W): premium rates p in [p_min, p_max] keep
// the legacy above its floor (closed with a $0.01 margin), and c >= c_min.
// p_max reflects the caller-supplied cap on total outflow c + p (infinite by
// default). Throws InfeasibilityError when no (c, p) satisfies both.
struct AdmissibleRegion {
    double p_min = 0.0;
    double p_max = 0.0;
    double c_min = 0.0;
};

AdmissibleRegion admissible_bounds(double t, double W, const Preferences& prefs,
                                   const LoadSchedule& schedule,
                                   double max_outflow = std::numeric_limits<double>::infinity());

}  // namespace lci
