#pragma once

#include "lci/gompertz.hpp"

namespace lci {

enum class EpvKind { annuity, insurance };

// Present value per $1 of benefit under a mortality loading factor kappa.
struct EpvQuote {
    double value;
    EpvKind kind;
    double kappa;
};

// Two-parameter load schedule: kappa_ins scales the hazard up on the ask side,
// kappa_ann divides it on the bid side. Premium calibration uses its own
// discount rate (default 2%) at a fixed calibration age (default 65),
// independent of the life-cycle model's rate.
struct LoadSchedule {
    double kappa_ins = 1.0;
    double kappa_ann = 1.0;
    double pricing_rate = 0.02;
    double calibration_age = 65.0;
    GompertzParams base{88.23, 9.38, 25.0};

    double eta(double t) const;    // lambda(t) * kappa_ins
    double theta(double t) const;  // lambda(t) / kappa_ann
    double m_ins() const;          // modal age implied by the loaded ask hazard
    double m_ann() const;          // modal age implied by the loaded bid hazard
};

// EPV of a loaded perpetual life annuity paying $1/year while alive, priced at
// age g.x:  a_bar(kappa) = b * exp(C) * E_{1+r*b}(C),  C = exp((x-m)/b) / kappa.
EpvQuote annuity_epv(double kappa_ann, double r, const GompertzParams& g);

// EPV of loaded whole-of-life insurance paying $1 at death, priced at age g.x:
//   A_bar(kappa) = C * exp(C) * E_{r*b}(C),  C = exp((x-m)/b) * kappa.
EpvQuote insurance_epv(double kappa_ins, double r, const GompertzParams& g);

// Solve (1 - L) * a_bar(kappa) = a_bar(1) for kappa on [1, 1e6].
double solve_kappa_ann(double L, double r, const GompertzParams& g);

// Solve (1 - L) * A_bar(kappa) = A_bar(1) for kappa on [1, 1e6].
double solve_kappa_ins(double L, double r, const GompertzParams& g);

// Loads implied by fixed kappas for a purchase at the given age:
// L = 1 - EPV(1) / EPV(kappa) with both EPVs priced at that age.
struct ImpliedLoads {
    double L_ins;
    double L_ann;
};
ImpliedLoads implied_load_by_age(const LoadSchedule& schedule, double purchase_age);

}  // namespace lci
