#pragma once

namespace lci {

// Gompertz mortality law anchored at a reference age x (in years).
// Time t is measured in years since age x.
struct GompertzParams {
    double m;  // modal age at death, years
    double b;  // dispersion scale, years
    double x;  // reference (initial) age, years
};

// Instantaneous death rate lambda(t) = (1/b) * exp((x + t - m) / b).
double hazard(const GompertzParams& g, double t);

// Survival probability from the reference age:
//   F_bar(t) = exp(-exp((x - m)/b) * (exp(t/b) - 1)).
double survival(const GompertzParams& g, double t);

// Conditional survival over [t0, t1]: F_bar(t1) / F_bar(t0), computed in a
// single exponential so the ratio stays exact when both factors underflow.
double survival_between(const GompertzParams& g, double t0, double t1);

// Remaining-lifetime density f(t) = hazard(t) * survival(t).
double density(const GompertzParams& g, double t);

}  // namespace lci
