#include "lci/gompertz.hpp"

#include <cmath>

namespace lci {

double hazard(const GompertzParams& g, double t) {
    return std::exp((g.x + t - g.m) / g.b) / g.b;
}

double survival(const GompertzParams& g, double t) {
    const double a = std::exp((g.x - g.m) / g.b);
    return std::exp(-a * std::expm1(t / g.b));
}

double survival_between(const GompertzParams& g, double t0, double t1) {
    const double a = std::exp((g.x - g.m) / g.b);
    return std::exp(-a * (std::exp(t1 / g.b) - std::exp(t0 / g.b)));
}

double density(const GompertzParams& g, double t) {
    return hazard(g, t) * survival(g, t);
}

}  // namespace lci
