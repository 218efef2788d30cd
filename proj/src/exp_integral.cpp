#include "lci/exp_integral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lci/quadrature.hpp"

namespace lci {

// After the substitution u = exp(y) the integral becomes
//   E_s(z) = integral over y in [0, inf) of exp((1 - s) * y - z * exp(y)) dy,
// whose integrand is smooth, bounded by 1 near y = 0 when s >= 1, and cut off
// super-exponentially by the z * exp(y) term. The substitution also grades the
// mesh geometrically near u = 1, which resolves the steep u^(-s) factor that a
// direct rule would miss when z is small and s > 1.
double gen_exp_integral(double s, double z) {
    if (!(z > 0.0)) {
        throw std::domain_error("gen_exp_integral: z must be positive");
    }
    const double growth = std::max(0.0, 1.0 - s);
    // Truncate where the exponent is below ~ -750: beyond that the integrand
    // underflows double precision, so the tail contributes exactly zero.
    double y_max = std::log(750.0 / z);
    y_max = std::log((750.0 + growth * std::max(y_max, 0.0)) / z);
    if (y_max <= 0.0) {
        // Entire mass sits so close to u = 1 that exp(-z) already underflows.
        return 0.0;
    }
    const auto integrand = [s, z](double y) {
        return std::exp((1.0 - s) * y - z * std::exp(y));
    };
    return adaptive_gk(integrand, 0.0, y_max, 1e-13, 1e-305, 48);
}

}  // namespace lci
