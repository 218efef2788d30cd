#pragma once

namespace lci {

// Generalized integro-exponential function
//   E_s(z) = integral over u in [1, inf) of u^(-s) * exp(-z*u) du,  z > 0.
// s may be any real number. Relative accuracy ~1e-10 or better over the
// parameter ranges that arise in load pricing (s in [-1, 5], z in [1e-12, 1e3]).
double gen_exp_integral(double s, double z);

}  // namespace lci
