#pragma once

#include <functional>

namespace lci {

// Fixed-order Gauss-Legendre rule on [a, b]. Supported orders: 8, 16, 32.
double gauss_legendre(const std::function<double(double)>& f, double a, double b,
                      int order = 16);

// Globally adaptive Gauss-Kronrod (G7, K15) integration on a finite interval.
// Subdivides until the local error estimate satisfies
//   err <= max(abs_tol, rel_tol * |integral|)
// or max_depth bisection levels are reached.
double adaptive_gk(const std::function<double(double)>& f, double a, double b,
                   double rel_tol = 1e-12, double abs_tol = 1e-300,
                   int max_depth = 50);

}  // namespace lci
