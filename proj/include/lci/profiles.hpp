#pragma once

#include <array>
#include <utility>
#include <vector>

namespace lci {

// Log-quadratic earnings curve: ln y(t) = q2 t^2 + q1 t + q0 over working
// years t in [0, 40), with a flat pension thereafter. t measures years since
// entry at age 25, so retirement (age 65) is t = 40.
struct IncomeProfile {
    double q2 = 0.0;
    double q1 = 0.0;
    double q0 = 0.0;
    double pension = 24360.0;
    double retirement_t = 40.0;

    double operator()(double t) const;
    // Age offset where earnings peak: -q1 / (2 q2).
    double peak_t() const;
};

// Least-squares fit of the log-quadratic to (t, y) anchor points.
IncomeProfile fit_income(const std::vector<std::pair<double, double>>& anchors);

// The four default anchor points (t, annual earnings in dollars).
std::vector<std::pair<double, double>> default_income_anchors();

// Piecewise-cubic survivor-needs profile c_b(t) on [0, 40], constant P after
// retirement. Built from two cubics joined C2 at t = 20:
//   [0, 20):  A t^3 + B t^2              (level and slope zero at t = 0)
//   [20, 40]: a s^3 + b s^2 + c s + d    with s = t - 20, slope zero at t = 40
// P = c_b(40) and K = c_b(20) pin everything down in closed form.
struct DependencyProfile {
    double A = 0.0, B = 0.0;
    double a = 0.0, b = 0.0, c = 0.0, d = 0.0;
    double P = 0.0;  // post-retirement level
    double K = 0.0;  // value at the join t = 20

    double operator()(double t) const;
    double derivative(double t) const;
    // Location and value of the interior minimum on (0, 20).
    std::pair<double, double> interior_minimum() const;
};

DependencyProfile make_dependency_profile(double P = 32900.0, double K = -4897.43);

}  // namespace lci
