#include "lci/profiles.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "lci/errors.hpp"

namespace lci {

double IncomeProfile::operator()(double t) const {
    if (t >= retirement_t) return pension;
    return std::exp((q2 * t + q1) * t + q0);
}

double IncomeProfile::peak_t() const {
    if (q2 >= 0.0) throw ValidationError("income profile has no interior peak (q2 >= 0)");
    return -q1 / (2.0 * q2);
}

IncomeProfile fit_income(const std::vector<std::pair<double, double>>& anchors) {
    const int n = static_cast<int>(anchors.size());
    if (n < 3) throw ValidationError("fit_income: need at least 3 anchor points");
    Eigen::MatrixXd X(n, 3);
    Eigen::VectorXd z(n);
    for (int i = 0; i < n; ++i) {
        const double t = anchors[i].first;
        const double y = anchors[i].second;
        if (!(y > 0.0)) throw ValidationError("fit_income: earnings anchors must be positive");
        X(i, 0) = t * t;
        X(i, 1) = t;
        X(i, 2) = 1.0;
        z(i) = std::log(y);
    }
    Eigen::Vector3d coef = X.colPivHouseholderQr().solve(z);
    IncomeProfile p;
    p.q2 = coef(0);
    p.q1 = coef(1);
    p.q0 = coef(2);
    return p;
}

std::vector<std::pair<double, double>> default_income_anchors() {
    return {{0.0, 42460.0}, {10.0, 57320.0}, {25.0, 71650.0}, {40.0, 60900.0}};
}

double DependencyProfile::operator()(double t) const {
    if (t <= 0.0) return 0.0;
    if (t < 20.0) return (A * t + B) * t * t;
    if (t >= 40.0) return P;
    const double s = t - 20.0;
    return ((a * s + b) * s + c) * s + d;
}

double DependencyProfile::derivative(double t) const {
    if (t <= 0.0 || t >= 40.0) return 0.0;
    if (t < 20.0) return (3.0 * A * t + 2.0 * B) * t;
    const double s = t - 20.0;
    return (3.0 * a * s + 2.0 * b) * s + c;
}

std::pair<double, double> DependencyProfile::interior_minimum() const {
    // On [0, 20) the derivative is t (3At + 2B); the nonzero root is the
    // minimizer when A > 0 > B.
    if (!(A > 0.0 && B < 0.0))
        throw ValidationError("dependency profile: no interior minimum with these coefficients");
    const double t_star = -2.0 * B / (3.0 * A);
    return {t_star, (*this)(t_star)};
}

DependencyProfile make_dependency_profile(double P, double K) {
    DependencyProfile p;
    p.P = P;
    p.K = K;
    p.A = (3.0 * P - 8.0 * K) / 32000.0;
    p.B = K / 400.0 - 20.0 * p.A;
    p.a = -3.0 * p.A - p.B / 15.0;
    p.b = 60.0 * p.A + p.B;
    p.c = 1200.0 * p.A + 40.0 * p.B;
    p.d = K;
    return p;
}

}  // namespace lci
