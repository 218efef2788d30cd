// Unit tests for the shape-preserving cubic and linear interpolants.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "lci/interp.hpp"

using namespace lci;

namespace {
std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
    return v;
}
}  // namespace

TEST_CASE("interpolants reproduce node values exactly") {
    const std::vector<double> x{0.0, 1.0, 2.5, 4.0, 7.0};
    const std::vector<double> y{-2.0, 0.5, 0.4, 3.0, 3.2};
    for (InterpKind kind : {InterpKind::monotone_cubic, InterpKind::linear}) {
        const Interpolant f(x, y, kind);
        for (std::size_t i = 0; i < x.size(); ++i)
            CHECK(f(x[i]) == doctest::Approx(y[i]).epsilon(1e-14));
    }
}

TEST_CASE("monotone data gives a monotone interpolant with no overshoot") {
    const std::vector<double> x{0.0, 0.3, 1.0, 1.2, 3.0, 6.0, 10.0};
    const std::vector<double> y{0.0, 0.01, 0.02, 3.0, 3.05, 8.0, 8.01};
    const Interpolant f(x, y, InterpKind::monotone_cubic);
    double prev = f(0.0);
    for (double q = 0.001; q <= 10.0; q += 0.001) {
        const double v = f(q);
        CHECK(v >= prev - 1e-12);
        prev = v;
    }
    CHECK(f(10.0) == doctest::Approx(8.01).epsilon(1e-14));
    // Never exceeds the data range inside the domain.
    for (double q = 0.0; q <= 10.0; q += 0.01) {
        CHECK(f(q) >= -1e-12);
        CHECK(f(q) <= 8.01 + 1e-12);
    }
}

TEST_CASE("affine data is reproduced exactly, including extrapolation") {
    const auto x = linspace(-1.0, 5.0, 7);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = 3.0 * x[i] - 2.0;
    for (InterpKind kind : {InterpKind::monotone_cubic, InterpKind::linear}) {
        const Interpolant f(x, y, kind);
        for (double q : {-3.0, -1.0, 0.77, 4.2, 5.0, 9.0}) {
            CHECK(f(q) == doctest::Approx(3.0 * q - 2.0).epsilon(1e-13));
            CHECK(f.derivative(q) == doctest::Approx(3.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("derivative is consistent with finite differences inside cells") {
    const auto x = linspace(0.0, 6.283185307179586, 25);
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::sin(x[i]);
    const Interpolant f(x, y, InterpKind::monotone_cubic);
    for (double q = 0.1; q < 6.2; q += 0.37) {
        const double h = 1e-6;
        const double fd = (f(q + h) - f(q - h)) / (2.0 * h);
        CHECK(f.derivative(q) == doctest::Approx(fd).epsilon(1e-5));
    }
    // Smooth target: 25 nodes give a few parts in 10^3 on sin (the slope
    // limiter costs an order near the extrema).
    for (double q = 0.0; q <= 6.28; q += 0.05)
        CHECK(std::fabs(f(q) - std::sin(q)) < 4e-3);
}

TEST_CASE("extrapolation is linear using the endpoint slopes") {
    const std::vector<double> x{0.0, 1.0, 2.0, 3.0};
    const std::vector<double> y{0.0, 1.0, 4.0, 9.0};
    const Interpolant f(x, y, InterpKind::monotone_cubic);
    const double sL = f.derivative(0.0);
    const double sR = f.derivative(3.0);
    CHECK(f(-2.0) == doctest::Approx(y.front() - 2.0 * sL).epsilon(1e-12));
    CHECK(f(5.0) == doctest::Approx(y.back() + 2.0 * sR).epsilon(1e-12));
    CHECK(f.derivative(-10.0) == doctest::Approx(sL).epsilon(1e-12));
    CHECK(f.derivative(10.0) == doctest::Approx(sR).epsilon(1e-12));
}

TEST_CASE("two nodes degenerate to the secant line") {
    const Interpolant f({1.0, 3.0}, {10.0, 16.0}, InterpKind::monotone_cubic);
    CHECK(f(1.0) == doctest::Approx(10.0));
    CHECK(f(2.0) == doctest::Approx(13.0).epsilon(1e-14));
    CHECK(f(4.0) == doctest::Approx(19.0).epsilon(1e-14));
    CHECK(f.derivative(2.5) == doctest::Approx(3.0).epsilon(1e-14));
}

TEST_CASE("local extrema in the data do not generate spurious wiggles") {
    // Plateau followed by a decline: shape preservation requires the
    // interpolant to stay within each cell's data bracket.
    const std::vector<double> x{0.0, 1.0, 2.0, 3.0, 4.0};
    const std::vector<double> y{5.0, 5.0, 5.0, 2.0, 0.0};
    const Interpolant f(x, y, InterpKind::monotone_cubic);
    for (double q = 0.0; q <= 2.0; q += 0.01)
        CHECK(f(q) == doctest::Approx(5.0).epsilon(1e-12));
    for (double q = 2.0; q <= 4.0; q += 0.01) {
        CHECK(f(q) <= 5.0 + 1e-12);
        CHECK(f(q) >= -1e-12);
    }
}

TEST_CASE("linear kind is piecewise linear") {
    const std::vector<double> x{0.0, 2.0, 5.0};
    const std::vector<double> y{1.0, 5.0, -1.0};
    const Interpolant f(x, y, InterpKind::linear);
    CHECK(f(1.0) == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(f(3.5) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(f.derivative(1.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(f.derivative(3.0) == doctest::Approx(-2.0).epsilon(1e-14));
}
