#pragma once

#include <vector>

namespace lci {

enum class InterpKind {
    monotone_cubic,  // Fritsch-Carlson shape-preserving cubic
    linear,
};

// One-dimensional interpolant on a strictly increasing abscissa grid.
// Queries above the grid extrapolate linearly with the top-cell slope;
// queries below the grid extrapolate linearly with the bottom-cell slope
// (the solver's feasibility bounds keep it from relying on the low side).
class Interpolant {
public:
    Interpolant() = default;
    Interpolant(std::vector<double> x, std::vector<double> y, InterpKind kind);

    double operator()(double xq) const;
    double derivative(double xq) const;
    bool empty() const { return x_.empty(); }

private:
    std::vector<double> x_, y_, slope_;  // slope_: node derivatives (cubic mode)
    InterpKind kind_ = InterpKind::linear;

    std::size_t cell(double xq) const;
};

}  // namespace lci
