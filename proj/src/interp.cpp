#include "lci/interp.hpp"

#include <algorithm>
#include <cmath>

#include "lci/errors.hpp"

namespace lci {

Interpolant::Interpolant(std::vector<double> x, std::vector<double> y, InterpKind kind)
    : x_(std::move(x)), y_(std::move(y)), kind_(kind) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n)
        throw ValidationError("interpolant: need two or more matched (x, y) points");
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1]))
            throw ValidationError("interpolant: abscissae must be strictly increasing");
    if (kind_ != InterpKind::monotone_cubic) return;

    // Fritsch-Carlson node slopes: start from the weighted harmonic mean of
    // adjacent secants, which preserves monotonicity and never overshoots.
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x_[i + 1] - x_[i];
        delta[i] = (y_[i + 1] - y_[i]) / h[i];
    }
    slope_.assign(n, 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            slope_[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            slope_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    // One-sided endpoint slopes, clamped to keep the end cells monotone.
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (s * d0 <= 0.0)
            s = 0.0;
        else if (d0 * d1 < 0.0 && std::abs(s) > 3.0 * std::abs(d0))
            s = 3.0 * d0;
        return s;
    };
    if (n == 2) {
        slope_[0] = slope_[1] = delta[0];
    } else {
        slope_[0] = end_slope(h[0], h[1], delta[0], delta[1]);
        slope_[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    }
}

std::size_t Interpolant::cell(double xq) const {
    // Index i with x_[i] <= xq < x_[i+1], clamped to the end cells.
    const auto it = std::upper_bound(x_.begin(), x_.end(), xq);
    std::size_t i = static_cast<std::size_t>(it - x_.begin());
    if (i == 0) return 0;
    if (i >= x_.size()) return x_.size() - 2;
    return i - 1;
}

double Interpolant::operator()(double xq) const {
    const std::size_t i = cell(xq);
    const double h = x_[i + 1] - x_[i];
    if (kind_ == InterpKind::linear || xq < x_.front() || xq > x_.back()) {
        // Linear inside the end cells' extension; matches value and slope at
        // the boundary node for the cubic because endpoint slopes are used.
        if (xq < x_.front()) {
            const double s =
                kind_ == InterpKind::monotone_cubic ? slope_.front() : (y_[1] - y_[0]) / h;
            return y_.front() + s * (xq - x_.front());
        }
        if (xq > x_.back()) {
            const std::size_t m = x_.size() - 1;
            const double s = kind_ == InterpKind::monotone_cubic
                                 ? slope_.back()
                                 : (y_[m] - y_[m - 1]) / (x_[m] - x_[m - 1]);
            return y_.back() + s * (xq - x_.back());
        }
        const double u = (xq - x_[i]) / h;
        return y_[i] * (1.0 - u) + y_[i + 1] * u;
    }
    const double u = (xq - x_[i]) / h;
    const double u2 = u * u;
    const double u3 = u2 * u;
    const double h00 = 2.0 * u3 - 3.0 * u2 + 1.0;
    const double h10 = u3 - 2.0 * u2 + u;
    const double h01 = -2.0 * u3 + 3.0 * u2;
    const double h11 = u3 - u2;
    return h00 * y_[i] + h10 * h * slope_[i] + h01 * y_[i + 1] + h11 * h * slope_[i + 1];
}

double Interpolant::derivative(double xq) const {
    const std::size_t i = cell(xq);
    const double h = x_[i + 1] - x_[i];
    if (kind_ == InterpKind::linear || xq < x_.front() || xq > x_.back()) {
        if (xq < x_.front())
            return kind_ == InterpKind::monotone_cubic ? slope_.front() : (y_[1] - y_[0]) / h;
        if (xq > x_.back()) {
            const std::size_t m = x_.size() - 1;
            return kind_ == InterpKind::monotone_cubic ? slope_.back()
                                                       : (y_[m] - y_[m - 1]) / (x_[m] - x_[m - 1]);
        }
        return (y_[i + 1] - y_[i]) / h;
    }
    const double u = (xq - x_[i]) / h;
    const double u2 = u * u;
    const double d00 = (6.0 * u2 - 6.0 * u) / h;
    const double d10 = 3.0 * u2 - 4.0 * u + 1.0;
    const double d01 = (-6.0 * u2 + 6.0 * u) / h;
    const double d11 = 3.0 * u2 - 2.0 * u;
    return d00 * y_[i] + d10 * slope_[i] + d01 * y_[i + 1] + d11 * slope_[i + 1];
}

}  // namespace lci
