#include "lci/quadrature.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace lci {

namespace {

// Positive abscissae and weights on [-1, 1]; rules are symmetric.
constexpr std::array<double, 4> kGl8X = {
    0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
    0.9602898564975363};
constexpr std::array<double, 4> kGl8W = {
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
    0.1012285362903763};

constexpr std::array<double, 8> kGl16X = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
constexpr std::array<double, 8> kGl16W = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

constexpr std::array<double, 16> kGl32X = {
    0.0483076656877383, 0.1444719615827965, 0.2392873622521371,
    0.3318686022821277, 0.4213512761306353, 0.5068999089322294,
    0.5877157572407623, 0.6630442669302152, 0.7321821187402897,
    0.7944837959679424, 0.8493676137325700, 0.8963211557660521,
    0.9349060759377397, 0.9647622555875064, 0.9856115115452684,
    0.9972638618494816};
constexpr std::array<double, 16> kGl32W = {
    0.0965400885147278, 0.0956387200792749, 0.0938443990808046,
    0.0911738786957639, 0.0876520930044038, 0.0833119242269467,
    0.0781938957870703, 0.0723457941088485, 0.0658222227763618,
    0.0586840934785355, 0.0509980592623762, 0.0428358980222267,
    0.0342738629130214, 0.0253920653092621, 0.0162743947309057,
    0.0070186100094701};

template <std::size_t N>
double gauss_symmetric(const std::function<double(double)>& f, double a,
                       double b, const std::array<double, N>& xs,
                       const std::array<double, N>& ws) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        sum += ws[i] * (f(mid - half * xs[i]) + f(mid + half * xs[i]));
    }
    return half * sum;
}

// Gauss-Kronrod 7-15 pair (QUADPACK constants).
constexpr std::array<double, 8> kK15X = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
constexpr std::array<double, 8> kK15W = {
    0.0229353220105292, 0.0630920926299785, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278};
constexpr std::array<double, 4> kG7W = {
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694};

struct GkResult {
    double integral;
    double error;
};

GkResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    std::array<double, 15> fv{};
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(mid - half * kK15X[i]);
        fv[14 - i] = f(mid + half * kK15X[i]);
    }
    fv[7] = f(mid);
    double k = kK15W[7] * fv[7];
    for (int i = 0; i < 7; ++i) k += kK15W[i] * (fv[i] + fv[14 - i]);
    // Gauss nodes are the odd-index Kronrod abscissae (1, 3, 5) plus center.
    double g = kG7W[3] * fv[7];
    g += kG7W[0] * (fv[1] + fv[13]);
    g += kG7W[1] * (fv[3] + fv[11]);
    g += kG7W[2] * (fv[5] + fv[9]);
    const double integral = half * k;
    const double diff = std::abs(half * (k - g));
    // QUADPACK-style sharpened error estimate.
    const double err = diff > 0.0 ? diff * std::min(1.0, std::pow(200.0 * diff / std::abs(integral == 0.0 ? 1.0 : integral), 1.5))
                                  : diff;
    return {integral, std::max(err, diff * 1e-6)};
}

double adaptive_rec(const std::function<double(double)>& f, double a, double b,
                    double tol_abs, double rel_tol, int depth, int max_depth) {
    const GkResult r = gk15(f, a, b);
    const double local_tol =
        std::max(tol_abs, rel_tol * std::abs(r.integral));
    if (depth >= max_depth || r.error <= local_tol) {
        return r.integral;
    }
    const double mid = 0.5 * (a + b);
    return adaptive_rec(f, a, mid, 0.5 * tol_abs, rel_tol, depth + 1, max_depth) +
           adaptive_rec(f, mid, b, 0.5 * tol_abs, rel_tol, depth + 1, max_depth);
}

}  // namespace

double gauss_legendre(const std::function<double(double)>& f, double a,
                      double b, int order) {
    switch (order) {
        case 8:
            return gauss_symmetric(f, a, b, kGl8X, kGl8W);
        case 16:
            return gauss_symmetric(f, a, b, kGl16X, kGl16W);
        case 32:
            return gauss_symmetric(f, a, b, kGl32X, kGl32W);
        default:
            throw std::invalid_argument("gauss_legendre: order must be 8, 16 or 32");
    }
}

double adaptive_gk(const std::function<double(double)>& f, double a, double b,
                   double rel_tol, double abs_tol, int max_depth) {
    if (a == b) return 0.0;
    return adaptive_rec(f, a, b, abs_tol, rel_tol, 0, max_depth);
}

}  // namespace lci
