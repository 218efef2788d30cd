#include "lci/calibration.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "lci/errors.hpp"

namespace lci {

namespace {

constexpr int kBaseAge = 25;

// Survival targets s_t = l_{25+t} / l_25 and their ages-from-base.
void survival_targets(const AggregatedTable& table, std::vector<double>& t_out,
                      std::vector<double>& s_out) {
    t_out.clear();
    s_out.clear();
    if (table.size() == 0) throw ValidationError("calibration: empty table");
    if (table.ages.front() != kBaseAge)
        throw ValidationError("calibration: table must start at age 25");
    const double l0 = table.survivors.front();
    if (l0 <= 0.0) throw ValidationError("calibration: zero radix at age 25");
    for (std::size_t i = 0; i < table.size(); ++i) {
        t_out.push_back(static_cast<double>(table.ages[i] - kBaseAge));
        s_out.push_back(table.survivors[i] / l0);
    }
}

// F_bar and its partials with respect to (b, m) at fixed entry age 25.
struct SurvivalDerivs {
    double value;
    double d_db;
    double d_dm;
};

SurvivalDerivs survival_with_derivs(double t, double b, double m) {
    const double A = std::exp((kBaseAge - m) / b);
    const double e = std::exp(t / b);
    const double g = std::expm1(t / b);  // e^{t/b} - 1
    const double F = std::exp(-A * g);
    SurvivalDerivs out;
    out.value = F;
    out.d_dm = F * g * A / b;
    out.d_db = F * (A / (b * b)) * (t * e - (m - kBaseAge) * g);
    return out;
}

double sq(double v) { return v * v; }

}  // namespace

GompertzEstimate fit_survival_lsq(const AggregatedTable& table, double* residual_norm) {
    std::vector<double> ts, ss;
    survival_targets(table, ts, ss);
    const int n = static_cast<int>(ts.size());
    if (n < 3) throw ValidationError("calibration: need at least 3 ages for the survival fit");

    double b = 10.0, m = 85.0;
    double lambda = 1e-3;  // damping

    auto cost_at = [&](double bb, double mm) {
        double c = 0.0;
        for (int i = 0; i < n; ++i) {
            SurvivalDerivs d = survival_with_derivs(ts[i], bb, mm);
            c += sq(d.value - ss[i]);
        }
        return 0.5 * c;
    };

    double cost = cost_at(b, m);
    bool converged = false;
    for (int iter = 0; iter < 200; ++iter) {
        // Normal equations J^T J + lambda diag(J^T J), J^T r.
        Eigen::Matrix2d JtJ = Eigen::Matrix2d::Zero();
        Eigen::Vector2d Jtr = Eigen::Vector2d::Zero();
        for (int i = 0; i < n; ++i) {
            SurvivalDerivs d = survival_with_derivs(ts[i], b, m);
            const double r = d.value - ss[i];
            Eigen::Vector2d j(d.d_db, d.d_dm);
            JtJ += j * j.transpose();
            Jtr += j * r;
        }
        bool stepped = false;
        for (int tries = 0; tries < 60; ++tries) {
            Eigen::Matrix2d Alm = JtJ;
            Alm(0, 0) += lambda * JtJ(0, 0);
            Alm(1, 1) += lambda * JtJ(1, 1);
            Eigen::Vector2d step = Alm.ldlt().solve(-Jtr);
            const double b_new = b + step(0);
            const double m_new = m + step(1);
            if (b_new <= 0.1 || !std::isfinite(b_new) || !std::isfinite(m_new)) {
                lambda *= 10.0;
                continue;
            }
            const double cost_new = cost_at(b_new, m_new);
            if (cost_new <= cost) {
                const double step_norm = std::sqrt(sq(step(0)) + sq(step(1)));
                b = b_new;
                m = m_new;
                cost = cost_new;
                lambda = std::max(lambda * 0.25, 1e-14);
                stepped = true;
                if (step_norm < 1e-10) converged = true;
                break;
            }
            lambda *= 10.0;
        }
        if (converged) break;
        if (!stepped) {
            // Damping exhausted: treat as stationary.
            converged = true;
            break;
        }
    }
    if (!converged)
        throw ConvergenceError("survival least-squares fit did not converge in 200 iterations");
    if (residual_norm) *residual_norm = std::sqrt(2.0 * cost);
    return GompertzEstimate{b, m};
}

GompertzEstimate fit_mle(const AggregatedTable& table, double* alpha, double* beta) {
    AggregatedTable local;
    const AggregatedTable* src = &table;
    if (table.exposure.size() + 1 != table.size()) {
        local = table;
        exposures(local, 0.5);
        src = &local;
    }
    std::vector<double> ts, Es, ds;
    bool any = false;
    for (std::size_t i = 0; i < src->size(); ++i) {
        if (i + 1 == src->size()) break;  // cemetery age has no exposure
        const double E = src->exposure[i];
        const double d = src->deaths[i];
        if (E <= 0.0) continue;
        ts.push_back(static_cast<double>(src->ages[i] - kBaseAge));
        Es.push_back(E);
        ds.push_back(d);
        any = true;
    }
    if (!any) throw ValidationError("calibration: no ages with positive exposure");

    double sum_d = 0.0, sum_dt = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        sum_d += ds[i];
        sum_dt += ds[i] * ts[i];
    }
    if (sum_d <= 0.0) throw ValidationError("calibration: no deaths observed");
    const double dbar = sum_dt / sum_d;  // death-weighted mean age offset

    // Weighted exposure moments at rate y: W_k(y) = sum E_i e^{y t_i} t_i^k.
    auto moments = [&](double y, double& mean, double& second) {
        double w0 = 0.0, w1 = 0.0, w2 = 0.0;
        // Scale by exp(-y * t_max) implicitly via shifted exponent for stability.
        double tmax = ts.back();
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const double w = Es[i] * std::exp(y * (ts[i] - tmax));
            w0 += w;
            w1 += w * ts[i];
            w2 += w * ts[i] * ts[i];
        }
        mean = w1 / w0;
        second = w2 / w0;
    };

    // Score in beta after profiling out alpha: f(y) = dbar - mean_E(y).
    auto score = [&](double y) {
        double mean, second;
        moments(y, mean, second);
        return dbar - mean;
    };

    double y = 0.1;
    bool ok = false;
    for (int iter = 0; iter < 100; ++iter) {
        double mean, second;
        moments(y, mean, second);
        const double f = dbar - mean;
        const double fprime = mean * mean - second;  // = -Var_E(t) < 0
        if (std::abs(fprime) < 1e-300) break;
        const double y_new = y - f / fprime;
        if (!std::isfinite(y_new) || y_new <= 0.0 || y_new > 5.0) break;
        const double dy = std::abs(y_new - y);
        y = y_new;
        if (dy < 1e-13) {
            ok = true;
            break;
        }
    }
    if (!ok) {
        // Bisection fallback on [1e-4, 1]; score is strictly decreasing in y.
        double lo = 1e-4, hi = 1.0;
        double flo = score(lo), fhi = score(hi);
        if (!(flo > 0.0 && fhi < 0.0))
            throw ConvergenceError("mortality MLE: score has no root in [1e-4, 1]");
        for (int iter = 0; iter < 200; ++iter) {
            const double mid = 0.5 * (lo + hi);
            const double fm = score(mid);
            if (fm > 0.0)
                lo = mid;
            else
                hi = mid;
            if (hi - lo < 1e-14) break;
        }
        y = 0.5 * (lo + hi);
        ok = true;
    }

    // alpha_hat = sum d / sum E e^{y t}.
    double denom = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) denom += Es[i] * std::exp(y * ts[i]);
    const double a_hat = sum_d / denom;

    const double b_hat = 1.0 / y;
    const double m_hat = kBaseAge - b_hat * std::log(a_hat * b_hat);
    if (alpha) *alpha = a_hat;
    if (beta) *beta = y;
    return GompertzEstimate{b_hat, m_hat};
}

GompertzEstimate blend(const GompertzEstimate& lm, const GompertzEstimate& mle) {
    return GompertzEstimate{0.25 * lm.b + 0.75 * mle.b, 0.25 * lm.m + 0.75 * mle.m};
}

CalibrationResult calibrate(const AggregatedTable& table) {
    CalibrationResult out;
    out.lm_estimate = fit_survival_lsq(table, &out.lsq_residual_norm);
    out.mle_estimate = fit_mle(table, &out.alpha_hat, &out.beta_hat);
    out.blended = blend(out.lm_estimate, out.mle_estimate);
    return out;
}

std::vector<std::pair<int, double>> mortality_rate_curve(const AggregatedTable& table) {
    std::vector<std::pair<int, double>> out;
    for (std::size_t i = 0; i + 1 < table.size(); ++i) {
        if (table.exposure[i] > 0.0)
            out.emplace_back(table.ages[i], table.deaths[i] / table.exposure[i]);
    }
    return out;
}

}  // namespace lci
