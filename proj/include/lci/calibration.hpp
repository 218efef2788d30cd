#pragma once

#include <utility>
#include <vector>

#include "lci/gompertz.hpp"
#include "lci/lifetable.hpp"

namespace lci {

// (b, m) pair as estimated by one method.
struct GompertzEstimate {
    double b = 0.0;
    double m = 0.0;
};

struct CalibrationResult {
    GompertzEstimate lm_estimate;   // nonlinear least squares on the survival curve
    GompertzEstimate mle_estimate;  // Poisson maximum likelihood on death counts
    GompertzEstimate blended;       // 0.25 * lm + 0.75 * mle, componentwise
    double alpha_hat = 0.0;         // MLE level parameter, lambda(t) = alpha * exp(beta * t)
    double beta_hat = 0.0;          // MLE growth rate = 1 / b
    double lsq_residual_norm = 0.0; // sqrt(2 * final cost) of the survival fit
};

// Levenberg-Marquardt fit of F_bar(t; b, m) to l_{25+t} / l_25 over all table
// ages (t = 0 .. 85). Starts from (b, m) = (10, 85); analytic Jacobian.
GompertzEstimate fit_survival_lsq(const AggregatedTable& table,
                                  double* residual_norm = nullptr);

// Poisson MLE of d_t ~ Poisson(E_t * alpha * exp(beta * t)) over ages with
// exposure defined (cemetery age excluded). Newton-Raphson on the profiled
// score in beta starting from 0.1, with a bracketed bisection fallback on
// [1e-4, 1]. Returns (b, m); the reparameterized (alpha, beta) go to *alpha
// and *beta when non-null.
GompertzEstimate fit_mle(const AggregatedTable& table, double* alpha = nullptr,
                         double* beta = nullptr);

// Componentwise 0.25 * lm + 0.75 * mle.
GompertzEstimate blend(const GompertzEstimate& lm, const GompertzEstimate& mle);

// Runs both fits plus the blend on one table.
CalibrationResult calibrate(const AggregatedTable& table);

// Empirical central mortality rates m_x = d_x / E_x for diagnostics.
// Ages with zero exposure are omitted.
std::vector<std::pair<int, double>> mortality_rate_curve(const AggregatedTable& table);

}  // namespace lci
