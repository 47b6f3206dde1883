#pragma once

#include "gfm/loss_engine.hpp"

namespace gfm {

struct VarResult {
    double var = 0.0;              // loss fraction with P(L <= var) = confidence
    double economic_capital = 0.0; // var - expected portfolio loss
    double confidence = 0.0;
    int evaluations = 0;           // CDF (and, for Newton, CDF-derivative) evaluations
    bool converged = false;
};

// Bisection on [0, max_loss]. Returns the midpoint of a bracket of width
// <= tol_x containing the root of cdf(x) = q, so
// cdf(var - tol_x) <= q <= cdf(var + tol_x). Uses the two endpoint
// evaluations plus at most ceil(log2(max_loss/tol_x)) midpoint evaluations.
// Throws NoRootError when q is outside [cdf(0), cdf(max_loss)], reporting
// the attainable range. Default tol_x = 1e-4 (one basis point).
VarResult solve_var(const LossDistribution& dist, double q, double tol_x = 1e-4);

// Newton iteration on cdf(x) - q with the analytic CDF derivative, safeguarded
// by the bisection bracket: steps that would leave the bracket fall back to
// its midpoint, so a seed in a flat tail still converges. Convergence is
// certified by checking cdf(var -/+ tol_x) straddles q. `evaluations` counts
// CDF and derivative evaluations together (one derivative costs the same
// quadrature sweep as one CDF value).
VarResult solve_var_newton(const LossDistribution& dist, double q, double tol_x, double seed);

} // namespace gfm
