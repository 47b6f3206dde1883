#include "gfm/var_solver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gfm/errors.hpp"

namespace gfm {

namespace {

void check_args(double q, double tol_x) {
    if (!(q > 0.0 && q < 1.0))
        throw std::invalid_argument("confidence level must lie strictly inside (0,1)");
    if (!(tol_x > 0.0)) throw std::invalid_argument("tol_x must be positive");
}

[[noreturn]] void no_root(double q, double flo, double fhi) {
    throw NoRootError("confidence level " + std::to_string(q) +
                          " is outside the attainable CDF range [" + std::to_string(flo) + ", " +
                          std::to_string(fhi) + "]",
                      flo, fhi);
}

VarResult make_result(const LossDistribution& dist, double var, double q, int evals,
                      bool converged) {
    return {var, var - dist.portfolio().expected_loss(), q, evals, converged};
}

} // namespace

VarResult solve_var(const LossDistribution& dist, double q, double tol_x) {
    check_args(q, tol_x);
    double lo = 0.0;
    double hi = dist.max_loss();
    int evals = 0;
    const double flo = dist.cdf(lo);
    ++evals;
    const double fhi = dist.cdf(hi);
    ++evals;
    if (q < flo || q > fhi) no_root(q, flo, fhi);
    while (hi - lo > tol_x) {
        const double mid = 0.5 * (lo + hi);
        const double f = dist.cdf(mid);
        ++evals;
        if (f < q)
            lo = mid;
        else
            hi = mid;
    }
    return make_result(dist, 0.5 * (lo + hi), q, evals, true);
}

VarResult solve_var_newton(const LossDistribution& dist, double q, double tol_x, double seed) {
    check_args(q, tol_x);
    double lo = 0.0;
    double hi = dist.max_loss();
    int evals = 0;
    const double flo = dist.cdf(lo);
    ++evals;
    const double fhi = dist.cdf(hi);
    ++evals;
    if (q < flo || q > fhi) no_root(q, flo, fhi);

    double candidate = seed;
    bool have_candidate = std::isfinite(seed) && seed > lo && seed < hi;
    constexpr int kMaxIter = 200;
    for (int iter = 0; iter < kMaxIter; ++iter) {
        if (hi - lo <= tol_x) return make_result(dist, 0.5 * (lo + hi), q, evals, true);

        const double x = have_candidate ? candidate : 0.5 * (lo + hi);
        have_candidate = false;
        const double f = dist.cdf(x);
        ++evals;
        if (f < q)
            lo = x;
        else
            hi = x;

        const double d = dist.cdf_x_derivative(x);
        ++evals;
        if (d <= 1e-300) continue; // flat here; next round bisects
        const double step = (f - q) / d;
        const double next = x - step;
        if (std::fabs(step) <= 0.25 * tol_x) {
            // Certify the root the bisection way before accepting.
            const double f_lo = dist.cdf(next - tol_x);
            ++evals;
            const double f_hi = dist.cdf(next + tol_x);
            ++evals;
            if (f_lo <= q && q <= f_hi) return make_result(dist, next, q, evals, true);
        }
        if (next > lo && next < hi) {
            candidate = next;
            have_candidate = true;
        }
    }
    return make_result(dist, 0.5 * (lo + hi), q, evals, hi - lo <= tol_x);
}

} // namespace gfm
