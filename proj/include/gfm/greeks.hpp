#pragma once

#include <cstddef>
#include <vector>

#include "gfm/loss_engine.hpp"
#include "gfm/var_solver.hpp"

namespace gfm {

// Identifies one model parameter for partial-derivative queries.
struct ParamId {
    enum class Kind { notional, default_prob, loading, recovery };
    Kind kind;
    std::size_t loan = 0;
    int factor = 0; // loadings only
};

// VaR sensitivities from the implicit function theorem: each Greek is
// -(d/d_theta of the CDF at VaR) / (d/dx of the CDF at VaR), and
// d VaR / d q = +1 / denominator. Notional derivatives differentiate
// through the portfolio fractions f_j = N_j / sum N (all of them move when
// one notional moves), which is why they satisfy
// sum_i N_i dVaR/dN_i = 0.
struct GreeksReport {
    std::vector<double> d_var_d_notional; // N
    std::vector<double> d_var_d_pd;       // N
    std::vector<double> d_var_d_loading;  // N x m, row-major
    std::vector<double> d_var_d_recovery; // N
    double d_var_d_q = 0.0;
    double var_used = 0.0;
    double denominator = 0.0; // dF/dx at VaR, shared by every ratio

    double loading(std::size_t loan, int factor) const {
        return d_var_d_loading[loan * static_cast<std::size_t>(num_factors) +
                               static_cast<std::size_t>(factor)];
    }
    int num_factors = 0;
};

// d/d_theta of the CDF at fixed x, by quadrature over the chain-rule
// expansion through the node's conditional mean and variance.
double cdf_param_derivative(const LossDistribution& dist, double x, const ParamId& param);

// All N*(m+3)+1 Greeks in one sweep over quadrature nodes, reusing the
// cached node moments. The node sums use a fixed-block pairwise reduction,
// so the parallel and serial paths give bit-identical output for any
// thread count. The denominator is computed by cdf_x_derivative (the same
// code path the Newton solver uses). Throws std::runtime_error if the CDF
// is numerically flat at VaR.
GreeksReport compute_greeks(const LossDistribution& dist, const VarResult& var_result,
                            int threads = 0);

// Single-threaded reference implementation kept for testing/benchmarks.
GreeksReport compute_greeks_serial(const LossDistribution& dist, const VarResult& var_result);

} // namespace gfm
