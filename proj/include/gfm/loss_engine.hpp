#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gfm/portfolio.hpp"
#include "gfm/quadrature.hpp"

namespace gfm {

// Mean and variance of the portfolio loss conditional on fixed factor
// values: with conditionally independent defaults,
//   mean     = sum_i lgd_i p^i
//   variance = sum_i lgd_i^2 p^i (1 - p^i).
struct ConditionalMoments {
    double mean = 0.0;
    double variance = 0.0;
};

// Default probability of one loan once the common factors are fixed:
//   Phi( (Phi^-1(p) - w.phi) / sqrt(1 - |w|^2) ).
double cond_default_prob(const Loan& loan, std::span<const double> factors);

// Conditional loss moments of the whole portfolio at one factor point.
ConditionalMoments cond_moments(const Portfolio& portfolio, std::span<const double> factors);

// The unconditional loss CDF under the conditional-normal approximation:
// per quadrature node the conditional loss is treated as normal with the
// node's moments, and the CDF is the weighted sum of those normal CDFs.
// Node moments are computed once at construction and cached, so each CDF
// evaluation costs O(grid size) regardless of portfolio size.
class LossDistribution {
public:
    // Parallel builder: node moments are filled in over disjoint node
    // ranges by OpenMP workers (threads = 0 picks the runtime default).
    // Each node is independent, so the result is bit-identical to
    // build_serial for any thread count.
    static LossDistribution build(Portfolio portfolio, QuadratureGrid grid, int threads = 0);

    // Single-threaded reference builder kept for testing and benchmarking.
    static LossDistribution build_serial(Portfolio portfolio, QuadratureGrid grid);

    // P(L <= x). Nodes with zero conditional variance contribute a step
    // 1{x >= mean}. No truncation is applied: like any normal
    // approximation this leaks a little mass below 0 and above the maximal
    // loss, so cdf(0) may be slightly positive.
    double cdf(double x) const;

    // Elementwise cdf over a nondecreasing list of points; output is
    // nondecreasing. Throws std::invalid_argument if xs is not ascending.
    std::vector<double> cdf_curve(std::span<const double> xs, int threads = 0) const;

    // d/dx of cdf: sum of weight * pdf((x-mean)/sigma)/sigma over nodes.
    // Zero-variance nodes contribute nothing.
    double cdf_x_derivative(double x) const;

    const Portfolio& portfolio() const noexcept { return portfolio_; }
    const QuadratureGrid& grid() const noexcept { return grid_; }
    const std::vector<ConditionalMoments>& node_moments() const noexcept { return moments_; }

    // Maximal possible loss sum_i lgd_i; the CDF's upper support bound and
    // the VaR solver's initial bracket width.
    double max_loss() const noexcept { return portfolio_.total_lgd(); }

private:
    LossDistribution(Portfolio portfolio, QuadratureGrid grid)
        : portfolio_(std::move(portfolio)), grid_(std::move(grid)) {}
    void finalize();

    Portfolio portfolio_;
    QuadratureGrid grid_;
    std::vector<ConditionalMoments> moments_;
    std::vector<double> sigma_; // cached sqrt(variance) per node
};

} // namespace gfm
