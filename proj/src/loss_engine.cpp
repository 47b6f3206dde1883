#include "gfm/loss_engine.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "gfm/blocked_sum.hpp"
#include "gfm/normal.hpp"

namespace gfm {

namespace {

// Per-loan constants of the conditional default probability
//   p^i(phi) = Phi( (threshold_i - w_i.phi) * inv_s_i ).
struct LoanTerms {
    std::size_t n = 0;
    int m = 0;
    std::vector<double> lgd;
    std::vector<double> threshold; // Phi^-1(p_i)
    std::vector<double> inv_s;     // 1/sqrt(1 - |w_i|^2)
    std::vector<double> w;         // n x m, row-major
};

LoanTerms compile_terms(const Portfolio& p) {
    LoanTerms t;
    t.n = p.size();
    t.m = p.num_factors();
    t.lgd.resize(t.n);
    t.threshold.resize(t.n);
    t.inv_s.resize(t.n);
    t.w.resize(t.n * static_cast<std::size_t>(t.m));
    for (std::size_t i = 0; i < t.n; ++i) {
        const Loan& l = p.loan(i);
        t.lgd[i] = p.lgd(i);
        t.threshold[i] = std_normal_inv_cdf(l.default_prob);
        double w2 = 0.0;
        for (int k = 0; k < t.m; ++k) {
            const double wk = l.loadings[static_cast<std::size_t>(k)];
            t.w[i * static_cast<std::size_t>(t.m) + static_cast<std::size_t>(k)] = wk;
            w2 += wk * wk;
        }
        t.inv_s[i] = 1.0 / std::sqrt(1.0 - w2);
    }
    return t;
}

ConditionalMoments moments_at(const LoanTerms& t, const double* factors) {
    double mean = 0.0;
    double variance = 0.0;
    for (std::size_t i = 0; i < t.n; ++i) {
        double dot = 0.0;
        const double* wi = t.w.data() + i * static_cast<std::size_t>(t.m);
        for (int k = 0; k < t.m; ++k) dot += wi[k] * factors[k];
        const double pc = std_normal_cdf((t.threshold[i] - dot) * t.inv_s[i]);
        mean += t.lgd[i] * pc;
        variance += t.lgd[i] * t.lgd[i] * pc * (1.0 - pc);
    }
    return {mean, variance};
}

// Weighted normal CDF contribution of one node; zero variance degenerates
// to a step at the node mean.
inline double node_cdf_term(double x, const ConditionalMoments& mom, double sigma, double weight) {
    if (sigma > 0.0) return weight * std_normal_cdf((x - mom.mean) / sigma);
    return x >= mom.mean ? weight : 0.0;
}

inline double node_density_term(double x, const ConditionalMoments& mom, double sigma,
                                double weight) {
    if (sigma > 0.0) return weight * std_normal_pdf((x - mom.mean) / sigma) / sigma;
    return 0.0;
}

} // namespace

double cond_default_prob(const Loan& loan, std::span<const double> factors) {
    double dot = 0.0;
    double w2 = 0.0;
    for (std::size_t k = 0; k < loan.loadings.size(); ++k) {
        dot += loan.loadings[k] * factors[k];
        w2 += loan.loadings[k] * loan.loadings[k];
    }
    return std_normal_cdf((std_normal_inv_cdf(loan.default_prob) - dot) / std::sqrt(1.0 - w2));
}

ConditionalMoments cond_moments(const Portfolio& portfolio, std::span<const double> factors) {
    const LoanTerms t = compile_terms(portfolio);
    return moments_at(t, factors.data());
}

LossDistribution LossDistribution::build(Portfolio portfolio, QuadratureGrid grid, int threads) {
    LossDistribution dist(std::move(portfolio), std::move(grid));
    const LoanTerms t = compile_terms(dist.portfolio_);
    const std::size_t n = dist.grid_.size();
    dist.moments_.resize(n);
    const int nt = resolve_threads(threads);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nt)
#endif
    for (long long j = 0; j < static_cast<long long>(n); ++j) {
        const auto idx = static_cast<std::size_t>(j);
        dist.moments_[idx] = moments_at(t, dist.grid_.node(idx).data());
    }
    (void)nt;
    dist.finalize();
    return dist;
}

LossDistribution LossDistribution::build_serial(Portfolio portfolio, QuadratureGrid grid) {
    LossDistribution dist(std::move(portfolio), std::move(grid));
    const LoanTerms t = compile_terms(dist.portfolio_);
    dist.moments_.resize(dist.grid_.size());
    for (std::size_t j = 0; j < dist.grid_.size(); ++j)
        dist.moments_[j] = moments_at(t, dist.grid_.node(j).data());
    dist.finalize();
    return dist;
}

void LossDistribution::finalize() {
    sigma_.resize(moments_.size());
    for (std::size_t j = 0; j < moments_.size(); ++j) sigma_[j] = std::sqrt(moments_[j].variance);
}

double LossDistribution::cdf(double x) const {
    return blocked_sum_serial(moments_.size(), [&](std::size_t j) {
        return node_cdf_term(x, moments_[j], sigma_[j], grid_.weight(j));
    });
}

std::vector<double> LossDistribution::cdf_curve(std::span<const double> xs, int threads) const {
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (xs[i] < xs[i - 1]) throw std::invalid_argument("cdf_curve: xs must be ascending");
    std::vector<double> out(xs.size());
    const int nt = resolve_threads(threads);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nt)
#endif
    for (long long i = 0; i < static_cast<long long>(xs.size()); ++i)
        out[static_cast<std::size_t>(i)] = cdf(xs[static_cast<std::size_t>(i)]);
    (void)nt;
    return out;
}

double LossDistribution::cdf_x_derivative(double x) const {
    return blocked_sum_serial(moments_.size(), [&](std::size_t j) {
        return node_density_term(x, moments_[j], sigma_[j], grid_.weight(j));
    });
}

} // namespace gfm
