#include "gfm/mc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gfm/blocked_sum.hpp"
#include "gfm/normal.hpp"
#include "gfm/philox.hpp"

namespace gfm {

namespace {

struct SimTerms {
    std::size_t n = 0;
    int m = 0;
    std::vector<double> lgd;
    std::vector<double> threshold; // Phi^-1(p_i)
    std::vector<double> s;         // sqrt(1 - |w_i|^2)
    std::vector<double> w;         // n x m row-major
};

SimTerms compile_terms(const Portfolio& p) {
    SimTerms t;
    t.n = p.size();
    t.m = p.num_factors();
    t.lgd.resize(t.n);
    t.threshold.resize(t.n);
    t.s.resize(t.n);
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
        t.s[i] = std::sqrt(1.0 - w2);
    }
    return t;
}

// Loss of sample `s`, fully determined by (seed, s). Antithetic runs pair
// sample 2j+1 with the sign-flipped draws of sample 2j.
double sample_loss(const SimTerms& t, const McConfig& cfg, std::uint64_t s,
                   std::vector<double>& factors) {
    const std::uint64_t base = cfg.antithetic ? (s >> 1) : s;
    const double sign = (cfg.antithetic && (s & 1u)) ? -1.0 : 1.0;
    for (int k = 0; k < t.m; ++k)
        factors[static_cast<std::size_t>(k)] =
            sign * normal_draw(cfg.rng_seed, base, static_cast<std::uint32_t>(k));
    double loss = 0.0;
    for (std::size_t i = 0; i < t.n; ++i) {
        const double* wi = t.w.data() + i * static_cast<std::size_t>(t.m);
        double latent = 0.0;
        for (int k = 0; k < t.m; ++k) latent += wi[k] * factors[static_cast<std::size_t>(k)];
        const double z =
            sign * normal_draw(cfg.rng_seed, base,
                               static_cast<std::uint32_t>(t.m) + static_cast<std::uint32_t>(i));
        latent += t.s[i] * z;
        if (latent < t.threshold[i]) loss += t.lgd[i];
    }
    return loss;
}

McResult finish(std::vector<double> losses) {
    std::sort(losses.begin(), losses.end());
    McResult result;
    result.sample_count = losses.size();
    const double total =
        blocked_sum_serial(losses.size(), [&](std::size_t j) { return losses[j]; });
    result.sample_mean = total / static_cast<double>(losses.size());
    result.losses = std::move(losses);
    return result;
}

} // namespace

McResult simulate(const Portfolio& portfolio, const McConfig& cfg, int threads) {
    if (cfg.samples < 1) throw std::invalid_argument("simulate: need at least one sample");
    const SimTerms t = compile_terms(portfolio);
    std::vector<double> losses(cfg.samples);
    const int nt = resolve_threads(threads);
#ifdef _OPENMP
#pragma omp parallel num_threads(nt)
    {
        std::vector<double> factors(static_cast<std::size_t>(t.m));
#pragma omp for schedule(static)
        for (long long s = 0; s < static_cast<long long>(cfg.samples); ++s)
            losses[static_cast<std::size_t>(s)] =
                sample_loss(t, cfg, static_cast<std::uint64_t>(s), factors);
    }
#else
    std::vector<double> factors(static_cast<std::size_t>(t.m));
    for (std::uint64_t s = 0; s < cfg.samples; ++s) losses[s] = sample_loss(t, cfg, s, factors);
#endif
    (void)nt;
    return finish(std::move(losses));
}

McResult simulate_serial(const Portfolio& portfolio, const McConfig& cfg) {
    if (cfg.samples < 1) throw std::invalid_argument("simulate: need at least one sample");
    const SimTerms t = compile_terms(portfolio);
    std::vector<double> losses(cfg.samples);
    std::vector<double> factors(static_cast<std::size_t>(t.m));
    for (std::uint64_t s = 0; s < cfg.samples; ++s) losses[s] = sample_loss(t, cfg, s, factors);
    return finish(std::move(losses));
}

EcdfValue empirical_cdf(const McResult& result, double x) {
    if (result.losses.empty()) throw std::invalid_argument("empirical_cdf: no samples");
    const auto it = std::upper_bound(result.losses.begin(), result.losses.end(), x);
    const double n = static_cast<double>(result.losses.size());
    const double v = static_cast<double>(it - result.losses.begin()) / n;
    return {v, std::sqrt(v * (1.0 - v) / n)};
}

} // namespace gfm
