#pragma once

#include <cstdint>
#include <vector>

#include "gfm/portfolio.hpp"

namespace gfm {

struct McConfig {
    std::uint64_t samples = 1'000'000;
    std::uint64_t rng_seed = 1;
    bool antithetic = false; // pair each sample with its sign-flipped draws
};

struct McResult {
    std::vector<double> losses; // sorted ascending, one per sample
    double sample_mean = 0.0;
    std::uint64_t sample_count = 0;
};

// Direct simulation of the factor model: per sample draw the m common
// factors and N idiosyncratic normals, default loan i when
//   w_i . phi + sqrt(1 - |w_i|^2) z_i < Phi^-1(p_i),
// and record the loss sum of defaulted lgd_i. Sample s depends only on
// (seed, s) through the counter-based generator, so results are bit-exact
// across runs and worker counts.
McResult simulate(const Portfolio& portfolio, const McConfig& cfg, int threads = 0);

// Single-threaded reference kept for testing/benchmarks; bit-identical to
// simulate().
McResult simulate_serial(const Portfolio& portfolio, const McConfig& cfg);

struct EcdfValue {
    double value = 0.0;     // fraction of losses <= x
    double std_error = 0.0; // binomial s.e. sqrt(v(1-v)/n)
};

// Empirical CDF at x by binary search over the sorted losses. Throws
// std::invalid_argument on an empty result.
EcdfValue empirical_cdf(const McResult& result, double x);

} // namespace gfm
