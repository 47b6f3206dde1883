#pragma once

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gfm {

// All reductions in the library go through the same fixed blocking so that
// serial and OpenMP paths produce bit-identical sums for any thread count:
// terms are accumulated in index order within blocks of kSumBlock, and the
// per-block partials are combined by in-order pairwise summation.
inline constexpr std::size_t kSumBlock = 4096;

inline int resolve_threads(int requested) {
#ifdef _OPENMP
    return requested > 0 ? requested : omp_get_max_threads();
#else
    (void)requested;
    return 1;
#endif
}

// In-place pairwise combine of `rows` blocks of `width` doubles each; the
// result lands in the first block.
inline void pairwise_combine(std::vector<double>& partials, std::size_t rows, std::size_t width) {
    for (std::size_t stride = 1; stride < rows; stride *= 2) {
        for (std::size_t b = 0; b + stride < rows; b += 2 * stride) {
            double* dst = partials.data() + b * width;
            const double* src = partials.data() + (b + stride) * width;
            for (std::size_t c = 0; c < width; ++c) dst[c] += src[c];
        }
    }
}

// Sum of term(j) for j in [0, n): serial reference.
template <class Term>
double blocked_sum_serial(std::size_t n, Term&& term) {
    if (n == 0) return 0.0;
    const std::size_t nblocks = (n + kSumBlock - 1) / kSumBlock;
    std::vector<double> partials(nblocks, 0.0);
    for (std::size_t b = 0; b < nblocks; ++b) {
        const std::size_t end = std::min(n, (b + 1) * kSumBlock);
        double acc = 0.0;
        for (std::size_t j = b * kSumBlock; j < end; ++j) acc += term(j);
        partials[b] = acc;
    }
    pairwise_combine(partials, nblocks, 1);
    return partials[0];
}

// Same blocking, blocks filled by OpenMP workers. Bit-identical to the
// serial version.
template <class Term>
double blocked_sum(std::size_t n, Term&& term, int threads = 0) {
    if (n == 0) return 0.0;
    const std::size_t nblocks = (n + kSumBlock - 1) / kSumBlock;
    if (nblocks == 1) return blocked_sum_serial(n, term);
    std::vector<double> partials(nblocks, 0.0);
    const int nt = resolve_threads(threads);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nt)
#endif
    for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kSumBlock;
        const std::size_t end = std::min(n, lo + kSumBlock);
        double acc = 0.0;
        for (std::size_t j = lo; j < end; ++j) acc += term(j);
        partials[static_cast<std::size_t>(b)] = acc;
    }
    (void)nt;
    pairwise_combine(partials, nblocks, 1);
    return partials[0];
}

} // namespace gfm
