// Microbenchmarks pitting the OpenMP kernels against their serial reference
// implementations: node-moment construction, CDF curve evaluation, Greeks
// accumulation, and Monte Carlo simulation. The serial variants are the
// bit-identical baselines the unit tests compare against; this target makes
// the cost of that guarantee visible.

#include <benchmark/benchmark.h>

#include <vector>

#include "gfm/greeks.hpp"
#include "gfm/loss_engine.hpp"
#include "gfm/mc.hpp"
#include "gfm/portfolio.hpp"
#include "gfm/quadrature.hpp"
#include "gfm/var_solver.hpp"

namespace {

const gfm::Portfolio& example() {
    static const gfm::Portfolio p = gfm::Portfolio::example();
    return p;
}

// 25 heterogeneous loans on two factors: a 64x64 tensor grid stresses the
// node loop harder than the single-factor example does.
const gfm::Portfolio& two_factor() {
    static const gfm::Portfolio p = [] {
        std::vector<gfm::Loan> loans;
        for (int i = 1; i <= 25; ++i) {
            const double t = (i - 1) / 24.0;
            gfm::Loan l;
            l.notional = 0.7 + 0.2 * i;
            l.default_prob = 0.005 + 0.08 * t;
            l.recovery = 0.1 + 0.5 * t;
            l.loadings = {0.45 - 0.3 * t, -0.2 + 0.5 * t};
            loans.push_back(l);
        }
        return gfm::Portfolio(loans);
    }();
    return p;
}

gfm::QuadratureGrid grid_for(const gfm::Portfolio& p, int order) {
    return gfm::QuadratureGrid::normal_measure(order, p.num_factors());
}

const gfm::LossDistribution& example_dist() {
    static const auto d = gfm::LossDistribution::build(
        example(), grid_for(example(), gfm::kDefaultQuadOrder));
    return d;
}

const gfm::VarResult& example_var() {
    static const gfm::VarResult vr =
        gfm::solve_var_newton(example_dist(), 0.9975, 1e-12,
                              gfm::solve_var(example_dist(), 0.9975, 1e-4).var);
    return vr;
}

std::vector<double> curve_points() {
    std::vector<double> xs(400);
    for (std::size_t j = 0; j < xs.size(); ++j)
        xs[j] = 0.55 * static_cast<double>(j) / static_cast<double>(xs.size() - 1);
    return xs;
}

} // namespace

// --- node-moment construction ------------------------------------------------

static void BM_NodeMomentsSerial(benchmark::State& state) {
    const auto grid = grid_for(two_factor(), 64);
    for (auto _ : state)
        benchmark::DoNotOptimize(gfm::LossDistribution::build_serial(two_factor(), grid));
}
BENCHMARK(BM_NodeMomentsSerial)->Unit(benchmark::kMillisecond);

static void BM_NodeMomentsParallel(benchmark::State& state) {
    const auto grid = grid_for(two_factor(), 64);
    const int threads = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(gfm::LossDistribution::build(two_factor(), grid, threads));
}
BENCHMARK(BM_NodeMomentsParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

// --- CDF curve ----------------------------------------------------------------

static void BM_CdfCurve(benchmark::State& state) {
    const auto xs = curve_points();
    const int threads = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(example_dist().cdf_curve(xs, threads));
}
BENCHMARK(BM_CdfCurve)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMicrosecond);

// --- Greeks accumulation -------------------------------------------------------

static void BM_GreeksSerial(benchmark::State& state) {
    for (auto _ : state)
        benchmark::DoNotOptimize(gfm::compute_greeks_serial(example_dist(), example_var()));
}
BENCHMARK(BM_GreeksSerial)->Unit(benchmark::kMicrosecond);

static void BM_GreeksParallel(benchmark::State& state) {
    const int threads = static_cast<int>(state.range(0));
    for (auto _ : state)
        benchmark::DoNotOptimize(gfm::compute_greeks(example_dist(), example_var(), threads));
}
BENCHMARK(BM_GreeksParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMicrosecond);

// --- Monte Carlo ----------------------------------------------------------------

static void BM_SimulateSerial(benchmark::State& state) {
    gfm::McConfig cfg;
    cfg.samples = 20'000;
    for (auto _ : state) benchmark::DoNotOptimize(gfm::simulate_serial(example(), cfg));
}
BENCHMARK(BM_SimulateSerial)->Unit(benchmark::kMillisecond);

static void BM_SimulateParallel(benchmark::State& state) {
    gfm::McConfig cfg;
    cfg.samples = 20'000;
    const int threads = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(gfm::simulate(example(), cfg, threads));
}
BENCHMARK(BM_SimulateParallel)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
