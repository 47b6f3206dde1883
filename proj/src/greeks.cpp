#include "gfm/greeks.hpp"

#include <cmath>
#include <stdexcept>

#include "gfm/blocked_sum.hpp"
#include "gfm/normal.hpp"

namespace gfm {

namespace {

// Per-loan constants reused at every quadrature node.
struct GreekTerms {
    std::size_t n = 0;
    int m = 0;
    double inv_total_notional = 0.0;
    std::vector<double> lgd;
    std::vector<double> fraction;
    std::vector<double> one_minus_r;
    std::vector<double> threshold;   // Phi^-1(p_i)
    std::vector<double> inv_s;       // 1/sqrt(1 - |w_i|^2)
    std::vector<double> inv_pdf_thr; // 1/pdf(Phi^-1(p_i)), from d Phi^-1/dp
    std::vector<double> w;           // n x m row-major
};

GreekTerms compile_terms(const Portfolio& p) {
    GreekTerms t;
    t.n = p.size();
    t.m = p.num_factors();
    t.inv_total_notional = 1.0 / p.total_notional();
    t.lgd.resize(t.n);
    t.fraction.resize(t.n);
    t.one_minus_r.resize(t.n);
    t.threshold.resize(t.n);
    t.inv_s.resize(t.n);
    t.inv_pdf_thr.resize(t.n);
    t.w.resize(t.n * static_cast<std::size_t>(t.m));
    for (std::size_t i = 0; i < t.n; ++i) {
        const Loan& l = p.loan(i);
        t.lgd[i] = p.lgd(i);
        t.fraction[i] = p.fraction(i);
        t.one_minus_r[i] = 1.0 - l.recovery;
        t.threshold[i] = std_normal_inv_cdf(l.default_prob);
        t.inv_pdf_thr[i] = 1.0 / std_normal_pdf(t.threshold[i]);
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

// Sensitivity of one node's normal-CDF value Phi((x-E)/sigma) to the node
// moments. Zero-variance nodes are flat in every parameter (step function
// with x != mean), so callers skip them.
struct NodeSensitivity {
    double d_mean = 0.0;     // dPhi/dE
    double d_variance = 0.0; // dPhi/dV
};

inline NodeSensitivity node_sensitivity(double x, const ConditionalMoments& mom, double sigma) {
    const double z = (x - mom.mean) / sigma;
    const double pdfz = std_normal_pdf(z);
    return {-pdfz / sigma, -pdfz * z / (2.0 * mom.variance)};
}

// Numerator layout: [d_notional (n) | d_pd (n) | d_recovery (n) | d_loading (n*m)].
std::size_t numerator_count(const GreekTerms& t) {
    return t.n * static_cast<std::size_t>(3 + t.m);
}

// Adds node j's weighted contribution to every parameter numerator.
void accumulate_node(const GreekTerms& t, const QuadratureGrid& grid,
                     const ConditionalMoments& mom, double sigma, double x, std::size_t j,
                     double* acc) {
    if (!(sigma > 0.0)) return;
    const NodeSensitivity s = node_sensitivity(x, mom, sigma);
    const double weight = grid.weight(j);
    const double* factors = grid.node(j).data();
    double* acc_notional = acc;
    double* acc_pd = acc + t.n;
    double* acc_recovery = acc + 2 * t.n;
    double* acc_loading = acc + 3 * t.n;
    for (std::size_t i = 0; i < t.n; ++i) {
        const double* wi = t.w.data() + i * static_cast<std::size_t>(t.m);
        double dot = 0.0;
        for (int k = 0; k < t.m; ++k) dot += wi[k] * factors[k];
        const double a = (t.threshold[i] - dot) * t.inv_s[i];
        const double pc = std_normal_cdf(a);
        const double pdfa = std_normal_pdf(a);
        const double lgd = t.lgd[i];

        // dPhi through (E,V) for a unit bump of this loan's conditional
        // default probability.
        const double through_pc = s.d_mean * lgd + s.d_variance * lgd * lgd * (1.0 - 2.0 * pc);

        acc_pd[i] += weight * through_pc * (pdfa * t.inv_s[i] * t.inv_pdf_thr[i]);

        for (int k = 0; k < t.m; ++k) {
            const double da = (-factors[k] + a * wi[k] * t.inv_s[i]) * t.inv_s[i];
            acc_loading[i * static_cast<std::size_t>(t.m) + static_cast<std::size_t>(k)] +=
                weight * through_pc * pdfa * da;
        }

        acc_recovery[i] += weight * (s.d_mean * (-t.fraction[i] * pc) +
                                     s.d_variance * (-2.0 * lgd * t.fraction[i] * pc * (1.0 - pc)));

        // Notionals act through every fraction f_j = N_j / sum N; the sums
        // over j collapse against the node mean and variance.
        acc_notional[i] +=
            weight * t.inv_total_notional *
            (s.d_mean * (t.one_minus_r[i] * pc - mom.mean) +
             s.d_variance * 2.0 * (lgd * t.one_minus_r[i] * pc * (1.0 - pc) - mom.variance));
    }
}

std::vector<double> accumulate_numerators(const LossDistribution& dist, const GreekTerms& t,
                                          double x, bool parallel, int threads) {
    const std::size_t n_nodes = dist.grid().size();
    const std::size_t width = numerator_count(t);
    const std::size_t nblocks = (n_nodes + kSumBlock - 1) / kSumBlock;
    std::vector<double> partials(nblocks * width, 0.0);
    const auto& moments = dist.node_moments();

    const auto fill_block = [&](std::size_t b) {
        double* acc = partials.data() + b * width;
        const std::size_t end = std::min(n_nodes, (b + 1) * kSumBlock);
        for (std::size_t j = b * kSumBlock; j < end; ++j)
            accumulate_node(t, dist.grid(), moments[j], std::sqrt(moments[j].variance), x, j, acc);
    };

    if (parallel) {
        const int nt = resolve_threads(threads);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nt)
#endif
        for (long long b = 0; b < static_cast<long long>(nblocks); ++b)
            fill_block(static_cast<std::size_t>(b));
        (void)nt;
    } else {
        for (std::size_t b = 0; b < nblocks; ++b) fill_block(b);
    }
    pairwise_combine(partials, nblocks, width);
    partials.resize(width);
    return partials;
}

GreeksReport assemble(const LossDistribution& dist, const VarResult& var_result, bool parallel,
                      int threads) {
    const GreekTerms t = compile_terms(dist.portfolio());
    const double x = var_result.var;
    const double denom = dist.cdf_x_derivative(x);
    if (!(denom > 1e-300))
        throw std::runtime_error("loss CDF is numerically flat at VaR; Greeks are undefined");

    const std::vector<double> num = accumulate_numerators(dist, t, x, parallel, threads);

    GreeksReport report;
    report.num_factors = t.m;
    report.var_used = x;
    report.denominator = denom;
    report.d_var_d_q = 1.0 / denom;
    report.d_var_d_notional.resize(t.n);
    report.d_var_d_pd.resize(t.n);
    report.d_var_d_recovery.resize(t.n);
    report.d_var_d_loading.resize(t.n * static_cast<std::size_t>(t.m));
    for (std::size_t i = 0; i < t.n; ++i) {
        report.d_var_d_notional[i] = -num[i] / denom;
        report.d_var_d_pd[i] = -num[t.n + i] / denom;
        report.d_var_d_recovery[i] = -num[2 * t.n + i] / denom;
    }
    for (std::size_t c = 0; c < t.n * static_cast<std::size_t>(t.m); ++c)
        report.d_var_d_loading[c] = -num[3 * t.n + c] / denom;
    return report;
}

} // namespace

double cdf_param_derivative(const LossDistribution& dist, double x, const ParamId& param) {
    const GreekTerms t = compile_terms(dist.portfolio());
    const std::size_t i = param.loan;
    if (i >= t.n) throw std::out_of_range("cdf_param_derivative: loan index out of range");
    if (param.kind == ParamId::Kind::loading && (param.factor < 0 || param.factor >= t.m))
        throw std::out_of_range("cdf_param_derivative: factor index out of range");

    const auto& moments = dist.node_moments();
    const auto& grid = dist.grid();
    return blocked_sum_serial(grid.size(), [&](std::size_t j) {
        const ConditionalMoments& mom = moments[j];
        const double sigma = std::sqrt(mom.variance);
        if (!(sigma > 0.0)) return 0.0;
        const NodeSensitivity s = node_sensitivity(x, mom, sigma);
        const double* factors = grid.node(j).data();
        const double* wi = t.w.data() + i * static_cast<std::size_t>(t.m);
        double dot = 0.0;
        for (int k = 0; k < t.m; ++k) dot += wi[k] * factors[k];
        const double a = (t.threshold[i] - dot) * t.inv_s[i];
        const double pc = std_normal_cdf(a);
        const double pdfa = std_normal_pdf(a);
        const double lgd = t.lgd[i];
        const double through_pc = s.d_mean * lgd + s.d_variance * lgd * lgd * (1.0 - 2.0 * pc);
        switch (param.kind) {
            case ParamId::Kind::default_prob:
                return grid.weight(j) * through_pc * (pdfa * t.inv_s[i] * t.inv_pdf_thr[i]);
            case ParamId::Kind::loading: {
                const double da =
                    (-factors[param.factor] + a * wi[param.factor] * t.inv_s[i]) * t.inv_s[i];
                return grid.weight(j) * through_pc * pdfa * da;
            }
            case ParamId::Kind::recovery:
                return grid.weight(j) *
                       (s.d_mean * (-t.fraction[i] * pc) +
                        s.d_variance * (-2.0 * lgd * t.fraction[i] * pc * (1.0 - pc)));
            case ParamId::Kind::notional:
                return grid.weight(j) * t.inv_total_notional *
                       (s.d_mean * (t.one_minus_r[i] * pc - mom.mean) +
                        s.d_variance * 2.0 *
                            (lgd * t.one_minus_r[i] * pc * (1.0 - pc) - mom.variance));
        }
        return 0.0;
    });
}

GreeksReport compute_greeks(const LossDistribution& dist, const VarResult& var_result,
                            int threads) {
    return assemble(dist, var_result, /*parallel=*/true, threads);
}

GreeksReport compute_greeks_serial(const LossDistribution& dist, const VarResult& var_result) {
    return assemble(dist, var_result, /*parallel=*/false, 1);
}

} // namespace gfm
