// gfmrisk: credit-portfolio loss distribution, VaR, economic capital, and
// VaR sensitivities under the Gaussian factor default model.
//
// Subcommands: cdf, var, greeks, mc-check, example-portfolio.
// Exit codes: 0 ok, 2 usage error, 3 portfolio validation error,
// 4 unsolvable quantile, 5 I/O error.

#include <algorithm>
#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gfm/errors.hpp"
#include "gfm/greeks.hpp"
#include "gfm/loss_engine.hpp"
#include "gfm/mc.hpp"
#include "gfm/portfolio.hpp"
#include "gfm/portfolio_io.hpp"
#include "gfm/quadrature.hpp"
#include "gfm/var_solver.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitSolver = 4;
constexpr int kExitIo = 5;

// 17 significant digits: enough for any double to round-trip exactly.
std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// All output files go through a temp-file + rename so readers never see a
// half-written artifact and reruns with identical flags are byte-identical.
void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw gfm::IoError("cannot open '" + tmp + "' for writing");
    out << content;
    out.flush();
    if (!out) throw gfm::IoError("write to '" + tmp + "' failed");
    out.close();
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw gfm::IoError("rename '" + tmp + "' -> '" + path + "': " + std::strerror(errno));
}

// Shared flags naming the input portfolio: exactly one of the built-in
// example or a CSV/JSON file.
struct PortfolioChoice {
    bool use_example = false;
    std::string path;

    void add_flags(CLI::App* cmd) {
        auto* ex = cmd->add_flag("--example", use_example, "use the built-in 125-name example portfolio");
        auto* pf = cmd->add_option("--portfolio", path, "portfolio file (.csv or .json)")
                       ->check(CLI::ExistingFile);
        ex->excludes(pf);
        cmd->callback([this, cmd] {
            if (!use_example && cmd->count("--portfolio") == 0)
                throw CLI::RequiredError("--example or --portfolio");
        });
    }

    gfm::Portfolio load() const {
        if (use_example) return gfm::Portfolio::example();
        return gfm::load_portfolio_file(path, gfm::format_from_path(path));
    }
};

// "lo:hi:count" -> `count` evenly spaced points including both endpoints.
std::vector<double> parse_grid(const std::string& text) {
    double lo = 0.0, hi = 0.0;
    long count = 0;
    char extra = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%ld%c", &lo, &hi, &count, &extra) != 3 ||
        count < 2 || hi <= lo)
        throw CLI::ValidationError("--grid", "expected lo:hi:count with hi > lo and count >= 2");
    std::vector<double> xs(static_cast<std::size_t>(count));
    for (long j = 0; j < count; ++j)
        xs[static_cast<std::size_t>(j)] = lo + (hi - lo) * static_cast<double>(j) /
                                                   static_cast<double>(count - 1);
    return xs;
}

int run_example_portfolio(const std::string& out_path, const std::string& format_name) {
    gfm::PortfolioFormat format = format_name.empty()
                                      ? gfm::format_from_path(out_path)
                                      : (format_name == "json" ? gfm::PortfolioFormat::json
                                                               : gfm::PortfolioFormat::csv);
    const gfm::Portfolio p = gfm::Portfolio::example();
    write_file_atomic(out_path, gfm::portfolio_to_string(p, format));
    std::printf("wrote %zu-loan example portfolio to %s\n", p.size(), out_path.c_str());
    return kExitOk;
}

int run_cdf(const PortfolioChoice& choice, int order, const std::string& grid_text,
            const std::vector<double>& at, const std::string& out_path, int threads) {
    const gfm::Portfolio p = choice.load();
    const auto dist = gfm::LossDistribution::build(
        p, gfm::QuadratureGrid::normal_measure(order, p.num_factors()), threads);

    for (double x : at)
        std::printf("cdf(%.10g) = %.10f\n", x, dist.cdf(x));

    if (!grid_text.empty()) {
        std::vector<double> xs = parse_grid(grid_text);
        std::vector<double> ys = dist.cdf_curve(xs, threads);
        std::string csv = "x,cdf\n";
        for (std::size_t j = 0; j < xs.size(); ++j)
            csv += fmt(xs[j]) + "," + fmt(ys[j]) + "\n";
        write_file_atomic(out_path, csv);
        std::printf("wrote %zu-point CDF curve to %s\n", xs.size(), out_path.c_str());
    }
    return kExitOk;
}

int run_var(const PortfolioChoice& choice, int order, double q, double tol_bp, bool newton,
            const std::string& out_path, int threads) {
    const gfm::Portfolio p = choice.load();
    const auto dist = gfm::LossDistribution::build(
        p, gfm::QuadratureGrid::normal_measure(order, p.num_factors()), threads);

    const double tol_x = tol_bp * 1e-4;
    gfm::VarResult r;
    if (newton) {
        // A few bisection halvings land a seed inside the increasing region;
        // Newton finishes from there. `evaluations` reports both phases.
        const double coarse_tol = std::max(tol_x, dist.max_loss() / 16.0);
        const gfm::VarResult seed = gfm::solve_var(dist, q, coarse_tol);
        r = gfm::solve_var_newton(dist, q, tol_x, seed.var);
        r.evaluations += seed.evaluations;
    } else {
        r = gfm::solve_var(dist, q, tol_x);
    }

    // Headline numbers in percent, rounded to the nearest basis point.
    std::printf("VaR              = %.2f%%  (q = %g)\n", 100.0 * r.var, q);
    std::printf("economic capital = %.2f%%  (VaR minus expected loss %.2f%%)\n",
                100.0 * r.economic_capital, 100.0 * p.expected_loss());
    std::printf("cdf evaluations  = %d%s\n", r.evaluations, newton ? " (bisection + newton)" : "");

    if (!out_path.empty()) {
        nlohmann::json doc{{"var", r.var},
                           {"economic_capital", r.economic_capital},
                           {"confidence", r.confidence},
                           {"evaluations", r.evaluations}};
        write_file_atomic(out_path, doc.dump(2) + "\n");
        std::printf("wrote result to %s\n", out_path.c_str());
    }
    return kExitOk;
}

int run_greeks(const PortfolioChoice& choice, int order, double q, double tol_bp,
               const std::string& out_path, int threads) {
    const gfm::Portfolio p = choice.load();
    const auto dist = gfm::LossDistribution::build(
        p, gfm::QuadratureGrid::normal_measure(order, p.num_factors()), threads);

    // Greeks are evaluated at a tightly solved VaR so the reported
    // derivatives belong to the quantile itself, not to the 1bp-wide
    // bisection bracket around it.
    gfm::VarResult r = gfm::solve_var(dist, q, tol_bp * 1e-4);
    r = gfm::solve_var_newton(dist, q, 1e-12, r.var);
    const gfm::GreeksReport g = gfm::compute_greeks(dist, r, threads);

    const int m = g.num_factors;
    std::string csv = "loan_index,d_notional,d_pd,d_recovery";
    for (int k = 1; k <= m; ++k) csv += ",d_w" + std::to_string(k);
    csv += "\n";
    for (std::size_t i = 0; i < p.size(); ++i) {
        csv += std::to_string(i) + "," + fmt(g.d_var_d_notional[i]) + "," +
               fmt(g.d_var_d_pd[i]) + "," + fmt(g.d_var_d_recovery[i]);
        for (int k = 0; k < m; ++k) csv += "," + fmt(g.loading(i, k));
        csv += "\n";
    }
    // Footer: sensitivity to the confidence level, one row below the loans.
    csv += "q," + fmt(g.d_var_d_q);
    for (int k = 0; k < m + 2; ++k) csv += ",";
    csv += "\n";

    std::printf("VaR = %.2f%%; dVaR/dq = %.6g; %zu loans x %d factors\n", 100.0 * g.var_used,
                g.d_var_d_q, p.size(), m);
    if (!out_path.empty()) {
        write_file_atomic(out_path, csv);
        std::printf("wrote greeks to %s\n", out_path.c_str());
    } else {
        std::fputs(csv.c_str(), stdout);
    }
    return kExitOk;
}

int run_mc_check(const PortfolioChoice& choice, std::uint64_t samples, std::uint64_t seed,
                 bool antithetic, const std::vector<double>& at, const std::string& curve_path,
                 int threads) {
    const gfm::Portfolio p = choice.load();
    gfm::McConfig cfg;
    cfg.samples = samples;
    cfg.rng_seed = seed;
    cfg.antithetic = antithetic;
    const gfm::McResult res = gfm::simulate(p, cfg, threads);

    std::printf("samples = %llu  seed = %llu  sample mean = %.8f  (expected loss %.8f)\n",
                static_cast<unsigned long long>(res.sample_count),
                static_cast<unsigned long long>(seed), res.sample_mean, p.expected_loss());
    for (double x : at) {
        const gfm::EcdfValue e = gfm::empirical_cdf(res, x);
        std::printf("ecdf(%.10g) = %.8f +- %.2e\n", x, e.value, e.std_error);
    }

    if (!curve_path.empty()) {
        // Step function of the sorted losses: one row per sample.
        std::string csv = "x,ecdf\n";
        const double n = static_cast<double>(res.sample_count);
        for (std::size_t s = 0; s < res.losses.size(); ++s)
            csv += fmt(res.losses[s]) + "," + fmt(static_cast<double>(s + 1) / n) + "\n";
        write_file_atomic(curve_path, csv);
        std::printf("wrote empirical CDF curve to %s\n", curve_path.c_str());
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"credit portfolio risk under the Gaussian factor default model"};
    app.require_subcommand(1);

    // --- example-portfolio ---------------------------------------------
    auto* sc_example = app.add_subcommand("example-portfolio", "write the built-in example portfolio");
    std::string ex_out;
    std::string ex_format;
    sc_example->add_option("--out", ex_out, "output file")->required();
    sc_example->add_option("--format", ex_format, "csv or json (default: from extension)")
        ->check(CLI::IsMember({"csv", "json"}));

    // --- shared engine knobs -------------------------------------------
    int order = gfm::kDefaultQuadOrder;
    double q = 0.9975;
    double tol_bp = 1.0;
    int threads = 0;

    // --- cdf -------------------------------------------------------------
    auto* sc_cdf = app.add_subcommand("cdf", "loss CDF values or a CSV curve");
    PortfolioChoice cdf_pf;
    cdf_pf.add_flags(sc_cdf);
    std::string cdf_grid, cdf_out;
    std::vector<double> cdf_at;
    sc_cdf->add_option("--order", order, "quadrature points per factor dimension")
        ->capture_default_str();
    sc_cdf->add_option("--at", cdf_at, "loss levels to print cdf(x) for");
    auto* grid_opt = sc_cdf->add_option("--grid", cdf_grid, "lo:hi:count curve grid");
    sc_cdf->add_option("--out", cdf_out, "CSV output file for --grid")->needs(grid_opt);
    grid_opt->needs(sc_cdf->get_option("--out"));
    sc_cdf->add_option("--threads", threads, "worker cap (0 = runtime default)");

    // --- var -------------------------------------------------------------
    auto* sc_var = app.add_subcommand("var", "value at risk and economic capital");
    PortfolioChoice var_pf;
    var_pf.add_flags(sc_var);
    bool use_newton = false;
    std::string var_out;
    sc_var->add_option("--order", order, "quadrature points per factor dimension")
        ->capture_default_str();
    sc_var->add_option("--q", q, "confidence level")->capture_default_str()
        ->check(CLI::Range(1e-12, 1.0 - 1e-12));
    sc_var->add_option("--tol-bp", tol_bp, "solve tolerance in basis points")
        ->capture_default_str()->check(CLI::PositiveNumber);
    sc_var->add_flag("--newton", use_newton, "refine the bisection answer with Newton steps");
    sc_var->add_option("--out", var_out, "JSON output file");
    sc_var->add_option("--threads", threads, "worker cap (0 = runtime default)");

    // --- greeks ----------------------------------------------------------
    auto* sc_greeks = app.add_subcommand("greeks", "VaR sensitivities (CSV)");
    PortfolioChoice greeks_pf;
    greeks_pf.add_flags(sc_greeks);
    std::string greeks_out;
    sc_greeks->add_option("--order", order, "quadrature points per factor dimension")
        ->capture_default_str();
    sc_greeks->add_option("--q", q, "confidence level")->capture_default_str()
        ->check(CLI::Range(1e-12, 1.0 - 1e-12));
    sc_greeks->add_option("--tol-bp", tol_bp, "VaR solve tolerance in basis points")
        ->capture_default_str()->check(CLI::PositiveNumber);
    sc_greeks->add_option("--out", greeks_out, "CSV output file (default: stdout)");
    sc_greeks->add_option("--threads", threads, "worker cap (0 = runtime default)");

    // --- mc-check ----------------------------------------------------------
    auto* sc_mc = app.add_subcommand("mc-check", "Monte Carlo empirical CDF of the simulated model");
    PortfolioChoice mc_pf;
    mc_pf.add_flags(sc_mc);
    std::uint64_t mc_samples = 1'000'000;
    std::uint64_t mc_seed = 1;
    bool mc_antithetic = false;
    std::vector<double> mc_at;
    std::string mc_curve;
    sc_mc->add_option("--samples", mc_samples, "number of Monte Carlo samples")
        ->capture_default_str()->check(CLI::PositiveNumber);
    sc_mc->add_option("--seed", mc_seed, "RNG seed")->capture_default_str();
    sc_mc->add_flag("--antithetic", mc_antithetic, "pair samples with sign-flipped draws");
    sc_mc->add_option("--at", mc_at, "loss levels to report ecdf(x) +- s.e. at");
    sc_mc->add_option("--curve-out", mc_curve, "CSV dump of the full empirical CDF");
    sc_mc->add_option("--threads", threads, "worker cap (0 = runtime default)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (sc_example->parsed()) return run_example_portfolio(ex_out, ex_format);
        if (sc_cdf->parsed()) {
            if (cdf_at.empty() && cdf_grid.empty()) {
                std::fprintf(stderr, "cdf: nothing to do; pass --at and/or --grid/--out\n");
                return kExitUsage;
            }
            return run_cdf(cdf_pf, order, cdf_grid, cdf_at, cdf_out, threads);
        }
        if (sc_var->parsed()) return run_var(var_pf, order, q, tol_bp, use_newton, var_out, threads);
        if (sc_greeks->parsed())
            return run_greeks(greeks_pf, order, q, tol_bp, greeks_out, threads);
        if (sc_mc->parsed())
            return run_mc_check(mc_pf, mc_samples, mc_seed, mc_antithetic, mc_at, mc_curve, threads);
    } catch (const CLI::ParseError& e) {
        // Flag-shaped errors surfacing after parse (e.g. a malformed --grid
        // spec) are still usage errors.
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const gfm::NoRootError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitSolver;
    } catch (const gfm::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitValidation;
    } catch (const gfm::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitSolver;
    }
    return kExitOk;
}
