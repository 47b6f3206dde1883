#include "gfm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gfm {

namespace {
constexpr double kSqrtPi = 1.7724538509055160272981674833411; // Gamma(1/2)
constexpr std::size_t kMaxGridSize = 10'000'000;
} // namespace

namespace {
// Orthonormal Hermite polynomials p_{n-1}(x), p_n(x) by the three-term
// recurrence p_{k+1} = x sqrt(2/(k+1)) p_k - sqrt(k/(k+1)) p_{k-1} from
// p_0 = pi^(-1/4). Forward recurrence tracks the dominant solution, so the
// values keep full relative accuracy even where they span hundreds of
// decades (the extreme nodes of large rules).
std::pair<double, double> ortho_hermite_pair(double x, int n) {
    double prev = 0.0;
    double cur = 0.7511255444649425; // pi^(-1/4)
    for (int k = 0; k < n; ++k) {
        const double next = x * std::sqrt(2.0 / (k + 1)) * cur - std::sqrt(k / (k + 1.0)) * prev;
        prev = cur;
        cur = next;
    }
    return {prev, cur}; // { p_{n-1}(x), p_n(x) }
}
} // namespace

std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n) {
    if (n < 1 || n > 320)
        throw std::invalid_argument("gauss_hermite: order must lie in [1,320], got " +
                                    std::to_string(n));
    if (n == 1) return {{0.0}, {kSqrtPi}};

    // Nodes: eigenvalues of the symmetric tridiagonal Jacobi matrix, then two
    // Newton polishes against the orthonormal recurrence (p_n' = sqrt(2n)
    // p_{n-1} at the roots). Weights come from the Christoffel identity
    // w_j = 1/(n p_{n-1}(x_j)^2), which -- unlike the squared first
    // eigenvector component -- stays relatively accurate for the extreme
    // weights (~1e-265 at n=320), so high normal moments integrate exactly.
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double off = std::sqrt(0.5 * k);
        jacobi(k, k - 1) = off;
        jacobi(k - 1, k) = off;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("gauss_hermite: eigen-decomposition failed");

    std::vector<double> nodes(n), weights(n);
    const double dn = std::sqrt(2.0 * n);
    for (int j = 0; j < n; ++j) {
        double x = solver.eigenvalues()(j);
        for (int pass = 0; pass < 2; ++pass) {
            const auto [pm1, pn] = ortho_hermite_pair(x, n);
            x -= pn / (dn * pm1);
        }
        const auto [pm1, pn] = ortho_hermite_pair(x, n);
        (void)pn;
        nodes[j] = x;
        weights[j] = 1.0 / (n * pm1 * pm1);
    }
    // Eigenvalues come out sorted; enforce the exact +/- symmetry of the
    // Hermite roots that the eigensolver only delivers to rounding error.
    for (int j = 0; j < n / 2; ++j) {
        const int mirror = n - 1 - j;
        const double x = 0.5 * (nodes[mirror] - nodes[j]);
        nodes[j] = -x;
        nodes[mirror] = x;
        const double w = 0.5 * (weights[j] + weights[mirror]);
        weights[j] = w;
        weights[mirror] = w;
    }
    if (n % 2 == 1) nodes[n / 2] = 0.0;
    return {std::move(nodes), std::move(weights)};
}

QuadratureGrid QuadratureGrid::normal_measure(int order, int dim) {
    if (dim < 1) throw std::invalid_argument("normal_measure: dim must be >= 1");
    auto [x, w] = gauss_hermite(order); // validates order

    std::size_t size = 1;
    for (int d = 0; d < dim; ++d) {
        size *= static_cast<std::size_t>(order);
        if (size > kMaxGridSize)
            throw std::invalid_argument("normal_measure: grid size " + std::to_string(order) +
                                        "^" + std::to_string(dim) + " exceeds " +
                                        std::to_string(kMaxGridSize));
    }

    // Change of variables to the standard normal measure per dimension.
    std::vector<double> phi(x.size()), pw(w.size());
    const double sqrt2 = std::sqrt(2.0);
    for (std::size_t j = 0; j < x.size(); ++j) {
        phi[j] = sqrt2 * x[j];
        pw[j] = w[j] / kSqrtPi;
    }

    QuadratureGrid grid;
    grid.order_ = order;
    grid.dim_ = dim;
    grid.nodes_.resize(size * static_cast<std::size_t>(dim));
    grid.weights_.assign(size, 1.0);
    for (std::size_t j = 0; j < size; ++j) {
        std::size_t rest = j;
        for (int d = dim - 1; d >= 0; --d) {
            const std::size_t idx = rest % static_cast<std::size_t>(order);
            rest /= static_cast<std::size_t>(order);
            grid.nodes_[j * static_cast<std::size_t>(dim) + static_cast<std::size_t>(d)] = phi[idx];
            grid.weights_[j] *= pw[idx];
        }
    }
    return grid;
}

} // namespace gfm
