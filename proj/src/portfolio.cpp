#include "gfm/portfolio.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "gfm/errors.hpp"

namespace gfm {

namespace {
// Strictly below 1 with a margin: 1 - sum w^2 appears under a square root
// in the conditional default probability's denominator.
constexpr double kMinIdiosyncraticVar = 1e-12;

[[noreturn]] void reject(std::size_t loan, const std::string& what) {
    throw ValidationError("loan " + std::to_string(loan) + ": " + what);
}
} // namespace

Portfolio::Portfolio(std::vector<Loan> loans) : loans_(std::move(loans)) {
    if (loans_.empty()) throw ValidationError("portfolio must contain at least one loan");
    num_factors_ = static_cast<int>(loans_[0].loadings.size());
    for (std::size_t i = 0; i < loans_.size(); ++i) {
        const Loan& l = loans_[i];
        if (!(l.notional > 0.0) || !std::isfinite(l.notional))
            reject(i, "notional must be a positive finite number, got " + std::to_string(l.notional));
        if (!(l.default_prob > 0.0 && l.default_prob < 1.0))
            reject(i, "default probability must lie strictly inside (0,1), got " +
                          std::to_string(l.default_prob));
        if (!(l.recovery >= 0.0 && l.recovery < 1.0))
            reject(i, "recovery must lie in [0,1), got " + std::to_string(l.recovery));
        if (static_cast<int>(l.loadings.size()) != num_factors_)
            reject(i, "expected " + std::to_string(num_factors_) + " factor loadings, got " +
                          std::to_string(l.loadings.size()));
        double w2 = 0.0;
        for (double w : l.loadings) {
            if (!std::isfinite(w)) reject(i, "factor loading is not finite");
            w2 += w * w;
        }
        if (!(1.0 - w2 >= kMinIdiosyncraticVar))
            reject(i, "squared factor loadings sum to " + std::to_string(w2) +
                          "; must stay strictly below 1");
        total_notional_ += l.notional;
    }
    for (std::size_t i = 0; i < loans_.size(); ++i) {
        const double l = lgd(i);
        total_lgd_ += l;
        expected_loss_ += l * loans_[i].default_prob;
    }
}

const Loan& Portfolio::loan(std::size_t i) const {
    if (i >= loans_.size()) throw std::out_of_range("loan index out of range");
    return loans_[i];
}

double Portfolio::fraction(std::size_t i) const {
    if (i >= loans_.size()) throw std::out_of_range("loan index out of range");
    return loans_[i].notional / total_notional_;
}

double Portfolio::lgd(std::size_t i) const {
    if (i >= loans_.size()) throw std::out_of_range("loan index out of range");
    return fraction(i) * (1.0 - loans_[i].recovery);
}

Portfolio Portfolio::example() {
    constexpr int n = 125;
    std::vector<Loan> loans;
    loans.reserve(n);
    for (int i = 1; i <= n; ++i) {
        const double ramp = static_cast<double>(i - 1) / (n - 1);
        Loan l;
        l.notional = 1.0; // equal notionals give f_i = 1/N
        l.default_prob = 0.015 + 0.05 * ramp;
        l.recovery = 0.5 - 0.1 * ramp;
        l.loadings = {0.5 - 0.1 * ramp};
        loans.push_back(std::move(l));
    }
    return Portfolio(std::move(loans));
}

} // namespace gfm
