#pragma once

#include <cstddef>
#include <vector>

namespace gfm {

// One loan of the portfolio. `loadings[k]` is the exposure of the loan's
// latent creditworthiness variable to common factor k; the idiosyncratic
// weight is sqrt(1 - sum_k loadings[k]^2), which validation keeps strictly
// positive.
struct Loan {
    double notional = 0.0;      // > 0, currency units
    double default_prob = 0.0;  // strictly inside (0,1)
    double recovery = 0.0;      // in [0,1)
    std::vector<double> loadings;
};

// Immutable collection of loans sharing one factor dimension. All derived
// quantities (fractions, loss given default, expected loss) are expressed
// as fractions of total portfolio notional, so they are invariant under a
// common rescaling of all notionals.
class Portfolio {
public:
    // Validates every loan and throws ValidationError naming the first
    // offending loan index. Requires at least one loan and identical
    // loading-vector lengths across loans.
    explicit Portfolio(std::vector<Loan> loans);

    std::size_t size() const noexcept { return loans_.size(); }
    int num_factors() const noexcept { return num_factors_; }
    const std::vector<Loan>& loans() const noexcept { return loans_; }
    const Loan& loan(std::size_t i) const;

    double total_notional() const noexcept { return total_notional_; }

    // N_i / sum_j N_j; sums to 1 over all loans.
    double fraction(std::size_t i) const;

    // fraction(i) * (1 - recovery_i): the fraction of total portfolio
    // notional lost if loan i defaults.
    double lgd(std::size_t i) const;

    // sum_i lgd(i): the maximal possible portfolio loss.
    double total_lgd() const noexcept { return total_lgd_; }

    // Unconditional mean loss sum_i lgd(i) * p_i.
    double expected_loss() const noexcept { return expected_loss_; }

    // The built-in 125-name single-factor benchmark portfolio: equal
    // notionals and linear ramps (1-indexed, i = 1..125)
    //   p_i = 0.015 + 0.05 (i-1)/124
    //   r_i = 0.5   - 0.1  (i-1)/124
    //   w_i = 0.5   - 0.1  (i-1)/124
    static Portfolio example();

private:
    std::vector<Loan> loans_;
    int num_factors_ = 0;
    double total_notional_ = 0.0;
    double total_lgd_ = 0.0;
    double expected_loss_ = 0.0;
};

} // namespace gfm
