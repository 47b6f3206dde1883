#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gfm/errors.hpp"
#include "gfm/portfolio.hpp"
#include "gfm/portfolio_io.hpp"

using gfm::Loan;
using gfm::Portfolio;
using gfm::PortfolioFormat;

namespace {

Loan make_loan(double notional, double pd, double recovery, std::vector<double> loadings) {
    Loan l;
    l.notional = notional;
    l.default_prob = pd;
    l.recovery = recovery;
    l.loadings = std::move(loadings);
    return l;
}

// Expect a ValidationError whose message mentions `needle` (loan index, field name, ...).
template <typename Fn>
void check_rejects(Fn&& fn, const std::string& needle) {
    try {
        fn();
        FAIL_CHECK("expected ValidationError mentioning '" << needle << "', nothing was thrown");
    } catch (const gfm::ValidationError& e) {
        INFO("message: " << e.what());
        CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
}

} // namespace

TEST_CASE("construction rejects each invariant violation, naming the loan") {
    const Loan good = make_loan(1.0, 0.02, 0.4, {0.3});

    check_rejects([] { Portfolio({}); }, "at least one loan");

    check_rejects([&] { Portfolio({make_loan(0.0, 0.02, 0.4, {0.3})}); }, "notional");
    check_rejects([&] { Portfolio({make_loan(-1.0, 0.02, 0.4, {0.3})}); }, "notional");
    check_rejects([&] { Portfolio({make_loan(std::nan(""), 0.02, 0.4, {0.3})}); }, "notional");
    check_rejects([&] { Portfolio({make_loan(1.0 / 0.0, 0.02, 0.4, {0.3})}); }, "notional");

    check_rejects([&] { Portfolio({make_loan(1.0, 0.0, 0.4, {0.3})}); }, "default probability");
    check_rejects([&] { Portfolio({make_loan(1.0, 1.0, 0.4, {0.3})}); }, "default probability");
    check_rejects([&] { Portfolio({make_loan(1.0, 1.5, 0.4, {0.3})}); }, "default probability");
    check_rejects([&] { Portfolio({make_loan(1.0, std::nan(""), 0.4, {0.3})}); },
                  "default probability");

    check_rejects([&] { Portfolio({make_loan(1.0, 0.02, -0.1, {0.3})}); }, "recovery");
    check_rejects([&] { Portfolio({make_loan(1.0, 0.02, 1.0, {0.3})}); }, "recovery");
    // recovery = 0 is allowed.
    CHECK_NOTHROW(Portfolio({make_loan(1.0, 0.02, 0.0, {0.3})}));

    // Loading vectors must all have the first loan's length.
    check_rejects([&] { Portfolio({good, make_loan(1.0, 0.02, 0.4, {0.3, 0.1})}); },
                  "loan 1");
    check_rejects([&] { Portfolio({make_loan(1.0, 0.02, 0.4, {0.6, 0.2}), good}); },
                  "expected 2 factor loadings");

    // Sum of squared loadings must stay strictly below 1: 0.8^2 + 0.7^2 = 1.13.
    check_rejects([&] { Portfolio({make_loan(1.0, 0.02, 0.4, {0.8, 0.7})}); },
                  "squared factor loadings");
    check_rejects([&] { Portfolio({make_loan(1.0, 0.02, 0.4, {1.0})}); },
                  "squared factor loadings");
    check_rejects([&] { Portfolio({make_loan(1.0, 0.02, 0.4, {std::nan("")})}); }, "finite");
    // ... but values close to the boundary from below are fine.
    CHECK_NOTHROW(Portfolio({make_loan(1.0, 0.02, 0.4, {0.999})}));

    // The error message carries the 0-based index of the offending loan.
    check_rejects([&] { Portfolio({good, good, make_loan(1.0, 2.0, 0.4, {0.3})}); }, "loan 2");
}

TEST_CASE("fraction and lgd on hand-checkable portfolios") {
    SUBCASE("single loan carries the whole notional") {
        Portfolio p({make_loan(42.0, 0.02, 0.5, {0.3})});
        CHECK(p.size() == 1);
        CHECK(p.num_factors() == 1);
        CHECK(p.fraction(0) == 1.0);
        CHECK(p.lgd(0) == 0.5);
    }
    SUBCASE("notionals {1,3}: fractions {0.25, 0.75}") {
        Portfolio p({make_loan(1.0, 0.02, 0.0, {0.3}), make_loan(3.0, 0.02, 0.0, {0.3})});
        CHECK(p.fraction(0) == 0.25);
        CHECK(p.fraction(1) == 0.75);
    }
    SUBCASE("equal notionals, recoveries {0, 0.5}: lgd {0.5, 0.25}") {
        Portfolio p({make_loan(1.0, 0.02, 0.0, {0.3}), make_loan(1.0, 0.02, 0.5, {0.3})});
        CHECK(p.lgd(0) == 0.5);
        CHECK(p.lgd(1) == 0.25);
    }
    SUBCASE("indices out of range throw") {
        Portfolio p({make_loan(1.0, 0.02, 0.0, {0.3})});
        CHECK_THROWS_AS(p.loan(1), std::out_of_range);
        CHECK_THROWS_AS(p.fraction(1), std::out_of_range);
        CHECK_THROWS_AS(p.lgd(2), std::out_of_range);
    }
}

TEST_CASE("the built-in example portfolio matches its defining ramps") {
    const Portfolio p = Portfolio::example();
    REQUIRE(p.size() == 125);
    REQUIRE(p.num_factors() == 1);

    // Endpoints of the linear ramps (1-indexed loans 1 and 125).
    CHECK(p.loan(0).default_prob == 0.015);
    CHECK(p.loan(0).recovery == 0.5);
    CHECK(p.loan(0).loadings[0] == 0.5);
    CHECK(p.loan(124).default_prob == doctest::Approx(0.065).epsilon(1e-15));
    CHECK(p.loan(124).recovery == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(p.loan(124).loadings[0] == doctest::Approx(0.4).epsilon(1e-15));

    // Midpoint (1-indexed loan 63): ramp parameter exactly 1/2.
    CHECK(p.loan(62).default_prob == doctest::Approx(0.04).epsilon(1e-15));
    CHECK(p.loan(62).recovery == doctest::Approx(0.45).epsilon(1e-15));
    CHECK(p.loan(62).loadings[0] == doctest::Approx(0.45).epsilon(1e-15));

    // Equal notionals: every fraction is 1/125 and every lgd is (1-r_i)/125.
    for (std::size_t i = 0; i < p.size(); ++i) {
        CHECK(p.fraction(i) == doctest::Approx(0.008).epsilon(1e-15));
    }
    CHECK(p.lgd(0) == doctest::Approx(0.004).epsilon(1e-15));

    // Recoveries ramp 0.5 -> 0.4, so total LGD averages to 0.55.
    CHECK(p.total_lgd() == doctest::Approx(0.55).epsilon(1e-13));

    // Expected loss, frozen from an extended-precision summation of the ramp formulas.
    CHECK(p.expected_loss() == doctest::Approx(0.022423387096774194).epsilon(1e-13));

    // Independent long-double re-summation of the same definition.
    long double el = 0.0L;
    for (int i = 1; i <= 125; ++i) {
        const long double ramp = (i - 1) / 124.0L;
        el += (1.0L / 125.0L) * (0.5L + 0.1L * ramp) * (0.015L + 0.05L * ramp);
    }
    CHECK(p.expected_loss() == doctest::Approx(static_cast<double>(el)).epsilon(1e-14));
}

TEST_CASE("fractions sum to one and expected loss is monotone in default probabilities") {
    std::vector<Loan> loans;
    for (int i = 1; i <= 40; ++i)
        loans.push_back(make_loan(0.5 + 1.37 * i, 0.001 * i, 0.01 * i, {0.2, 0.01 * i}));
    Portfolio p(loans);

    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) sum += p.fraction(i);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

    CHECK(p.expected_loss() > 0.0);
    CHECK(p.expected_loss() <= p.total_lgd());

    // Bumping any single p_i upward cannot decrease the expected loss.
    for (std::size_t i = 0; i < loans.size(); i += 7) {
        auto bumped = loans;
        bumped[i].default_prob += 0.05;
        CHECK(Portfolio(bumped).expected_loss() > p.expected_loss());
    }
}

TEST_CASE("scaling all notionals by a common factor changes nothing scale-free") {
    std::vector<Loan> base;
    for (int i = 1; i <= 9; ++i)
        base.push_back(make_loan(1.0 * i, 0.01 * i, 0.05 * i, {0.3, -0.1}));
    Portfolio p(base);

    auto scaled_loans = base;
    for (Loan& l : scaled_loans) l.notional *= 7.0;
    Portfolio scaled(scaled_loans);

    CHECK(scaled.total_notional() == doctest::Approx(7.0 * p.total_notional()).epsilon(1e-15));
    for (std::size_t i = 0; i < p.size(); ++i) {
        CHECK(scaled.fraction(i) == doctest::Approx(p.fraction(i)).epsilon(1e-14));
        CHECK(scaled.lgd(i) == doctest::Approx(p.lgd(i)).epsilon(1e-14));
    }
    CHECK(scaled.expected_loss() == doctest::Approx(p.expected_loss()).epsilon(1e-14));
    CHECK(scaled.total_lgd() == doctest::Approx(p.total_lgd()).epsilon(1e-14));
}

TEST_CASE("CSV parsing: hand-written input, field errors, and header errors") {
    SUBCASE("two valid rows produce a two-loan portfolio in row order") {
        std::istringstream in(
            "notional,pd,recovery,w1,w2\n"
            "100, 0.02, 0.4, 0.3, 0.1\n"
            "250,0.05,0.0,-0.2,0.55\n");
        Portfolio p = gfm::load_portfolio(in, PortfolioFormat::csv);
        REQUIRE(p.size() == 2);
        REQUIRE(p.num_factors() == 2);
        CHECK(p.loan(0).notional == 100.0);
        CHECK(p.loan(0).default_prob == 0.02);
        CHECK(p.loan(0).recovery == 0.4);
        CHECK(p.loan(0).loadings == std::vector<double>{0.3, 0.1});
        CHECK(p.loan(1).notional == 250.0);
        CHECK(p.loan(1).loadings == std::vector<double>{-0.2, 0.55});
        CHECK(p.fraction(1) == doctest::Approx(250.0 / 350.0));
    }
    SUBCASE("CRLF line endings and blank lines are tolerated") {
        std::istringstream in("notional,pd,recovery,w1\r\n1,0.02,0.4,0.3\r\n\r\n2,0.03,0.1,0.2\r\n");
        Portfolio p = gfm::load_portfolio(in, PortfolioFormat::csv);
        CHECK(p.size() == 2);
        CHECK(p.loan(1).notional == 2.0);
    }
    SUBCASE("invariant violations name the offending loan") {
        std::istringstream in("notional,pd,recovery,w1\n1,0.02,0.4,0.3\n1,1.5,0.4,0.3\n");
        check_rejects([&] { gfm::load_portfolio(in, PortfolioFormat::csv); }, "loan 1");
    }
    SUBCASE("sum of squared loadings >= 1 is rejected at load time") {
        std::istringstream in("notional,pd,recovery,w1,w2\n1,0.02,0.4,0.8,0.7\n");
        check_rejects([&] { gfm::load_portfolio(in, PortfolioFormat::csv); },
                      "squared factor loadings");
    }
    SUBCASE("wrong column count names the row") {
        std::istringstream in("notional,pd,recovery,w1\n1,0.02,0.4\n");
        check_rejects([&] { gfm::load_portfolio(in, PortfolioFormat::csv); },
                      "row 1: expected 4 columns, got 3");
    }
    SUBCASE("non-numeric field names row and column") {
        std::istringstream in("notional,pd,recovery,w1\n1,abc,0.4,0.3\n");
        check_rejects([&] { gfm::load_portfolio(in, PortfolioFormat::csv); }, "field 'pd'");
    }
    SUBCASE("bad headers are rejected") {
        std::istringstream a("notional,pd,recovery\n");
        check_rejects([&] { gfm::load_portfolio(a, PortfolioFormat::csv); }, "header");
        std::istringstream b("notional,pd,recovery,w2\n");
        check_rejects([&] { gfm::load_portfolio(b, PortfolioFormat::csv); }, "w1");
        std::istringstream c("");
        check_rejects([&] { gfm::load_portfolio(c, PortfolioFormat::csv); }, "empty");
    }
    SUBCASE("header only, no data rows") {
        std::istringstream in("notional,pd,recovery,w1\n");
        check_rejects([&] { gfm::load_portfolio(in, PortfolioFormat::csv); }, "at least one loan");
    }
}

TEST_CASE("JSON parsing: valid input and structured errors") {
    SUBCASE("well-formed document") {
        std::istringstream in(R"({"loans":[
            {"notional": 1.5, "pd": 0.02, "recovery": 0.4, "loadings": [0.3, 0.1]},
            {"notional": 2.0, "pd": 0.05, "recovery": 0.0, "loadings": [-0.2, 0.5]}
        ]})");
        Portfolio p = gfm::load_portfolio(in, PortfolioFormat::json);
        REQUIRE(p.size() == 2);
        CHECK(p.loan(0).notional == 1.5);
        CHECK(p.loan(1).loadings == std::vector<double>{-0.2, 0.5});
    }
    SUBCASE("malformed JSON") {
        std::istringstream in("{\"loans\": [");
        check_rejects([&] { gfm::load_portfolio(in, PortfolioFormat::json); }, "parse error");
    }
    SUBCASE("missing loans array") {
        std::istringstream in("{\"rows\": []}");
        check_rejects([&] { gfm::load_portfolio(in, PortfolioFormat::json); }, "'loans' array");
    }
    SUBCASE("missing key names the loan") {
        std::istringstream in(R"({"loans":[
            {"notional": 1.0, "pd": 0.02, "recovery": 0.4, "loadings": [0.3]},
            {"notional": 1.0, "pd": 0.02, "loadings": [0.3]}
        ]})");
        check_rejects([&] { gfm::load_portfolio(in, PortfolioFormat::json); }, "loan 1");
    }
}

TEST_CASE("write/load round-trips reproduce every field exactly") {
    // Awkward values: long decimals that must survive via round-trip formatting.
    std::vector<Loan> loans;
    loans.push_back(make_loan(101.7300000000001, 0.0123456789012345678, 0.0, {0.1, -0.25}));
    loans.push_back(make_loan(1e-3, 1e-9, 0.9999999, {0.7071067811865475, 0.1}));
    loans.push_back(make_loan(3.0, 0.5, 0.5, {-0.99, 0.01}));
    Portfolio original(loans);

    for (PortfolioFormat fmt : {PortfolioFormat::csv, PortfolioFormat::json}) {
        CAPTURE(static_cast<int>(fmt));
        const std::string text = gfm::portfolio_to_string(original, fmt);
        std::istringstream in(text);
        Portfolio back = gfm::load_portfolio(in, fmt);
        REQUIRE(back.size() == original.size());
        for (std::size_t i = 0; i < original.size(); ++i) {
            CHECK(back.loan(i).notional == original.loan(i).notional);
            CHECK(back.loan(i).default_prob == original.loan(i).default_prob);
            CHECK(back.loan(i).recovery == original.loan(i).recovery);
            CHECK(back.loan(i).loadings == original.loan(i).loadings);
        }
    }

    // The example portfolio round-trips too (125 rows, both formats).
    const Portfolio ex = Portfolio::example();
    for (PortfolioFormat fmt : {PortfolioFormat::csv, PortfolioFormat::json}) {
        std::istringstream in(gfm::portfolio_to_string(ex, fmt));
        Portfolio back = gfm::load_portfolio(in, fmt);
        REQUIRE(back.size() == ex.size());
        for (std::size_t i = 0; i < ex.size(); ++i) {
            CHECK(back.loan(i).default_prob == ex.loan(i).default_prob);
            CHECK(back.loan(i).loadings[0] == ex.loan(i).loadings[0]);
        }
    }
}

TEST_CASE("format detection from file extension") {
    CHECK(gfm::format_from_path("portfolio.json") == PortfolioFormat::json);
    CHECK(gfm::format_from_path("PORTFOLIO.JSON") == PortfolioFormat::json);
    CHECK(gfm::format_from_path("portfolio.csv") == PortfolioFormat::csv);
    CHECK(gfm::format_from_path("portfolio") == PortfolioFormat::csv);
    CHECK(gfm::format_from_path("data.json.csv") == PortfolioFormat::csv);
}

TEST_CASE("missing portfolio file raises an I/O error") {
    CHECK_THROWS_AS(gfm::load_portfolio_file("/nonexistent/portfolio.csv", PortfolioFormat::csv),
                    gfm::IoError);
}
