#pragma once

#include <iosfwd>
#include <string>

#include "gfm/portfolio.hpp"

namespace gfm {

enum class PortfolioFormat { csv, json };

// CSV: header `notional,pd,recovery,w1[,w2,...,wm]`, one loan per row, the
// factor count inferred from the header. JSON: {"loans":[{notional, pd,
// recovery, loadings:[...]}, ...]}. Row order becomes loan index order.
// Malformed input and invariant violations throw ValidationError naming the
// offending row / loan.
Portfolio load_portfolio(std::istream& in, PortfolioFormat format);
Portfolio load_portfolio_file(const std::string& path, PortfolioFormat format);

// Writers emit doubles with round-trip precision: load(write(P)) == P.
void write_portfolio(std::ostream& out, const Portfolio& p, PortfolioFormat format);
std::string portfolio_to_string(const Portfolio& p, PortfolioFormat format);

// Picks the format from the file extension (".json" -> json, else csv).
PortfolioFormat format_from_path(const std::string& path);

} // namespace gfm
