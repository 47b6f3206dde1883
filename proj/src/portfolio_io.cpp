#include "gfm/portfolio_io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gfm/errors.hpp"

namespace gfm {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) fields.push_back(trim(cur));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_double(const std::string& s, std::size_t row, const std::string& column) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != s.size() || s.empty())
        throw ValidationError("row " + std::to_string(row) + ": field '" + column +
                              "' is not a number: '" + s + "'");
    return v;
}

Portfolio load_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("empty portfolio file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = split_csv(line);
    if (header.size() < 4 || trim(header[0]) != "notional" || trim(header[1]) != "pd" ||
        trim(header[2]) != "recovery")
        throw ValidationError("header must be notional,pd,recovery,w1[,w2,...]");
    const std::size_t m = header.size() - 3;
    for (std::size_t k = 0; k < m; ++k)
        if (header[3 + k] != "w" + std::to_string(k + 1))
            throw ValidationError("header loading columns must be w1..wm, got '" + header[3 + k] +
                                  "'");

    std::vector<Loan> loans;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        ++row;
        const auto fields = split_csv(line);
        if (fields.size() != header.size())
            throw ValidationError("row " + std::to_string(row) + ": expected " +
                                  std::to_string(header.size()) + " columns, got " +
                                  std::to_string(fields.size()));
        Loan l;
        l.notional = parse_double(fields[0], row, "notional");
        l.default_prob = parse_double(fields[1], row, "pd");
        l.recovery = parse_double(fields[2], row, "recovery");
        l.loadings.reserve(m);
        for (std::size_t k = 0; k < m; ++k)
            l.loadings.push_back(parse_double(fields[3 + k], row, "w" + std::to_string(k + 1)));
        loans.push_back(std::move(l));
    }
    return Portfolio(std::move(loans));
}

Portfolio load_json(std::istream& in) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("JSON parse error: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("loans") || !doc["loans"].is_array())
        throw ValidationError("JSON portfolio must be an object with a 'loans' array");
    std::vector<Loan> loans;
    std::size_t idx = 0;
    for (const auto& item : doc["loans"]) {
        try {
            Loan l;
            l.notional = item.at("notional").get<double>();
            l.default_prob = item.at("pd").get<double>();
            l.recovery = item.at("recovery").get<double>();
            l.loadings = item.at("loadings").get<std::vector<double>>();
            loans.push_back(std::move(l));
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError("loan " + std::to_string(idx) + ": " + e.what());
        }
        ++idx;
    }
    return Portfolio(std::move(loans));
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

Portfolio load_portfolio(std::istream& in, PortfolioFormat format) {
    return format == PortfolioFormat::csv ? load_csv(in) : load_json(in);
}

Portfolio load_portfolio_file(const std::string& path, PortfolioFormat format) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open portfolio file: " + path);
    return load_portfolio(in, format);
}

void write_portfolio(std::ostream& out, const Portfolio& p, PortfolioFormat format) {
    if (format == PortfolioFormat::csv) {
        out << "notional,pd,recovery";
        for (int k = 1; k <= p.num_factors(); ++k) out << ",w" << k;
        out << "\n";
        for (const Loan& l : p.loans()) {
            out << fmt(l.notional) << ',' << fmt(l.default_prob) << ',' << fmt(l.recovery);
            for (double w : l.loadings) out << ',' << fmt(w);
            out << "\n";
        }
    } else {
        nlohmann::json doc;
        auto& arr = doc["loans"] = nlohmann::json::array();
        for (const Loan& l : p.loans())
            arr.push_back({{"notional", l.notional},
                           {"pd", l.default_prob},
                           {"recovery", l.recovery},
                           {"loadings", l.loadings}});
        out << doc.dump(2) << "\n";
    }
}

std::string portfolio_to_string(const Portfolio& p, PortfolioFormat format) {
    std::ostringstream ss;
    write_portfolio(ss, p, format);
    return ss.str();
}

PortfolioFormat format_from_path(const std::string& path) {
    const auto dot = path.find_last_of('.');
    if (dot != std::string::npos) {
        std::string ext = path.substr(dot + 1);
        for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (ext == "json") return PortfolioFormat::json;
    }
    return PortfolioFormat::csv;
}

} // namespace gfm
