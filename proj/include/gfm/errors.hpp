#pragma once

#include <stdexcept>
#include <string>

namespace gfm {

// A portfolio file or constructor argument violates a model invariant.
// The message names the offending loan where applicable.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// The requested confidence level lies outside the attainable range of the
// loss CDF, so the quantile equation has no root in [0, max loss].
class NoRootError : public std::runtime_error {
public:
    NoRootError(const std::string& what, double attainable_lo, double attainable_hi)
        : std::runtime_error(what), lo_(attainable_lo), hi_(attainable_hi) {}

    double attainable_lo() const noexcept { return lo_; }
    double attainable_hi() const noexcept { return hi_; }

private:
    double lo_;
    double hi_;
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace gfm
