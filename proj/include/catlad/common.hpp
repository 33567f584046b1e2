#pragma once

#include <stdexcept>
#include <string>

namespace catlad {

// Invalid arguments, violated preconditions, malformed configuration.
// The command line tool maps this to exit code 2.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

// A numeric routine failed to produce a finite or converged result.
// Carries the last estimate when the failing routine has one.
// The command line tool maps this to exit code 3.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what, double last_estimate = 0.0)
        : std::runtime_error(what), last_estimate_(last_estimate) {}

    double last_estimate() const { return last_estimate_; }

private:
    double last_estimate_;
};

// Compensated accumulator for long sums of small terms.
class KahanSum {
public:
    void add(double x) {
        const double y = x - carry_;
        const double t = sum_ + y;
        carry_ = (t - sum_) - y;
        sum_ = t;
    }

    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

}  // namespace catlad
