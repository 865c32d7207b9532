#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace mnar {

/// Piecewise-constant function on [breakpoints.front(), breakpoints.back()].
/// Interval l is [a_l, a_{l+1}), half-open, except the last interval which
/// is closed on the right so every point in coverage has exactly one bin.
struct PiecewiseConstantFn {
    std::vector<double> breakpoints;  // strictly increasing, size k+1
    std::vector<double> values;       // size k, each in [0,1]

    PiecewiseConstantFn() = default;
    PiecewiseConstantFn(std::vector<double> bp, std::vector<double> vals)
        : breakpoints(std::move(bp)), values(std::move(vals)) {
        if (breakpoints.size() < 2 || values.size() + 1 != breakpoints.size())
            throw std::invalid_argument(
                "PiecewiseConstantFn: need k+1 breakpoints for k values");
        for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i)
            if (!(breakpoints[i] < breakpoints[i + 1]))
                throw std::invalid_argument(
                    "PiecewiseConstantFn: breakpoints must be strictly increasing");
        for (double v : values)
            if (!(v >= 0.0 && v <= 1.0))
                throw std::invalid_argument(
                    "PiecewiseConstantFn: values must be in [0,1]");
    }

    /// Index of the interval containing x. Throws if x is outside coverage.
    std::size_t interval_index(double x) const {
        if (x < breakpoints.front() || x > breakpoints.back())
            throw std::out_of_range("PiecewiseConstantFn: x outside coverage");
        if (x == breakpoints.back()) return values.size() - 1;
        auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
        return std::size_t(it - breakpoints.begin()) - 1;
    }

    double operator()(double x) const { return values[interval_index(x)]; }
};

}  // namespace mnar
