#pragma once

#include <cmath>
#include <span>

namespace egd {

/// Sequential Neumaier-compensated accumulator. Traversal order is the
/// caller's (ascending index everywhere in this library), so results are
/// deterministic; compensation only removes the O(n*eps) drift that naive
/// accumulation would add on large grids.
class CompensatedSum {
public:
    void add(double value) {
        double t = sum_ + value;
        if (std::abs(sum_) >= std::abs(value)) {
            comp_ += (sum_ - t) + value;
        } else {
            comp_ += (value - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_total(std::span<const double> values) {
    CompensatedSum acc;
    for (double v : values) acc.add(v);
    return acc.value();
}

inline double positive_part(double v) { return v > 0.0 ? v : 0.0; }

}  // namespace egd
