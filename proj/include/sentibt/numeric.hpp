#pragma once

#include <algorithm>
#include <span>
#include <vector>

namespace sentibt {

// Mean computed over the sorted values. Sorting first makes the result exactly
// independent of input order, and since order statistics are componentwise
// monotone, raising any input can never lower the result.
inline double order_invariant_mean(std::vector<double> values) {
    if (values.empty()) {
        return 0.0;
    }
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) {
        sum += v;
    }
    return sum / static_cast<double>(values.size());
}

}  // namespace sentibt
