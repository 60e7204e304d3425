#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hazeprox {

/// Fixed-order pairwise summation. The reduction tree depends only on the
/// length of the input, so results do not change with thread count.
inline double pairwise_sum(std::span<const double> values) {
    constexpr std::size_t kLeaf = 64;
    if (values.size() <= kLeaf) {
        double s = 0.0;
        for (double v : values)
            s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

template <typename F>
double pairwise_sum_of(std::size_t n, F&& term) {
    std::vector<double> terms(n);
    for (std::size_t i = 0; i < n; ++i)
        terms[i] = term(i);
    return pairwise_sum(terms);
}

} // namespace hazeprox
