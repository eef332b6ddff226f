#pragma once

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <random>
#include <vector>

#include "iqrip/distribution.hpp"

namespace testutil {

/// Random distribution with the given support-size range: exponential weights
/// (continuous, so ties have measure zero) over shuffled ids.
inline iqrip::Distribution random_distribution(std::mt19937_64& rng,
                                               std::size_t min_support,
                                               std::size_t max_support,
                                               double peakedness = 1.0) {
    std::uniform_int_distribution<std::size_t> size_dist(min_support, max_support);
    const std::size_t n = size_dist(rng);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> weights(n);
    for (auto& w : weights) {
        const double e = -std::log(1.0 - unif(rng));
        w = std::pow(e, peakedness) + 1e-12;
    }
    std::vector<iqrip::TokenId> ids(n);
    std::iota(ids.begin(), ids.end(), iqrip::TokenId{0});
    std::shuffle(ids.begin(), ids.end(), rng);
    return iqrip::normalize(weights, ids);
}

inline bool bitwise_equal(double a, double b) {
    return std::memcmp(&a, &b, sizeof(double)) == 0;
}

}  // namespace testutil
