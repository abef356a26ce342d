#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace wntv {

// Seeded randomness used by the pipelines. The mt19937_64 engine is
// bit-exact by the standard; the mappings below are fixed here so that
// masks, fills and label draws are reproducible across compilers
// (std::uniform_*_distribution is implementation-defined).

// Uniform double in [0, 1), 53-bit resolution.
inline double unit_double(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, bound), rejection sampled, bound >= 1.
inline std::uint64_t uniform_index(std::mt19937_64& gen, std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t v = gen();
    while (v >= limit) v = gen();
    return v % bound;
}

// First `count` entries of a Fisher-Yates shuffle of 0..n-1, ascending order
// not guaranteed. count <= n.
inline std::vector<int> sample_without_replacement(int n, int count,
                                                   std::mt19937_64& gen) {
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    for (int i = 0; i < count; ++i) {
        const int j = i + static_cast<int>(uniform_index(gen, static_cast<std::uint64_t>(n - i)));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(count);
    return pool;
}

}  // namespace wntv
