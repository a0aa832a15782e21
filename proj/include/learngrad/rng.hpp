#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace learngrad {

// mt19937_64 emits a standard-pinned sequence; the helpers below avoid
// std::uniform_real_distribution / std::shuffle, whose draw order is
// implementation-defined.  Seeded runs must be bit-identical everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // uniform in [lo, hi) with 53 random mantissa bits
    double uniform(double lo, double hi) {
        const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return lo + u * (hi - lo);
    }

    // modulo bias is ~n/2^64, irrelevant for the index ranges used here
    std::uint64_t below(std::uint64_t n) { return engine_() % n; }

private:
    std::mt19937_64 engine_;
};

// Fisher-Yates, high index down, so the draw sequence is pinned
template <typename T>
void shuffle(std::vector<T>& items, Rng& rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.below(i));
        std::swap(items[i - 1], items[j]);
    }
}

}  // namespace learngrad
