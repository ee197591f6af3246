#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace defsched {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Seed for an independent stream derived from a master seed. Every stochastic
/// component draws from its own purpose-tagged stream, so the draw order of one
/// component never depends on another.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t purpose) {
    std::uint64_t s = master ^ (0xA0761D6478BD642Full * (purpose + 1));
    std::uint64_t a = splitmix64(s);
    std::uint64_t b = splitmix64(s);
    return a ^ (b << 1);
}

/// Seedable generator with portable draw semantics. std::mt19937_64 output is
/// specified by the standard; the bounded/real mappings below avoid the
/// implementation-defined std::*_distribution classes, so identical seeds give
/// identical draws on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform integer in [lo, hi], inclusive, unbiased (rejection sampling).
    int uniform_int(int lo, int hi) {
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % span;
        std::uint64_t r;
        do {
            r = next_u64();
        } while (r >= limit);
        return lo + static_cast<int>(r % span);
    }

    /// Uniform real in [0, 1), 53-bit resolution.
    double uniform_real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool chance(double p) { return uniform_real() < p; }

    /// True with probability m/100, m an integer percentage.
    bool percent(int m) { return uniform_int(1, 100) <= m; }

    template <typename T>
    void shuffle(std::vector<T>& items) {
        for (int i = static_cast<int>(items.size()) - 1; i > 0; --i) {
            int j = uniform_int(0, i);
            std::swap(items[i], items[static_cast<std::size_t>(j)]);
        }
    }

    template <typename T>
    const T& pick(const std::vector<T>& items) {
        return items[static_cast<std::size_t>(uniform_int(0, static_cast<int>(items.size()) - 1))];
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace defsched
