#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace pcgsim {

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// Stable per-cell seed for experiment grids (secret x round and the like).
inline uint64_t derive_seed(uint64_t base, uint64_t a, uint64_t b) {
    return splitmix64(base ^ splitmix64(a ^ splitmix64(b)));
}

// mt19937_64 with explicit helpers so draws stay reproducible across platforms
// (std::uniform_int_distribution is implementation defined).
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    uint64_t next() { return eng_(); }

    uint64_t below(uint64_t bound) { return bound ? next() % bound : 0; }

    // inclusive range
    uint64_t range(uint64_t lo, uint64_t hi) { return lo + below(hi - lo + 1); }

    bool coin() { return (next() & 1ull) != 0; }

    double unit() { return (next() >> 11) * (1.0 / 9007199254740992.0); }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 eng_;
};

} // namespace pcgsim
