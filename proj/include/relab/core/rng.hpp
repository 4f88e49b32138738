#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace relab {

// SplitMix64 generator. Self-contained so sequences are identical across
// standard libraries and platforms; experiments derive independent named
// streams from one root seed, so changing one stage never perturbs another.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    static Rng stream(std::uint64_t root, std::string_view name) {
        std::uint64_t h = 1469598103934665603ull;  // FNV-1a over the name
        for (char c : name) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ull;
        }
        return Rng(root ^ h);
    }

    Rng stream(std::string_view name) const { return stream(state_, name); }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // [0,1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // [lo,hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // {0,...,n-1}; n must be > 0
    std::uint64_t uniform_int(std::uint64_t n) {
        // Lemire's multiply-shift with rejection
        std::uint64_t x = next_u64();
        __uint128_t mul = static_cast<__uint128_t>(x) * n;
        auto lo = static_cast<std::uint64_t>(mul);
        if (lo < n) {
            const std::uint64_t t = (0 - n) % n;
            while (lo < t) {
                x = next_u64();
                mul = static_cast<__uint128_t>(x) * n;
                lo = static_cast<std::uint64_t>(mul);
            }
        }
        return static_cast<std::uint64_t>(mul >> 64);
    }

    int index(std::size_t n) { return static_cast<int>(uniform_int(n)); }

    bool chance(double p) { return uniform() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            const std::size_t j = uniform_int(i);
            std::swap(v[i - 1], v[j]);
        }
    }

    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[uniform_int(v.size())];
    }

private:
    std::uint64_t state_;
};

}  // namespace relab
