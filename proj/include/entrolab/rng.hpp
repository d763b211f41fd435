#ifndef ENTROLAB_RNG_HPP
#define ENTROLAB_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace entrolab {

// All randomness in an experiment flows from one seed. Independent consumers
// (one permutation per generator, one sampling stream per task) get child
// streams derived as splitmix64(seed, stream); the engine itself is
// mt19937_64 whose output sequence is fixed by the standard, and bounded
// draws use hand-rolled rejection so results are identical across platforms.
class SplitRng {
public:
    explicit SplitRng(std::uint64_t seed, std::uint64_t stream = 0)
        : root_(seed), engine_(mix(seed ^ mix(stream + 0x632be59bd9b4e019ull))) {}

    // Child stream of the same root seed.
    SplitRng child(std::uint64_t stream) const { return SplitRng(root_, stream); }

    std::uint64_t next() { return engine_(); }

    // Uniform on {0, ..., n-1} by masked rejection.
    std::uint64_t below(std::uint64_t n) {
        if (n == 0) return 0;
        std::uint64_t mask = n - 1;
        mask |= mask >> 1;
        mask |= mask >> 2;
        mask |= mask >> 4;
        mask |= mask >> 8;
        mask |= mask >> 16;
        mask |= mask >> 32;
        for (;;) {
            std::uint64_t r = engine_() & mask;
            if (r < n) return r;
        }
    }

    double unit() { // [0, 1)
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Fisher-Yates.
    std::vector<std::uint32_t> permutation(std::size_t n) {
        std::vector<std::uint32_t> p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = static_cast<std::uint32_t>(i);
        for (std::size_t i = n; i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(p[i - 1], p[j]);
        }
        return p;
    }

private:
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    std::uint64_t root_;
    std::mt19937_64 engine_;
};

} // namespace entrolab

#endif
