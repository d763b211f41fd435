#ifndef ENTROLAB_COMMON_HPP
#define ENTROLAB_COMMON_HPP

#include <cstddef>
#include <cstdint>
#include <exception>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace entrolab {

inline constexpr std::string_view kVersion = "0.1.0";

// Bad call-site input (mismatched groups, invalid probabilities, ...).
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A configured enumeration cap would be exceeded.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The requested computation is outside what the measure model supports.
class UnsupportedMeasureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Enumeration caps and worker count, threaded through the heavy operations.
struct Limits {
    std::size_t max_cells = 1'000'000;        // joined-partition cells, ball sizes, sample points
    std::size_t max_enumeration = 10'000'000; // pattern/labeling enumerations
    int threads = 1;
};

// Exact sep/spn solvers refuse above this many points.
inline constexpr std::size_t kExactSolverPointCap = 24;

// Compensated summation; the entropy identities are checked at 1e-9..1e-12
// and naive accumulation over ~1e5 cells already loses that.
inline double kahan_sum(const std::vector<double>& xs) {
    double sum = 0.0, carry = 0.0;
    for (double x : xs) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    return sum;
}

class KahanAccumulator {
public:
    void add(double x) {
        double y = x - carry_;
        double t = sum_ + y;
        carry_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

// |WF| / |F| kept exact.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational reduced(std::int64_t n, std::int64_t d) {
        if (d == 0) throw ArgumentError("Rational: zero denominator");
        std::int64_t g = std::gcd(n, d);
        if (g == 0) g = 1;
        return Rational{n / g, d / g};
    }
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string to_string() const { return std::to_string(num) + "/" + std::to_string(den); }
};

// FNV-1a, used for config hashes and regression fingerprints.
inline std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 14695981039346656037ull) {
    std::uint64_t h = seed;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
    v *= 0x9e3779b97f4a7c15ull;
    v ^= v >> 32;
    return (h ^ v) * 1099511628211ull;
}

// Index-space parallel loop. Body must only write state owned by its index;
// results are then independent of the worker count. The lowest-index
// exception, if any, is rethrown on the calling thread.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& body) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) {
                try {
                    body(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace entrolab

#endif
