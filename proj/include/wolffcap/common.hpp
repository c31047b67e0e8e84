#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace wolffcap {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

using Point = std::vector<double>;

inline double sqr(double x) { return x * x; }

inline double dist2(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += sqr(a[k] - b[k]);
    return s;
}

inline double dist(const Point& a, const Point& b) { return std::sqrt(dist2(a, b)); }

inline double norm2(const Point& a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
}

// Neumaier compensated accumulator: error bounded by ~2 ulp of the running
// absolute sum, independent of cancellation pattern.
class KahanSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    void add(const KahanSum& other) {
        add(other.sum_);
        add(other.comp_);
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Deterministic RNG. splitmix64 core with explicit bit-to-double conversion;
// std::uniform_real_distribution is not reproducible across standard library
// implementations, so it is not used anywhere in the library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform on [0,1): 53 high bits.
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    double normal() {
        if (have_cache_) {
            have_cache_ = false;
            return cache_;
        }
        double u1 = 0.0;
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        cache_ = r * std::sin(a);
        have_cache_ = true;
        return r * std::cos(a);
    }

    Point in_cube(std::size_t d, double lo, double hi) {
        Point p(d);
        for (auto& x : p) x = uniform(lo, hi);
        return p;
    }

    Point unit_vector(std::size_t d) {
        while (true) {
            Point p(d);
            for (auto& x : p) x = normal();
            double n = norm2(p);
            if (n > 1e-12) {
                for (auto& x : p) x /= n;
                return p;
            }
        }
    }

private:
    std::uint64_t state_;
    double cache_ = 0.0;
    bool have_cache_ = false;
};

// Full-precision decimal rendering; %.17g round-trips every finite double.
inline std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Fixed-width scientific form used in CSV cells (17 significant digits).
inline std::string format_sci(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

// Runs fn(i) for i in [0, n) on up to `threads` workers. Each task writes only
// caller-owned slot i, so results do not depend on the worker count.
inline void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    unsigned use = std::min<unsigned>(threads, unsigned(n));
    pool.reserve(use);
    for (unsigned t = 0; t < use; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

} // namespace wolffcap
