#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace scholarrec {

/// Seeded generator with portable draws. std::mt19937_64's output sequence
/// is fixed by the standard, but the std distributions are not, so draws are
/// derived from raw engine output here.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform integer in [0, n), n > 0.
    std::uint64_t below(std::uint64_t n)
    {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    /// Uniform integer in [lo, hi].
    std::uint64_t between(std::uint64_t lo, std::uint64_t hi) { return lo + below(hi - lo + 1); }

    /// Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool chance(double p) { return unit() < p; }

    /// Picks `count` distinct elements (partial Fisher-Yates); result keeps
    /// the sampled order.
    template <typename T>
    std::vector<T> sample(std::vector<T> pool, std::size_t count)
    {
        if (count > pool.size()) count = pool.size();
        for (std::size_t i = 0; i < count; ++i) {
            auto j = i + static_cast<std::size_t>(below(pool.size() - i));
            std::swap(pool[i], pool[j]);
        }
        pool.resize(count);
        return pool;
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace scholarrec
