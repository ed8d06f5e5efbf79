#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace netinf {

// splitmix64; used for seed derivation only, not as the work generator
inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derive an independent substream seed from (root, label, index). Labels keep
// parallel consumers (per-source path searches, per-run simulations, ...) on
// disjoint streams regardless of execution order.
inline std::uint64_t derive_seed(std::uint64_t root, std::string_view label, std::uint64_t index = 0)
{
    std::uint64_t h = splitmix64(root ^ 0x6a09e667f3bcc908ULL);
    for (const char c : label)
        h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<unsigned char>(c)));
    return splitmix64(h ^ (index * 0x9e3779b97f4a7c15ULL + 1));
}

// Deterministic generator wrapper. Distribution sampling is hand-rolled from
// raw 64-bit draws so that sequences do not depend on the standard library's
// distribution implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed)
        : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0,1)
    double next_unit()
    {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in (0,1]
    double next_unit_pos()
    {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    double next_exponential(double rate)
    {
        return -std::log(next_unit_pos()) / rate;
    }

    // uniform integer in [0, n), unbiased
    std::uint64_t next_below(std::uint64_t n)
    {
        if (n <= 1)
            return 0;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    bool next_bernoulli(double p)
    {
        return next_unit() < p;
    }

  private:
    std::mt19937_64 engine_;
};

} // namespace netinf
