#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace suprb {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Named sub-seed of a master seed. Streams are keyed by (name, index) so
/// adding a new consumer never shifts the seeds of existing ones.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view stream,
                                 std::uint64_t index = 0) noexcept
{
    return splitmix64(splitmix64(master ^ fnv1a(stream)) + index);
}

inline Rng make_rng(std::uint64_t master, std::string_view stream, std::uint64_t index = 0)
{
    return Rng{derive_seed(master, stream, index)};
}

inline double uniform(Rng& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>{lo, hi}(rng);
}

inline double standard_normal(Rng& rng)
{
    return std::normal_distribution<double>{0.0, 1.0}(rng);
}

inline bool bernoulli(Rng& rng, double p)
{
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return std::bernoulli_distribution{p}(rng);
}

inline std::size_t uniform_index(Rng& rng, std::size_t n)
{
    return std::uniform_int_distribution<std::size_t>{0, n - 1}(rng);
}

} // namespace suprb
