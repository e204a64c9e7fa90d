#pragma once
/**
 * @file    random.hpp
 * @brief   Seed splitting and portable uniform draws.
 *
 * Every stochastic stage receives a seed derived from one root seed and a
 * list of stream tags, so editing one stage of a configuration never shifts
 * the random streams of another. Draws avoid std::*_distribution because
 * their output is implementation-defined.
 */

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <random>
#include <string_view>

namespace smcr
{
    using Rng = std::mt19937_64;

    /// SplitMix64 finalizer.
    [[nodiscard]] constexpr std::uint64_t mix64 (std::uint64_t z) noexcept
    {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// FNV-1a, used to turn stage names into stream tags.
    [[nodiscard]] constexpr std::uint64_t hashTag (std::string_view tag) noexcept
    {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (char c : tag)
        {
            h ^= static_cast<unsigned char> (c);
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    /// Derives a child seed from @p root and a counter path.
    [[nodiscard]] constexpr std::uint64_t splitSeed (std::uint64_t root, std::initializer_list<std::uint64_t> path) noexcept
    {
        std::uint64_t s = mix64 (root);
        for (std::uint64_t p : path)
            s = mix64 (s ^ mix64 (p + 0x632be59bd9b4e019ULL));
        return s;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    [[nodiscard]] inline double uniform01 (Rng &rng) { return static_cast<double> (rng () >> 11) * 0x1.0p-53; }

    [[nodiscard]] inline double uniformIn (Rng &rng, double lo, double hi) { return lo + (hi - lo) * uniform01 (rng); }

    /// Uniform integer in [0, n) by rejection; n must be > 0.
    [[nodiscard]] inline std::uint64_t uniformIndex (Rng &rng, std::uint64_t n)
    {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max () - std::numeric_limits<std::uint64_t>::max () % n;
        std::uint64_t v;
        do
            v = rng ();
        while (v >= limit);
        return v % n;
    }
} // namespace smcr
