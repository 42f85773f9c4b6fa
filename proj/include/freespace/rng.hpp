#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace freespace {

/// Portable seeded random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Distributions are implemented here rather than taken from
/// <random>, whose distribution algorithms are implementation-defined, so a
/// given seed yields the same draws with every standard library.
///
///   uniform01():        top 53 bits of one engine output times 2^-53, in [0, 1)
///   uniform_index(n):   Lemire's multiply-shift with rejection, unbiased, in [0, n)
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    std::uint64_t uniform_index(std::uint64_t n);

    /// Inclusive integer range [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi)
    {
        return lo + static_cast<std::int64_t>(uniform_index(static_cast<std::uint64_t>(hi - lo) + 1));
    }

private:
    std::mt19937_64 engine_;
};

inline Rng rng_from_seed(std::uint64_t seed) { return Rng(seed); }

/// FNV-1a 64-bit hash; stable across platforms unlike std::hash.
std::uint64_t stable_hash(std::string_view text);

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix64(std::uint64_t x);

/// Stream seed for per-image work: seed xor hash(image_id), then mixed.
inline std::uint64_t image_stream_seed(std::uint64_t seed, std::string_view image_id)
{
    return mix64(seed ^ stable_hash(image_id));
}

} // namespace freespace
