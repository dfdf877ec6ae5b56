#pragma once

#include <cstdint>
#include <limits>

namespace moiremix {

/// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/**
 * Counter-based random stream keyed by (root_seed, image_index).
 *
 * Draw n is a keyed hash of the draw counter, so the sequence is a pure
 * function of the key. Child streams from fork() depend only on the parent
 * key and a tag, never on how many draws the parent has made. Together these
 * make batch output independent of worker count and scheduling order.
 *
 * All distributions are implemented here rather than through <random> so the
 * sequences are identical across standard library implementations.
 */
class SeedStream {
public:
    using result_type = std::uint64_t;

    static SeedStream derive(std::uint64_t root_seed, std::uint64_t image_index) noexcept;
    static SeedStream from_key(std::uint64_t key) noexcept { return SeedStream(key); }

    std::uint64_t key() const noexcept { return key_; }
    std::uint64_t draws() const noexcept { return counter_; }

    /// Independent child stream; pure in (key, tag).
    SeedStream fork(std::uint64_t tag) const noexcept;

    std::uint64_t next_u64() noexcept;

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Uniform on the open interval (0, 1).
    double uniform_open() noexcept;
    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) noexcept;
    /// Uniform integer on the closed range [lo, hi]; unbiased.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) noexcept;
    /// Fair coin.
    bool coin() noexcept { return (next_u64() >> 63) != 0; }

    /// Beta(alpha, 1) by inversion: U^(1/alpha).
    double beta_a1(double alpha) noexcept;
    /// Beta(1, beta) by inversion: 1 - U^(1/beta).
    double beta_1b(double beta) noexcept;

    // UniformRandomBitGenerator surface.
    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }
    result_type operator()() noexcept { return next_u64(); }

    friend bool operator==(const SeedStream&, const SeedStream&) = default;

private:
    explicit SeedStream(std::uint64_t key) noexcept : key_(key) {}

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

/// Fork tags used across modules; fixed so streams stay stable between releases.
namespace stream_tag {
inline constexpr std::uint64_t kTexture = 0x7465787475726501ULL;
inline constexpr std::uint64_t kMixer = 0x6d69786572000001ULL;
inline constexpr std::uint64_t kDegrade = 0x6465677261640001ULL;
inline constexpr std::uint64_t kPerturb = 0x7065727475726201ULL;
}  // namespace stream_tag

}  // namespace moiremix
