#include "moiremix/random.hpp"

#include <cmath>

namespace moiremix {

namespace {

constexpr std::uint64_t kRootSalt = 0x6a09e667f3bcc909ULL;
constexpr std::uint64_t kIndexSalt = 0xbb67ae8584caa73bULL;
constexpr std::uint64_t kCounterSalt = 0x3c6ef372fe94f82bULL;
constexpr std::uint64_t kForkSalt = 0xa54ff53a5f1d36f1ULL;
constexpr double kTwoPow53Inv = 0x1.0p-53;

}  // namespace

SeedStream SeedStream::derive(std::uint64_t root_seed, std::uint64_t image_index) noexcept {
    return SeedStream(mix64(mix64(root_seed ^ kRootSalt) + mix64(image_index ^ kIndexSalt)));
}

SeedStream SeedStream::fork(std::uint64_t tag) const noexcept {
    return SeedStream(mix64(key_ ^ mix64(tag ^ kForkSalt)));
}

std::uint64_t SeedStream::next_u64() noexcept {
    return mix64(key_ ^ mix64(counter_++ + kCounterSalt));
}

double SeedStream::uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * kTwoPow53Inv;
}

double SeedStream::uniform_open() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * kTwoPow53Inv;
}

double SeedStream::uniform(double lo, double hi) noexcept {
    const double u = uniform();
    const double x = lo + (hi - lo) * u;
    // lo + (hi-lo)*u can round up to hi for u just below 1.
    return x < hi ? x : std::nextafter(hi, lo);
}

__extension__ using u128 = unsigned __int128;

std::int64_t SeedStream::uniform_int(std::int64_t lo, std::int64_t hi) noexcept {
    if (hi <= lo) return lo;
    const std::uint64_t range = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    if (range == 0) return static_cast<std::int64_t>(next_u64());  // full 64-bit span
    // Lemire's multiply-shift with rejection.
    std::uint64_t x = next_u64();
    u128 m = static_cast<u128>(x) * range;
    std::uint64_t low = static_cast<std::uint64_t>(m);
    if (low < range) {
        const std::uint64_t threshold = (0 - range) % range;
        while (low < threshold) {
            x = next_u64();
            m = static_cast<u128>(x) * range;
            low = static_cast<std::uint64_t>(m);
        }
    }
    return lo + static_cast<std::int64_t>(m >> 64);
}

double SeedStream::beta_a1(double alpha) noexcept {
    return std::pow(uniform_open(), 1.0 / alpha);
}

double SeedStream::beta_1b(double beta) noexcept {
    return 1.0 - std::pow(uniform_open(), 1.0 / beta);
}

}  // namespace moiremix
