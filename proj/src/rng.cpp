#include "levy_elliptic/rng.hpp"

#include <cmath>
#include <numbers>

namespace levy_elliptic {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t x) noexcept {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

std::uint64_t derive_key(std::uint64_t seed, StreamTag tag, std::uint64_t id) noexcept {
    std::uint64_t h = mix64(seed + kGolden);
    h = mix64(h ^ (static_cast<std::uint64_t>(tag) + kGolden));
    h = mix64(h ^ (id * kGolden + 0x2545F4914F6CDD1DULL));
    return h;
}

std::uint64_t hash_index(std::span<const int> index) noexcept {
    std::uint64_t h = 0x84222325CBF29CE4ULL;
    for (int k : index) {
        h = mix64(h ^ (static_cast<std::uint64_t>(static_cast<std::uint32_t>(k)) + kGolden));
    }
    return mix64(h ^ index.size());
}

std::uint64_t CounterRng::next_u64() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
}

double CounterRng::uniform() noexcept {
    // 53 random bits, shifted by half an ulp so that 0 is never returned.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal() noexcept {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double CounterRng::exponential() noexcept { return -std::log(uniform()); }

std::uint64_t CounterRng::poisson(double mean) noexcept {
    if (!(mean > 0.0)) return 0;
    std::uint64_t n = 0;
    double t = exponential();
    while (t < mean) {
        ++n;
        t += exponential();
    }
    return n;
}

double CounterRng::sign() noexcept { return (next_u64() >> 63) ? 1.0 : -1.0; }

double keyed_normal(std::uint64_t key) noexcept {
    CounterRng rng(key);
    return rng.normal();
}

}  // namespace levy_elliptic
