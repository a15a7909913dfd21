#pragma once

#include <cstdint>
#include <span>

namespace levy_elliptic {

/// Stream tags used when deriving keys from a master seed.
enum class StreamTag : std::uint64_t {
    atoms = 0x61746f6d,
    gaussian = 0x67617573,
    small_jumps = 0x736d616c,
    replicate = 0x7265706c,
};

/// 64-bit finalizer of SplitMix64.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derives a stream key from a master seed, a tag and an arbitrary id.
std::uint64_t derive_key(std::uint64_t seed, StreamTag tag, std::uint64_t id = 0) noexcept;

/// Order-independent hash of a multi-index.
std::uint64_t hash_index(std::span<const int> index) noexcept;

// Counter-based generator: the i-th output is a pure function of (key, i), so a
// stream can be recreated anywhere from its key. Distribution transforms are
// written out here rather than taken from <random> so that draws are identical
// across standard library implementations.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

    std::uint64_t next_u64() noexcept;

    /// Uniform on the open interval (0, 1).
    double uniform() noexcept;

    /// Standard normal by Box-Muller (one output per two uniforms).
    double normal() noexcept;

    /// Exponential with unit rate.
    double exponential() noexcept;

    /// Poisson(mean) by counting unit-rate arrivals; exact for any mean.
    std::uint64_t poisson(double mean) noexcept;

    /// +1 or -1 with probability 1/2 each.
    double sign() noexcept;

    std::uint64_t key() const noexcept { return key_; }
    std::uint64_t counter() const noexcept { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// Standard normal draw that depends only on (key).
double keyed_normal(std::uint64_t key) noexcept;

}  // namespace levy_elliptic
