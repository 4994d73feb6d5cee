#pragma once

#include <cstdint>

namespace lamina {

/// Counter-style splitmix64 stream. The generator is fixed by this definition
/// (no platform library involved), so a (seed, stream_index) pair produces the
/// same u64 sequence everywhere:
///
///   state_0 = mix(seed + GOLDEN * (stream_index + 1))
///   next()  : state += GOLDEN; return mix(state)
///   mix(z)  : z ^= z>>30; z *= 0xBF58476D1CE4E5B9;
///             z ^= z>>27; z *= 0x94D049BB133111EB; z ^= z>>31
///
/// with GOLDEN = 0x9E3779B97F4A7C15. Distinct stream indices give effectively
/// independent substreams; each stream must be owned by a single thread.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t stream_index = 0)
        : seed_(seed), stream_(stream_index),
          state_(mix(seed + kGolden * (stream_index + 1))) {}

    std::uint64_t next_u64() {
        state_ += kGolden;
        return mix(state_);
    }

    /// Uniform on [0, 1), 53 random bits.
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1]; safe as a divisor.
    double uniform_open() { return double((next_u64() >> 11) + 1) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    bool coin() { return (next_u64() >> 63) != 0; }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_index() const { return stream_; }

private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ull;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBull;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t state_;
};

} // namespace lamina
