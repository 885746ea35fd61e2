#pragma once

// Deterministic, seedable random stream.
//
// The generator is SplitMix64: a 64-bit counter advanced by the golden-gamma
// constant, pushed through an avalanche mix. Identical (seed, stream) pairs
// reproduce identical output on any platform; integer arithmetic is exact
// and the floating-point path uses only IEEE-754 mul/add/sqrt plus std::log.
//
// Streams are for splitting parallel work: (seed, 0), (seed, 1), ... land at
// unrelated points of the counter orbit via the same avalanche hash, so they
// behave as independent generators.
//
// Transforms:
//   uniform():  top 53 bits of the next output, scaled to [0, 1).
//   normal():   Marsaglia polar method on uniform pairs; one variate of each
//               accepted pair is cached, so draws come in twos internally.

#include <cstdint>

namespace rmts {

class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();

    // Uniform on [0, 1).
    double uniform();

    // Standard normal variate.
    double normal();

    double normal(double mean, double sd) { return mean + sd * normal(); }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    // Generator for a parallel substream; substream(i) == RngStream(seed, i).
    RngStream substream(std::uint64_t index) const { return RngStream(seed_, index); }

private:
    std::uint64_t state_;
    std::uint64_t seed_;
    std::uint64_t stream_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

} // namespace rmts
