#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace scet {

// Deterministic random stream with explicit splitting.
//
// Child streams are derived from (parent seed, label) via SplitMix64 applied
// to the parent seed xor an FNV-1a hash of the label, so components and
// trials never share a stream. The generator itself is xoshiro256++ seeded
// through SplitMix64. All distributions are implemented on top of raw 64-bit
// draws; no std::*_distribution is used, so results are reproducible across
// standard libraries.
class RngStream {
  public:
    explicit RngStream(std::uint64_t seed);

    std::uint64_t next_u64();

    // Uniform on [0, 1), 53-bit resolution.
    double uniform();

    // Uniform on [lo, hi).
    double uniform(double lo, double hi);

    // Standard normal via Box-Muller (one value cached per pair).
    double normal();

    // Gumbel(0, 1): -log(-log(u)).
    double gumbel();

    // Index sampled proportionally to weights (need not be normalized;
    // must be non-negative with positive total).
    int categorical(std::span<const double> weights);

    // Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n);

    RngStream child(std::string_view label) const;
    RngStream child(std::string_view label, std::uint64_t index) const;

    std::uint64_t seed() const { return seed_; }

  private:
    std::uint64_t seed_;
    std::uint64_t state_[4];
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

// SplitMix64 output function; also used for seed derivation.
std::uint64_t splitmix64(std::uint64_t& state);

std::uint64_t fnv1a64(std::string_view s);

}  // namespace scet
