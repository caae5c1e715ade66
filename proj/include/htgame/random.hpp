#pragma once

#include <cstdint>

#include "htgame/types.hpp"

namespace htgame {

// Counter-seeded xoshiro256** stream. Streams derived from (seed, stream)
// pairs are independent for all practical purposes and bit-reproducible
// across platforms, so per-trial substreams make parallel and serial runs
// agree exactly.
class SubstreamRng {
public:
    SubstreamRng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64();

    // Uniform double in [0, 1) with 53 random bits.
    double next_unit();

    // Inverse-CDF draw from a pmf; the cumulative scan is fixed-order, so
    // outputs are deterministic given the stream state.
    int sample(const Pmf& p);

private:
    std::uint64_t state_[4];
};

}  // namespace htgame
