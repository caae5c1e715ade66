#pragma once

#include <optional>

#include "htgame/regions.hpp"

namespace htgame {

struct ExponentResult {
    double value;  // bits per symbol
    Pmf minimizer_p;
    std::optional<Pmf> minimizer_q;  // training game only
    int iterations;
    double gap;  // optimizer diagnostic; 0 for the exact binary path
};

// False-negative exponent of the known-source game: the smallest divergence
// from the alternative source to any pmf inside the indistinguishability
// region around p_x.
ExponentResult fn_exponent_known_source(const Pmf& p_x, const Pmf& p_y, double lambda,
                                        const DistortionSpec& distortion);

// False-negative exponent of the training game: nested minimization over the
// conditioning pmf and the region it induces. Binary alphabets run the exact
// interval path with a dense scan plus local refinement; larger alphabets
// fall back to multistart projected gradient over the conditioning pmf.
ExponentResult fn_exponent_training(const Pmf& p_x, const Pmf& p_y, double lambda,
                                    const DistortionSpec& distortion, double ratio);

struct ExponentBounds {
    double lower;
    double upper;
    bool lower_is_relaxed;  // the lower bound uses the shared-training region
    ExponentResult upper_detail;
};

// Sandwich bounds for the independent-training game. The upper bound charges
// both training sequences against the conditioning pmf; the lower bound
// relaxes the attacker-estimate region to the shared-training one, which
// decouples and reproduces the shared-training exponent.
ExponentBounds fn_exponent_independent_bounds(const Pmf& p_x, const Pmf& p_y, double lambda,
                                              const DistortionSpec& distortion, double ratio,
                                              double attacker_ratio);

}  // namespace htgame
