#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "htgame/exponents.hpp"
#include "htgame/random.hpp"
#include "htgame/strategies.hpp"

namespace htgame {

enum class GameVersion { shared_training, independent_training };

struct SimulationSpec {
    GameConfig config;
    Pmf p_x;
    Pmf p_y;
    std::int64_t trials;
    std::uint64_t seed;
    GameVersion version = GameVersion::shared_training;
    // Validation hook: draw the attacker training sequence but hand the
    // attacker the defender's. Requires K == N.
    bool force_shared_training = false;
    std::vector<std::int64_t> n_schedule;  // optional exponent slope points
    int threads = 1;
    bool attach_theory = true;
};

struct ExponentPoint {
    std::int64_t n;
    double log2_p_fn;  // -inf marks an exactly-zero probability
    double exponent;   // -log2(p_fn) / n
    bool exact;        // type enumeration rather than Monte Carlo
    bool dropped;      // excluded from the slope fit
};

struct SlopeReport {
    std::vector<ExponentPoint> points;
    double slope;      // least-squares slope of -log2 p_fn against n
    double intercept;
    double theory_exponent;
};

struct TrialTrace {
    std::int64_t trial;
    double statistic;
    double threshold;
    bool false_negative;
    bool false_positive;
};

struct SimulationReport {
    std::int64_t trials;
    double p_fn_hat;
    double p_fp_hat;
    double se_fn;  // binomial standard errors
    double se_fp;
    double theory_exponent;
    std::optional<SlopeReport> empirical;
};

// n iid draws; bit-reproducible for a fixed stream state.
Sequence sample_sequence(const Pmf& p, std::int64_t n, SubstreamRng& rng);

SimulationReport simulate_game(const SimulationSpec& spec,
                               const std::function<void(const TrialTrace&)>& trace = {});

// Exact false-negative probability of the shared-training game by summing
// type-class probabilities over training and attacked-test types, in the
// log2 domain.
double exact_false_negative_log2_prob(const GameConfig& config, const Pmf& p_x,
                                      const Pmf& p_y, int threads = 1);
double exact_false_negative_prob(const GameConfig& config, const Pmf& p_x, const Pmf& p_y,
                                 int threads = 1);

// Exact analogue for the independent-training game; the triple enumeration
// is only affordable for small binary instances (n, N, K <= 60).
double exact_false_negative_prob_independent(const GameConfig& config, const Pmf& p_x,
                                             const Pmf& p_y, int threads = 1);

// Exact false-positive probability of the shared-training test: both
// sequences drawn from the same source, no attack.
double exact_false_positive_prob(const GameConfig& config, const Pmf& p_x);

// Slope of -log2 P_fn against n along the schedule, using exact enumeration
// where feasible and Monte Carlo otherwise.
SlopeReport empirical_exponent(const SimulationSpec& spec);

}  // namespace htgame
