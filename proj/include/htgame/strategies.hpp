#pragma once

#include <cstdint>
#include <optional>

#include "htgame/divergence.hpp"
#include "htgame/transport.hpp"
#include "htgame/types.hpp"

namespace htgame {

enum class Game { known_source, training };

enum class ThresholdMode { finite_n, asymptotic };

// Instance parameters shared by the defender, the attacker and the
// simulators. N = c*n is the defender's training length, K = d*n the
// attacker's (independent-training variant); both products must be integral.
class GameConfig {
public:
    GameConfig(Alphabet alphabet, std::int64_t n, double training_ratio,
               double fp_exponent, DistortionSpec distortion,
               ThresholdMode mode = ThresholdMode::finite_n,
               std::optional<double> attacker_ratio = std::nullopt,
               std::int64_t enumeration_cap = default_enumeration_cap);

    const Alphabet& alphabet() const { return alphabet_; }
    std::int64_t n() const { return n_; }
    std::int64_t training_length() const { return training_length_; }      // N
    std::int64_t attacker_length() const { return attacker_length_; }      // K
    double ratio() const {  // c = N/n, exact from the integer lengths
        return static_cast<double>(training_length_) / static_cast<double>(n_);
    }
    double attacker_ratio() const {  // d = K/n
        return static_cast<double>(attacker_length_) / static_cast<double>(n_);
    }
    double fp_exponent() const { return lambda_; }
    const DistortionSpec& distortion() const { return distortion_; }
    ThresholdMode threshold_mode() const { return mode_; }
    std::int64_t enumeration_cap() const { return cap_; }

    GameConfig with_threshold_mode(ThresholdMode mode) const;
    GameConfig with_n(std::int64_t n) const;

private:
    Alphabet alphabet_;
    std::int64_t n_;
    std::int64_t training_length_;
    std::int64_t attacker_length_;
    double lambda_;
    DistortionSpec distortion_;
    ThresholdMode mode_;
    std::int64_t cap_;
};

struct Verdict {
    bool accept;       // H0 accepted iff statistic < threshold
    double statistic;  // bits
    double threshold;  // bits
};

struct AttackResult {
    EmpiricalType output_type;
    TransportPlan plan;
    double statistic;  // attained minimum of the acceptance statistic, bits
    bool succeeded;
};

// Acceptance threshold in bits. The finite-n form carries the type-counting
// correction and may be negative (empty acceptance region); the asymptotic
// form is the bare false-positive exponent.
double acceptance_threshold(const GameConfig& config, Game game);

// Accept H0 iff the two-sample statistic of (test, training) falls strictly
// below the threshold.
Verdict decide_training(const EmpiricalType& test, const EmpiricalType& training,
                        const GameConfig& config);

// Known-source baseline: accept iff D(P_test || source) < threshold.
Verdict decide_known_source(const EmpiricalType& test, const Pmf& source,
                            const GameConfig& config);

// Optimal attack when the attacker sees the defender's training type:
// minimize the acceptance statistic over all output types reachable within
// the distortion budget. Ties broken toward the lexicographically smallest
// count vector.
AttackResult optimal_attack(const EmpiricalType& y, const EmpiricalType& training,
                            const GameConfig& config);

// Floor-quantization of a pmf onto denominator N; the last coordinate
// absorbs the lost mass, so the max-norm error is below |X|/N.
Pmf quantize_to_denominator(const Pmf& p, std::int64_t denominator);

// Independent-training attack: the attacker substitutes its own training
// type for the defender's, quantizing to denominator N first when the
// lengths differ. `succeeded` is left false; only the defender's verdict
// against its own training sequence decides that.
AttackResult attack_with_estimate(const EmpiricalType& y, const EmpiricalType& attacker_training,
                                  const GameConfig& config);

// Exhaustive search over every output sequence within the distortion budget
// of the given input sequence. Exponential; validates the type-level attack.
AttackResult brute_force_attack(const Sequence& y, const EmpiricalType& training,
                                const GameConfig& config,
                                std::int64_t cap = default_enumeration_cap, int threads = 1);

}  // namespace htgame
