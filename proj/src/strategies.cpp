#include "htgame/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

namespace htgame {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::int64_t integral_multiple(double ratio, std::int64_t n, const char* what) {
    if (!(ratio > 0.0) || !std::isfinite(ratio)) {
        throw invalid_ratio(std::string(what) + " must be positive and finite");
    }
    const double product = ratio * static_cast<double>(n);
    const double rounded = std::round(product);
    if (std::abs(product - rounded) > 1e-9 * std::max(1.0, product) || rounded < 1.0) {
        throw config_error(std::string(what) + " times n must be a positive integer, got " +
                           std::to_string(product));
    }
    return static_cast<std::int64_t>(rounded);
}

}  // namespace

GameConfig::GameConfig(Alphabet alphabet, std::int64_t n, double training_ratio,
                       double fp_exponent, DistortionSpec distortion, ThresholdMode mode,
                       std::optional<double> attacker_ratio, std::int64_t enumeration_cap)
    : alphabet_(alphabet),
      n_(n),
      training_length_(0),
      attacker_length_(0),
      lambda_(fp_exponent),
      distortion_(std::move(distortion)),
      mode_(mode),
      cap_(enumeration_cap) {
    if (n <= 0) throw config_error("test length n must be positive");
    require_same_size(alphabet_.size(), distortion_.size(), "GameConfig distortion");
    if (!(lambda_ > 0.0) || !std::isfinite(lambda_)) {
        throw config_error("false-positive exponent must be positive");
    }
    training_length_ = integral_multiple(training_ratio, n_, "training ratio");
    attacker_length_ =
        attacker_ratio ? integral_multiple(*attacker_ratio, n_, "attacker ratio")
                       : training_length_;
}

GameConfig GameConfig::with_threshold_mode(ThresholdMode mode) const {
    GameConfig copy = *this;
    copy.mode_ = mode;
    return copy;
}

GameConfig GameConfig::with_n(std::int64_t n) const {
    return GameConfig(alphabet_, n, ratio(), lambda_, distortion_, mode_, attacker_ratio(),
                      cap_);
}

double acceptance_threshold(const GameConfig& config, Game game) {
    if (config.threshold_mode() == ThresholdMode::asymptotic) return config.fp_exponent();
    const double n = static_cast<double>(config.n());
    const double correction =
        game == Game::training
            ? config.alphabet().size() *
                  std::log2((n + 1.0) * (static_cast<double>(config.training_length()) + 1.0)) /
                  n
            : config.alphabet().size() * std::log2(n + 1.0) / n;
    return config.fp_exponent() - correction;
}

Verdict decide_training(const EmpiricalType& test, const EmpiricalType& training,
                        const GameConfig& config) {
    if (test.length() != config.n()) {
        throw config_error("test sequence length " + std::to_string(test.length()) +
                           " does not match configured n " + std::to_string(config.n()));
    }
    if (training.length() != config.training_length()) {
        throw config_error("training sequence length " + std::to_string(training.length()) +
                           " does not match configured N " +
                           std::to_string(config.training_length()));
    }
    require_same_size(test.size(), config.alphabet().size(), "decide_training");
    const double stat = glr_statistic(test, training).bits;
    const double thr = acceptance_threshold(config, Game::training);
    return Verdict{stat < thr, stat, thr};
}

Verdict decide_known_source(const EmpiricalType& test, const Pmf& source,
                            const GameConfig& config) {
    if (test.length() != config.n()) {
        throw config_error("test sequence length " + std::to_string(test.length()) +
                           " does not match configured n " + std::to_string(config.n()));
    }
    require_same_size(test.size(), source.size(), "decide_known_source");
    const double stat = kl_divergence(test.to_pmf(), source);
    const double thr = acceptance_threshold(config, Game::known_source);
    return Verdict{stat < thr, stat, thr};
}

namespace {

constexpr double tie_tolerance = 1e-12;

// Running argmin that reports the exact minimum statistic and, among all
// candidates within tie_tolerance of it, the lexicographically smallest
// count vector.
struct ArgminLex {
    double exact_min = kInf;
    std::optional<EmpiricalType> kept;
    double kept_stat = kInf;

    void offer(double stat, const EmpiricalType& type) {
        if (stat < exact_min) exact_min = stat;
        if (stat > exact_min + tie_tolerance) return;
        if (!kept || kept_stat > exact_min + tie_tolerance ||
            type.counts() < kept->counts()) {
            kept = type;
            kept_stat = stat;
        }
    }
};

// Shared minimization core: scan every type of length n, keep reachable ones,
// minimize the statistic with the lexicographic tie-break.
AttackResult minimize_statistic_over_reachable(const EmpiricalType& y, const Pmf& target,
                                               double ratio, const GameConfig& config) {
    ArgminLex best;
    const double budget = static_cast<double>(y.length()) * config.distortion().budget();
    TypeEnumerator stream(y.length(), config.alphabet(), config.enumeration_cap());
    while (auto z = stream.next()) {
        if (min_transport_cost(y, *z, config.distortion()).cost > budget + reach_tolerance) {
            continue;
        }
        best.offer(glr_statistic(z->to_pmf(), target, ratio).bits, *z);
    }
    TransportPlan plan = min_transport_cost(y, *best.kept, config.distortion()).plan;
    const double thr = acceptance_threshold(config, Game::training);
    return AttackResult{std::move(*best.kept), std::move(plan), best.exact_min,
                        best.exact_min < thr};
}

}  // namespace

AttackResult optimal_attack(const EmpiricalType& y, const EmpiricalType& training,
                            const GameConfig& config) {
    if (y.length() != config.n()) {
        throw config_error("attacked sequence length must equal configured n");
    }
    if (training.length() != config.training_length()) {
        throw config_error("training type length must equal configured N");
    }
    return minimize_statistic_over_reachable(y, training.to_pmf(), config.ratio(), config);
}

Pmf quantize_to_denominator(const Pmf& p, std::int64_t denominator) {
    if (denominator <= 0) throw config_error("quantization denominator must be positive");
    const double nd = static_cast<double>(denominator);
    std::vector<double> q(static_cast<std::size_t>(p.size()));
    double used = 0.0;
    for (int a = 0; a + 1 < p.size(); ++a) {
        q[static_cast<std::size_t>(a)] = std::floor(p[a] * nd + 1e-9) / nd;
        used += q[static_cast<std::size_t>(a)];
    }
    // Flooring only removes mass, so the remainder is nonnegative.
    q[static_cast<std::size_t>(p.size() - 1)] = 1.0 - used;
    return Pmf(std::move(q));
}

AttackResult attack_with_estimate(const EmpiricalType& y, const EmpiricalType& attacker_training,
                                  const GameConfig& config) {
    if (y.length() != config.n()) {
        throw config_error("attacked sequence length must equal configured n");
    }
    if (attacker_training.length() != config.attacker_length()) {
        throw config_error("attacker training length must equal configured K");
    }
    Pmf target = attacker_training.length() == config.training_length()
                     ? attacker_training.to_pmf()
                     : quantize_to_denominator(attacker_training.to_pmf(),
                                               config.training_length());
    AttackResult result =
        minimize_statistic_over_reachable(y, target, config.ratio(), config);
    result.succeeded = false;  // the simulator scores against the defender's training
    return result;
}

namespace {

// Statistic straight from raw counts, allocation-free for the hot leaf path.
double glr_bits_from_counts(const std::vector<std::int64_t>& counts, double n,
                            const std::vector<double>& target, double ratio) {
    double dp = 0.0;
    double dq = 0.0;
    for (std::size_t a = 0; a < counts.size(); ++a) {
        const double p = static_cast<double>(counts[a]) / n;
        const double q = target[a];
        const double u = (p + ratio * q) / (1.0 + ratio);
        if (p > 0.0) dp += p * std::log2(p / u);
        if (q > 0.0) dq += q * std::log2(q / u);
    }
    return dp + ratio * dq;
}

// Depth-first walk over suffixes of the output sequence. Prunes on the
// distortion budget; all other state is shard-local.
void brute_force_recurse(const Sequence& y, std::size_t pos, double cost_left,
                         std::vector<std::int64_t>& counts,
                         const std::vector<double>& target, double ratio,
                         const DistortionSpec& d, ArgminLex& best) {
    const int k = static_cast<int>(counts.size());
    if (pos == static_cast<std::size_t>(y.length())) {
        const double stat =
            glr_bits_from_counts(counts, static_cast<double>(y.length()), target, ratio);
        best.offer(stat, EmpiricalType(counts));
        return;
    }
    const int from = y[static_cast<std::int64_t>(pos)];
    for (int to = 0; to < k; ++to) {
        const double c = d.cost(from, to);
        if (c > cost_left + reach_tolerance) continue;
        counts[static_cast<std::size_t>(to)] += 1;
        brute_force_recurse(y, pos + 1, cost_left - c, counts, target, ratio, d, best);
        counts[static_cast<std::size_t>(to)] -= 1;
    }
}

}  // namespace

AttackResult brute_force_attack(const Sequence& y, const EmpiricalType& training,
                                const GameConfig& config, std::int64_t cap, int threads) {
    if (y.length() != config.n()) {
        throw config_error("attacked sequence length must equal configured n");
    }
    const int k = config.alphabet().size();
    double space = 1.0;
    for (std::int64_t i = 0; i < y.length(); ++i) space *= k;
    if (space > static_cast<double>(cap)) {
        throw enumeration_too_large("sequence space of size ~" + std::to_string(space) +
                                    " exceeds cap " + std::to_string(cap));
    }

    const Pmf target_pmf = training.to_pmf();
    const std::vector<double>& target = target_pmf.probs();
    const double ratio = config.ratio();
    const double budget = static_cast<double>(y.length()) * config.distortion().budget();

    // Shard on the first output symbol; each shard explores its own subtree.
    std::vector<ArgminLex> bests(static_cast<std::size_t>(k));
    auto run_shard = [&](int first) {
        ArgminLex& best = bests[static_cast<std::size_t>(first)];
        const double c = config.distortion().cost(y[0], first);
        if (c > budget + reach_tolerance) return;
        std::vector<std::int64_t> counts(static_cast<std::size_t>(k), 0);
        counts[static_cast<std::size_t>(first)] = 1;
        brute_force_recurse(y, 1, budget - c, counts, target, ratio, config.distortion(),
                            best);
    };
    if (threads > 1) {
        std::vector<std::future<void>> futures;
        for (int first = 0; first < k; ++first) {
            futures.push_back(std::async(std::launch::async, run_shard, first));
        }
        for (auto& f : futures) f.get();
    } else {
        for (int first = 0; first < k; ++first) run_shard(first);
    }

    // Deterministic merge, independent of the shard schedule: pin the global
    // minimum first so the tie band is final before candidates are offered.
    ArgminLex merged;
    for (const auto& b : bests) merged.exact_min = std::min(merged.exact_min, b.exact_min);
    for (const auto& b : bests) {
        if (b.kept) merged.offer(b.kept_stat, *b.kept);
    }
    if (!merged.kept) {
        throw infeasible_transport("no output sequence within the distortion budget");
    }

    TransportResult tr = min_transport_cost(y.type(), *merged.kept, config.distortion());
    const double thr = acceptance_threshold(config, Game::training);
    return AttackResult{std::move(*merged.kept), std::move(tr.plan), merged.exact_min,
                        merged.exact_min < thr};
}

}  // namespace htgame
