#include "htgame/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "htgame/parallel.hpp"
#include "htgame/regions.hpp"

namespace htgame {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log2(sum 2^t) with pairwise accumulation of the shifted terms.
double pairwise_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 8) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += v[i];
        return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

double log2_sum_exp2(const std::vector<double>& log2_terms) {
    double m = -kInf;
    for (double t : log2_terms) m = std::max(m, t);
    if (m == -kInf) return -kInf;
    std::vector<double> shifted;
    shifted.reserve(log2_terms.size());
    for (double t : log2_terms) {
        shifted.push_back(t == -kInf ? 0.0 : std::exp2(t - m));
    }
    return m + std::log2(pairwise_sum(shifted, 0, shifted.size()));
}

double glr_bits_binary(double p0, double q0, double ratio) {
    const double u0 = (p0 + ratio * q0) / (1.0 + ratio);
    const double u1 = 1.0 - u0;
    const double p1 = 1.0 - p0;
    const double q1 = 1.0 - q0;
    double dp = 0.0;
    if (p0 > 0.0) dp += p0 * std::log2(p0 / u0);
    if (p1 > 0.0) dp += p1 * std::log2(p1 / u1);
    double dq = 0.0;
    if (q0 > 0.0) dq += q0 * std::log2(q0 / u0);
    if (q1 > 0.0) dq += q1 * std::log2(q1 / u1);
    return dp + ratio * dq;
}

// Letter cost of moving a binary type with a zeros to one with b zeros.
double binary_move_cost(std::int64_t a, std::int64_t b, const DistortionSpec& d) {
    return b < a ? static_cast<double>(a - b) * d.cost(0, 1)
                 : static_cast<double>(b - a) * d.cost(1, 0);
}

// Membership flags of the finite-n success set for every test type, given
// the acceptance flags of the output types.
std::vector<char> binary_success_flags(std::int64_t n, const std::vector<char>& accepted,
                                       const GameConfig& config) {
    const double budget = static_cast<double>(n) * config.distortion().budget();
    std::vector<char> member(static_cast<std::size_t>(n + 1), 0);
    for (std::int64_t a = 0; a <= n; ++a) {
        for (std::int64_t b = 0; b <= n; ++b) {
            if (!accepted[static_cast<std::size_t>(b)]) continue;
            if (binary_move_cost(a, b, config.distortion()) <= budget + reach_tolerance) {
                member[static_cast<std::size_t>(a)] = 1;
                break;
            }
        }
    }
    return member;
}

std::vector<double> binary_type_log_probs(std::int64_t n, const Pmf& p) {
    std::vector<double> lp(static_cast<std::size_t>(n + 1));
    for (std::int64_t a = 0; a <= n; ++a) {
        lp[static_cast<std::size_t>(a)] =
            type_class_log_prob(EmpiricalType({a, n - a}, n), p);
    }
    return lp;
}

}  // namespace

Sequence sample_sequence(const Pmf& p, std::int64_t n, SubstreamRng& rng) {
    if (n <= 0) throw config_error("sample length must be positive");
    std::vector<int> symbols(static_cast<std::size_t>(n));
    for (auto& s : symbols) s = rng.sample(p);
    return Sequence(std::move(symbols), Alphabet(p.size()));
}

double exact_false_negative_log2_prob(const GameConfig& config, const Pmf& p_x,
                                      const Pmf& p_y, int threads) {
    require_same_size(p_x.size(), config.alphabet().size(), "exact_false_negative");
    require_same_size(p_y.size(), config.alphabet().size(), "exact_false_negative");
    const double threshold = acceptance_threshold(config, Game::training);
    if (threshold <= 0.0) return -kInf;  // empty acceptance region

    const std::int64_t n = config.n();
    const std::int64_t N = config.training_length();
    const double ratio = config.ratio();

    if (config.alphabet().size() == 2) {
        const std::vector<double> lp_q = binary_type_log_probs(N, p_x);
        const std::vector<double> lp_y = binary_type_log_probs(n, p_y);
        std::vector<double> terms(static_cast<std::size_t>(N + 1), -kInf);
        parallel_for(N + 1, threads, [&](std::int64_t qi) {
            const double q0 = static_cast<double>(qi) / static_cast<double>(N);
            std::vector<char> accepted(static_cast<std::size_t>(n + 1), 0);
            for (std::int64_t b = 0; b <= n; ++b) {
                const double p0 = static_cast<double>(b) / static_cast<double>(n);
                accepted[static_cast<std::size_t>(b)] =
                    glr_bits_binary(p0, q0, ratio) < threshold;
            }
            const std::vector<char> member = binary_success_flags(n, accepted, config);
            std::vector<double> inner;
            for (std::int64_t a = 0; a <= n; ++a) {
                if (member[static_cast<std::size_t>(a)]) {
                    inner.push_back(lp_y[static_cast<std::size_t>(a)]);
                }
            }
            if (!inner.empty()) {
                terms[static_cast<std::size_t>(qi)] =
                    lp_q[static_cast<std::size_t>(qi)] + log2_sum_exp2(inner);
            }
        });
        return log2_sum_exp2(terms);
    }

    // Generic alphabets: materialized type lists with the enumeration cap as
    // the affordability guard.
    const std::int64_t count_n = count_types(n, config.alphabet(), config.enumeration_cap());
    const std::int64_t count_N = count_types(N, config.alphabet(), config.enumeration_cap());
    if (count_n * count_N > config.enumeration_cap()) {
        throw enumeration_too_large("type-pair enumeration of size " +
                                    std::to_string(count_n * count_N) + " exceeds cap");
    }
    std::vector<EmpiricalType> test_types;
    test_types.reserve(static_cast<std::size_t>(count_n));
    for_each_type(n, config.alphabet(),
                  [&](const EmpiricalType& t) { test_types.push_back(t); });
    std::vector<EmpiricalType> training_types;
    training_types.reserve(static_cast<std::size_t>(count_N));
    for_each_type(N, config.alphabet(),
                  [&](const EmpiricalType& t) { training_types.push_back(t); });

    std::vector<double> terms(training_types.size(), -kInf);
    parallel_for(static_cast<std::int64_t>(training_types.size()), threads,
                 [&](std::int64_t qi) {
                     const EmpiricalType& q = training_types[static_cast<std::size_t>(qi)];
                     const Pmf q_pmf = q.to_pmf();
                     std::vector<double> inner;
                     for (const EmpiricalType& y : test_types) {
                         if (!in_success_region_n(y, q_pmf, config, Game::training)) continue;
                         inner.push_back(type_class_log_prob(y, p_y));
                     }
                     if (!inner.empty()) {
                         terms[static_cast<std::size_t>(qi)] =
                             type_class_log_prob(q, p_x) + log2_sum_exp2(inner);
                     }
                 });
    return log2_sum_exp2(terms);
}

double exact_false_negative_prob(const GameConfig& config, const Pmf& p_x, const Pmf& p_y,
                                 int threads) {
    const double l2 = exact_false_negative_log2_prob(config, p_x, p_y, threads);
    return l2 == -kInf ? 0.0 : std::exp2(l2);
}

double exact_false_negative_prob_independent(const GameConfig& config, const Pmf& p_x,
                                             const Pmf& p_y, int threads) {
    const std::int64_t n = config.n();
    const std::int64_t N = config.training_length();
    const std::int64_t K = config.attacker_length();
    if (config.alphabet().size() != 2 || n > 60 || N > 60 || K > 60) {
        throw enumeration_too_large(
            "independent-training exact enumeration supports binary n, N, K <= 60");
    }
    const double threshold = acceptance_threshold(config, Game::training);
    if (threshold <= 0.0) return 0.0;
    const double ratio = config.ratio();
    const double budget = static_cast<double>(n) * config.distortion().budget();

    const std::vector<double> lp_q = binary_type_log_probs(N, p_x);
    const std::vector<double> lp_r = binary_type_log_probs(K, p_x);
    const std::vector<double> lp_y = binary_type_log_probs(n, p_y);

    std::vector<double> terms(static_cast<std::size_t>(K + 1), -kInf);
    parallel_for(K + 1, threads, [&](std::int64_t ri) {
        Pmf r_pmf = EmpiricalType({ri, K - ri}, K).to_pmf();
        const Pmf target =
            K == N ? r_pmf : quantize_to_denominator(r_pmf, N);
        // Attacked output type for every test type, replicating the
        // deterministic tie-break of the estimate-based attack.
        std::vector<double> z_of_y(static_cast<std::size_t>(n + 1));
        for (std::int64_t a = 0; a <= n; ++a) {
            // Ascending b is lexicographic order on binary counts, so the
            // kept candidate only changes when it drops out of the tie band.
            double exact_min = kInf;
            double kept_stat = kInf;
            std::int64_t kept = -1;
            for (std::int64_t b = 0; b <= n; ++b) {
                if (binary_move_cost(a, b, config.distortion()) > budget + reach_tolerance) {
                    continue;
                }
                const double stat = glr_bits_binary(
                    static_cast<double>(b) / static_cast<double>(n), target[0], ratio);
                if (stat < exact_min) exact_min = stat;
                if (stat > exact_min + 1e-12) continue;
                if (kept < 0 || kept_stat > exact_min + 1e-12) {
                    kept = b;
                    kept_stat = stat;
                }
            }
            z_of_y[static_cast<std::size_t>(a)] =
                static_cast<double>(kept) / static_cast<double>(n);
        }
        std::vector<double> per_q(static_cast<std::size_t>(N + 1), -kInf);
        for (std::int64_t qi = 0; qi <= N; ++qi) {
            const double q0 = static_cast<double>(qi) / static_cast<double>(N);
            std::vector<double> inner;
            for (std::int64_t a = 0; a <= n; ++a) {
                const double stat = glr_bits_binary(z_of_y[static_cast<std::size_t>(a)], q0,
                                                    ratio);
                if (stat < threshold) inner.push_back(lp_y[static_cast<std::size_t>(a)]);
            }
            if (!inner.empty()) {
                per_q[static_cast<std::size_t>(qi)] =
                    lp_q[static_cast<std::size_t>(qi)] + log2_sum_exp2(inner);
            }
        }
        terms[static_cast<std::size_t>(ri)] =
            lp_r[static_cast<std::size_t>(ri)] + log2_sum_exp2(per_q);
    });
    const double l2 = log2_sum_exp2(terms);
    return l2 == -kInf ? 0.0 : std::exp2(l2);
}

double exact_false_positive_prob(const GameConfig& config, const Pmf& p_x) {
    require_same_size(p_x.size(), config.alphabet().size(), "exact_false_positive");
    const double threshold = acceptance_threshold(config, Game::training);
    const std::int64_t n = config.n();
    const std::int64_t N = config.training_length();
    const double ratio = config.ratio();

    if (config.alphabet().size() == 2) {
        const std::vector<double> lp_x = binary_type_log_probs(n, p_x);
        const std::vector<double> lp_t = binary_type_log_probs(N, p_x);
        std::vector<double> rejecting;
        for (std::int64_t a = 0; a <= n; ++a) {
            const double p0 = static_cast<double>(a) / static_cast<double>(n);
            for (std::int64_t t = 0; t <= N; ++t) {
                const double q0 = static_cast<double>(t) / static_cast<double>(N);
                if (glr_bits_binary(p0, q0, ratio) >= threshold) {
                    rejecting.push_back(lp_x[static_cast<std::size_t>(a)] +
                                        lp_t[static_cast<std::size_t>(t)]);
                }
            }
        }
        const double l2 = log2_sum_exp2(rejecting);
        return l2 == -kInf ? 0.0 : std::exp2(l2);
    }

    std::vector<double> rejecting;
    for_each_type(n, config.alphabet(), [&](const EmpiricalType& x) {
        const Pmf xp = x.to_pmf();
        const double lx = type_class_log_prob(x, p_x);
        for_each_type(N, config.alphabet(), [&](const EmpiricalType& t) {
            if (glr_statistic(xp, t.to_pmf(), ratio).bits >= threshold) {
                rejecting.push_back(lx + type_class_log_prob(t, p_x));
            }
        });
    });
    const double l2 = log2_sum_exp2(rejecting);
    return l2 == -kInf ? 0.0 : std::exp2(l2);
}

SimulationReport simulate_game(const SimulationSpec& spec,
                               const std::function<void(const TrialTrace&)>& trace) {
    if (spec.trials < 1) throw config_error("simulation needs at least one trial");
    const GameConfig& config = spec.config;
    require_same_size(spec.p_x.size(), config.alphabet().size(), "simulate_game");
    require_same_size(spec.p_y.size(), config.alphabet().size(), "simulate_game");
    if (spec.force_shared_training &&
        (spec.version != GameVersion::independent_training ||
         config.attacker_length() != config.training_length())) {
        throw config_error("forcing shared training needs the independent version with K = N");
    }

    const std::int64_t n = config.n();
    const std::int64_t N = config.training_length();
    const std::int64_t K = config.attacker_length();

    std::vector<char> fn_flags(static_cast<std::size_t>(spec.trials), 0);
    std::vector<char> fp_flags(static_cast<std::size_t>(spec.trials), 0);
    std::vector<double> statistics(static_cast<std::size_t>(spec.trials), 0.0);
    const double threshold = acceptance_threshold(config, Game::training);

    parallel_for(spec.trials, spec.threads, [&](std::int64_t trial) {
        SubstreamRng rng_td(spec.seed, static_cast<std::uint64_t>(4 * trial));
        SubstreamRng rng_ta(spec.seed, static_cast<std::uint64_t>(4 * trial + 1));
        SubstreamRng rng_y(spec.seed, static_cast<std::uint64_t>(4 * trial + 2));
        SubstreamRng rng_x(spec.seed, static_cast<std::uint64_t>(4 * trial + 3));

        const EmpiricalType t_d = sample_sequence(spec.p_x, N, rng_td).type();
        const EmpiricalType y = sample_sequence(spec.p_y, n, rng_y).type();

        AttackResult attack =
            spec.version == GameVersion::shared_training
                ? optimal_attack(y, t_d, config)
                : attack_with_estimate(
                      y,
                      spec.force_shared_training
                          ? t_d
                          : sample_sequence(spec.p_x, K, rng_ta).type(),
                      config);
        const Verdict verdict = decide_training(attack.output_type, t_d, config);
        fn_flags[static_cast<std::size_t>(trial)] = verdict.accept;
        statistics[static_cast<std::size_t>(trial)] = verdict.statistic;

        // No attack under the null hypothesis.
        const EmpiricalType x = sample_sequence(spec.p_x, n, rng_x).type();
        fp_flags[static_cast<std::size_t>(trial)] = !decide_training(x, t_d, config).accept;
    });

    if (trace) {
        for (std::int64_t trial = 0; trial < spec.trials; ++trial) {
            trace(TrialTrace{trial, statistics[static_cast<std::size_t>(trial)], threshold,
                             fn_flags[static_cast<std::size_t>(trial)] != 0,
                             fp_flags[static_cast<std::size_t>(trial)] != 0});
        }
    }

    std::int64_t fn = 0;
    std::int64_t fp = 0;
    for (std::int64_t trial = 0; trial < spec.trials; ++trial) {
        fn += fn_flags[static_cast<std::size_t>(trial)];
        fp += fp_flags[static_cast<std::size_t>(trial)];
    }
    const double trials = static_cast<double>(spec.trials);
    SimulationReport report;
    report.trials = spec.trials;
    report.p_fn_hat = static_cast<double>(fn) / trials;
    report.p_fp_hat = static_cast<double>(fp) / trials;
    report.se_fn = std::sqrt(report.p_fn_hat * (1.0 - report.p_fn_hat) / trials);
    report.se_fp = std::sqrt(report.p_fp_hat * (1.0 - report.p_fp_hat) / trials);
    report.theory_exponent =
        spec.attach_theory
            ? fn_exponent_training(spec.p_x, spec.p_y, config.fp_exponent(),
                                   config.distortion(), config.ratio())
                  .value
            : 0.0;
    if (!spec.n_schedule.empty()) report.empirical = empirical_exponent(spec);
    return report;
}

SlopeReport empirical_exponent(const SimulationSpec& spec) {
    if (spec.n_schedule.size() < 2) {
        throw config_error("exponent slopes need at least two schedule points");
    }
    for (std::size_t i = 1; i < spec.n_schedule.size(); ++i) {
        if (spec.n_schedule[i] <= spec.n_schedule[i - 1]) {
            throw config_error("exponent schedule must be strictly increasing");
        }
    }

    SlopeReport report;
    for (std::int64_t n : spec.n_schedule) {
        GameConfig config = spec.config.with_n(n);
        ExponentPoint point{n, -kInf, 0.0, false, false};
        const bool exact_feasible =
            config.alphabet().size() == 2 &&
            spec.version == GameVersion::shared_training && n <= 2000 &&
            config.training_length() <= 2000;
        if (exact_feasible) {
            point.exact = true;
            point.log2_p_fn =
                exact_false_negative_log2_prob(config, spec.p_x, spec.p_y, spec.threads);
        } else {
            SimulationSpec sub = spec;
            sub.config = config;
            sub.n_schedule.clear();
            sub.attach_theory = false;
            const SimulationReport sim = simulate_game(sub);
            point.log2_p_fn =
                sim.p_fn_hat > 0.0 ? std::log2(sim.p_fn_hat) : -kInf;
        }
        if (point.log2_p_fn == -kInf) {
            point.dropped = true;  // exact zero cannot enter the log fit
        } else {
            point.exponent = -point.log2_p_fn / static_cast<double>(n);
        }
        report.points.push_back(point);
    }

    // Least squares of -log2 p_fn against n over the retained points.
    double sn = 0.0;
    double sv = 0.0;
    double snn = 0.0;
    double snv = 0.0;
    std::int64_t m = 0;
    for (const auto& point : report.points) {
        if (point.dropped) continue;
        const double nn = static_cast<double>(point.n);
        const double vv = -point.log2_p_fn;
        sn += nn;
        sv += vv;
        snn += nn * nn;
        snv += nn * vv;
        m += 1;
    }
    if (m >= 2) {
        const double denom = static_cast<double>(m) * snn - sn * sn;
        report.slope = (static_cast<double>(m) * snv - sn * sv) / denom;
        report.intercept = (sv - report.slope * sn) / static_cast<double>(m);
    } else {
        report.slope = 0.0;
        report.intercept = 0.0;
    }
    report.theory_exponent =
        fn_exponent_training(spec.p_x, spec.p_y, spec.config.fp_exponent(),
                             spec.config.distortion(), spec.config.ratio())
            .value;
    return report;
}

}  // namespace htgame
