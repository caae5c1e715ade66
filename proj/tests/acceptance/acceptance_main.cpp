// Acceptance harness: one self-contained check per shipping criterion, one
// PASS/FAIL line each, nonzero exit when anything fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "htgame/exponents.hpp"
#include "htgame/montecarlo.hpp"
#include "htgame/parallel.hpp"
#include "htgame/regions.hpp"
#include "support/oracle.hpp"
#include "support/testutil.hpp"

using namespace htgame;
using json = nlohmann::json;

namespace {

struct Outcome {
    int id;
    std::string title;
    bool pass;
    double seconds;
    std::string note;
};

std::vector<Outcome> outcomes;
int checked = 0;
int failed_checks = 0;

struct Check {
    bool ok = true;
    std::ostringstream why;

    void expect(bool condition, const std::string& what) {
        checked += 1;
        if (!condition) {
            failed_checks += 1;
            if (!ok) why << "; ";
            why << what;
            ok = false;
        }
    }
};

void run_criterion(int id, const std::string& title, const std::function<void(Check&)>& fn) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
        fn(check);
    } catch (const std::exception& e) {
        check.expect(false, std::string("exception: ") + e.what());
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    outcomes.push_back(Outcome{id, title, check.ok, seconds, check.why.str()});
    std::printf("%s criterion %2d: %-58s (%7.2fs)%s%s\n", check.ok ? "PASS" : "FAIL", id,
                title.c_str(), seconds, check.ok ? "" : "  -- ",
                check.ok ? "" : check.why.str().c_str());
    std::fflush(stdout);
}

DistortionSpec ham2(double budget) { return DistortionSpec::hamming(Alphabet(2), budget); }

// --- criterion bodies -------------------------------------------------------

void criterion_identities(Check& check) {
    SubstreamRng rng(1001, 0);
    double worst_identity = 0.0;
    double worst_mixture = 0.0;
    double worst_equality = 0.0;
    bool inequality_ok = true;
    for (int trial = 0; trial < 1000; ++trial) {
        const int k = 2 + static_cast<int>(rng.next_u64() % 3);
        // Two-sample statistic equals its divergence decomposition.
        Pmf a = testutil::random_pmf(rng, k);
        Pmf b = testutil::random_pmf(rng, k);
        const double c = 0.05 + 5.0 * rng.next_unit();
        worst_identity = std::max(
            worst_identity,
            std::abs(glr_statistic(a, b, c).bits - glr_alternative_form(a, b, c)));

        // Concatenated types carry the length-weighted mixture.
        EmpiricalType x = testutil::random_type(rng, k, 4 + rng.next_u64() % 60);
        EmpiricalType t = testutil::random_type(rng, k, 4 + rng.next_u64() % 60);
        const Pmf pooled = concat_types(x, t).to_pmf();
        const double wx =
            static_cast<double>(x.length()) / static_cast<double>(x.length() + t.length());
        for (int i = 0; i < k; ++i) {
            worst_mixture = std::max(
                worst_mixture,
                std::abs(pooled[i] - (wx * x.to_pmf()[i] + (1.0 - wx) * t.to_pmf()[i])));
        }

        // Pooled-type optimality of the weighted divergence sum, with the
        // equality case evaluated through the log-probability route.
        Pmf source = testutil::random_pmf(rng, k);
        const double n = static_cast<double>(x.length());
        const double m = static_cast<double>(t.length());
        const double lhs = n * kl_divergence(x.to_pmf(), pooled) +
                           m * kl_divergence(t.to_pmf(), pooled);
        const double rhs = n * kl_divergence(x.to_pmf(), source) +
                           m * kl_divergence(t.to_pmf(), source);
        if (lhs > rhs + 1e-10) inequality_ok = false;
        double log_prob = 0.0;
        for (int i = 0; i < k; ++i) {
            const std::int64_t cnt = x.count(i) + t.count(i);
            if (cnt > 0) log_prob += static_cast<double>(cnt) * std::log2(pooled[i]);
        }
        const double rhs_at_pool =
            -log_prob - n * entropy(x.to_pmf()) - m * entropy(t.to_pmf());
        worst_equality = std::max(worst_equality, std::abs(lhs - rhs_at_pool));
    }
    check.expect(worst_identity < 1e-10,
                 "identity residual " + std::to_string(worst_identity));
    check.expect(worst_mixture < 1e-10, "mixture residual " + std::to_string(worst_mixture));
    check.expect(inequality_ok, "pooled-type inequality violated");
    check.expect(worst_equality < 1e-10,
                 "equality-case residual " + std::to_string(worst_equality));
}

void criterion_statistic_dominance(Check& check) {
    SubstreamRng rng(1002, 0);
    bool strict = true;
    for (int trial = 0; trial < 1000; ++trial) {
        const int k = 2 + static_cast<int>(rng.next_u64() % 3);
        Pmf p = testutil::random_pmf(rng, k);
        Pmf px = testutil::random_pmf(rng, k);
        double l1 = 0.0;
        for (int i = 0; i < k; ++i) l1 += std::abs(p[i] - px[i]);
        if (l1 < 1e-9) continue;
        const double d = kl_divergence(p, px);
        for (double c : {0.5, 1.0, 2.0, 10.0}) {
            if (!(glr_statistic(p, px, c).bits < d)) strict = false;
        }
        if (d - glr_statistic(p, px, 1e6).bits >= 1e-4) strict = false;
        if (glr_statistic(p, px, 1e-6).bits >= 1e-4) strict = false;
    }
    check.expect(strict, "dominance or limit check failed");
}

void criterion_attack_optimality(Check& check) {
    SubstreamRng rng(1003, 0);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::int64_t n = 6 + static_cast<std::int64_t>(rng.next_u64() % 7);
        const double budget =
            static_cast<double>(rng.next_u64() % (n + 1)) / static_cast<double>(n);
        GameConfig config(Alphabet(2), n, 1.0, 0.5, ham2(budget));
        Sequence y = sample_sequence(testutil::random_pmf(rng, 2), n, rng);
        EmpiricalType t = testutil::random_type(rng, 2, n);
        const double typed = optimal_attack(y.type(), t, config).statistic;
        const double brute = brute_force_attack(y, t, config).statistic;
        worst = std::max(worst, std::abs(typed - brute));
    }
    check.expect(worst < 1e-12, "max |typed - brute| = " + std::to_string(worst));
}

void criterion_fp_guarantee(Check& check) {
    const std::int64_t n = 200;
    GameConfig config(Alphabet(2), n, 1.0, 0.5, ham2(0.1), ThresholdMode::finite_n);
    const double nu = 2.0 * 2.0 *
                      std::log2(static_cast<double>(n + 1) * static_cast<double>(n + 1)) /
                      static_cast<double>(n);
    const double bound = std::exp2(-static_cast<double>(n) * (0.5 - nu));
    std::vector<double> fp(99, 0.0);
    parallel_for(99, 4, [&](std::int64_t i) {
        const double p0 = static_cast<double>(i + 1) / 100.0;
        fp[static_cast<std::size_t>(i)] =
            exact_false_positive_prob(config, Pmf({p0, 1.0 - p0}));
    });
    double max_fp = 0.0;
    for (double x : fp) max_fp = std::max(max_fp, x);
    check.expect(max_fp <= bound,
                 "max FP " + std::to_string(max_fp) + " above bound " + std::to_string(bound));
}

void criterion_region_inclusion(Check& check) {
    for (double lambda : {0.05, 0.1}) {
        for (double budget : {0.02, 0.05, 0.1}) {
            RegionQuery query{Pmf({0.5, 0.5}), lambda, ham2(budget), 1.0, Game::training};
            const RegionGrid grid = region_grid(query, 400, 4);
            std::int64_t ks_only = 0;
            for (const auto& point : grid.points) {
                if (point.ks_member && !point.tr_member) ks_only += 1;
            }
            const std::string tag =
                " (lambda=" + std::to_string(lambda) + ", D=" + std::to_string(budget) + ")";
            check.expect(ks_only == 0, "ks-only points" + tag);
            check.expect(grid.tr_only_count >= 1, "no tr-only point" + tag);
        }
    }
}

void criterion_exponent_ordering(Check& check) {
    SubstreamRng rng(1006, 0);
    for (int trial = 0; trial < 20; ++trial) {
        Pmf p_x = testutil::random_pmf(rng, 2, 0.08);
        Pmf p_y = testutil::random_pmf(rng, 2, 0.08);
        const double lambda = 0.02 + 0.13 * rng.next_unit();
        const double budget = 0.1 * rng.next_unit();
        const double ratio = 0.5 + 2.0 * rng.next_unit();
        const double tr = fn_exponent_training(p_x, p_y, lambda, ham2(budget), ratio).value;
        const double ks = fn_exponent_known_source(p_x, p_y, lambda, ham2(budget)).value;
        check.expect(tr <= ks + 1e-9, "ordering violated at trial " + std::to_string(trial));
        const bool outside_ks = !in_indistinguishability_region(
            p_y, RegionQuery{p_x, lambda, ham2(budget), ratio, Game::known_source});
        if (outside_ks) {
            check.expect(ks - tr > 1e-4,
                         "gap " + std::to_string(ks - tr) + " at trial " +
                             std::to_string(trial));
        }
    }
}

void criterion_exponent_oracle(Check& check) {
    struct Instance {
        double x0, y0, lambda, budget, ratio;
    };
    const std::vector<Instance> instances = {
        {0.5, 0.1, 0.05, 0.05, 1.0},  {0.5, 0.05, 0.05, 0.05, 1.0},
        {0.3, 0.8, 0.1, 0.02, 2.0},   {0.6, 0.15, 0.08, 0.04, 0.5},
        {0.25, 0.75, 0.02, 0.1, 1.5},
    };
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const Instance& inst = instances[i];
        const Pmf p_x({inst.x0, 1.0 - inst.x0});
        const Pmf p_y({inst.y0, 1.0 - inst.y0});
        const DistortionSpec d = ham2(inst.budget);

        const double ks = fn_exponent_known_source(p_x, p_y, inst.lambda, d).value;
        const double ks_grid =
            oracle::grid_exponent(p_x, p_y, inst.lambda, d, inst.ratio, Game::known_source)
                .value;
        check.expect(std::abs(ks - ks_grid) < 1e-4,
                     "ks mismatch " + std::to_string(std::abs(ks - ks_grid)) +
                         " at instance " + std::to_string(i));

        const double tr =
            fn_exponent_training(p_x, p_y, inst.lambda, d, inst.ratio).value;
        const double tr_grid =
            oracle::grid_exponent(p_x, p_y, inst.lambda, d, inst.ratio, Game::training)
                .value;
        check.expect(std::abs(tr - tr_grid) < 1e-4,
                     "tr mismatch " + std::to_string(std::abs(tr - tr_grid)) +
                         " at instance " + std::to_string(i));
    }
}

void criterion_exact_vs_monte_carlo(Check& check) {
    struct Instance {
        double x0, y0, lambda, budget;
        ThresholdMode mode;
    };
    const std::vector<Instance> instances = {
        {0.5, 0.2, 0.5, 0.1, ThresholdMode::finite_n},
        {0.5, 0.25, 0.4, 0.05, ThresholdMode::finite_n},
        {0.6, 0.4, 0.35, 0.0, ThresholdMode::finite_n},
        {0.5, 0.3, 0.1, 0.05, ThresholdMode::asymptotic},
        {0.7, 0.45, 0.15, 0.02, ThresholdMode::asymptotic},
    };
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const Instance& inst = instances[i];
        GameConfig config(Alphabet(2), 100, 1.0, inst.lambda, ham2(inst.budget), inst.mode);
        const Pmf p_x({inst.x0, 1.0 - inst.x0});
        const Pmf p_y({inst.y0, 1.0 - inst.y0});
        const double exact = exact_false_negative_prob(config, p_x, p_y, 4);
        SimulationSpec spec{config, p_x, p_y, 100000, 90210 + i,
                            GameVersion::shared_training, false, {}, 4, false};
        const SimulationReport report = simulate_game(spec);
        const double sigma = std::max(report.se_fn, std::sqrt(exact * (1 - exact) / 1e5));
        check.expect(std::abs(report.p_fn_hat - exact) <= 3.0 * std::max(sigma, 1e-5),
                     "instance " + std::to_string(i) + ": exact " + std::to_string(exact) +
                         " vs mc " + std::to_string(report.p_fn_hat));
    }
}

void criterion_zero_exponent_inside(Check& check) {
    const Pmf p_x({0.5, 0.5});
    const Pmf p_y({0.45, 0.55});
    GameConfig config(Alphabet(2), 50, 1.0, 1.0, ham2(0.1), ThresholdMode::finite_n);
    check.expect(in_indistinguishability_region(
                     p_y, RegionQuery{p_x, 1.0, ham2(0.1), 1.0, Game::training}),
                 "designated point not inside the region");
    const ExponentResult tr = fn_exponent_training(p_x, p_y, 1.0, ham2(0.1), 1.0);
    check.expect(std::abs(tr.value) < 1e-6, "exponent " + std::to_string(tr.value));

    SimulationSpec spec{config, p_x, p_y, 1000, 7, GameVersion::shared_training,
                        false,  {50, 100, 200, 400}, 4, false};
    const SlopeReport slopes = empirical_exponent(spec);
    check.expect(std::abs(slopes.slope) < 0.01,
                 "slope " + std::to_string(slopes.slope) + " bits/symbol");
    for (const auto& point : slopes.points) {
        check.expect(point.exact && !point.dropped, "schedule point not exact");
    }
}

void criterion_version_a(Check& check) {
    // Bounds collapse to zero exactly on the shared-training zero set.
    SubstreamRng rng(1010, 0);
    for (int trial = 0; trial < 8; ++trial) {
        Pmf p_x = testutil::random_pmf(rng, 2, 0.1);
        Pmf p_y = testutil::random_pmf(rng, 2, 0.1);
        const double lambda = 0.03 + 0.1 * rng.next_unit();
        const double budget = 0.1 * rng.next_unit();
        const double tr = fn_exponent_training(p_x, p_y, lambda, ham2(budget), 1.0).value;
        const ExponentBounds bounds =
            fn_exponent_independent_bounds(p_x, p_y, lambda, ham2(budget), 1.0, 1.0);
        if (tr == 0.0) {
            check.expect(bounds.lower == 0.0 && bounds.upper == 0.0,
                         "bounds nonzero inside the region");
        } else {
            check.expect(bounds.upper > 0.0, "upper bound vanished outside the region");
            check.expect(bounds.lower <= bounds.upper + 1e-12, "bounds crossed");
        }
    }

    // Forcing the shared sequence reproduces the shared-training game
    // trial for trial at equal seeds.
    GameConfig config(Alphabet(2), 40, 1.0, 0.5, ham2(0.1), ThresholdMode::asymptotic, 1.0);
    SimulationSpec shared{config, Pmf({0.5, 0.5}), Pmf({0.3, 0.7}), 3000, 555,
                          GameVersion::shared_training, false, {}, 4, false};
    SimulationSpec forced = shared;
    forced.version = GameVersion::independent_training;
    forced.force_shared_training = true;
    std::vector<char> shared_flags;
    std::vector<char> forced_flags;
    simulate_game(shared, [&](const TrialTrace& t) {
        shared_flags.push_back(static_cast<char>(t.false_negative));
    });
    simulate_game(forced, [&](const TrialTrace& t) {
        forced_flags.push_back(static_cast<char>(t.false_negative));
    });
    check.expect(shared_flags == forced_flags, "per-trial outcomes differ");

    // Quantized estimates stay within |X|/N in the max norm.
    double worst = 0.0;
    bool within = true;
    for (int trial = 0; trial < 1000; ++trial) {
        const int k = 2 + static_cast<int>(rng.next_u64() % 3);
        const std::int64_t denom = 20 + static_cast<std::int64_t>(rng.next_u64() % 500);
        EmpiricalType t = testutil::random_type(rng, k, 10 + rng.next_u64() % 200);
        const Pmf original = t.to_pmf();
        const Pmf quantized = quantize_to_denominator(original, denom);
        for (int a = 0; a < k; ++a) {
            const double dev = std::abs(original[a] - quantized[a]);
            worst = std::max(worst, dev - static_cast<double>(k) / denom);
            if (dev > static_cast<double>(k) / denom + 1e-12) within = false;
        }
    }
    check.expect(within, "quantization deviation above |X|/N by " + std::to_string(worst));
}

// --- CLI determinism --------------------------------------------------------

std::string cli_binary() {
#ifdef HTGAME_CLI_PATH
    return HTGAME_CLI_PATH;
#else
    const char* env = std::getenv("HTGAME_CLI");
    return env ? env : "";
#endif
}

int run_command(const std::string& command) {
    const int raw = std::system(command.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json load_without_meta(const std::string& path) {
    json doc = json::parse(slurp(path));
    doc.erase("meta");
    return doc;
}

void criterion_cli_determinism(Check& check) {
    const std::string cli = cli_binary();
    check.expect(!cli.empty(), "cli binary path not provided");
    if (cli.empty()) return;

    std::string dir = "/tmp/htgame_acceptance_XXXXXX";
    check.expect(mkdtemp(dir.data()) != nullptr, "mkdtemp failed");

    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream out(dir + "/" + name, std::ios::binary);
        out << text;
    };
    write("simulate.json", R"({"version":1,"alphabet_size":2,"n":40,"c":1.0,"lambda":0.5,
      "distortion":{"budget":0.1},"threshold_mode":"asymptotic","p_x":[0.5,0.5],
      "p_y":[0.25,0.75],"trials":2000,"seed":31})");
    write("regions.json", R"({"version":1,"alphabet_size":2,"c":1.0,"lambda":0.1,
      "distortion":{"budget":0.05},"q":[0.5,0.5],"resolution":100})");
    write("exponents.json", R"({"version":1,"alphabet_size":2,"c":1.0,"lambda":0.05,
      "distortion":{"budget":0.05},"p_x":[0.5,0.5],"p_y":[0.1,0.9],"game":"tr"})");
    write("attack.json", R"({"version":1,"alphabet_size":2,"n":8,"c":1.0,"lambda":0.5,
      "distortion":{"budget":0.125},"y_counts":[2,6],"t_counts":[5,3]})");
    write("exact-pfn.json", R"({"version":1,"alphabet_size":2,"n":60,"c":1.0,"lambda":0.6,
      "distortion":{"budget":0.1},"p_x":[0.5,0.5],"p_y":[0.2,0.8]})");

    for (const std::string sub : {"simulate", "regions", "exponents", "attack", "exact-pfn"}) {
        for (const std::string threads : {"1", "4"}) {
            const std::string tag = sub + "_t" + threads;
            const std::string out_a = dir + "/" + tag + "_a.out";
            const std::string out_b = dir + "/" + tag + "_b.out";
            const std::string base = cli + " " + sub + " --config " + dir + "/" + sub +
                                     ".json --threads " + threads + " --out ";
            const int code_a = run_command(base + out_a + " 2>/dev/null");
            const int code_b = run_command(base + out_b + " 2>/dev/null");
            check.expect(code_a == 0 && code_b == 0, tag + ": nonzero exit");
            if (code_a != 0 || code_b != 0) continue;
            if (sub == "regions") {
                check.expect(slurp(out_a) == slurp(out_b), tag + ": csv differs");
                check.expect(load_without_meta(out_a + ".json") ==
                                 load_without_meta(out_b + ".json"),
                             tag + ": sidecar report differs");
            } else {
                check.expect(load_without_meta(out_a) == load_without_meta(out_b),
                             tag + ": report differs");
            }
        }
    }
}

}  // namespace

int main() {
    std::printf("acceptance suite\n================\n");
    run_criterion(1, "statistic identities and the pooled-type equality",
                  criterion_identities);
    run_criterion(2, "strict dominance of the divergence and ratio limits",
                  criterion_statistic_dominance);
    run_criterion(3, "type-level attack matches exhaustive sequence search",
                  criterion_attack_optimality);
    run_criterion(4, "exact false-positive probability meets the exponent bound",
                  criterion_fp_guarantee);
    run_criterion(5, "training region strictly contains the known-source region",
                  criterion_region_inclusion);
    run_criterion(6, "training exponent never exceeds the known-source exponent",
                  criterion_exponent_ordering);
    run_criterion(7, "exponents match the dense-grid oracle", criterion_exponent_oracle);
    run_criterion(8, "Monte Carlo matches exact enumeration within 3 sigma",
                  criterion_exact_vs_monte_carlo);
    run_criterion(9, "zero exponent and flat slope inside the region",
                  criterion_zero_exponent_inside);
    run_criterion(10, "independent-training bounds, forcing, and quantization",
                  criterion_version_a);
    run_criterion(11, "CLI outputs are byte-identical across reruns and threads",
                  criterion_cli_determinism);

    int failures = 0;
    for (const auto& outcome : outcomes) failures += outcome.pass ? 0 : 1;
    std::printf("================\n%d/%zu criteria passed (%d checks, %d failed)\n",
                static_cast<int>(outcomes.size()) - failures, outcomes.size(), checked,
                failed_checks);
    return failures == 0 ? 0 : 1;
}
