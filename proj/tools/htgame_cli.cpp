// Batch front-end: parses a JSON experiment config, runs one subcommand of
// the library, and writes machine-readable outputs (JSON reports, CSV grids).

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "htgame/exponents.hpp"
#include "htgame/montecarlo.hpp"
#include "htgame/regions.hpp"
#include "htgame/strategies.hpp"

using json = nlohmann::ordered_json;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_config = 2;
constexpr int exit_numeric = 3;
constexpr int exit_cap = 4;

struct CliOptions {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    std::optional<std::string> threshold_mode;
};

[[noreturn]] void config_fail(const std::string& path, const std::string& what) {
    throw htgame::config_error("config error at " + path + ": " + what);
}

const json& member(const json& j, const std::string& path, const std::string& key) {
    if (!j.is_object()) config_fail(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) config_fail(path + "/" + key, "missing required field");
    return *it;
}

const json* optional_member(const json& j, const std::string& key) {
    if (!j.is_object()) return nullptr;
    auto it = j.find(key);
    return it == j.end() ? nullptr : &(*it);
}

double get_number(const json& j, const std::string& path) {
    if (!j.is_number()) config_fail(path, "expected a number");
    return j.get<double>();
}

std::int64_t get_integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) config_fail(path, "expected an integer");
    return j.get<std::int64_t>();
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) config_fail(path, "expected a string");
    return j.get<std::string>();
}

bool get_bool(const json& j, const std::string& path) {
    if (!j.is_boolean()) config_fail(path, "expected a boolean");
    return j.get<bool>();
}

std::vector<double> get_real_vector(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) config_fail(path, "expected a nonempty array of numbers");
    std::vector<double> v;
    v.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        v.push_back(get_number(j[i], path + "/" + std::to_string(i)));
    }
    return v;
}

std::vector<std::int64_t> get_int_vector(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) config_fail(path, "expected a nonempty array of integers");
    std::vector<std::int64_t> v;
    v.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        v.push_back(get_integer(j[i], path + "/" + std::to_string(i)));
    }
    return v;
}

htgame::Pmf get_pmf(const json& j, const std::string& path, int alphabet_size) {
    std::vector<double> v = get_real_vector(j, path);
    if (static_cast<int>(v.size()) != alphabet_size) {
        config_fail(path, "expected " + std::to_string(alphabet_size) + " entries");
    }
    try {
        return htgame::Pmf(std::move(v));
    } catch (const htgame::invalid_distribution& e) {
        config_fail(path, e.what());
    }
}

// Parsed and fully-resolved experiment description; serialized back into
// every report so runs can be reproduced from their own output.
struct Experiment {
    int alphabet_size = 2;
    std::int64_t n = 0;
    double c = 1.0;
    std::optional<double> d;
    double lambda = 0.0;
    double budget = 0.0;
    std::optional<std::vector<std::vector<double>>> cost;
    htgame::ThresholdMode mode = htgame::ThresholdMode::finite_n;
    int threads = 1;
    std::optional<std::uint64_t> seed;

    std::optional<htgame::Pmf> p_x;
    std::optional<htgame::Pmf> p_y;
    std::optional<htgame::Pmf> q;
    std::optional<std::int64_t> trials;
    htgame::GameVersion game_version = htgame::GameVersion::shared_training;
    bool force_shared_training = false;
    std::vector<std::int64_t> n_schedule;
    std::optional<int> resolution;
    std::optional<std::string> game;  // exponents: "ks" | "tr" | "tr_a"
    std::optional<std::vector<std::int64_t>> y_counts;
    std::optional<std::vector<std::int64_t>> y_sequence;
    std::optional<std::vector<std::int64_t>> t_counts;
    std::optional<std::vector<std::int64_t>> t_attacker_counts;

    htgame::DistortionSpec distortion() const {
        if (cost) return htgame::DistortionSpec(*cost, budget);
        return htgame::DistortionSpec::hamming(htgame::Alphabet(alphabet_size), budget);
    }

    htgame::GameConfig game_config() const {
        return htgame::GameConfig(htgame::Alphabet(alphabet_size), n, c, lambda, distortion(),
                                  mode, d);
    }
};

Experiment parse_experiment(const json& doc, const CliOptions& cli, bool needs_n) {
    // A previous report is accepted as a config: its embedded config wins.
    const json& root =
        doc.is_object() && doc.contains("config") && doc["config"].is_object() &&
                doc["config"].contains("version")
            ? doc["config"]
            : doc;

    const std::int64_t version = get_integer(member(root, "", "version"), "/version");
    if (version != 1) config_fail("/version", "unsupported config version");

    Experiment ex;
    ex.alphabet_size =
        static_cast<int>(get_integer(member(root, "", "alphabet_size"), "/alphabet_size"));
    if (ex.alphabet_size < 2 || ex.alphabet_size > 64) {
        config_fail("/alphabet_size", "must be between 2 and 64");
    }
    if (needs_n) {
        ex.n = get_integer(member(root, "", "n"), "/n");
        if (ex.n <= 0) config_fail("/n", "must be positive");
    }
    if (const json* c = optional_member(root, "c")) {
        ex.c = get_number(*c, "/c");
        if (!(ex.c > 0.0)) config_fail("/c", "must be positive");
    }
    if (const json* d = optional_member(root, "d")) {
        ex.d = get_number(*d, "/d");
        if (!(*ex.d > 0.0)) config_fail("/d", "must be positive");
    }
    if (needs_n) {
        const double product = ex.c * static_cast<double>(ex.n);
        if (std::abs(product - std::round(product)) > 1e-9 * std::max(1.0, product)) {
            config_fail("/c", "c times n must be an integer, got " + std::to_string(product));
        }
        if (ex.d) {
            const double kd = *ex.d * static_cast<double>(ex.n);
            if (std::abs(kd - std::round(kd)) > 1e-9 * std::max(1.0, kd)) {
                config_fail("/d", "d times n must be an integer, got " + std::to_string(kd));
            }
        }
    }
    ex.lambda = get_number(member(root, "", "lambda"), "/lambda");
    if (!(ex.lambda > 0.0)) config_fail("/lambda", "must be positive");

    const json& dist = member(root, "", "distortion");
    ex.budget = get_number(member(dist, "/distortion", "budget"), "/distortion/budget");
    if (ex.budget < 0.0) config_fail("/distortion/budget", "must be nonnegative");
    if (const json* cost = optional_member(dist, "cost")) {
        if (!cost->is_array() || static_cast<int>(cost->size()) != ex.alphabet_size) {
            config_fail("/distortion/cost", "expected a square matrix matching the alphabet");
        }
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < cost->size(); ++i) {
            rows.push_back(
                get_real_vector((*cost)[i], "/distortion/cost/" + std::to_string(i)));
            if (static_cast<int>(rows.back().size()) != ex.alphabet_size) {
                config_fail("/distortion/cost/" + std::to_string(i),
                            "expected " + std::to_string(ex.alphabet_size) + " entries");
            }
        }
        ex.cost = std::move(rows);
    }

    std::string mode = "finite_n";
    if (const json* m = optional_member(root, "threshold_mode")) {
        mode = get_string(*m, "/threshold_mode");
    }
    if (cli.threshold_mode) mode = *cli.threshold_mode;
    if (mode == "finite_n" || mode == "finite-n") {
        ex.mode = htgame::ThresholdMode::finite_n;
    } else if (mode == "asymptotic") {
        ex.mode = htgame::ThresholdMode::asymptotic;
    } else {
        config_fail("/threshold_mode", "expected finite_n or asymptotic");
    }

    if (const json* t = optional_member(root, "threads")) {
        ex.threads = static_cast<int>(get_integer(*t, "/threads"));
    }
    if (cli.threads) ex.threads = *cli.threads;
    if (ex.threads < 1 || ex.threads > 256) config_fail("/threads", "must be in [1, 256]");

    if (const json* s = optional_member(root, "seed")) {
        if (!s->is_number_unsigned() && !s->is_number_integer()) {
            config_fail("/seed", "expected an integer");
        }
        ex.seed = s->get<std::uint64_t>();
    }
    if (cli.seed) ex.seed = *cli.seed;

    if (const json* p = optional_member(root, "p_x")) {
        ex.p_x = get_pmf(*p, "/p_x", ex.alphabet_size);
    }
    if (const json* p = optional_member(root, "p_y")) {
        ex.p_y = get_pmf(*p, "/p_y", ex.alphabet_size);
    }
    if (const json* p = optional_member(root, "q")) {
        ex.q = get_pmf(*p, "/q", ex.alphabet_size);
    }
    if (const json* t = optional_member(root, "trials")) {
        ex.trials = get_integer(*t, "/trials");
        if (*ex.trials < 1) config_fail("/trials", "must be positive");
    }
    if (const json* v = optional_member(root, "game_version")) {
        const std::string s = get_string(*v, "/game_version");
        if (s == "shared") {
            ex.game_version = htgame::GameVersion::shared_training;
        } else if (s == "independent") {
            ex.game_version = htgame::GameVersion::independent_training;
        } else {
            config_fail("/game_version", "expected shared or independent");
        }
    }
    if (const json* f = optional_member(root, "force_shared_training")) {
        ex.force_shared_training = get_bool(*f, "/force_shared_training");
    }
    if (const json* s = optional_member(root, "n_schedule")) {
        ex.n_schedule = get_int_vector(*s, "/n_schedule");
    }
    if (const json* r = optional_member(root, "resolution")) {
        ex.resolution = static_cast<int>(get_integer(*r, "/resolution"));
        if (*ex.resolution < 2) config_fail("/resolution", "must be at least 2");
    }
    if (const json* g = optional_member(root, "game")) {
        ex.game = get_string(*g, "/game");
        if (*ex.game != "ks" && *ex.game != "tr" && *ex.game != "tr_a") {
            config_fail("/game", "expected ks, tr or tr_a");
        }
    }
    if (const json* y = optional_member(root, "y_counts")) {
        ex.y_counts = get_int_vector(*y, "/y_counts");
    }
    if (const json* y = optional_member(root, "y_sequence")) {
        ex.y_sequence = get_int_vector(*y, "/y_sequence");
    }
    if (const json* t = optional_member(root, "t_counts")) {
        ex.t_counts = get_int_vector(*t, "/t_counts");
    }
    if (const json* t = optional_member(root, "t_attacker_counts")) {
        ex.t_attacker_counts = get_int_vector(*t, "/t_attacker_counts");
    }
    return ex;
}

json pmf_to_json(const htgame::Pmf& p) { return json(p.probs()); }

json resolved_config_json(const Experiment& ex, const std::string& command, bool needs_n) {
    json c;
    c["version"] = 1;
    c["command"] = command;
    c["alphabet_size"] = ex.alphabet_size;
    if (needs_n) c["n"] = ex.n;
    c["c"] = ex.c;
    if (ex.d) c["d"] = *ex.d;
    c["lambda"] = ex.lambda;
    json dist;
    dist["budget"] = ex.budget;
    if (ex.cost) {
        dist["cost"] = *ex.cost;
    } else {
        const htgame::DistortionSpec spec = ex.distortion();
        std::vector<std::vector<double>> rows;
        for (int i = 0; i < spec.size(); ++i) rows.push_back(spec.cost_matrix()[i]);
        dist["cost"] = rows;
    }
    c["distortion"] = dist;
    c["threshold_mode"] =
        ex.mode == htgame::ThresholdMode::finite_n ? "finite_n" : "asymptotic";
    c["threads"] = ex.threads;
    if (ex.seed) c["seed"] = *ex.seed;
    if (ex.p_x) c["p_x"] = pmf_to_json(*ex.p_x);
    if (ex.p_y) c["p_y"] = pmf_to_json(*ex.p_y);
    if (ex.q) c["q"] = pmf_to_json(*ex.q);
    if (ex.trials) c["trials"] = *ex.trials;
    if (ex.game) c["game"] = *ex.game;
    if (ex.resolution) c["resolution"] = *ex.resolution;
    if (!ex.n_schedule.empty()) c["n_schedule"] = ex.n_schedule;
    if (ex.y_counts) c["y_counts"] = *ex.y_counts;
    if (ex.y_sequence) c["y_sequence"] = *ex.y_sequence;
    if (ex.t_counts) c["t_counts"] = *ex.t_counts;
    if (ex.t_attacker_counts) c["t_attacker_counts"] = *ex.t_attacker_counts;
    if (command == "simulate") {
        c["game_version"] = ex.game_version == htgame::GameVersion::shared_training
                                ? "shared"
                                : "independent";
        c["force_shared_training"] = ex.force_shared_training;
    }
    return c;
}

json meta_json() {
    json m;
    char buf[64];
    const std::time_t now = std::time(nullptr);
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    m["timestamp"] = buf;
    char host[256] = "unknown";
    if (gethostname(host, sizeof(host)) != 0) std::snprintf(host, sizeof(host), "unknown");
    m["host"] = host;
    return m;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw htgame::config_error("cannot open output path " + path);
    out << text;
    if (!out) throw htgame::config_error("failed writing output " + path);
}

void emit_report(const CliOptions& cli, const std::string& command, const Experiment& ex,
                 bool needs_n, json result) {
    json report;
    report["version"] = 1;
    report["command"] = command;
    report["config"] = resolved_config_json(ex, command, needs_n);
    report["result"] = std::move(result);
    report["meta"] = meta_json();
    const std::string text = report.dump(2) + "\n";
    if (cli.out_path.empty()) {
        std::cout << text;
    } else {
        write_text_file(cli.out_path, text);
    }
}

// --- subcommands ---

int run_simulate(const CliOptions& cli, const json& doc) {
    Experiment ex = parse_experiment(doc, cli, true);
    if (!ex.p_x) config_fail("/p_x", "missing required field");
    if (!ex.p_y) config_fail("/p_y", "missing required field");
    if (!ex.trials) config_fail("/trials", "missing required field");
    if (!ex.seed) {
        config_fail("/seed", "no seed in config and no --seed flag; refusing to run");
    }
    htgame::SimulationSpec spec{ex.game_config(), *ex.p_x,  *ex.p_y,
                                *ex.trials,       *ex.seed, ex.game_version,
                                ex.force_shared_training,   ex.n_schedule,
                                ex.threads,       true};
    const htgame::SimulationReport report = htgame::simulate_game(spec);

    json r;
    r["trials"] = report.trials;
    r["p_fn_hat"] = report.p_fn_hat;
    r["p_fp_hat"] = report.p_fp_hat;
    r["se_fn"] = report.se_fn;
    r["se_fp"] = report.se_fp;
    r["theory_exponent"] = report.theory_exponent;
    if (report.empirical) {
        json slope;
        slope["slope"] = report.empirical->slope;
        slope["intercept"] = report.empirical->intercept;
        slope["theory_exponent"] = report.empirical->theory_exponent;
        json points = json::array();
        for (const auto& p : report.empirical->points) {
            json e;
            e["n"] = p.n;
            e["log2_p_fn"] = p.log2_p_fn == -std::numeric_limits<double>::infinity()
                                 ? json(nullptr)
                                 : json(p.log2_p_fn);
            e["exponent"] = p.exponent;
            e["exact"] = p.exact;
            e["dropped"] = p.dropped;
            points.push_back(e);
        }
        slope["points"] = points;
        r["empirical"] = slope;
    }
    emit_report(cli, "simulate", ex, true, std::move(r));
    return exit_ok;
}

int run_regions(const CliOptions& cli, const json& doc) {
    Experiment ex = parse_experiment(doc, cli, false);
    if (!ex.q) config_fail("/q", "missing required field");
    if (!ex.resolution) config_fail("/resolution", "missing required field");
    htgame::RegionQuery query{*ex.q, ex.lambda, ex.distortion(), ex.c,
                              htgame::Game::training};
    const htgame::RegionGrid grid = htgame::region_grid(query, *ex.resolution, ex.threads);

    std::ostringstream csv;
    const int k = ex.alphabet_size;
    for (int a = 0; a < k; ++a) csv << "p" << a << ",";
    csv << "ks_member,tr_member\n";
    csv.precision(12);
    for (const auto& point : grid.points) {
        for (int a = 0; a < k; ++a) csv << point.p[a] << ",";
        csv << (point.ks_member ? 1 : 0) << "," << (point.tr_member ? 1 : 0) << "\n";
    }
    if (cli.out_path.empty()) config_fail("/out", "regions needs --out for the CSV grid");
    write_text_file(cli.out_path, csv.str());

    json r;
    r["csv_path"] = cli.out_path;
    r["points"] = grid.points.size();
    r["both"] = grid.both_count;
    r["tr_only"] = grid.tr_only_count;
    r["neither"] = grid.neither_count;
    r["ks_only"] = 0;
    CliOptions report_cli = cli;
    report_cli.out_path = cli.out_path + ".json";
    emit_report(report_cli, "regions", ex, false, std::move(r));
    return exit_ok;
}

json exponent_result_json(const htgame::ExponentResult& e) {
    json r;
    r["value"] = e.value;
    r["minimizer_p"] = pmf_to_json(e.minimizer_p);
    if (e.minimizer_q) r["minimizer_q"] = pmf_to_json(*e.minimizer_q);
    r["iterations"] = e.iterations;
    r["gap"] = e.gap;
    return r;
}

int run_exponents(const CliOptions& cli, const json& doc) {
    Experiment ex = parse_experiment(doc, cli, false);
    if (!ex.game) config_fail("/game", "missing required field");
    if (!ex.p_x) config_fail("/p_x", "missing required field");
    if (!ex.p_y) config_fail("/p_y", "missing required field");

    json r;
    if (*ex.game == "ks") {
        r = exponent_result_json(
            htgame::fn_exponent_known_source(*ex.p_x, *ex.p_y, ex.lambda, ex.distortion()));
    } else if (*ex.game == "tr") {
        r = exponent_result_json(htgame::fn_exponent_training(*ex.p_x, *ex.p_y, ex.lambda,
                                                              ex.distortion(), ex.c));
    } else {
        const double d_ratio = ex.d.value_or(ex.c);
        const htgame::ExponentBounds bounds = htgame::fn_exponent_independent_bounds(
            *ex.p_x, *ex.p_y, ex.lambda, ex.distortion(), ex.c, d_ratio);
        r["lower"] = bounds.lower;
        r["upper"] = bounds.upper;
        r["lower_is_relaxed"] = bounds.lower_is_relaxed;
        r["upper_detail"] = exponent_result_json(bounds.upper_detail);
    }
    emit_report(cli, "exponents", ex, false, std::move(r));
    return exit_ok;
}

int run_attack(const CliOptions& cli, const json& doc) {
    Experiment ex = parse_experiment(doc, cli, true);
    if (!ex.t_counts) config_fail("/t_counts", "missing required field");
    if (!ex.y_counts && !ex.y_sequence) {
        config_fail("/y_counts", "need y_counts or y_sequence");
    }
    const htgame::GameConfig config = ex.game_config();

    htgame::EmpiricalType training(*ex.t_counts);
    htgame::EmpiricalType y = ex.y_counts
                                  ? htgame::EmpiricalType(*ex.y_counts)
                                  : [&] {
                                        std::vector<int> symbols;
                                        for (std::int64_t s : *ex.y_sequence) {
                                            symbols.push_back(static_cast<int>(s));
                                        }
                                        return htgame::Sequence(
                                                   std::move(symbols),
                                                   htgame::Alphabet(ex.alphabet_size))
                                            .type();
                                    }();

    htgame::AttackResult attack =
        ex.t_attacker_counts
            ? htgame::attack_with_estimate(y, htgame::EmpiricalType(*ex.t_attacker_counts),
                                           config)
            : htgame::optimal_attack(y, training, config);
    if (ex.t_attacker_counts) {
        attack.succeeded =
            htgame::decide_training(attack.output_type, training, config).accept;
    }

    json r;
    r["z_counts"] = attack.output_type.counts();
    r["statistic"] = attack.statistic;
    r["succeeded"] = attack.succeeded;
    r["threshold"] = htgame::acceptance_threshold(config, htgame::Game::training);
    r["plan"] = attack.plan.flow;
    r["plan_cost"] = attack.plan.total_cost;
    emit_report(cli, "attack", ex, true, std::move(r));
    return exit_ok;
}

int run_exact_pfn(const CliOptions& cli, const json& doc) {
    Experiment ex = parse_experiment(doc, cli, true);
    if (!ex.p_x) config_fail("/p_x", "missing required field");
    if (!ex.p_y) config_fail("/p_y", "missing required field");
    const htgame::GameConfig config = ex.game_config();
    const double log2_pfn =
        htgame::exact_false_negative_log2_prob(config, *ex.p_x, *ex.p_y, ex.threads);
    json r;
    r["p_fn"] = log2_pfn == -std::numeric_limits<double>::infinity() ? 0.0
                                                                     : std::exp2(log2_pfn);
    r["log2_p_fn"] = log2_pfn == -std::numeric_limits<double>::infinity()
                         ? json(nullptr)
                         : json(log2_pfn);
    emit_report(cli, "exact-pfn", ex, true, std::move(r));
    return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"adversarial hypothesis testing games on empirical distributions"};
    app.require_subcommand(1);

    CliOptions cli;
    std::uint64_t seed_value = 0;
    int threads_value = 0;
    std::string mode_value;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", cli.config_path, "experiment config (JSON)")->required();
        sub->add_option("--out", cli.out_path, "output path (stdout when omitted)");
        sub->add_option("--seed", seed_value, "seed override")->each([&](const std::string&) {
            cli.seed = seed_value;
        });
        sub->add_option("--threads", threads_value, "parallelism degree")
            ->each([&](const std::string&) { cli.threads = threads_value; });
        sub->add_option("--threshold-mode", mode_value, "finite-n or asymptotic")
            ->each([&](const std::string&) { cli.threshold_mode = mode_value; });
    };

    CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo game simulation");
    CLI::App* regions = app.add_subcommand("regions", "indistinguishability region grid");
    CLI::App* exponents = app.add_subcommand("exponents", "false-negative error exponents");
    CLI::App* attack = app.add_subcommand("attack", "single-instance optimal attack");
    CLI::App* exact_pfn = app.add_subcommand("exact-pfn", "exact false-negative probability");
    for (CLI::App* sub : {simulate, regions, exponents, attack, exact_pfn}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_config;
    }

    try {
        std::ifstream in(cli.config_path);
        if (!in) {
            std::cerr << "config error at /: cannot read " << cli.config_path << "\n";
            return exit_config;
        }
        json doc;
        try {
            doc = json::parse(in);
        } catch (const json::parse_error& e) {
            std::cerr << "config error at /: invalid JSON: " << e.what() << "\n";
            return exit_config;
        }

        if (simulate->parsed()) return run_simulate(cli, doc);
        if (regions->parsed()) return run_regions(cli, doc);
        if (exponents->parsed()) return run_exponents(cli, doc);
        if (attack->parsed()) return run_attack(cli, doc);
        if (exact_pfn->parsed()) return run_exact_pfn(cli, doc);
        std::cerr << "no subcommand selected\n";
        return exit_config;
    } catch (const htgame::no_convergence& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return exit_numeric;
    } catch (const htgame::enumeration_too_large& e) {
        std::cerr << "enumeration error: " << e.what() << "\n";
        return exit_cap;
    } catch (const htgame::config_error& e) {
        std::cerr << e.what() << "\n";
        return exit_config;
    } catch (const htgame::infeasible_transport& e) {
        std::cerr << "config error at /: " << e.what() << "\n";
        return exit_config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
