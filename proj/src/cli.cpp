#include "synpat/cli.hpp"

#include "synpat/baseline.hpp"
#include "synpat/bench.hpp"
#include "synpat/errors.hpp"
#include "synpat/mining.hpp"
#include "synpat/significance.hpp"
#include "synpat/simulator.hpp"
#include "synpat/spike_data.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>

namespace synpat {

namespace {

std::string fmt(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

RateModel parse_rate_model(const std::string& name) {
    if (name == "known") return RateModel::known;
    if (name == "product") return RateModel::product;
    return RateModel::mean;
}

struct MineArgs {
    std::string input;
    Tick expiry{0};
    double delta_t{0.001};
    std::optional<std::uint64_t> threshold;
    std::optional<double> epsilon;
    std::optional<std::size_t> max_level;
    std::string format{"tsv"};
    bool strict{false};
    std::string rate_model{"mean"};
    std::optional<double> null_rate;
    unsigned workers{1};
};

int cmd_mine(const MineArgs& a, std::ostream& out) {
    if (a.threshold.has_value() == a.epsilon.has_value()) {
        throw config_error("give exactly one of --threshold or --epsilon");
    }
    const auto seq = parse_spike_file(std::filesystem::path(a.input), a.delta_t);
    MiningConfig cfg;
    cfg.expiry = a.expiry;
    cfg.max_level = a.max_level;
    cfg.rule = a.strict ? SpanRule::strict : SpanRule::inclusive;
    cfg.workers = a.workers;
    if (a.threshold) {
        cfg.threshold = FixedThreshold{*a.threshold};
    } else {
        AutoThreshold autocfg{*a.epsilon, parse_rate_model(a.rate_model), a.null_rate.value_or(0.0)};
        if (autocfg.rates == RateModel::known && !a.null_rate) {
            throw config_error("--rate-model known needs --null-rate");
        }
        cfg.threshold = autocfg;
    }
    auto result = mine(seq, cfg);
    auto& eps = result.episodes;
    std::sort(eps.begin(), eps.end(), [](const FrequentEpisode& x, const FrequentEpisode& y) {
        if (x.episode.size() != y.episode.size()) return x.episode.size() > y.episode.size();
        if (x.count != y.count) return x.count > y.count;
        return x.episode < y.episode;
    });

    if (a.format == "json") {
        auto rows = nlohmann::json::array();
        for (const auto& f : eps) {
            rows.push_back({{"episode", f.episode.to_string(seq)},
                            {"types", f.episode.types()},
                            {"size", f.episode.size()},
                            {"count", f.count},
                            {"threshold_used", f.threshold}});
        }
        auto levels = nlohmann::json::array();
        for (const auto& l : result.levels) {
            levels.push_back({{"level", l.level}, {"candidates", l.candidates}, {"frequent", l.frequent}});
        }
        out << nlohmann::json{{"episodes", rows}, {"levels", levels}}.dump(2) << '\n';
    } else {
        out << "episode\tsize\tcount\tthreshold_used\n";
        for (const auto& f : eps) {
            out << f.episode.to_string(seq) << '\t' << f.episode.size() << '\t' << f.count << '\t'
                << f.threshold << '\n';
        }
    }
    return exit_ok;
}

struct ThresholdArgs {
    Tick length{0};
    Tick window{1};
    std::size_t n{1};
    std::vector<double> rho;
    double delta_t{0.001};
    double epsilon{0.05};
    std::string format{"tsv"};
};

int cmd_threshold(const ThresholdArgs& a, std::ostream& out) {
    SignificanceParams params;
    params.length = a.length;
    params.window = a.window;
    params.size = a.n;
    params.rates_hz = a.rho;
    params.delta_t = a.delta_t;
    params.epsilon = a.epsilon;
    const auto r = evaluate(params);
    const auto min_count = r.threshold <= 0.0 ? 0.0 : std::ceil(r.threshold - 1e-9 * std::max(1.0, r.threshold));
    if (a.format == "json") {
        out << nlohmann::json{{"p", r.p},
                              {"F", r.mean},
                              {"V", r.variance},
                              {"k", r.k},
                              {"threshold", r.threshold},
                              {"min_count", static_cast<std::uint64_t>(min_count)}}
                   .dump(2)
            << '\n';
    } else {
        out << "p\tF\tV\tk\tthreshold\tmin_count\n"
            << fmt(r.p) << '\t' << fmt(r.mean) << '\t' << fmt(r.variance) << '\t' << r.k << '\t'
            << fmt(r.threshold) << '\t' << static_cast<std::uint64_t>(min_count) << '\n';
    }
    return exit_ok;
}

struct SimulateArgs {
    std::string config;
    std::string output;
    std::optional<std::uint64_t> seed;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
    auto cfg = parse_sim_config(std::filesystem::path(a.config));
    if (a.seed) cfg.seed = *a.seed;
    validate(cfg);
    const auto seq = generate(cfg);
    const auto truth = embed_truth(cfg);
    write_spike_file(std::filesystem::path(a.output), seq);
    const auto truth_path = a.output + ".truth.tsv";
    std::ofstream t(truth_path);
    if (!t) throw std::runtime_error("cannot write " + truth_path);
    write_truth(t, truth);
    out << "wrote " << seq.size() << " events to " << a.output << " and truth to " << truth_path << '\n';
    return exit_ok;
}

struct BaselineArgs {
    std::string input;
    Tick expiry{0};
    double delta_t{0.001};
    SurrogateConfig surrogate;
    std::optional<Tick> jitter;
    std::size_t max_size{8};
    std::string format{"tsv"};
    bool all{false};
};

int cmd_baseline(BaselineArgs a, std::ostream& out) {
    if (a.expiry < 1) throw config_error("--expiry must be at least 1");
    const auto seq = parse_spike_file(std::filesystem::path(a.input), a.delta_t);
    a.surrogate.jitter = a.jitter;
    EnumerateOptions opts;
    opts.max_size = a.max_size;
    const auto result = run_baseline(seq, a.expiry, a.surrogate, opts);
    if (a.format == "json") {
        auto rows = nlohmann::json::array();
        for (const auto& o : result.outcomes) {
            if (!a.all && !o.significant) continue;
            rows.push_back({{"pattern", o.pattern.to_string(seq)},
                            {"size", o.pattern.size()},
                            {"observed_mean", o.observed_mean},
                            {"quantile", o.quantile},
                            {"significant", o.significant}});
        }
        out << nlohmann::json{{"patterns_counted", result.patterns.size()}, {"patterns", rows}}.dump(2) << '\n';
    } else {
        out << "pattern\tsize\tobserved_mean\tsurrogate_quantile\tsignificant\n";
        for (const auto& o : result.outcomes) {
            if (!a.all && !o.significant) continue;
            out << o.pattern.to_string(seq) << '\t' << o.pattern.size() << '\t' << fmt(o.observed_mean)
                << '\t' << fmt(o.quantile) << '\t' << (o.significant ? "yes" : "no") << '\n';
        }
    }
    return exit_ok;
}

struct BenchArgs {
    std::vector<std::string> vary;
    BenchSetup setup;
    std::optional<std::size_t> runs;
    std::optional<std::size_t> pe_runs;
    std::optional<std::size_t> baseline_runs;
    std::string methods{"pe,baseline"};
    std::string patterns{"3,5,7"};
    std::string pe_rates{"product"};
    std::string format{"tsv"};
};

int cmd_bench(BenchArgs a, std::ostream& out) {
    if (a.vary.size() < 2) throw config_error("--vary <axis> <value>...");
    const auto axis = parse_bench_axis(a.vary.front());
    std::vector<double> values;
    for (auto it = a.vary.begin() + 1; it != a.vary.end(); ++it) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(it->data(), it->data() + it->size(), v);
        if (ec != std::errc{} || ptr != it->data() + it->size()) {
            throw config_error("invalid grid value `" + *it + "`");
        }
        values.push_back(v);
    }
    auto& s = a.setup;
    if (a.runs) s.pe_runs = s.baseline_runs = *a.runs;
    if (a.pe_runs) s.pe_runs = *a.pe_runs;
    if (a.baseline_runs) s.baseline_runs = *a.baseline_runs;
    s.run_pe = s.run_baseline = false;
    for (std::size_t pos = 0; pos <= a.methods.size();) {
        const auto comma = a.methods.find(',', pos);
        const auto item = a.methods.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        (parse_bench_method(item) == BenchMethod::pe ? s.run_pe : s.run_baseline) = true;
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    s.pattern_sizes.clear();
    if (!a.patterns.empty() && a.patterns != "none") {
        for (std::size_t pos = 0; pos <= a.patterns.size();) {
            const auto comma = a.patterns.find(',', pos);
            const auto item = a.patterns.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            std::size_t size = 0;
            auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), size);
            if (ec != std::errc{} || ptr != item.data() + item.size() || size < 1) {
                throw config_error("invalid pattern size `" + item + "`");
            }
            s.pattern_sizes.push_back(size);
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
    }
    s.pe_rates = parse_rate_model(a.pe_rates);
    const auto report = run_bench(s, axis, values);
    if (a.format == "json") {
        write_bench_json(out, report);
    } else {
        write_bench_tsv(out, report);
        write_bench_summary(out, report);
    }
    return exit_ok;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Synchronous-pattern mining for multi-source event streams", "synpat"};
    app.require_subcommand(1);
    const auto formats = CLI::IsMember({"tsv", "json"});

    MineArgs mine_args;
    auto* mine_cmd = app.add_subcommand("mine", "Mine frequent parallel episodes from a spike file");
    mine_cmd->add_option("input", mine_args.input, "Spike file")->required();
    mine_cmd->add_option("--expiry", mine_args.expiry, "Expiry T in ticks")->required()->check(CLI::PositiveNumber);
    mine_cmd->add_option("--delta-t", mine_args.delta_t, "Seconds per tick")->check(CLI::PositiveNumber);
    auto* thr = mine_cmd->add_option("--threshold", mine_args.threshold, "Fixed minimum count");
    auto* eps = mine_cmd->add_option("--epsilon", mine_args.epsilon, "Type-I error for the automatic threshold");
    thr->excludes(eps);
    mine_cmd->add_option("--max-level", mine_args.max_level, "Largest episode size");
    mine_cmd->add_option("--format", mine_args.format)->check(formats);
    mine_cmd->add_flag("--strict-span", mine_args.strict, "Require span < T instead of span <= T");
    mine_cmd->add_option("--rate-model", mine_args.rate_model, "Rates behind the automatic threshold")
        ->check(CLI::IsMember({"mean", "product", "known"}));
    mine_cmd->add_option("--null-rate", mine_args.null_rate, "Background rate in Hz (known model, product singletons)")
        ->check(CLI::NonNegativeNumber);
    mine_cmd->add_option("--workers", mine_args.workers, "Counting threads per level");

    ThresholdArgs thr_args;
    auto* thr_cmd = app.add_subcommand("threshold", "Expected count, variance and Chebyshev threshold");
    thr_cmd->footer(
        "F(L) = (1-p) F(L-1) + p (1 + F(L-T)), G(L) = (1-p) G(L-1) + p (1 + G(L-T) + 2 F(L-T)),\n"
        "F = G = 0 for L < T; V = G - F^2; threshold = F + k sqrt(V) with k^2 >= 1/epsilon.\n"
        "The jump term uses window T in both recurrences. T here is the model window; a\n"
        "miner run with --expiry E (span <= E) corresponds to T = E + 1.");
    thr_cmd->add_option("--L", thr_args.length, "Data length in ticks")->required();
    thr_cmd->add_option("--T", thr_args.window, "Window in ticks")->required();
    thr_cmd->add_option("--n", thr_args.n, "Episode size")->required();
    thr_cmd->add_option("--rho", thr_args.rho, "Rate in Hz (one shared, or one per constituent)")->required();
    thr_cmd->add_option("--delta-t", thr_args.delta_t, "Seconds per tick");
    thr_cmd->add_option("--epsilon", thr_args.epsilon, "Type-I error bound")->required();
    thr_cmd->add_option("--format", thr_args.format)->check(formats);

    SimulateArgs sim_args;
    auto* sim_cmd = app.add_subcommand("simulate", "Generate a spike file from a simulation config");
    sim_cmd->add_option("config", sim_args.config, "Simulation config (key = value)")->required();
    sim_cmd->add_option("-o,--output", sim_args.output, "Spike file to write")->required();
    sim_cmd->add_option("--seed", sim_args.seed, "Overrides the config seed");

    BaselineArgs base_args;
    auto* base_cmd = app.add_subcommand("baseline", "All-occurrence counting with jitter surrogates");
    base_cmd->add_option("input", base_args.input, "Spike file")->required();
    base_cmd->add_option("--expiry", base_args.expiry, "Expiry T in ticks")->required();
    base_cmd->add_option("--delta-t", base_args.delta_t, "Seconds per tick");
    base_cmd->add_option("--trials", base_args.surrogate.n_trials, "Number of trials");
    base_cmd->add_option("--surrogates", base_args.surrogate.n_surrogates, "Surrogates per trial");
    base_cmd->add_option("--jitter", base_args.jitter, "Jitter half-width in ticks (default 2T)");
    base_cmd->add_option("--alpha", base_args.surrogate.alpha, "Significance level");
    base_cmd->add_option("--max-size", base_args.max_size, "Largest pattern size (0 = no cap)");
    base_cmd->add_option("--seed", base_args.surrogate.seed);
    base_cmd->add_option("--format", base_args.format)->check(formats);
    base_cmd->add_flag("--all", base_args.all, "Also list non-significant patterns");

    BenchArgs bench_args;
    auto* bench_cmd = app.add_subcommand("bench", "Runtime / false-positive sweep of PE vs baseline");
    bench_cmd->add_option("--vary", bench_args.vary, "<length|rate|neurons|expiry> <values...>")->required();
    bench_cmd->add_option("--runs", bench_args.runs, "Runs per grid point for both methods");
    bench_cmd->add_option("--pe-runs", bench_args.pe_runs, "Runs per grid point for PE (default 100)");
    bench_cmd->add_option("--baseline-runs", bench_args.baseline_runs, "Runs per grid point for the baseline (default 20)");
    bench_cmd->add_option("--methods", bench_args.methods, "Comma list of pe, baseline");
    bench_cmd->add_option("--length", bench_args.setup.length_ticks, "Ticks");
    bench_cmd->add_option("--rate", bench_args.setup.rate_hz, "Background rate in Hz");
    bench_cmd->add_option("--neurons", bench_args.setup.num_neurons);
    bench_cmd->add_option("--expiry", bench_args.setup.expiry);
    bench_cmd->add_option("--delta-t", bench_args.setup.delta_t);
    bench_cmd->add_option("--epsilon", bench_args.setup.epsilon);
    bench_cmd->add_option("--pe-rates", bench_args.pe_rates,
                          "Rates behind the PE threshold: product, known or mean; --rate is the known rate")
        ->check(CLI::IsMember({"known", "mean", "product"}));
    bench_cmd->add_option("--patterns", bench_args.patterns, "Embedded pattern sizes, e.g. 3,5,7 (or none)");
    bench_cmd->add_option("--embed-rate", bench_args.setup.embed_rate_hz, "Instances per second per pattern");
    bench_cmd->add_option("--surrogates", bench_args.setup.surrogates);
    bench_cmd->add_option("--trials", bench_args.setup.trials);
    bench_cmd->add_option("--max-size", bench_args.setup.baseline_max_size);
    bench_cmd->add_option("--seed", bench_args.setup.seed);
    bench_cmd->add_option("--format", bench_args.format)->check(formats);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back(); // program name
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return exit_usage;
    }

    try {
        if (*mine_cmd) return cmd_mine(mine_args, out);
        if (*thr_cmd) return cmd_threshold(thr_args, out);
        if (*sim_cmd) return cmd_simulate(sim_args, out);
        if (*base_cmd) return cmd_baseline(base_args, out);
        if (*bench_cmd) return cmd_bench(bench_args, out);
    } catch (const parse_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const config_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const invalid_probability& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return exit_internal;
    }
    return exit_usage;
}

} // namespace synpat
