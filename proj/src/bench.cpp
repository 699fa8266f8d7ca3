#include "synpat/bench.hpp"

#include "synpat/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>

namespace synpat {

std::string_view to_string(BenchAxis axis) {
    switch (axis) {
    case BenchAxis::length: return "length";
    case BenchAxis::rate: return "rate";
    case BenchAxis::neurons: return "neurons";
    case BenchAxis::expiry: return "expiry";
    }
    return "?";
}

std::string_view to_string(BenchMethod method) {
    return method == BenchMethod::pe ? "PE" : "baseline";
}

BenchAxis parse_bench_axis(std::string_view text) {
    for (auto a : {BenchAxis::length, BenchAxis::rate, BenchAxis::neurons, BenchAxis::expiry}) {
        if (text == to_string(a)) return a;
    }
    throw config_error("unknown sweep axis `" + std::string(text) + "`");
}

BenchMethod parse_bench_method(std::string_view text) {
    if (text == "PE" || text == "pe") return BenchMethod::pe;
    if (text == "baseline") return BenchMethod::baseline;
    throw config_error("unknown method `" + std::string(text) + "`");
}

SimConfig bench_sim_config(const BenchSetup& setup, std::uint64_t run_seed) {
    SimConfig cfg;
    cfg.num_neurons = setup.num_neurons;
    cfg.length_ticks = setup.length_ticks;
    cfg.delta_t = setup.delta_t;
    cfg.base_rates_hz = {setup.rate_hz};
    cfg.seed = run_seed;
    EventTypeId next = 0;
    for (auto size : setup.pattern_sizes) {
        if (next + size > setup.num_neurons) {
            throw config_error("embedded patterns need more neurons than num_neurons");
        }
        std::vector<EventTypeId> types(size);
        for (auto& t : types) t = next++;
        EmbedSpec spec;
        spec.pattern = Episode(std::move(types));
        spec.jitter_span = std::min(setup.expiry, setup.max_jitter);
        spec.rate_hz = setup.embed_rate_hz;
        cfg.embedded.push_back(std::move(spec));
    }
    return cfg;
}

BenchSetup at_grid_point(BenchSetup setup, BenchAxis axis, double value) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw config_error("grid values must be positive");
    }
    const auto as_int = [value] {
        if (value != std::floor(value)) throw config_error("grid value must be an integer");
        return static_cast<Tick>(value);
    };
    switch (axis) {
    case BenchAxis::length: setup.length_ticks = as_int(); break;
    case BenchAxis::rate: setup.rate_hz = value; break;
    case BenchAxis::neurons: setup.num_neurons = static_cast<std::size_t>(as_int()); break;
    case BenchAxis::expiry: setup.expiry = as_int(); break;
    }
    return setup;
}

RunScore score(const std::vector<Episode>& reported, const std::vector<EmbeddedTruth>& truth) {
    RunScore s;
    for (const auto& e : reported) {
        if (e.size() < 2) continue;
        ++s.reported;
        const bool inside = std::any_of(truth.begin(), truth.end(),
                                        [&](const EmbeddedTruth& t) { return e.is_subset_of(t.pattern); });
        if (!inside) ++s.false_positives;
    }
    for (const auto& t : truth) {
        if (std::find(reported.begin(), reported.end(), t.pattern) != reported.end()) ++s.recovered;
    }
    return s;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

} // namespace

RunScore run_pe_once(const EventSequence& seq, const BenchSetup& setup,
                     const std::vector<EmbeddedTruth>& truth) {
    MiningConfig cfg;
    cfg.expiry = setup.expiry;
    cfg.threshold = AutoThreshold{setup.epsilon, setup.pe_rates, setup.rate_hz};
    const auto start = Clock::now();
    const auto result = mine(seq, cfg);
    const double elapsed = seconds_since(start);

    std::vector<Episode> reported;
    for (const auto& f : result.episodes) reported.push_back(f.episode);
    auto s = score(reported, truth);
    s.runtime_s = elapsed;
    return s;
}

RunScore run_baseline_once(const EventSequence& seq, const BenchSetup& setup,
                           const std::vector<EmbeddedTruth>& truth) {
    SurrogateConfig cfg;
    cfg.n_surrogates = setup.surrogates;
    cfg.n_trials = setup.trials;
    cfg.alpha = setup.alpha;
    cfg.seed = setup.seed;
    EnumerateOptions opts;
    opts.max_size = setup.baseline_max_size;
    const auto start = Clock::now();
    const auto result = run_baseline(seq, setup.expiry, cfg, opts);
    const double elapsed = seconds_since(start);

    std::vector<Episode> reported;
    for (const auto& o : result.outcomes) {
        if (o.significant) reported.push_back(o.pattern);
    }
    auto s = score(reported, truth);
    s.runtime_s = elapsed;
    return s;
}

BenchReport run_bench(const BenchSetup& setup, BenchAxis axis, const std::vector<double>& values) {
    if (values.empty()) throw config_error("empty sweep grid");
    BenchReport report;
    for (double value : values) {
        const auto point = at_grid_point(setup, axis, value);
        const auto runs = std::max(point.run_pe ? point.pe_runs : 0,
                                   point.run_baseline ? point.baseline_runs : 0);
        const auto embedded = point.pattern_sizes.size();

        std::map<BenchMethod, std::vector<RunScore>> scores;
        for (std::size_t r = 0; r < runs; ++r) {
            const auto sim = bench_sim_config(point, point.seed + r);
            const auto seq = generate(sim);
            const auto truth = embed_truth(sim);
            if (point.run_pe && r < point.pe_runs) {
                scores[BenchMethod::pe].push_back(run_pe_once(seq, point, truth));
            }
            if (point.run_baseline && r < point.baseline_runs) {
                scores[BenchMethod::baseline].push_back(run_baseline_once(seq, point, truth));
            }
        }
        for (const auto& [method, list] : scores) {
            BenchRow row;
            row.axis = axis;
            row.value = value;
            row.method = method;
            row.runs = list.size();
            row.patterns_embedded = embedded;
            std::size_t reported = 0, fp = 0, recovered = 0;
            double total_time = 0.0;
            for (const auto& s : list) {
                total_time += s.runtime_s;
                reported += s.reported;
                fp += s.false_positives;
                recovered += s.recovered;
            }
            const auto n = static_cast<double>(list.size());
            row.mean_runtime_s = total_time / n;
            row.patterns_found = static_cast<double>(reported) / n;
            row.false_positive_rate = reported ? static_cast<double>(fp) / static_cast<double>(reported) : 0.0;
            if (embedded) {
                row.recall = static_cast<double>(recovered) / (n * static_cast<double>(embedded));
            }
            report.rows.push_back(row);
        }
    }
    return report;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string fmt_value(double v) {
    if (v == std::floor(v) && std::fabs(v) < 1e15) return std::to_string(static_cast<std::int64_t>(v));
    return fmt(v);
}

const char* const tsv_header =
    "axis\tvalue\tmethod\truns\tmean_runtime_s\tfpr\tpatterns_found\tpatterns_embedded\trecall";

template <typename T>
T field(std::string_view s, std::size_t lineno) {
    T v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw parse_error(lineno, "malformed field `" + std::string(s) + "`");
    }
    return v;
}

} // namespace

void write_bench_tsv(std::ostream& out, const BenchReport& report) {
    out << tsv_header << '\n';
    for (const auto& r : report.rows) {
        out << to_string(r.axis) << '\t' << fmt_value(r.value) << '\t' << to_string(r.method) << '\t'
            << r.runs << '\t' << fmt(r.mean_runtime_s) << '\t' << fmt(r.false_positive_rate) << '\t'
            << fmt(r.patterns_found) << '\t' << r.patterns_embedded << '\t'
            << (r.recall ? fmt(*r.recall) : "n/a") << '\n';
    }
}

BenchReport parse_bench_tsv(std::istream& in) {
    BenchReport report;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#' || line == tsv_header) continue;
        std::vector<std::string_view> cols;
        std::string_view rest(line);
        while (true) {
            const auto tab = rest.find('\t');
            cols.push_back(rest.substr(0, tab));
            if (tab == std::string_view::npos) break;
            rest.remove_prefix(tab + 1);
        }
        if (cols.size() != 9) throw parse_error(lineno, "expected 9 columns");
        BenchRow r;
        try {
            r.axis = parse_bench_axis(cols[0]);
            r.method = parse_bench_method(cols[2]);
        } catch (const config_error& e) {
            throw parse_error(lineno, e.what());
        }
        r.value = field<double>(cols[1], lineno);
        r.runs = field<std::size_t>(cols[3], lineno);
        r.mean_runtime_s = field<double>(cols[4], lineno);
        r.false_positive_rate = field<double>(cols[5], lineno);
        r.patterns_found = field<double>(cols[6], lineno);
        r.patterns_embedded = field<std::size_t>(cols[7], lineno);
        if (cols[8] != "n/a") r.recall = field<double>(cols[8], lineno);
        report.rows.push_back(r);
    }
    return report;
}

void write_bench_json(std::ostream& out, const BenchReport& report) {
    auto rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
        rows.push_back({{"axis", to_string(r.axis)},
                        {"value", r.value},
                        {"method", to_string(r.method)},
                        {"runs", r.runs},
                        {"mean_runtime_s", r.mean_runtime_s},
                        {"fpr", r.false_positive_rate},
                        {"patterns_found", r.patterns_found},
                        {"patterns_embedded", r.patterns_embedded},
                        {"recall", r.recall ? nlohmann::json(*r.recall) : nlohmann::json(nullptr)}});
    }
    out << nlohmann::json{{"rows", rows}}.dump(2) << '\n';
}

void write_bench_summary(std::ostream& out, const BenchReport& report) {
    if (report.rows.empty()) return;
    struct Cell {
        std::optional<BenchRow> pe, nx;
    };
    std::vector<std::pair<double, Cell>> table;
    for (const auto& r : report.rows) {
        auto it = std::find_if(table.begin(), table.end(), [&](const auto& p) { return p.first == r.value; });
        if (it == table.end()) {
            table.push_back({r.value, {}});
            it = std::prev(table.end());
        }
        (r.method == BenchMethod::pe ? it->second.pe : it->second.nx) = r;
    }
    const auto time = [](const std::optional<BenchRow>& r) { return r ? fmt(r->mean_runtime_s) : std::string("-"); };
    const auto rate = [](const std::optional<BenchRow>& r) {
        if (!r) return std::string("-");
        return fmt(std::round(r->false_positive_rate * 1000.0) / 10.0) + "%";
    };
    out << "# " << to_string(report.rows.front().axis)
        << "\tPE_runtime_s\tbaseline_runtime_s\tPE_fpr\tbaseline_fpr\n";
    for (const auto& [value, cell] : table) {
        out << "# " << fmt_value(value) << '\t' << time(cell.pe) << '\t' << time(cell.nx) << '\t'
            << rate(cell.pe) << '\t' << rate(cell.nx) << '\n';
    }
}

} // namespace synpat
