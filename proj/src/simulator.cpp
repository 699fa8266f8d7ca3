#include "synpat/simulator.hpp"

#include "synpat/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>

namespace synpat {

namespace {

enum class Stream : std::uint32_t { background = 1, connection = 2, anchors = 3, placement = 4 };

std::mt19937_64 rng_for(std::uint64_t seed, Stream stream, std::size_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index)};
    return std::mt19937_64(seq);
}

double rate_of(const std::vector<double>& rates, std::size_t neuron) {
    return rates.size() == 1 ? rates[0] : rates[neuron];
}

void check_rates(const std::vector<double>& rates, std::size_t num_neurons, double delta_t,
                 const char* what) {
    if (rates.size() != 1 && rates.size() != num_neurons) {
        throw config_error(std::string(what) + ": expected one shared rate or one per neuron");
    }
    for (double r : rates) {
        const double q = r * delta_t;
        if (!(r >= 0.0) || !(q <= 1.0)) {
            throw invalid_probability(std::string(what) + ": rate * delta_t must lie in [0, 1]");
        }
    }
}

// Appends Bernoulli(q) firing ticks in [begin, end) to `out`.
void bernoulli_ticks(std::mt19937_64& rng, double q, Tick begin, Tick end, std::vector<Tick>& out) {
    if (q <= 0.0 || begin >= end) return;
    if (q >= 1.0) {
        for (Tick t = begin; t < end; ++t) out.push_back(t);
        return;
    }
    std::geometric_distribution<Tick> gap(q);
    for (Tick t = begin + gap(rng); t < end; t += 1 + gap(rng)) {
        out.push_back(t);
    }
}

std::vector<Tick> anchors_for(const SimConfig& config, std::size_t index) {
    const auto& spec = config.embedded[index];
    if (!spec.anchors.empty()) return spec.anchors;
    std::vector<Tick> anchors;
    auto rng = rng_for(config.seed, Stream::anchors, index);
    bernoulli_ticks(rng, spec.rate_hz * config.delta_t, 0, config.length_ticks - spec.jitter_span,
                    anchors);
    return anchors;
}

} // namespace

void validate(const SimConfig& config) {
    if (!(config.delta_t > 0.0)) throw config_error("delta_t must be positive");
    if (config.length_ticks < 0) throw config_error("length_ticks must be non-negative");
    if (config.base_rates_hz.empty()) {
        if (config.num_neurons > 0) throw config_error("missing background rate");
    } else {
        check_rates(config.base_rates_hz, config.num_neurons, config.delta_t, "rate_hz");
    }
    Tick prev = 0;
    for (const auto& seg : config.schedule) {
        if (seg.begin < prev || seg.begin >= std::max<Tick>(config.length_ticks, 1)) {
            throw config_error("rate segments must be sorted and start inside the recording");
        }
        prev = seg.begin;
        check_rates(seg.rates_hz, config.num_neurons, config.delta_t, "rate_segment");
    }
    for (const auto& spec : config.embedded) {
        if (spec.pattern.empty()) throw config_error("embedded pattern is empty");
        if (spec.pattern.types().back() >= config.num_neurons) {
            throw config_error("embedded pattern refers to neuron outside num_neurons");
        }
        if (spec.jitter_span < 0) throw config_error("jitter_span must be non-negative");
        if (!(spec.rate_hz >= 0.0) || !(spec.rate_hz * config.delta_t <= 1.0)) {
            throw invalid_probability("embedding rate * delta_t must lie in [0, 1]");
        }
        for (auto a : spec.anchors) {
            if (a < 0 || a + spec.jitter_span >= config.length_ticks) {
                throw config_error("anchor " + std::to_string(a) +
                                   " puts the pattern outside the recording");
            }
        }
    }
    for (const auto& c : config.connections) {
        if (c.source >= config.num_neurons || c.target >= config.num_neurons) {
            throw config_error("connection refers to neuron outside num_neurons");
        }
        if (c.delay < 0) throw config_error("connection delay must be non-negative");
        if (!(c.probability >= 0.0 && c.probability <= 1.0)) {
            throw config_error("connection probability must lie in [0, 1]");
        }
    }
}

std::vector<EmbeddedTruth> embed_truth(const SimConfig& config) {
    validate(config);
    std::vector<EmbeddedTruth> truth;
    truth.reserve(config.embedded.size());
    for (std::size_t i = 0; i < config.embedded.size(); ++i) {
        truth.push_back({config.embedded[i].pattern, anchors_for(config, i)});
    }
    return truth;
}

EventSequence generate(const SimConfig& config) {
    validate(config);
    const auto m = config.num_neurons;
    const auto len = config.length_ticks;
    std::vector<std::vector<Tick>> spikes(m);

    for (std::size_t j = 0; j < m; ++j) {
        auto rng = rng_for(config.seed, Stream::background, j);
        Tick begin = 0;
        double rate = rate_of(config.base_rates_hz, j);
        for (const auto& seg : config.schedule) {
            bernoulli_ticks(rng, rate * config.delta_t, begin, seg.begin, spikes[j]);
            begin = seg.begin;
            rate = rate_of(seg.rates_hz, j);
        }
        bernoulli_ticks(rng, rate * config.delta_t, begin, len, spikes[j]);
    }

    for (std::size_t c = 0; c < config.connections.size(); ++c) {
        const auto& conn = config.connections[c];
        auto rng = rng_for(config.seed, Stream::connection, c);
        std::bernoulli_distribution fire(conn.probability);
        const auto source = spikes[conn.source];
        std::vector<Tick> added;
        for (auto t : source) {
            if (t + conn.delay < len && fire(rng)) added.push_back(t + conn.delay);
        }
        auto& target = spikes[conn.target];
        target.insert(target.end(), added.begin(), added.end());
        std::sort(target.begin(), target.end());
    }

    for (std::size_t i = 0; i < config.embedded.size(); ++i) {
        const auto& spec = config.embedded[i];
        auto rng = rng_for(config.seed, Stream::placement, i);
        std::uniform_int_distribution<Tick> offset(0, spec.jitter_span);
        for (auto a : anchors_for(config, i)) {
            for (auto type : spec.pattern.types()) {
                spikes[type].push_back(a + offset(rng));
            }
        }
    }

    std::vector<Event> events;
    for (std::size_t j = 0; j < m; ++j) {
        for (auto t : spikes[j]) events.push_back({static_cast<EventTypeId>(j), t});
    }
    return EventSequence(std::move(events), config.delta_t, len, m);
}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

template <typename T>
T number(std::string_view s, std::size_t lineno) {
    s = trim(s);
    T v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw parse_error(lineno, "malformed number `" + std::string(s) + "`");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        const auto next = s.find(sep, pos);
        parts.push_back(trim(s.substr(pos, next == std::string_view::npos ? next : next - pos)));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return parts;
}

std::vector<std::string_view> words(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        const auto b = s.find_first_not_of(" \t", pos);
        if (b == std::string_view::npos) break;
        const auto e = s.find_first_of(" \t", b);
        out.push_back(s.substr(b, e == std::string_view::npos ? s.size() - b : e - b));
        pos = e == std::string_view::npos ? s.size() : e;
    }
    return out;
}

std::vector<double> rate_list(std::string_view s, std::size_t lineno) {
    std::vector<double> v;
    for (auto part : split(s, ',')) v.push_back(number<double>(part, lineno));
    return v;
}

} // namespace

SimConfig parse_sim_config(std::istream& in) {
    SimConfig cfg;
    bool have_duration = false;
    double duration_s = 0.0;
    bool have_length = false;
    // rate_segment lines reference seconds only after delta_t is known
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        auto line = std::string_view(raw);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw parse_error(lineno, "expected key = value");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));

        if (key == "num_neurons") {
            cfg.num_neurons = number<std::size_t>(value, lineno);
        } else if (key == "length_ticks") {
            cfg.length_ticks = number<Tick>(value, lineno);
            have_length = true;
        } else if (key == "duration_s") {
            duration_s = number<double>(value, lineno);
            have_duration = true;
        } else if (key == "delta_t") {
            cfg.delta_t = number<double>(value, lineno);
        } else if (key == "seed") {
            cfg.seed = number<std::uint64_t>(value, lineno);
        } else if (key == "rate_hz") {
            cfg.base_rates_hz = rate_list(value, lineno);
        } else if (key == "rate_segment") {
            const auto w = words(value);
            if (w.size() != 2) throw parse_error(lineno, "rate_segment = <begin_tick> <rates>");
            cfg.schedule.push_back({number<Tick>(w[0], lineno), rate_list(w[1], lineno)});
        } else if (key == "embed") {
            const auto w = words(value);
            if (w.empty()) throw parse_error(lineno, "embed = <types> [jitter=..] [rate=..|anchors=..]");
            EmbedSpec spec;
            std::vector<EventTypeId> types;
            for (auto t : split(w[0], ',')) types.push_back(number<EventTypeId>(t, lineno));
            try {
                spec.pattern = Episode(std::move(types));
            } catch (const config_error& e) {
                throw parse_error(lineno, e.what());
            }
            for (std::size_t i = 1; i < w.size(); ++i) {
                const auto kv = w[i].find('=');
                if (kv == std::string_view::npos) throw parse_error(lineno, "expected option=value");
                const auto opt = w[i].substr(0, kv);
                const auto val = w[i].substr(kv + 1);
                if (opt == "jitter") {
                    spec.jitter_span = number<Tick>(val, lineno);
                } else if (opt == "rate") {
                    spec.rate_hz = number<double>(val, lineno);
                } else if (opt == "anchors") {
                    for (auto a : split(val, ',')) spec.anchors.push_back(number<Tick>(a, lineno));
                } else {
                    throw parse_error(lineno, "unknown embed option `" + std::string(opt) + "`");
                }
            }
            cfg.embedded.push_back(std::move(spec));
        } else if (key == "connection") {
            const auto w = words(value);
            if (w.size() != 4) {
                throw parse_error(lineno, "connection = <source> <target> <delay> <probability>");
            }
            cfg.connections.push_back({number<EventTypeId>(w[0], lineno),
                                       number<EventTypeId>(w[1], lineno),
                                       number<Tick>(w[2], lineno), number<double>(w[3], lineno)});
        } else {
            throw parse_error(lineno, "unknown key `" + std::string(key) + "`");
        }
    }
    if (have_duration) {
        if (have_length) throw parse_error(0, "give either length_ticks or duration_s, not both");
        cfg.length_ticks = quantize(duration_s, cfg.delta_t);
    }
    if (cfg.base_rates_hz.empty()) cfg.base_rates_hz = {0.0};
    return cfg;
}

SimConfig parse_sim_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw parse_error(0, "cannot open " + path.string());
    return parse_sim_config(in);
}

void write_truth(std::ostream& out, const std::vector<EmbeddedTruth>& truth) {
    out << "pattern_types\tanchor_tick\n";
    for (const auto& t : truth) {
        for (auto a : t.anchors) out << t.pattern.to_string() << '\t' << a << '\n';
    }
}

std::vector<EmbeddedTruth> parse_truth(std::istream& in) {
    std::vector<EmbeddedTruth> truth;
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto line = trim(raw);
        if (line.empty() || (lineno == 1 && line.starts_with("pattern_types"))) continue;
        const auto tab = line.find('\t');
        if (tab == std::string_view::npos) throw parse_error(lineno, "expected pattern<TAB>anchor");
        Episode pattern;
        try {
            pattern = parse_episode(line.substr(0, tab));
        } catch (const std::exception& e) {
            throw parse_error(lineno, e.what());
        }
        const auto anchor = number<Tick>(line.substr(tab + 1), lineno);
        if (truth.empty() || truth.back().pattern != pattern) {
            truth.push_back({std::move(pattern), {}});
        }
        truth.back().anchors.push_back(anchor);
    }
    return truth;
}

} // namespace synpat
