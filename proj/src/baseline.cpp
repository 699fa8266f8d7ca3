#include "synpat/baseline.hpp"

#include "synpat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_set>

namespace synpat {

void validate(const SurrogateConfig& config) {
    if (config.n_surrogates < 1) throw config_error("n_surrogates must be at least 1");
    if (config.n_trials < 1) throw config_error("n_trials must be at least 1");
    if (config.jitter && *config.jitter < 0) throw config_error("jitter must be non-negative");
    if (!(config.alpha > 0.0 && config.alpha < 1.0)) throw config_error("alpha must lie in (0, 1)");
}

Tick jitter_window(const SurrogateConfig& config, Tick expiry) {
    return config.jitter ? *config.jitter : 2 * expiry;
}

OccurrenceIndex::OccurrenceIndex(const EventSequence& seq) : ticks_(seq.num_types()) {
    for (const auto& e : seq.events()) ticks_[e.type].push_back(e.tick);
}

std::uint64_t OccurrenceIndex::count_all(const Episode& pattern, Tick expiry) const {
    const auto n = pattern.size();
    if (n == 0) return 0;
    std::vector<const std::vector<Tick>*> lists(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (pattern[i] >= ticks_.size() || ticks_[pattern[i]].empty()) return 0;
        lists[i] = &ticks_[pattern[i]];
    }
    if (n == 1) return lists[0]->size();

    // Each tuple is counted once, at its earliest event; ties on tick go to
    // the type that comes first in the pattern.
    std::uint64_t total = 0;
    std::vector<std::size_t> lo(n), hi(n);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(lo.begin(), lo.end(), 0);
        std::fill(hi.begin(), hi.end(), 0);
        for (const Tick a : *lists[j]) {
            std::uint64_t product = 1;
            for (std::size_t i = 0; i < n && product; ++i) {
                if (i == j) continue;
                const auto& l = *lists[i];
                // earlier pattern positions need tick > a, later ones tick >= a
                if (i < j) {
                    while (lo[i] < l.size() && l[lo[i]] <= a) ++lo[i];
                } else {
                    while (lo[i] < l.size() && l[lo[i]] < a) ++lo[i];
                }
                hi[i] = std::max(hi[i], lo[i]);
                while (hi[i] < l.size() && l[hi[i]] <= a + expiry) ++hi[i];
                product *= hi[i] - lo[i];
            }
            total += product;
        }
    }
    return total;
}

std::uint64_t count_all_occurrences(const EventSequence& seq, const Episode& pattern, Tick expiry) {
    return OccurrenceIndex(seq).count_all(pattern, expiry);
}

namespace {

struct AnchorWindowHash {
    std::size_t operator()(const std::vector<EventTypeId>& v) const noexcept {
        std::size_t h = 14695981039346656037ull;
        for (auto t : v) {
            h ^= t;
            h *= 1099511628211ull;
        }
        return h;
    }
};

void emit_subsets(EventTypeId anchor, const std::vector<EventTypeId>& others, std::size_t max_extra,
                  std::size_t from, std::vector<EventTypeId>& chosen,
                  std::unordered_set<Episode, EpisodeHash>& out) {
    std::vector<EventTypeId> types(chosen);
    types.push_back(anchor);
    out.insert(Episode(std::move(types)));
    if (chosen.size() == max_extra) return;
    for (std::size_t i = from; i < others.size(); ++i) {
        chosen.push_back(others[i]);
        emit_subsets(anchor, others, max_extra, i + 1, chosen, out);
        chosen.pop_back();
    }
}

} // namespace

std::vector<Episode> enumerate_patterns(const EventSequence& seq, Tick expiry,
                                        const EnumerateOptions& options) {
    if (expiry < 0) throw config_error("expiry must be non-negative");
    const auto events = seq.events();
    std::unordered_set<Episode, EpisodeHash> found;
    // (anchor type, window types) already expanded
    std::unordered_set<std::vector<EventTypeId>, AnchorWindowHash> expanded;
    const std::size_t max_extra =
        options.max_size == 0 ? static_cast<std::size_t>(-1) : options.max_size - 1;

    std::vector<EventTypeId> window;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto anchor = events[i];
        window.clear();
        for (std::size_t j = i + 1; j < events.size() && events[j].tick <= anchor.tick + expiry; ++j) {
            if (events[j].type != anchor.type) window.push_back(events[j].type);
        }
        std::sort(window.begin(), window.end());
        window.erase(std::unique(window.begin(), window.end()), window.end());
        if (options.max_size == 0 && window.size() + 1 > options.explosion_guard) {
            throw std::length_error("window with " + std::to_string(window.size() + 1) +
                                    " distinct types exceeds the pattern explosion guard");
        }
        auto key = window;
        key.push_back(anchor.type);
        if (!expanded.insert(std::move(key)).second) continue;
        std::vector<EventTypeId> chosen;
        emit_subsets(anchor.type, window, max_extra, 0, chosen, found);
    }
    std::vector<Episode> out(found.begin(), found.end());
    std::sort(out.begin(), out.end());
    return out;
}

EventSequence jitter_surrogate(const EventSequence& seq, Tick jitter, std::uint64_t seed) {
    if (jitter < 0) throw config_error("jitter must be non-negative");
    if (jitter == 0) return seq;
    std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    std::mt19937_64 rng(ss);
    std::uniform_int_distribution<Tick> shift(-jitter, jitter);
    std::vector<Event> events(seq.events().begin(), seq.events().end());
    for (auto& e : events) {
        e.tick = std::clamp<Tick>(e.tick + shift(rng), 0, seq.length_ticks());
    }
    return EventSequence(std::move(events), seq.delta_t(), seq.length_ticks(), seq.num_types(),
                         seq.labels());
}

double upper_quantile(std::vector<double> values, double alpha) {
    if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
    std::sort(values.begin(), values.end());
    const double rank = std::ceil((1.0 - alpha) * static_cast<double>(values.size()) - 1e-9);
    const auto idx = static_cast<std::size_t>(std::clamp(rank, 1.0, static_cast<double>(values.size())));
    return values[idx - 1];
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

std::uint64_t surrogate_seed(std::uint64_t seed, std::size_t trial, std::size_t round) {
    return splitmix64(splitmix64(splitmix64(seed) ^ trial) ^ round);
}

} // namespace

std::vector<SurrogateOutcome> surrogate_significance(std::span<const EventSequence> trials,
                                                     std::span<const Episode> patterns, Tick expiry,
                                                     const SurrogateConfig& config) {
    validate(config);
    if (trials.empty()) throw config_error("surrogate test needs at least one trial");
    const auto n_trials = static_cast<double>(trials.size());
    const Tick jitter = jitter_window(config, expiry);

    std::vector<SurrogateOutcome> out(patterns.size());
    for (std::size_t p = 0; p < patterns.size(); ++p) {
        out[p].pattern = patterns[p];
        out[p].surrogate_means.assign(config.n_surrogates, 0.0);
    }
    for (std::size_t i = 0; i < trials.size(); ++i) {
        const OccurrenceIndex observed(trials[i]);
        for (std::size_t p = 0; p < patterns.size(); ++p) {
            out[p].observed_mean += static_cast<double>(observed.count_all(patterns[p], expiry)) / n_trials;
        }
        for (std::size_t s = 0; s < config.n_surrogates; ++s) {
            const OccurrenceIndex surrogate(
                jitter_surrogate(trials[i], jitter, surrogate_seed(config.seed, i, s)));
            for (std::size_t p = 0; p < patterns.size(); ++p) {
                out[p].surrogate_means[s] +=
                    static_cast<double>(surrogate.count_all(patterns[p], expiry)) / n_trials;
            }
        }
    }
    for (auto& o : out) {
        o.quantile = upper_quantile(o.surrogate_means, config.alpha);
        o.significant = o.observed_mean > o.quantile;
    }
    return out;
}

SurrogateOutcome surrogate_significance(std::span<const EventSequence> trials, const Episode& pattern,
                                        Tick expiry, const SurrogateConfig& config) {
    return surrogate_significance(trials, std::span<const Episode>(&pattern, 1), expiry, config)[0];
}

BaselineResult run_baseline(const EventSequence& seq, Tick expiry, const SurrogateConfig& config,
                            const EnumerateOptions& enumerate) {
    validate(config);
    const auto trials = split_trials(seq, config.n_trials);
    std::vector<Episode> patterns;
    for (const auto& t : trials) {
        auto found = enumerate_patterns(t, expiry, enumerate);
        patterns.insert(patterns.end(), found.begin(), found.end());
    }
    std::sort(patterns.begin(), patterns.end());
    patterns.erase(std::unique(patterns.begin(), patterns.end()), patterns.end());

    BaselineResult result;
    result.outcomes = surrogate_significance(trials, patterns, expiry, config);
    result.patterns = std::move(patterns);
    return result;
}

} // namespace synpat
