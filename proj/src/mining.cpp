#include "synpat/mining.hpp"

#include "synpat/errors.hpp"
#include "synpat/significance.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace synpat {

std::vector<Episode> generate_candidates(std::span<const Episode> frequent) {
    std::vector<Episode> sorted(frequent.begin(), frequent.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (sorted.empty()) return {};

    const auto k = sorted.front().size();
    for (const auto& e : sorted) {
        if (e.size() != k) throw std::invalid_argument("frequent set mixes episode sizes");
    }
    const auto is_frequent = [&](const Episode& e) {
        return std::binary_search(sorted.begin(), sorted.end(), e);
    };
    const auto same_prefix = [k](const Episode& a, const Episode& b) {
        return std::equal(a.types().begin(), a.types().begin() + static_cast<std::ptrdiff_t>(k - 1),
                          b.types().begin());
    };

    std::vector<Episode> out;
    // Sorted order keeps episodes with a common (k-1)-prefix contiguous.
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        for (std::size_t j = i + 1; j < sorted.size() && same_prefix(sorted[i], sorted[j]); ++j) {
            std::vector<EventTypeId> types(sorted[i].types().begin(), sorted[i].types().end());
            types.push_back(sorted[j][k - 1]);
            Episode cand(std::move(types));
            // Dropping either of the last two types gives sorted[i] / sorted[j].
            bool keep = true;
            for (std::size_t d = 0; d + 2 < cand.size() && keep; ++d) {
                keep = is_frequent(cand.without(d));
            }
            if (keep) out.push_back(std::move(cand));
        }
    }
    return out; // already in canonical order
}

void validate(const MiningConfig& config) {
    if (config.expiry < 1) throw config_error("expiry must be at least 1 tick");
    if (const auto* fixed = std::get_if<FixedThreshold>(&config.threshold)) {
        if (fixed->min_count < 1) throw config_error("fixed threshold must be at least 1");
    } else {
        const double eps = std::get<AutoThreshold>(config.threshold).epsilon;
        if (!(eps > 0.0 && eps < 1.0)) throw config_error("epsilon must lie in (0, 1)");
        const auto& a = std::get<AutoThreshold>(config.threshold);
        if (a.rates == RateModel::known && !(a.null_rate_hz >= 0.0 && std::isfinite(a.null_rate_hz))) {
            throw config_error("null rate must be a non-negative number");
        }
    }
    if (config.max_level && *config.max_level < 1) {
        throw config_error("max_level must be at least 1");
    }
}

MiningResult mine(const EventSequence& seq, const MiningConfig& config,
                  const EpisodeThresholdFn& threshold_fn) {
    validate(config);
    MiningResult result;
    if (seq.empty()) return result;

    std::vector<Episode> candidates;
    candidates.reserve(seq.num_types());
    for (EventTypeId t = 0; t < seq.num_types(); ++t) {
        candidates.push_back(Episode{t});
    }

    CountOptions opts;
    opts.rule = config.rule;
    opts.workers = config.workers;
    for (std::size_t level = 1; !candidates.empty(); ++level) {
        if (config.max_level && level > *config.max_level) break;
        const auto counts = count_nonoverlapped(seq, candidates, config.expiry, opts);
        std::vector<Episode> frequent;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            const auto thr = threshold_fn(candidates[i]);
            if (counts[i] >= std::max<std::uint64_t>(thr, 1)) {
                result.episodes.push_back({candidates[i], counts[i], thr});
                frequent.push_back(candidates[i]);
            }
        }
        result.levels.push_back({level, candidates.size(), frequent.size()});
        candidates = generate_candidates(frequent);
    }
    return result;
}

MiningResult mine(const EventSequence& seq, const MiningConfig& config,
                  const LevelThresholdFn& threshold_fn) {
    std::map<std::size_t, std::uint64_t> cache;
    return mine(seq, config, EpisodeThresholdFn([&](const Episode& e) {
        auto it = cache.find(e.size());
        if (it == cache.end()) it = cache.emplace(e.size(), threshold_fn(e.size())).first;
        return it->second;
    }));
}

MiningResult mine(const EventSequence& seq, const MiningConfig& config) {
    validate(config);
    if (const auto* fixed = std::get_if<FixedThreshold>(&config.threshold)) {
        const auto c = fixed->min_count;
        return mine(seq, config, LevelThresholdFn([c](std::size_t) { return c; }));
    }
    const auto autocfg = std::get<AutoThreshold>(config.threshold);
    if (autocfg.rates == RateModel::mean) {
        return mine(seq, config, LevelThresholdFn([&](std::size_t n) {
            return auto_threshold(seq, n, config.expiry, autocfg.epsilon, config.rule);
        }));
    }
    if (autocfg.rates == RateModel::known) {
        return mine(seq, config, LevelThresholdFn([&](std::size_t n) {
            return auto_threshold_at_rate(seq, n, config.expiry, autocfg.epsilon, autocfg.null_rate_hz,
                                          config.rule);
        }));
    }
    std::optional<std::uint64_t> singleton;
    return mine(seq, config, EpisodeThresholdFn([&](const Episode& e) {
        if (e.size() > 1) return auto_threshold(seq, e, config.expiry, autocfg.epsilon, config.rule);
        if (!singleton) {
            singleton = autocfg.null_rate_hz > 0.0
                            ? auto_threshold_at_rate(seq, 1, config.expiry, autocfg.epsilon,
                                                     autocfg.null_rate_hz, config.rule)
                            : auto_threshold(seq, 1, config.expiry, autocfg.epsilon, config.rule);
        }
        return *singleton;
    }));
}

} // namespace synpat
