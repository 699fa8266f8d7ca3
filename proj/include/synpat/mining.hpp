#pragma once

#include "synpat/counting.hpp"
#include "synpat/episode.hpp"
#include "synpat/spike_data.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace synpat {

// Apriori join: two frequent k-episodes sharing their first k-1 types give a
// (k+1)-candidate, kept only if every k-subepisode is frequent. The input
// need not be sorted; the output is sorted and duplicate-free.
std::vector<Episode> generate_candidates(std::span<const Episode> frequent);

struct FixedThreshold {
    std::uint64_t min_count{1};
};

enum class RateModel {
    mean,    // one dataset-mean rate for every constituent
    known,   // AutoThreshold::null_rate_hz for every constituent
    // Product of the constituents' own estimated rates. A singleton measured
    // against its own rate can never clear the bound, so singletons use
    // null_rate_hz when it is positive and the dataset mean otherwise.
    product,
};

// Threshold derived from the independence null at type-I error epsilon.
struct AutoThreshold {
    double epsilon{0.05};
    RateModel rates{RateModel::mean};
    double null_rate_hz{0.0};
};

struct MiningConfig {
    Tick expiry{1};
    std::variant<FixedThreshold, AutoThreshold> threshold{FixedThreshold{}};
    std::optional<std::size_t> max_level{};
    SpanRule rule{SpanRule::inclusive};
    unsigned workers{1};
};

void validate(const MiningConfig& config);

using LevelThresholdFn = std::function<std::uint64_t(std::size_t level)>;
using EpisodeThresholdFn = std::function<std::uint64_t(const Episode&)>;

struct FrequentEpisode {
    Episode episode;
    std::uint64_t count{0};
    std::uint64_t threshold{0};
};

struct LevelStats {
    std::size_t level{0};
    std::size_t candidates{0};
    std::size_t frequent{0};
};

struct MiningResult {
    // Level by level, each level in canonical episode order.
    std::vector<FrequentEpisode> episodes;
    std::vector<LevelStats> levels;
};

// Level-wise mining. An episode is frequent when its count reaches the
// threshold and is at least 1.
MiningResult mine(const EventSequence& seq, const MiningConfig& config,
                  const LevelThresholdFn& threshold_fn);
MiningResult mine(const EventSequence& seq, const MiningConfig& config,
                  const EpisodeThresholdFn& threshold_fn);
// Threshold taken from config.threshold.
MiningResult mine(const EventSequence& seq, const MiningConfig& config);

} // namespace synpat
