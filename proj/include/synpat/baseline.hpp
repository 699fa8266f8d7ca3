#pragma once

#include "synpat/episode.hpp"
#include "synpat/spike_data.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace synpat {

// Surrogate-based baseline: every tuple of spikes (one per pattern type)
// within the expiry span is an occurrence, and significance comes from the
// empirical distribution of counts over spike-jittered copies of the data.

struct SurrogateConfig {
    std::size_t n_surrogates{25};
    // Jitter half-width in ticks; unset means 2 * expiry.
    std::optional<Tick> jitter{};
    std::size_t n_trials{20};
    double alpha{0.05};
    std::uint64_t seed{0};
};

void validate(const SurrogateConfig& config);
Tick jitter_window(const SurrogateConfig& config, Tick expiry);

// Per-type sorted tick lists of one sequence, reused across many patterns.
class OccurrenceIndex {
public:
    explicit OccurrenceIndex(const EventSequence& seq);

    // Number of tuples, one event per pattern type, with span <= expiry.
    std::uint64_t count_all(const Episode& pattern, Tick expiry) const;

private:
    std::vector<std::vector<Tick>> ticks_;
};

std::uint64_t count_all_occurrences(const EventSequence& seq, const Episode& pattern, Tick expiry);

struct EnumerateOptions {
    // 0 = no cap on pattern size.
    std::size_t max_size{0};
    // Without a size cap, a window holding more distinct types than this is
    // refused rather than expanded into 2^k subsets.
    std::size_t explosion_guard{25};
};

// Every pattern of size <= max_size with at least one occurrence of span <=
// expiry (expiry 0 admits only same-tick occurrences). Sorted.
std::vector<Episode> enumerate_patterns(const EventSequence& seq, Tick expiry,
                                        const EnumerateOptions& options = {});

// Shifts each event independently by a uniform integer in [-jitter, jitter],
// clamped to [0, L], and re-sorts.
EventSequence jitter_surrogate(const EventSequence& seq, Tick jitter, std::uint64_t seed);

struct SurrogateOutcome {
    Episode pattern;
    double observed_mean{0.0};
    // Trial-mean count of each surrogate round, in round order.
    std::vector<double> surrogate_means;
    double quantile{0.0};
    bool significant{false};
};

// Nearest-rank (1 - alpha) quantile.
double upper_quantile(std::vector<double> values, double alpha);

// One pattern against the surrogate distribution.
SurrogateOutcome surrogate_significance(std::span<const EventSequence> trials, const Episode& pattern,
                                        Tick expiry, const SurrogateConfig& config);

// Many patterns at once; each (trial, round) surrogate is generated once and
// shared by every pattern, with the same seeds surrogate_significance uses.
std::vector<SurrogateOutcome> surrogate_significance(std::span<const EventSequence> trials,
                                                     std::span<const Episode> patterns, Tick expiry,
                                                     const SurrogateConfig& config);

struct BaselineResult {
    std::vector<Episode> patterns; // enumerated candidates
    std::vector<SurrogateOutcome> outcomes;
};

// Full baseline run: split into trials, enumerate patterns, test each.
BaselineResult run_baseline(const EventSequence& seq, Tick expiry, const SurrogateConfig& config,
                            const EnumerateOptions& enumerate = {});

} // namespace synpat
