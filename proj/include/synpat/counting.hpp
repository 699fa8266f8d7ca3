#pragma once

#include "synpat/episode.hpp"
#include "synpat/spike_data.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace synpat {

// Latest-occurrence tracker for one episode during a counting pass.
//
// Slot i holds the tick (and sequence index) of the most recent event of
// episode type i since the last counted occurrence. Once every slot is
// filled the span is checked after each update; a success bumps `count` and
// empties all slots.
class CountingState {
public:
    explicit CountingState(const Episode& episode) : CountingState(episode.size()) {}
    explicit CountingState(std::size_t size);

    // Records an event for slot `slot`. Returns true when this completes an
    // occurrence (the state is then reset and count() incremented).
    bool observe(std::size_t slot, Tick tick, std::size_t event_index, Tick expiry, SpanRule rule);

    std::uint64_t count() const { return count_; }
    std::size_t seen() const { return seen_; }
    bool slot_seen(std::size_t slot) const { return latest_index_[slot] != unseen; }
    Tick latest_tick(std::size_t slot) const { return latest_tick_[slot]; }

    // Event indices of the occurrence completed by the last successful
    // observe(), one per episode type in canonical order.
    std::span<const std::size_t> last_occurrence() const { return last_occurrence_; }

private:
    static constexpr std::size_t unseen = static_cast<std::size_t>(-1);

    std::vector<Tick> latest_tick_;
    std::vector<std::size_t> latest_index_;
    std::vector<std::size_t> last_occurrence_;
    std::size_t seen_{0};
    std::uint64_t count_{0};
};

// Receives every counted occurrence: candidate position and the sequence
// indices of its events (canonical type order).
using OccurrenceSink = std::function<void(std::size_t candidate, std::span<const std::size_t> events)>;

struct CountOptions {
    SpanRule rule{SpanRule::inclusive};
    // Candidates are split across this many threads, each making its own
    // pass over the sequence.
    unsigned workers{1};
    // Optional; forces a single worker when set.
    OccurrenceSink sink{};
};

// Greedy non-overlapped occurrence counts under the expiry constraint for a
// whole level of candidates, in one pass over the events. All candidates
// must have the same size. Result is aligned with `candidates`.
std::vector<std::uint64_t> count_nonoverlapped(const EventSequence& seq,
                                               std::span<const Episode> candidates, Tick expiry,
                                               const CountOptions& options = {});

std::uint64_t count_nonoverlapped(const EventSequence& seq, const Episode& episode, Tick expiry,
                                  SpanRule rule = SpanRule::inclusive);

} // namespace synpat
