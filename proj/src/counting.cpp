#include "synpat/counting.hpp"

#include "synpat/errors.hpp"

#include <algorithm>
#include <limits>
#include <thread>

namespace synpat {

CountingState::CountingState(std::size_t size)
    : latest_tick_(size, 0), latest_index_(size, unseen), last_occurrence_(size, unseen) {}

bool CountingState::observe(std::size_t slot, Tick tick, std::size_t event_index, Tick expiry,
                            SpanRule rule) {
    if (latest_index_[slot] == unseen) ++seen_;
    latest_tick_[slot] = tick;
    latest_index_[slot] = event_index;
    if (seen_ < latest_tick_.size()) return false;

    const auto [lo, hi] = std::minmax_element(latest_tick_.begin(), latest_tick_.end());
    if (!span_within(*hi - *lo, expiry, rule)) return false;

    ++count_;
    last_occurrence_ = latest_index_;
    std::fill(latest_index_.begin(), latest_index_.end(), unseen);
    seen_ = 0;
    return true;
}

namespace {

struct Slot {
    std::uint32_t state;
    std::uint32_t position;
};

// One pass over `seq` for candidates[first, last).
void count_range(const EventSequence& seq, std::span<const Episode> candidates, std::size_t first,
                 std::size_t last, Tick expiry, SpanRule rule, const OccurrenceSink& sink,
                 std::span<std::uint64_t> out) {
    std::vector<std::vector<Slot>> by_type(seq.num_types());
    std::vector<CountingState> states;
    states.reserve(last - first);
    for (std::size_t c = first; c < last; ++c) {
        const auto& ep = candidates[c];
        states.emplace_back(ep);
        for (std::size_t i = 0; i < ep.size(); ++i) {
            if (ep[i] < by_type.size()) {
                by_type[ep[i]].push_back({static_cast<std::uint32_t>(c - first),
                                          static_cast<std::uint32_t>(i)});
            }
        }
    }

    const auto events = seq.events();
    for (std::size_t idx = 0; idx < events.size(); ++idx) {
        const auto& e = events[idx];
        for (const auto& s : by_type[e.type]) {
            auto& st = states[s.state];
            if (st.observe(s.position, e.tick, idx, expiry, rule) && sink) {
                sink(first + s.state, st.last_occurrence());
            }
        }
    }
    for (std::size_t c = first; c < last; ++c) {
        out[c] = states[c - first].count();
    }
}

} // namespace

std::vector<std::uint64_t> count_nonoverlapped(const EventSequence& seq,
                                               std::span<const Episode> candidates, Tick expiry,
                                               const CountOptions& options) {
    if (expiry < 1) {
        throw config_error("expiry must be at least 1 tick");
    }
    if (candidates.empty()) return {};
    const auto n = candidates.front().size();
    for (const auto& c : candidates) {
        if (c.size() != n) {
            throw std::invalid_argument("candidates of mixed sizes in one counting pass");
        }
        if (c.empty()) {
            throw std::invalid_argument("empty episode in candidate set");
        }
    }
    if (candidates.size() > std::numeric_limits<std::uint32_t>::max()) {
        throw std::length_error("too many candidates for one pass");
    }

    std::vector<std::uint64_t> counts(candidates.size(), 0);
    unsigned workers = options.sink ? 1u : std::max(1u, options.workers);
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, candidates.size()));
    if (workers == 1) {
        count_range(seq, candidates, 0, candidates.size(), expiry, options.rule, options.sink, counts);
        return counts;
    }

    const std::size_t chunk = (candidates.size() + workers - 1) / workers;
    {
        std::vector<std::jthread> pool;
        for (std::size_t first = 0; first < candidates.size(); first += chunk) {
            const auto last = std::min(candidates.size(), first + chunk);
            pool.emplace_back([&, first, last] {
                count_range(seq, candidates, first, last, expiry, options.rule, {}, counts);
            });
        }
    }
    return counts;
}

std::uint64_t count_nonoverlapped(const EventSequence& seq, const Episode& episode, Tick expiry,
                                  SpanRule rule) {
    return count_nonoverlapped(seq, std::span<const Episode>(&episode, 1), expiry, {rule})[0];
}

} // namespace synpat
