#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace synpat {

// Discretized time, in units of the sequence's delta_t.
using Tick = std::int64_t;

// Dense source identifier 0..M-1 (one per neuron).
using EventTypeId = std::uint32_t;

struct Event {
    EventTypeId type{0};
    Tick tick{0};

    friend bool operator==(const Event&, const Event&) = default;
};

// Total order used throughout: by tick, ties broken by type id.
inline bool event_order(const Event& a, const Event& b) {
    return a.tick != b.tick ? a.tick < b.tick : a.type < b.type;
}

// Immutable, time-ordered multi-source event stream.
//
// Ticks lie in [0, length_ticks]; types lie in [0, num_types). Events are
// sorted on construction, so callers may pass them in any order.
class EventSequence {
public:
    EventSequence() = default;
    EventSequence(std::vector<Event> events, double delta_t, Tick length_ticks,
                  std::size_t num_types, std::vector<std::string> labels = {});

    std::span<const Event> events() const { return events_; }
    std::size_t size() const { return events_.size(); }
    bool empty() const { return events_.empty(); }

    double delta_t() const { return delta_t_; }
    Tick length_ticks() const { return length_; }
    std::size_t num_types() const { return num_types_; }
    double duration_seconds() const { return static_cast<double>(length_) * delta_t_; }

    // Optional display names, either empty or one per type.
    const std::vector<std::string>& labels() const { return labels_; }
    std::string label(EventTypeId type) const;

    // Number of events per type, indexed by type id.
    std::vector<std::size_t> type_counts() const;

    friend bool operator==(const EventSequence&, const EventSequence&) = default;

private:
    std::vector<Event> events_;
    double delta_t_{1.0};
    Tick length_{0};
    std::size_t num_types_{0};
    std::vector<std::string> labels_;
};

// floor(seconds / delta_t), tolerant of representation error so that e.g.
// 0.003 s at 1 ms lands on tick 3 rather than 2.
Tick quantize(double seconds, double delta_t);

// Reads `timestamp(,|\t)event_id` records. Recognised headers:
//   # duration_s=<float>   fixes length_ticks
//   # num_types=<int>      fixes M (must cover every id seen)
//   # labels=<a>,<b>,...   display names, one per type
// Any other '#' line is a comment.
EventSequence parse_spike_file(std::istream& source, double delta_t);
EventSequence parse_spike_file(const std::filesystem::path& path, double delta_t);

// Writes the same format, headers included, so parse(write(s)) == s.
void write_spike_file(std::ostream& out, const EventSequence& seq);
void write_spike_file(const std::filesystem::path& path, const EventSequence& seq);

// Events of `type` per second of recording.
double estimate_rate(const EventSequence& seq, EventTypeId type);
std::vector<double> estimate_rates(const EventSequence& seq);
// Mean over all num_types sources (silent sources included).
double mean_rate(const EventSequence& seq);

// Contiguous segments of floor(L / n) ticks each, re-based to tick 0; the last
// segment also takes the remainder (and any events at tick L).
std::vector<EventSequence> split_trials(const EventSequence& seq, std::size_t n_trials);

} // namespace synpat
