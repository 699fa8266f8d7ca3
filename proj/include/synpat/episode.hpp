#pragma once

#include "synpat/spike_data.hpp"

#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace synpat {

// How an occurrence's span (last tick - first tick) is compared with the
// expiry T.
enum class SpanRule {
    inclusive, // span <= T
    strict,    // span <  T
};

inline bool span_within(Tick span, Tick expiry, SpanRule rule) {
    return rule == SpanRule::inclusive ? span <= expiry : span < expiry;
}

// A parallel episode: a set of distinct event types, stored sorted ascending.
class Episode {
public:
    Episode() = default;
    // Accepts the types in any order; throws config_error on a repeated type.
    explicit Episode(std::vector<EventTypeId> types);
    Episode(std::initializer_list<EventTypeId> types)
        : Episode(std::vector<EventTypeId>(types)) {}

    std::span<const EventTypeId> types() const { return types_; }
    std::size_t size() const { return types_.size(); }
    bool empty() const { return types_.empty(); }
    EventTypeId operator[](std::size_t i) const { return types_[i]; }

    bool contains(EventTypeId type) const;
    // Every type of this episode is also in `other`.
    bool is_subset_of(const Episode& other) const;
    // This episode with the i-th type removed.
    Episode without(std::size_t i) const;

    // "0,1,2" or, with labels, "A,B,C".
    std::string to_string() const;
    std::string to_string(const EventSequence& names) const;

    friend bool operator==(const Episode&, const Episode&) = default;
    friend auto operator<=>(const Episode&, const Episode&) = default;

private:
    std::vector<EventTypeId> types_;
};

// Parses "0,1,2" (order free).
Episode parse_episode(std::string_view text);

struct EpisodeHash {
    std::size_t operator()(const Episode& e) const noexcept;
};

} // namespace synpat
