#include "synpat/episode.hpp"

#include "synpat/errors.hpp"

#include <algorithm>
#include <charconv>

namespace synpat {

Episode::Episode(std::vector<EventTypeId> types) : types_(std::move(types)) {
    std::sort(types_.begin(), types_.end());
    if (std::adjacent_find(types_.begin(), types_.end()) != types_.end()) {
        throw config_error("episode has a repeated event type");
    }
}

bool Episode::contains(EventTypeId type) const {
    return std::binary_search(types_.begin(), types_.end(), type);
}

bool Episode::is_subset_of(const Episode& other) const {
    return std::includes(other.types_.begin(), other.types_.end(), types_.begin(), types_.end());
}

Episode Episode::without(std::size_t i) const {
    Episode e;
    e.types_.reserve(types_.size() - 1);
    for (std::size_t j = 0; j < types_.size(); ++j) {
        if (j != i) e.types_.push_back(types_[j]);
    }
    return e;
}

std::string Episode::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < types_.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(types_[i]);
    }
    return s;
}

std::string Episode::to_string(const EventSequence& names) const {
    std::string s;
    for (std::size_t i = 0; i < types_.size(); ++i) {
        if (i) s += ',';
        s += names.label(types_[i]);
    }
    return s;
}

Episode parse_episode(std::string_view text) {
    std::vector<EventTypeId> types;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = text.find(',', pos);
        auto item = text.substr(pos, (comma == std::string_view::npos ? text.size() : comma) - pos);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        EventTypeId id = 0;
        auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), id);
        if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size()) {
            throw parse_error(0, "malformed episode `" + std::string(text) + "`");
        }
        types.push_back(id);
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return Episode(std::move(types));
}

std::size_t EpisodeHash::operator()(const Episode& e) const noexcept {
    // FNV-1a over the type ids
    std::size_t h = 14695981039346656037ull;
    for (auto t : e.types()) {
        h ^= t;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace synpat
