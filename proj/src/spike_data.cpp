#include "synpat/spike_data.hpp"

#include "synpat/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

namespace synpat {

EventSequence::EventSequence(std::vector<Event> events, double delta_t, Tick length_ticks,
                             std::size_t num_types, std::vector<std::string> labels)
    : events_(std::move(events)),
      delta_t_(delta_t),
      length_(length_ticks),
      num_types_(num_types),
      labels_(std::move(labels)) {
    if (!(delta_t_ > 0.0) || !std::isfinite(delta_t_)) {
        throw config_error("delta_t must be positive");
    }
    if (length_ < 0) {
        throw config_error("length_ticks must be non-negative");
    }
    if (!labels_.empty() && labels_.size() != num_types_) {
        throw config_error("labels must be empty or one per event type");
    }
    for (const auto& e : events_) {
        if (e.tick < 0 || e.tick > length_) {
            throw config_error("event tick " + std::to_string(e.tick) + " outside [0, " +
                               std::to_string(length_) + "]");
        }
        if (e.type >= num_types_) {
            throw config_error("event type " + std::to_string(e.type) + " >= num_types " +
                               std::to_string(num_types_));
        }
    }
    std::stable_sort(events_.begin(), events_.end(), event_order);
}

std::string EventSequence::label(EventTypeId type) const {
    if (type < labels_.size() && !labels_[type].empty()) {
        return labels_[type];
    }
    return std::to_string(type);
}

std::vector<std::size_t> EventSequence::type_counts() const {
    std::vector<std::size_t> counts(num_types_, 0);
    for (const auto& e : events_) {
        ++counts[e.type];
    }
    return counts;
}

Tick quantize(double seconds, double delta_t) {
    const double q = seconds / delta_t;
    const double r = std::nearbyint(q);
    if (std::abs(q - r) <= 1e-9 * std::max(1.0, std::abs(q))) {
        return static_cast<Tick>(r);
    }
    return static_cast<Tick>(std::floor(q));
}

namespace {

std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

template <typename T>
bool parse_number(std::string_view s, T& out) {
    s = trim(s);
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

struct Header {
    bool has_duration = false;
    double duration_s = 0.0;
    bool has_num_types = false;
    std::size_t num_types = 0;
    std::vector<std::string> labels;
};

void parse_header(std::string_view line, std::size_t lineno, Header& h) {
    line = trim(line.substr(1));
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) return;
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key == "duration_s") {
        if (!parse_number(value, h.duration_s) || !(h.duration_s >= 0.0)) {
            throw parse_error(lineno, "invalid duration_s header");
        }
        h.has_duration = true;
    } else if (key == "num_types") {
        if (!parse_number(value, h.num_types)) {
            throw parse_error(lineno, "invalid num_types header");
        }
        h.has_num_types = true;
    } else if (key == "labels") {
        h.labels.clear();
        std::size_t pos = 0;
        while (pos <= value.size()) {
            const auto comma = value.find(',', pos);
            const auto end = comma == std::string_view::npos ? value.size() : comma;
            h.labels.emplace_back(trim(value.substr(pos, end - pos)));
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
    }
}

} // namespace

EventSequence parse_spike_file(std::istream& source, double delta_t) {
    if (!(delta_t > 0.0)) {
        throw config_error("delta_t must be positive");
    }
    Header header;
    std::vector<Event> events;
    Tick max_tick = 0;
    std::size_t max_type_plus_one = 0;

    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(source, raw)) {
        ++lineno;
        const auto line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '#') {
            parse_header(line, lineno, header);
            continue;
        }
        const auto sep = line.find_first_of(",\t");
        if (sep == std::string_view::npos) {
            throw parse_error(lineno, "expected `timestamp,event_id`");
        }
        const auto ts_text = line.substr(0, sep);
        const auto id_text = line.substr(sep + 1);
        if (id_text.find_first_of(",\t") != std::string_view::npos) {
            throw parse_error(lineno, "too many fields");
        }
        double ts = 0.0;
        if (!parse_number(ts_text, ts) || !std::isfinite(ts)) {
            throw parse_error(lineno, "malformed timestamp");
        }
        if (ts < 0.0) {
            throw parse_error(lineno, "negative timestamp");
        }
        long long id = 0;
        if (!parse_number(id_text, id)) {
            throw parse_error(lineno, "malformed event id");
        }
        if (id < 0) {
            throw parse_error(lineno, "negative event id");
        }
        if (id > static_cast<long long>(UINT32_MAX - 1)) {
            throw parse_error(lineno, "event id out of range");
        }
        const Event e{static_cast<EventTypeId>(id), quantize(ts, delta_t)};
        max_tick = std::max(max_tick, e.tick);
        max_type_plus_one = std::max<std::size_t>(max_type_plus_one, e.type + 1u);
        events.push_back(e);
    }

    Tick length = max_tick;
    if (header.has_duration) {
        length = quantize(header.duration_s, delta_t);
        if (max_tick > length) {
            throw parse_error(0, "event at tick " + std::to_string(max_tick) +
                                     " beyond declared duration");
        }
    }
    std::size_t num_types = max_type_plus_one;
    if (header.has_num_types) {
        if (header.num_types < max_type_plus_one) {
            throw parse_error(0, "num_types header smaller than largest event id + 1");
        }
        num_types = header.num_types;
    }
    if (!header.labels.empty() && header.labels.size() != num_types) {
        if (header.labels.size() < num_types) {
            throw parse_error(0, "labels header has fewer entries than event types");
        }
        if (!header.has_num_types) {
            num_types = header.labels.size();
        } else {
            throw parse_error(0, "labels header disagrees with num_types");
        }
    }
    return EventSequence(std::move(events), delta_t, length, num_types,
                         std::move(header.labels));
}

EventSequence parse_spike_file(const std::filesystem::path& path, double delta_t) {
    std::ifstream in(path);
    if (!in) {
        throw parse_error(0, "cannot open " + path.string());
    }
    return parse_spike_file(in, delta_t);
}

void write_spike_file(std::ostream& out, const EventSequence& seq) {
    out << "# duration_s=" << format_double(seq.duration_seconds()) << '\n';
    out << "# num_types=" << seq.num_types() << '\n';
    if (!seq.labels().empty()) {
        out << "# labels=";
        for (std::size_t i = 0; i < seq.labels().size(); ++i) {
            out << (i ? "," : "") << seq.labels()[i];
        }
        out << '\n';
    }
    for (const auto& e : seq.events()) {
        out << format_double(static_cast<double>(e.tick) * seq.delta_t()) << ',' << e.type << '\n';
    }
}

void write_spike_file(const std::filesystem::path& path, const EventSequence& seq) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    write_spike_file(out, seq);
}

double estimate_rate(const EventSequence& seq, EventTypeId type) {
    if (seq.length_ticks() <= 0) {
        throw config_error("rate undefined for a zero-length sequence");
    }
    const auto n = std::count_if(seq.events().begin(), seq.events().end(),
                                 [type](const Event& e) { return e.type == type; });
    return static_cast<double>(n) / seq.duration_seconds();
}

std::vector<double> estimate_rates(const EventSequence& seq) {
    if (seq.length_ticks() <= 0) {
        throw config_error("rate undefined for a zero-length sequence");
    }
    const auto counts = seq.type_counts();
    std::vector<double> rates(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        rates[i] = static_cast<double>(counts[i]) / seq.duration_seconds();
    }
    return rates;
}

double mean_rate(const EventSequence& seq) {
    if (seq.length_ticks() <= 0) {
        throw config_error("rate undefined for a zero-length sequence");
    }
    if (seq.num_types() == 0) return 0.0;
    return static_cast<double>(seq.size()) /
           (static_cast<double>(seq.num_types()) * seq.duration_seconds());
}

std::vector<EventSequence> split_trials(const EventSequence& seq, std::size_t n_trials) {
    if (n_trials == 0) {
        throw config_error("n_trials must be at least 1");
    }
    if (static_cast<Tick>(n_trials) > seq.length_ticks()) {
        throw config_error("cannot split " + std::to_string(seq.length_ticks()) + " ticks into " +
                           std::to_string(n_trials) + " trials");
    }
    const Tick width = seq.length_ticks() / static_cast<Tick>(n_trials);
    std::vector<std::vector<Event>> parts(n_trials);
    for (const auto& e : seq.events()) {
        const auto idx = std::min<std::size_t>(static_cast<std::size_t>(e.tick / width), n_trials - 1);
        parts[idx].push_back({e.type, e.tick - static_cast<Tick>(idx) * width});
    }
    std::vector<EventSequence> trials;
    trials.reserve(n_trials);
    for (std::size_t i = 0; i < n_trials; ++i) {
        const Tick len = i + 1 == n_trials
                             ? seq.length_ticks() - static_cast<Tick>(i) * width
                             : width;
        trials.emplace_back(std::move(parts[i]), seq.delta_t(), len, seq.num_types(), seq.labels());
    }
    return trials;
}

} // namespace synpat
