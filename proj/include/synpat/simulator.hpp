#pragma once

#include "synpat/episode.hpp"
#include "synpat/spike_data.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

namespace synpat {

// Spikes of `pattern` placed around anchor ticks; each constituent fires once
// per instance at an independent uniform tick in [anchor, anchor + jitter_span].
struct EmbedSpec {
    Episode pattern;
    Tick jitter_span{0};
    // Instances per second as a Bernoulli-per-tick process; ignored when
    // `anchors` is non-empty.
    double rate_hz{0.0};
    std::vector<Tick> anchors;
};

// If `source` fired at t - delay, `target` also fires at t with `probability`.
struct Connection {
    EventTypeId source{0};
    EventTypeId target{0};
    Tick delay{0};
    double probability{0.0};
};

// From tick `begin` on, every neuron's background rate is replaced by
// rates_hz (one shared value or one per neuron).
struct RateSegment {
    Tick begin{0};
    std::vector<double> rates_hz;
};

struct SimConfig {
    std::size_t num_neurons{0};
    Tick length_ticks{0};
    double delta_t{0.001};
    std::vector<double> base_rates_hz; // one shared value or one per neuron
    std::vector<RateSegment> schedule; // sorted by begin
    std::vector<EmbedSpec> embedded;
    std::vector<Connection> connections;
    std::uint64_t seed{0};
};

void validate(const SimConfig& config);

struct EmbeddedTruth {
    Episode pattern;
    std::vector<Tick> anchors;
};

// Instance anchors used by generate() for each EmbedSpec, in config order.
std::vector<EmbeddedTruth> embed_truth(const SimConfig& config);

// Discrete-time Bernoulli background (probability rate * delta_t per tick),
// then conditional connections in config order, then embedded patterns.
// Ticks lie in [0, length_ticks); deterministic given config.seed.
EventSequence generate(const SimConfig& config);

// key = value config text; see README for the keys.
SimConfig parse_sim_config(std::istream& in);
SimConfig parse_sim_config(const std::filesystem::path& path);

// `pattern_types<TAB>anchor_tick` rows with a header line.
void write_truth(std::ostream& out, const std::vector<EmbeddedTruth>& truth);
std::vector<EmbeddedTruth> parse_truth(std::istream& in);

} // namespace synpat
