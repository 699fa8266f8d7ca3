#pragma once

#include "synpat/baseline.hpp"
#include "synpat/episode.hpp"
#include "synpat/mining.hpp"
#include "synpat/simulator.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace synpat {

enum class BenchAxis { length, rate, neurons, expiry };
enum class BenchMethod { pe, baseline };

std::string_view to_string(BenchAxis axis);
std::string_view to_string(BenchMethod method);
BenchAxis parse_bench_axis(std::string_view text);
BenchMethod parse_bench_method(std::string_view text);

struct BenchSetup {
    std::size_t num_neurons{20};
    Tick length_ticks{50000};
    double delta_t{0.001};
    double rate_hz{5.0};
    Tick expiry{5};
    // Disjoint patterns over neurons 0, 1, 2, ...; each jittered over
    // min(expiry, max_jitter) ticks.
    std::vector<std::size_t> pattern_sizes{3, 5, 7};
    double embed_rate_hz{3.0};
    Tick max_jitter{5};
    double epsilon{0.05};
    // rate_hz doubles as the known null rate
    RateModel pe_rates{RateModel::product};
    std::size_t pe_runs{100};
    std::size_t baseline_runs{20};
    bool run_pe{true};
    bool run_baseline{true};
    std::size_t surrogates{25};
    std::size_t trials{20};
    double alpha{0.05};
    std::size_t baseline_max_size{8};
    std::uint64_t seed{1};
};

struct BenchRow {
    BenchAxis axis{BenchAxis::length};
    double value{0.0};
    BenchMethod method{BenchMethod::pe};
    std::size_t runs{0};
    double mean_runtime_s{0.0};
    double false_positive_rate{0.0};
    double patterns_found{0.0}; // mean reported patterns (size >= 2) per run
    std::size_t patterns_embedded{0};
    std::optional<double> recall{}; // unset when nothing is embedded

    friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

struct BenchReport {
    std::vector<BenchRow> rows;

    friend bool operator==(const BenchReport&, const BenchReport&) = default;
};

// Simulation config for one grid point and run.
SimConfig bench_sim_config(const BenchSetup& setup, std::uint64_t run_seed);
// `setup` with the swept parameter set to `value`.
BenchSetup at_grid_point(BenchSetup setup, BenchAxis axis, double value);

struct RunScore {
    double runtime_s{0.0};
    std::size_t reported{0};
    std::size_t false_positives{0};
    std::size_t recovered{0};
};

// A reported episode of size >= 2 is a false positive unless its types are
// contained in some embedded pattern; an embedded pattern is recovered only
// when reported exactly.
RunScore score(const std::vector<Episode>& reported, const std::vector<EmbeddedTruth>& truth);

RunScore run_pe_once(const EventSequence& seq, const BenchSetup& setup,
                     const std::vector<EmbeddedTruth>& truth);
RunScore run_baseline_once(const EventSequence& seq, const BenchSetup& setup,
                           const std::vector<EmbeddedTruth>& truth);

BenchReport run_bench(const BenchSetup& setup, BenchAxis axis, const std::vector<double>& values);

void write_bench_tsv(std::ostream& out, const BenchReport& report);
BenchReport parse_bench_tsv(std::istream& in);
void write_bench_json(std::ostream& out, const BenchReport& report);
// Side-by-side runtime / FPR table, one line per grid value.
void write_bench_summary(std::ostream& out, const BenchReport& report);

} // namespace synpat
