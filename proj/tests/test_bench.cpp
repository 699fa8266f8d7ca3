#include "synpat/bench.hpp"
#include "synpat/errors.hpp"

#include <doctest.h>

#include <sstream>

using namespace synpat;

namespace {

BenchSetup small_setup() {
    BenchSetup s;
    s.num_neurons = 10;
    s.length_ticks = 10000;
    s.pattern_sizes = {3};
    s.embed_rate_hz = 10.0;
    s.pe_runs = 3;
    s.baseline_runs = 1;
    s.surrogates = 5;
    s.trials = 5;
    s.baseline_max_size = 4;
    return s;
}

} // namespace

TEST_CASE("scoring") {
    const std::vector<EmbeddedTruth> truth{{Episode{0, 1, 2}, {}}, {Episode{3, 4}, {}}};
    const std::vector<Episode> reported{{0}, {0, 1}, {0, 1, 2}, {1, 3}, {3, 4}};
    const auto s = score(reported, truth);
    CHECK(s.reported == 4);
    CHECK(s.false_positives == 1);
    CHECK(s.recovered == 2);
}

TEST_CASE("grid points override one parameter") {
    const BenchSetup s;
    CHECK(at_grid_point(s, BenchAxis::neurons, 30).num_neurons == 30);
    CHECK(at_grid_point(s, BenchAxis::expiry, 8).expiry == 8);
    CHECK(at_grid_point(s, BenchAxis::rate, 10).rate_hz == 10.0);
    CHECK(at_grid_point(s, BenchAxis::length, 1e5).length_ticks == 100000);
    CHECK_THROWS_AS(at_grid_point(s, BenchAxis::expiry, 2.5), config_error);
    CHECK_THROWS_AS(at_grid_point(s, BenchAxis::rate, -1), config_error);
}

TEST_CASE("simulation setup embeds disjoint patterns") {
    const BenchSetup s;
    const auto cfg = bench_sim_config(s, 5);
    REQUIRE(cfg.embedded.size() == 3);
    CHECK(cfg.embedded[0].pattern == Episode{0, 1, 2});
    CHECK(cfg.embedded[1].pattern == Episode{3, 4, 5, 6, 7});
    CHECK(cfg.embedded[2].pattern.size() == 7);
    CHECK(cfg.embedded[2].jitter_span == 5);
    auto tight = s;
    tight.num_neurons = 12;
    CHECK_THROWS_AS(bench_sim_config(tight, 1), config_error);
}

TEST_CASE("a small sweep produces one row per method and grid value") {
    const auto report = run_bench(small_setup(), BenchAxis::expiry, {3, 5});
    REQUIRE(report.rows.size() == 4);
    for (const auto& r : report.rows) {
        CHECK(r.runs == (r.method == BenchMethod::pe ? 3u : 1u));
        CHECK(r.patterns_embedded == 1);
        REQUIRE(r.recall.has_value());
        CHECK(*r.recall == 1.0);
        CHECK(r.false_positive_rate >= 0.0);
        CHECK(r.false_positive_rate <= 1.0);
    }
    CHECK(run_bench(small_setup(), BenchAxis::expiry, {3}).rows[0].patterns_found ==
          report.rows[0].patterns_found);
    CHECK_THROWS_AS(run_bench(small_setup(), BenchAxis::expiry, {}), config_error);
}

TEST_CASE("no embedded patterns leaves recall undefined") {
    auto s = small_setup();
    s.pattern_sizes.clear();
    s.run_baseline = false;
    const auto report = run_bench(s, BenchAxis::length, {10000});
    REQUIRE(report.rows.size() == 1);
    CHECK_FALSE(report.rows[0].recall.has_value());
    std::stringstream out;
    write_bench_tsv(out, report);
    CHECK(out.str().find("\tn/a\n") != std::string::npos);
}

TEST_CASE("TSV reports round-trip, summary lines included") {
    BenchReport report;
    report.rows.push_back({BenchAxis::neurons, 20, BenchMethod::pe, 100, 0.0123456789, 0.25, 12.5, 3, 1.0});
    report.rows.push_back({BenchAxis::neurons, 20, BenchMethod::baseline, 20, 3.5, 0.9, 5000, 3, {}});
    report.rows.push_back({BenchAxis::neurons, 30, BenchMethod::pe, 100, 1e-5, 0.0, 0.0, 0, {}});
    std::stringstream buf;
    write_bench_tsv(buf, report);
    write_bench_summary(buf, report);
    CHECK(buf.str().find("# neurons\tPE_runtime_s") != std::string::npos);
    CHECK(parse_bench_tsv(buf) == report);

    std::stringstream bad("axis\tvalue\n");
    CHECK_THROWS_AS(parse_bench_tsv(bad), parse_error);
    std::stringstream json;
    write_bench_json(json, report);
    CHECK(json.str().find("\"recall\": null") != std::string::npos);
}
