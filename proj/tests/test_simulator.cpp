#include "synpat/counting.hpp"
#include "synpat/errors.hpp"
#include "synpat/simulator.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace synpat;

namespace {

SimConfig base(std::size_t m, double rate, std::uint64_t seed = 1) {
    SimConfig cfg;
    cfg.num_neurons = m;
    cfg.length_ticks = 50000;
    cfg.base_rates_hz = {rate};
    cfg.seed = seed;
    return cfg;
}

} // namespace

TEST_CASE("silent configuration gives an empty stream") {
    const auto seq = generate(base(4, 0.0));
    CHECK(seq.empty());
    CHECK(seq.num_types() == 4);
    CHECK(seq.length_ticks() == 50000);
}

TEST_CASE("background count stays within three sigma") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto seq = generate(base(1, 5.0, seed));
        const double q = 0.005;
        const double sigma = std::sqrt(50000 * q * (1 - q));
        CHECK(std::abs(double(seq.size()) - 250.0) <= 3 * sigma);
        for (const auto& e : seq.events()) CHECK(e.tick < 50000);
    }
}

TEST_CASE("rate schedule switches the background rate") {
    auto cfg = base(1, 1.0);
    cfg.schedule.push_back({25000, {20.0}});
    const auto seq = generate(cfg);
    std::size_t early = 0, late = 0;
    for (const auto& e : seq.events()) (e.tick < 25000 ? early : late) += 1;
    CHECK(early < 60);
    CHECK(late > 400);
}

TEST_CASE("embedding on silence yields exactly the anchored instances") {
    auto cfg = base(5, 0.0);
    EmbedSpec spec;
    spec.pattern = Episode{0, 2, 4};
    spec.jitter_span = 5;
    for (Tick a = 0; a < 100; ++a) spec.anchors.push_back(100 + a * 400);
    cfg.embedded.push_back(spec);
    const auto seq = generate(cfg);
    CHECK(seq.size() == 300);
    CHECK(count_nonoverlapped(seq, spec.pattern, 5) == 100);
    const auto truth = embed_truth(cfg);
    REQUIRE(truth.size() == 1);
    CHECK(truth[0].anchors == spec.anchors);
    for (const auto& e : seq.events()) {
        const Tick rel = (e.tick - 100) % 400;
        CHECK(rel >= 0);
        CHECK(rel <= 5);
    }
}

TEST_CASE("embedding on background adds at least the anchored instances") {
    auto cfg = base(5, 5.0, 3);
    EmbedSpec spec;
    spec.pattern = Episode{1, 2, 3};
    spec.jitter_span = 5;
    for (Tick a = 0; a < 100; ++a) spec.anchors.push_back(100 + a * 400);
    cfg.embedded.push_back(spec);
    CHECK(count_nonoverlapped(generate(cfg), spec.pattern, 5) >= 95);
}

TEST_CASE("rate-driven anchors agree between generate and embed_truth") {
    auto cfg = base(6, 2.0, 8);
    EmbedSpec spec;
    spec.pattern = Episode{0, 1, 2};
    spec.jitter_span = 4;
    spec.rate_hz = 3.0;
    cfg.embedded.push_back(spec);
    const auto truth = embed_truth(cfg);
    REQUIRE(truth.size() == 1);
    CHECK(truth[0].anchors.size() > 100);
    CHECK(truth[0].anchors.size() < 200);
    for (auto a : truth[0].anchors) CHECK(a + 4 < 50000);
    auto silent = cfg;
    silent.base_rates_hz = {0.0};
    CHECK(generate(silent).size() == 3 * truth[0].anchors.size());
}

TEST_CASE("connections copy source spikes with a delay") {
    auto cfg = base(2, 0.0);
    cfg.base_rates_hz = {10.0, 0.0};
    cfg.connections.push_back({0, 1, 3, 1.0});
    const auto seq = generate(cfg);
    std::vector<Tick> a, b;
    for (const auto& e : seq.events()) (e.type == 0 ? a : b).push_back(e.tick);
    REQUIRE(!a.empty());
    std::vector<Tick> shifted;
    for (auto t : a) {
        if (t + 3 < 50000) shifted.push_back(t + 3);
    }
    CHECK(b == shifted);
}

TEST_CASE("generation is deterministic in the seed") {
    auto cfg = base(10, 5.0, 42);
    CHECK(generate(cfg) == generate(cfg));
    auto other = cfg;
    other.seed = 43;
    CHECK_FALSE(generate(cfg) == generate(other));
}

TEST_CASE("invalid configurations are rejected") {
    auto cfg = base(3, 5.0);
    cfg.base_rates_hz = {2000.0};
    CHECK_THROWS_AS(validate(cfg), invalid_probability);
    cfg = base(3, 5.0);
    cfg.base_rates_hz = {1.0, 2.0};
    CHECK_THROWS_AS(validate(cfg), config_error);
    cfg = base(3, 5.0);
    cfg.embedded.push_back({Episode{0, 5}, 2, 1.0, {}});
    CHECK_THROWS_AS(validate(cfg), config_error);
    cfg = base(3, 5.0);
    cfg.embedded.push_back({Episode{0, 1}, 2, 0.0, {49999}});
    CHECK_THROWS_AS(validate(cfg), config_error);
    cfg = base(3, 5.0);
    cfg.connections.push_back({0, 1, 1, 1.5});
    CHECK_THROWS_AS(validate(cfg), config_error);
}

TEST_CASE("config text") {
    std::istringstream in(R"(# demo
num_neurons = 8
duration_s = 10
delta_t = 0.001
seed = 9
rate_hz = 5
rate_segment = 5000 2,2,2,2,2,2,2,2
embed = 0,1,2 jitter=3 rate=2   # trailing comment
embed = 5,6 anchors=10,500
connection = 3 4 2 0.5
)");
    const auto cfg = parse_sim_config(in);
    CHECK(cfg.num_neurons == 8);
    CHECK(cfg.length_ticks == 10000);
    CHECK(cfg.seed == 9);
    CHECK(cfg.base_rates_hz == std::vector<double>{5.0});
    REQUIRE(cfg.schedule.size() == 1);
    CHECK(cfg.schedule[0].rates_hz.size() == 8);
    REQUIRE(cfg.embedded.size() == 2);
    CHECK(cfg.embedded[0].pattern == Episode{0, 1, 2});
    CHECK(cfg.embedded[0].jitter_span == 3);
    CHECK(cfg.embedded[1].anchors == std::vector<Tick>{10, 500});
    REQUIRE(cfg.connections.size() == 1);
    CHECK(cfg.connections[0].probability == 0.5);
    CHECK_NOTHROW(validate(cfg));

    std::istringstream bad("num_neurons = 3\nbogus = 1\n");
    try {
        parse_sim_config(bad);
        FAIL("expected a parse error");
    } catch (const parse_error& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("truth sidecar round-trips") {
    const std::vector<EmbeddedTruth> truth{{Episode{0, 1, 2}, {5, 90}}, {Episode{4, 7}, {12}}};
    std::stringstream buf;
    write_truth(buf, truth);
    CHECK(buf.str().rfind("pattern_types\tanchor_tick\n", 0) == 0);
    const auto back = parse_truth(buf);
    REQUIRE(back.size() == 2);
    CHECK(back[0].pattern == truth[0].pattern);
    CHECK(back[0].anchors == truth[0].anchors);
    CHECK(back[1].anchors == truth[1].anchors);
}
