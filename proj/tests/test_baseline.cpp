#include "oracles.hpp"

#include "synpat/baseline.hpp"
#include "synpat/counting.hpp"
#include "synpat/errors.hpp"
#include "synpat/simulator.hpp"

#include <doctest.h>

#include <set>
#include <sstream>

using namespace synpat;

namespace {

std::vector<Episode> subsets_up_to(std::size_t types, std::size_t max_size) {
    std::vector<Episode> out;
    for (unsigned mask = 1; mask < (1u << types); ++mask) {
        if (static_cast<std::size_t>(__builtin_popcount(mask)) > max_size) continue;
        std::vector<EventTypeId> t;
        for (EventTypeId i = 0; i < types; ++i) {
            if (mask & (1u << i)) t.push_back(i);
        }
        out.emplace_back(std::move(t));
    }
    return out;
}

} // namespace

TEST_CASE("worked example all-occurrence counts") {
    const auto seq = oracle::example_stream();
    CHECK(count_all_occurrences(seq, Episode{0, 1, 2}, 5) == 2);
    CHECK(count_all_occurrences(seq, Episode{0}, 5) == 3);
    CHECK(count_all_occurrences(seq, Episode{0, 7}, 5) == 0);
}

TEST_CASE("all-occurrence count equals the cross product and dominates the greedy count") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<Tick> expiry(0, 12);
    for (int trial = 0; trial < 40; ++trial) {
        const auto seq = oracle::random_sequence(rng, 300, 5, 0.3);
        const OccurrenceIndex index(seq);
        const auto T = expiry(rng);
        for (const auto& e : subsets_up_to(5, 5)) {
            const auto all = index.count_all(e, T);
            REQUIRE(all == oracle::cross_product_count(seq, e, T));
            if (T >= 1) CHECK(all >= count_nonoverlapped(seq, e, T));
        }
    }
}

TEST_CASE("same-tick ties are counted once") {
    const EventSequence seq({{0, 4}, {1, 4}, {2, 4}, {0, 4}}, 1.0, 10, 3);
    CHECK(count_all_occurrences(seq, Episode{0, 1, 2}, 0) == 2);
    CHECK(count_all_occurrences(seq, Episode{0, 1}, 3) == 2);
}

TEST_CASE("pattern enumeration finds exactly the patterns that occur") {
    const auto seq = oracle::example_stream();
    const auto pairs = enumerate_patterns(seq, 5, {2});
    std::set<Episode> got(pairs.begin(), pairs.end());
    std::set<Episode> expected;
    for (const auto& e : subsets_up_to(5, 2)) {
        if (oracle::cross_product_count(seq, e, 5) >= 1) expected.insert(e);
    }
    CHECK(got == expected);
    CHECK(got.count(Episode{2, 4}) == 1);
    CHECK(got.count(Episode{3, 4}) == 0);

    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const auto r = oracle::random_sequence(rng, 200, 6, 0.2);
        for (Tick T : {0, 2, 6}) {
            const auto found = enumerate_patterns(r, T, {4});
            std::set<Episode> a(found.begin(), found.end()), b;
            for (const auto& e : subsets_up_to(6, 4)) {
                if (oracle::cross_product_count(r, e, T) >= 1) b.insert(e);
            }
            CHECK(a == b);
        }
    }
    CHECK(enumerate_patterns(EventSequence({}, 1.0, 10, 3), 5).empty());
}

TEST_CASE("explosion guard") {
    std::vector<Event> events;
    for (EventTypeId t = 0; t < 30; ++t) events.push_back({t, 3});
    const EventSequence seq(events, 1.0, 10, 30);
    CHECK_THROWS_AS(enumerate_patterns(seq, 2), std::length_error);
    CHECK(enumerate_patterns(seq, 2, {2}).size() == 30 + 435);
}

TEST_CASE("jitter surrogates") {
    std::mt19937_64 rng(6);
    const auto seq = oracle::random_sequence(rng, 1000, 4, 0.2);
    const auto same = jitter_surrogate(seq, 0, 99);
    CHECK(same == seq);
    std::stringstream a, b;
    write_spike_file(a, seq);
    write_spike_file(b, same);
    CHECK(a.str() == b.str());

    const auto j = jitter_surrogate(seq, 3, 99);
    CHECK(j.type_counts() == seq.type_counts());
    CHECK(j == jitter_surrogate(seq, 3, 99));
    CHECK_FALSE(j == jitter_surrogate(seq, 3, 100));
    // one type per position so every event can be matched to its source
    std::vector<Event> distinct;
    for (EventTypeId t = 0; t < 50; ++t) distinct.push_back({t, Tick(t) * 7});
    const EventSequence d(distinct, 1.0, 400, 50);
    const auto jd = jitter_surrogate(d, 3, 5);
    for (const auto& e : jd.events()) {
        CHECK(std::abs(e.tick - Tick(e.type) * 7) <= 3);
        CHECK(e.tick >= 0);
    }
    CHECK_THROWS_AS(jitter_surrogate(seq, -1, 1), config_error);
}

TEST_CASE("nearest-rank quantile") {
    std::vector<double> v;
    for (int i = 1; i <= 25; ++i) v.push_back(i);
    CHECK(upper_quantile(v, 0.05) == 24.0);
    CHECK(upper_quantile(v, 0.5) == 13.0);
    CHECK(upper_quantile({7.0}, 0.05) == 7.0);
    CHECK_THROWS(upper_quantile({}, 0.05));
}

TEST_CASE("surrogate test") {
    SimConfig sim;
    sim.num_neurons = 6;
    sim.length_ticks = 20000;
    sim.base_rates_hz = {0.0};
    sim.seed = 2;
    EmbedSpec spec;
    spec.pattern = Episode{1, 3, 4};
    spec.jitter_span = 2;
    for (Tick a = 50; a + 10 < 20000; a += 20) spec.anchors.push_back(a);
    sim.embedded.push_back(spec);
    const auto seq = generate(sim);
    const auto trials = split_trials(seq, 20);

    SurrogateConfig cfg;
    cfg.seed = 3;
    const auto hit = surrogate_significance(trials, spec.pattern, 3, cfg);
    CHECK(hit.significant);
    CHECK(hit.observed_mean >= 45.0);
    CHECK(hit.surrogate_means.size() == 25);
    CHECK(hit.observed_mean > hit.quantile);

    const auto absent = surrogate_significance(trials, Episode{0, 2}, 3, cfg);
    CHECK(absent.observed_mean == 0.0);
    CHECK_FALSE(absent.significant);

    const std::vector<Episode> both{spec.pattern, Episode{0, 2}};
    const auto batch = surrogate_significance(trials, both, 3, cfg);
    CHECK(batch[0].surrogate_means == hit.surrogate_means);
    CHECK(batch[1].significant == absent.significant);

    cfg.alpha = 1.0;
    CHECK_THROWS_AS(surrogate_significance(trials, spec.pattern, 3, cfg), config_error);
    cfg.alpha = 0.05;
    cfg.n_surrogates = 0;
    CHECK_THROWS_AS(validate(cfg), config_error);
}

TEST_CASE("full baseline run") {
    SimConfig sim;
    sim.num_neurons = 6;
    sim.length_ticks = 20000;
    sim.base_rates_hz = {2.0};
    sim.seed = 4;
    EmbedSpec spec;
    spec.pattern = Episode{0, 1, 2};
    spec.jitter_span = 2;
    for (Tick a = 50; a + 10 < 20000; a += 100) spec.anchors.push_back(a);
    sim.embedded.push_back(spec);
    const auto seq = generate(sim);
    SurrogateConfig cfg;
    cfg.n_surrogates = 10;
    cfg.seed = 1;
    const auto result = run_baseline(seq, 3, cfg, {3});
    CHECK(result.outcomes.size() == result.patterns.size());
    bool found = false;
    for (const auto& o : result.outcomes) {
        if (o.pattern == spec.pattern) found = o.significant;
    }
    CHECK(found);
}
