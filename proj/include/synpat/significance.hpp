#pragma once

#include "synpat/episode.hpp"
#include "synpat/spike_data.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace synpat {

// Analytical significance of greedy parallel-episode counts under the null
// hypothesis that every source fires as an independent Bernoulli train.
//
// The counting process is modelled as a walk along the time axis of length L:
// at each tick an occurrence is found with probability p, in which case the
// count increments and the walk jumps `window` ticks; otherwise it advances
// one tick. The mean F and second moment G of the final count obey
//
//   F(L) = (1-p) F(L-1) + p (1 + F(L-W))
//   G(L) = (1-p) G(L-1) + p (1 + G(L-W) + 2 F(L-W))
//   F(x) = G(x) = 0 for x < W
//
// and the reporting threshold is F + k sqrt(G - F^2), k the smallest integer
// with k^2 >= 1/epsilon (Chebyshev).

struct SignificanceParams {
    Tick length{0};           // L, ticks
    Tick window{1};           // W, ticks per occurrence
    std::size_t size{1};      // n, episode size
    std::vector<double> rates_hz; // one shared rate, or one per constituent
    double delta_t{0.001};    // seconds per tick
    double epsilon{0.05};
};

void validate(const SignificanceParams& params);

struct SignificanceResult {
    double p{0.0};
    double mean{0.0};     // F
    double variance{0.0}; // V
    unsigned k{0};
    double threshold{0.0};
};

struct FrequencyMoments {
    double mean{0.0};          // F
    double second_moment{0.0}; // G
    double variance{0.0};      // max(G - F^2, 0) after tolerance
};

// Number of ways n sources can each pick one of W ticks with at least one
// on the first tick: sum_{i<n} (W-1)^(n-1-i) W^i, evaluated by summation.
double anchored_configurations(std::size_t n, Tick window);

// Probability that an occurrence starts at a given tick.
double occurrence_prob(const SignificanceParams& params);
// Same, from per-tick firing probabilities (one shared, or one per constituent).
double occurrence_prob(std::size_t n, Tick window, std::span<const double> per_tick);

FrequencyMoments frequency_moments(Tick length, Tick window, double p);
double expected_frequency(Tick length, Tick window, double p);
double frequency_variance(Tick length, Tick window, double p);

struct ChebyshevThreshold {
    unsigned k{0};
    double threshold{0.0};
};

unsigned chebyshev_k(double epsilon);
ChebyshevThreshold chebyshev_threshold(double mean, double variance, double epsilon);

SignificanceResult evaluate(const SignificanceParams& params);

// Model window for a counter with the given expiry: a span <= T occurrence
// occupies T+1 ticks, a span < T one occupies T.
Tick model_window(Tick expiry, SpanRule rule);

// Integer minimum count for episodes of size n mined from `seq` with the
// given expiry, using the dataset-mean rate.
std::uint64_t auto_threshold(const EventSequence& seq, std::size_t n, Tick expiry, double epsilon,
                             SpanRule rule = SpanRule::inclusive);
// Same, with a rate known in advance instead of one estimated from `seq`.
std::uint64_t auto_threshold_at_rate(const EventSequence& seq, std::size_t n, Tick expiry,
                                     double epsilon, double rate_hz,
                                     SpanRule rule = SpanRule::inclusive);
// Same, for one specific episode, using the product of its constituents' rates.
std::uint64_t auto_threshold(const EventSequence& seq, const Episode& episode, Tick expiry,
                             double epsilon, SpanRule rule = SpanRule::inclusive);

} // namespace synpat
