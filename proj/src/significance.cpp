#include "synpat/significance.hpp"

#include "synpat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace synpat {

namespace {

void check_probability(double q) {
    if (!(q >= 0.0 && q <= 1.0)) {
        throw invalid_probability("per-tick firing probability " + std::to_string(q) +
                                  " outside [0, 1]");
    }
}

void check_epsilon(double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw config_error("epsilon must lie in (0, 1)");
    }
}

std::uint64_t ceil_count(double threshold) {
    if (threshold <= 0.0) return 0;
    return static_cast<std::uint64_t>(std::ceil(threshold - 1e-9 * std::max(1.0, threshold)));
}

} // namespace

void validate(const SignificanceParams& params) {
    if (params.length < 0) throw config_error("L must be non-negative");
    if (params.window < 1) throw config_error("T must be at least 1");
    if (params.size < 1) throw config_error("n must be at least 1");
    if (!(params.delta_t > 0.0)) throw config_error("delta_t must be positive");
    if (params.rates_hz.size() != 1 && params.rates_hz.size() != params.size) {
        throw config_error("expected one shared rate or one rate per constituent");
    }
    for (double r : params.rates_hz) {
        if (!(r >= 0.0) || !std::isfinite(r)) throw config_error("rates must be non-negative");
        check_probability(r * params.delta_t);
    }
    check_epsilon(params.epsilon);
}

double anchored_configurations(std::size_t n, Tick window) {
    const double w = static_cast<double>(window);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum += std::pow(w - 1.0, static_cast<double>(n - 1 - i)) * std::pow(w, static_cast<double>(i));
    }
    return sum;
}

double occurrence_prob(std::size_t n, Tick window, std::span<const double> per_tick) {
    if (per_tick.size() != 1 && per_tick.size() != n) {
        throw config_error("expected one shared probability or one per constituent");
    }
    double prod = 1.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double q = per_tick.size() == 1 ? per_tick[0] : per_tick[j];
        check_probability(q);
        prod *= q;
    }
    const double p = prod * anchored_configurations(n, window);
    check_probability(p);
    return p;
}

double occurrence_prob(const SignificanceParams& params) {
    validate(params);
    std::vector<double> q;
    q.reserve(params.rates_hz.size());
    for (double r : params.rates_hz) q.push_back(r * params.delta_t);
    return occurrence_prob(params.size, params.window, q);
}

FrequencyMoments frequency_moments(Tick length, Tick window, double p) {
    if (window < 1) throw config_error("T must be at least 1");
    check_probability(p);
    FrequencyMoments m;
    if (length < window) return m;

    // f[x % W] holds F(x) for x in (current - W, current]; the slot for x is
    // also the slot of x - W, read before being overwritten.
    const auto w = static_cast<std::size_t>(window);
    std::vector<double> f(w, 0.0);
    std::vector<double> g(w, 0.0);
    double f_prev = 0.0; // F(x - 1)
    double g_prev = 0.0;
    for (Tick x = window; x <= length; ++x) {
        const auto slot = static_cast<std::size_t>(x % window);
        const double f_back = f[slot];
        const double g_back = g[slot];
        const double fx = (1.0 - p) * f_prev + p * (1.0 + f_back);
        const double gx = (1.0 - p) * g_prev + p * (1.0 + g_back + 2.0 * f_back);
        f[slot] = fx;
        g[slot] = gx;
        f_prev = fx;
        g_prev = gx;
    }
    m.mean = f_prev;
    m.second_moment = g_prev;
    m.variance = g_prev - f_prev * f_prev;
    if (m.variance < 0.0 && m.variance > -1e-9 * std::max(1.0, g_prev)) {
        m.variance = 0.0;
    }
    return m;
}

double expected_frequency(Tick length, Tick window, double p) {
    return frequency_moments(length, window, p).mean;
}

double frequency_variance(Tick length, Tick window, double p) {
    return frequency_moments(length, window, p).variance;
}

unsigned chebyshev_k(double epsilon) {
    check_epsilon(epsilon);
    // k^2 * epsilon >= 1, with slack for 1/epsilon landing a hair above a square.
    const double target = 1.0 - 1e-12;
    auto k = static_cast<unsigned>(std::max(1.0, std::floor(std::sqrt(1.0 / epsilon)) - 1.0));
    while (static_cast<double>(k) * k * epsilon < target) ++k;
    while (k > 1 && static_cast<double>(k - 1) * (k - 1) * epsilon >= target) --k;
    return k;
}

ChebyshevThreshold chebyshev_threshold(double mean, double variance, double epsilon) {
    if (variance < 0.0) throw config_error("variance must be non-negative");
    const unsigned k = chebyshev_k(epsilon);
    return {k, mean + k * std::sqrt(variance)};
}

SignificanceResult evaluate(const SignificanceParams& params) {
    SignificanceResult r;
    r.p = occurrence_prob(params);
    const auto m = frequency_moments(params.length, params.window, r.p);
    r.mean = m.mean;
    r.variance = m.variance;
    const auto c = chebyshev_threshold(m.mean, m.variance, params.epsilon);
    r.k = c.k;
    r.threshold = c.threshold;
    return r;
}

Tick model_window(Tick expiry, SpanRule rule) {
    return rule == SpanRule::inclusive ? expiry + 1 : expiry;
}

namespace {

std::uint64_t threshold_from_rates(const EventSequence& seq, std::size_t n, Tick expiry,
                                   double epsilon, SpanRule rule, std::vector<double> rates) {
    if (seq.length_ticks() <= 0) {
        throw config_error("automatic threshold needs a sequence of positive length");
    }
    SignificanceParams params;
    params.length = seq.length_ticks();
    params.window = model_window(expiry, rule);
    params.size = n;
    params.rates_hz = std::move(rates);
    params.delta_t = seq.delta_t();
    params.epsilon = epsilon;
    return ceil_count(evaluate(params).threshold);
}

} // namespace

std::uint64_t auto_threshold(const EventSequence& seq, std::size_t n, Tick expiry, double epsilon,
                             SpanRule rule) {
    if (seq.length_ticks() <= 0) {
        throw config_error("automatic threshold needs a sequence of positive length");
    }
    return threshold_from_rates(seq, n, expiry, epsilon, rule, {mean_rate(seq)});
}

std::uint64_t auto_threshold_at_rate(const EventSequence& seq, std::size_t n, Tick expiry,
                                     double epsilon, double rate_hz, SpanRule rule) {
    return threshold_from_rates(seq, n, expiry, epsilon, rule, {rate_hz});
}

std::uint64_t auto_threshold(const EventSequence& seq, const Episode& episode, Tick expiry,
                             double epsilon, SpanRule rule) {
    if (seq.length_ticks() <= 0) {
        throw config_error("automatic threshold needs a sequence of positive length");
    }
    const auto all = estimate_rates(seq);
    std::vector<double> rates;
    for (auto t : episode.types()) {
        rates.push_back(t < all.size() ? all[t] : 0.0);
    }
    return threshold_from_rates(seq, episode.size(), expiry, epsilon, rule, std::move(rates));
}

} // namespace synpat
