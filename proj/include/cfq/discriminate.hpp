#pragma once

// Single-shot guessing game: an absorber is inserted with probability 1/2,
// one photon is sent, and the observer guesses presence from the outcome.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "cfq/counterfactual.hpp"
#include "cfq/errors.hpp"
#include "cfq/scenarios.hpp"
#include "cfq/tolerances.hpp"

namespace cfq {

/// Probabilities over labelled outcomes. The absorption event, when present,
/// carries kAbsorbedLabel.
struct OutcomeDistribution {
    std::vector<std::string> labels;
    std::vector<double> probs;

    double at(const std::string& label) const {
        for (std::size_t k = 0; k < labels.size(); ++k) {
            if (labels[k] == label) return probs[k];
        }
        return 0.0;
    }
    bool has(const std::string& label) const {
        return std::find(labels.begin(), labels.end(), label) != labels.end();
    }
};

/// P(m) and {P(m|X_a), P(a)} read off a report.
inline std::pair<OutcomeDistribution, OutcomeDistribution> game_distributions(const GainSummary& s) {
    OutcomeDistribution free;
    OutcomeDistribution blocked;
    for (const auto& o : s.outcomes) {
        free.labels.push_back(o.label);
        free.probs.push_back(o.p_m);
        blocked.labels.push_back(o.label);
        blocked.probs.push_back(o.p_m_given_block);
    }
    free.labels.push_back(kAbsorbedLabel);
    free.probs.push_back(0.0);
    blocked.labels.push_back(kAbsorbedLabel);
    blocked.probs.push_back(s.p_a);
    return {free, blocked};
}

enum class Verdict { absent, present };

struct GuessMap {
    std::vector<std::string> labels;  ///< outcome labels, absorption last
    std::vector<Verdict> verdicts;

    Verdict at(const std::string& label) const {
        for (std::size_t k = 0; k < labels.size(); ++k) {
            if (labels[k] == label) return verdicts[k];
        }
        throw LabelMismatch("no verdict for outcome '" + label + "'");
    }
};

namespace detail {

// Aligns both distributions on the blocked one's label order (absorption
// last). The free distribution may omit absorption, which then has
// probability zero.
inline void align_labels(const OutcomeDistribution& p, const OutcomeDistribution& p_blocked) {
    if (p.labels.size() != p.probs.size() || p_blocked.labels.size() != p_blocked.probs.size()) {
        throw LabelMismatch("distribution has a different number of labels and probabilities");
    }
    if (!p_blocked.has(kAbsorbedLabel)) throw LabelMismatch("blocked distribution lacks the absorption event");
    if (p.has(kAbsorbedLabel) && p.at(kAbsorbedLabel) != 0.0) {
        throw LabelMismatch("absorption must have probability zero without the absorber");
    }
    std::size_t matched = 0;
    for (const auto& l : p.labels) {
        if (l == kAbsorbedLabel) continue;
        if (!p_blocked.has(l)) throw LabelMismatch("outcome '" + l + "' missing from blocked distribution");
        ++matched;
    }
    if (matched + 1 != p_blocked.labels.size()) {
        throw LabelMismatch("blocked distribution has outcomes the free one lacks");
    }
}

}  // namespace detail

/// Guesses "present" exactly where the absorber makes the outcome more
/// likely (outside the tie band); absorption always means present.
inline GuessMap optimal_guess_map(const OutcomeDistribution& p, const OutcomeDistribution& p_blocked) {
    detail::align_labels(p, p_blocked);
    GuessMap g;
    for (std::size_t k = 0; k < p_blocked.labels.size(); ++k) {
        const std::string& l = p_blocked.labels[k];
        g.labels.push_back(l);
        if (l == kAbsorbedLabel) {
            g.verdicts.push_back(Verdict::present);
        } else {
            g.verdicts.push_back(p_blocked.probs[k] - p.at(l) > tol::tie_band ? Verdict::present : Verdict::absent);
        }
    }
    return g;
}

/// Average error of the optimal guess with equiprobable prior:
/// (1/2) sum_m min(P(m), P(m|X_a)).
inline double error_probability(const OutcomeDistribution& p, const OutcomeDistribution& p_blocked) {
    detail::align_labels(p, p_blocked);
    double sum = 0.0;
    for (std::size_t k = 0; k < p_blocked.labels.size(); ++k) {
        sum += std::min(p.at(p_blocked.labels[k]), p_blocked.probs[k]);
    }
    return 0.5 * sum;
}

/// SplitMix64 evaluated at an arbitrary counter: the k-th output of the
/// SplitMix64 stream seeded with `seed`. Uses only 64-bit integer arithmetic,
/// so streams are identical on every platform.
struct CounterRng {
    static constexpr const char* name = "splitmix64-counter";

    static constexpr std::uint64_t at(std::uint64_t seed, std::uint64_t counter) {
        std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    static constexpr double uniform(std::uint64_t seed, std::uint64_t counter) {
        return static_cast<double>(at(seed, counter) >> 11) * 0x1.0p-53;
    }
};

struct GameEstimate {
    std::uint64_t trials = 0;
    std::uint64_t errors = 0;
    double empirical_error = 0.0;
    double std_error = 0.0;  ///< sqrt(q (1 - q) / trials) at the analytic error q
    double analytic_error = 0.0;
    std::uint64_t seed = 0;
    std::string generator = CounterRng::name;
};

namespace detail {

inline std::size_t sample_index(const std::vector<double>& cdf, double u) {
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

inline std::vector<double> cumulative(const std::vector<double>& probs) {
    std::vector<double> cdf(probs.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        acc += std::max(0.0, probs[k]);
        cdf[k] = acc;
    }
    // Rescale so rounding never leaves a gap at the top.
    for (auto& c : cdf) c /= acc;
    return cdf;
}

}  // namespace detail

/// Monte Carlo estimate of the game's error rate. Trial t draws its coin from
/// counter 2t and its outcome from counter 2t+1, so the tally depends only on
/// (seed, trials) and not on `workers`.
inline GameEstimate simulate_game(const OutcomeDistribution& p, const OutcomeDistribution& p_blocked,
                                  std::uint64_t trials, std::uint64_t seed, unsigned workers = 1) {
    if (trials < 1) throw DomainError("simulate_game needs at least one trial");
    const GuessMap guess = optimal_guess_map(p, p_blocked);

    std::vector<double> free_probs;
    for (const auto& l : p_blocked.labels) free_probs.push_back(p.at(l));
    const std::vector<double> cdf_free = detail::cumulative(free_probs);
    const std::vector<double> cdf_blocked = detail::cumulative(p_blocked.probs);

    auto run = [&](std::uint64_t begin, std::uint64_t end) {
        std::uint64_t errors = 0;
        for (std::uint64_t t = begin; t < end; ++t) {
            const bool present = (CounterRng::at(seed, 2 * t) >> 63) != 0;
            const double u = CounterRng::uniform(seed, 2 * t + 1);
            const std::size_t k = detail::sample_index(present ? cdf_blocked : cdf_free, u);
            const bool said_present = guess.verdicts[k] == Verdict::present;
            errors += said_present != present ? 1 : 0;
        }
        return errors;
    };

    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::uint64_t>(trials, 64))));
    std::vector<std::uint64_t> partial(workers, 0);
    if (workers == 1) {
        partial[0] = run(0, trials);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = trials / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t begin = chunk * w;
            const std::uint64_t end = w + 1 == workers ? trials : begin + chunk;
            pool.emplace_back([&, w, begin, end] { partial[w] = run(begin, end); });
        }
        for (auto& th : pool) th.join();
    }

    GameEstimate est;
    est.trials = trials;
    for (auto e : partial) est.errors += e;
    est.empirical_error = static_cast<double>(est.errors) / static_cast<double>(trials);
    est.analytic_error = error_probability(p, p_blocked);
    est.std_error = std::sqrt(est.analytic_error * (1.0 - est.analytic_error) / static_cast<double>(trials));
    est.seed = seed;
    return est;
}

inline GameEstimate simulate_game(const Scenario& scenario, std::uint64_t trials, std::uint64_t seed,
                                  unsigned workers = 1) {
    const auto [free, blocked] = game_distributions(scenario.report());
    return simulate_game(free, blocked, trials, seed, workers);
}

}  // namespace cfq
