#pragma once
// Sample combiners for Thompson sampling with virtual helping agents.
//
// Per arm and period, N agents each draw one posterior sample and a combiner
// maps the N samples to a single decision statistic. C1 averages (combined
// variance 1/N of the posterior's: more exploitation), C2 inflates the
// variance to N times the posterior's (more exploration), and C3 averages a
// time-varying number of agents and floors the result at the worst empirical
// mean. Both linear combiners preserve the mean: sum c_n = 1, with
// sum c_n^2 = 1/N for C1 and sum c_n^2 = N for C2. For Gaussian posteriors
// the combined linear sample is distributed N(mu_hat, 1/(gamma (k+1))) with
// gamma = N under C1 and gamma = 1/N under C2, which scaled_gaussian_sample
// reproduces with a single draw.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "posterior.hpp"
#include "random.hpp"

namespace tsvha {

struct CoefficientVector {
    std::vector<double> values;

    int agents() const { return static_cast<int>(values.size()); }
    double sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }
    double sum_squares() const {
        return std::inner_product(values.begin(), values.end(), values.begin(), 0.0);
    }
};

enum class CombinerKind { Identity, C1, C2, C3 };

struct CombinerSpec {
    CombinerKind kind = CombinerKind::Identity;
    int agents = 1;           // total agents including the primary; ignored for C3
    int c3_agent_cap = 10000;
};

inline CoefficientVector c1_coefficients(int agents) {
    if (agents < 1) throw std::domain_error("c1 combiner requires at least 1 agent");
    return CoefficientVector{std::vector<double>(static_cast<std::size_t>(agents), 1.0 / agents)};
}

// The printed even-N magnitude is replaced by sqrt(N^2-1)/N with alternating
// signs; that is the unique shape of the form 1/N +- s meeting both moment
// contracts. Odd N keeps the sqrt((N+1)/N) magnitude on the first N-1 terms
// and c_N = 1/N.
inline CoefficientVector c2_coefficients(int agents) {
    if (agents < 2) throw std::domain_error("c2 combiner requires at least 2 agents");
    const int n = agents;
    std::vector<double> c(static_cast<std::size_t>(n), 1.0 / n);
    if (n % 2 == 0) {
        const double s = std::sqrt(static_cast<double>(n) * n - 1.0) / n;
        for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] += (i % 2 == 0 ? s : -s);
    } else {
        const double s = std::sqrt((n + 1.0) / n);
        for (int i = 0; i + 1 < n; ++i) c[static_cast<std::size_t>(i)] += (i % 2 == 0 ? s : -s);
    }
    return CoefficientVector{std::move(c)};
}

inline double linear_combine(const CoefficientVector& coeffs, std::span<const double> samples) {
    if (coeffs.values.size() != samples.size()) {
        throw std::domain_error("combiner coefficient count must match the sample count");
    }
    double out = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) out += coeffs.values[i] * samples[i];
    return out;
}

/// Number of agents C3 deploys at period t: min(cap, floor(max(1, t * gap)))
/// where gap is the spread between the two largest empirical means.
inline int c3_agent_count(std::int64_t t, std::span<const double> empirical_means, int cap) {
    if (t < 1) throw std::domain_error("c3 agent count requires t >= 1");
    if (empirical_means.size() < 2) throw std::domain_error("c3 agent count requires at least 2 arms");
    if (cap < 1) throw std::domain_error("c3 agent cap must be positive");
    double best = -std::numeric_limits<double>::infinity();
    double second = best;
    for (const double m : empirical_means) {
        if (m > best) {
            second = best;
            best = m;
        } else if (m > second) {
            second = m;
        }
    }
    const double gap = best - second;
    const double n = std::floor(std::max(1.0, static_cast<double>(t) * gap));
    return static_cast<int>(std::min(n, static_cast<double>(cap)));
}

inline double c3_combine(std::span<const double> samples, std::span<const double> empirical_means) {
    if (samples.empty()) throw std::domain_error("c3 combine requires at least one sample");
    if (empirical_means.empty()) throw std::domain_error("c3 combine requires at least one empirical mean");
    const double avg =
        std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
    const double floor_mean = *std::min_element(empirical_means.begin(), empirical_means.end());
    return std::max(avg, floor_mean);
}

/// Single draw from N(mu_hat, 1/(gamma (k+1))); equals in distribution the
/// N-sample linear combine with C1 (gamma = N) or C2 (gamma = 1/N).
inline double scaled_gaussian_sample(const GaussianArmState& state, double gamma, rng::Stream& stream) {
    if (!(gamma > 0.0)) throw std::domain_error("variance scaling factor gamma must be positive");
    return state.mean() + stream.normal01() / std::sqrt(gamma * static_cast<double>(state.play_count + 1));
}

}  // namespace tsvha
