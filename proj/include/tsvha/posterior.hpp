#pragma once
// Conjugate single-parameter posteriors over arm reward means.
//
// Gaussian family: unit-variance likelihood with prior N(mu_hat, 1/(k+1)),
// where mu_hat = reward_sum / (k+1) uses the shrunk denominator and equals 0
// before any observation. Beta family: Beta(alpha, beta) over a Bernoulli
// success probability, starting from the uniform (1, 1) prior.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <variant>

#include "random.hpp"

namespace tsvha {

struct GaussianArmState {
    double reward_sum = 0.0;
    std::int64_t play_count = 0;

    double mean() const { return reward_sum / static_cast<double>(play_count + 1); }
    double variance() const { return 1.0 / static_cast<double>(play_count + 1); }
};

struct BetaArmState {
    double alpha = 1.0;
    double beta = 1.0;

    double mean() const { return alpha / (alpha + beta); }
    std::int64_t play_count() const { return static_cast<std::int64_t>(alpha + beta - 2.0); }
};

using ArmPosterior = std::variant<GaussianArmState, BetaArmState>;

inline ArmPosterior update(const ArmPosterior& post, double reward) {
    if (const auto* g = std::get_if<GaussianArmState>(&post)) {
        return GaussianArmState{g->reward_sum + reward, g->play_count + 1};
    }
    const auto& b = std::get<BetaArmState>(post);
    if (reward != 0.0 && reward != 1.0) {
        throw std::domain_error("beta posterior update requires a reward in {0, 1}");
    }
    return BetaArmState{b.alpha + reward, b.beta + 1.0 - reward};
}

inline double sample(const ArmPosterior& post, rng::Stream& stream) {
    if (const auto* g = std::get_if<GaussianArmState>(&post)) {
        return g->mean() + stream.normal01() * std::sqrt(g->variance());
    }
    const auto& b = std::get<BetaArmState>(post);
    return rng::beta_draw(stream, b.alpha, b.beta);
}

/// Observed-reward mean with the shrunk (plays + 1) denominator for both
/// families; 0 before any observation.
inline double empirical_mean(const ArmPosterior& post) {
    if (const auto* g = std::get_if<GaussianArmState>(&post)) {
        return g->mean();
    }
    const auto& b = std::get<BetaArmState>(post);
    return (b.alpha - 1.0) / (b.alpha + b.beta - 1.0);
}

}  // namespace tsvha
