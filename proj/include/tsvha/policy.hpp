#pragma once
// Arm-selection policies: Thompson sampling, TS with virtual helping agents
// (combined posterior samples), the greedy limit, and satisficing TS.
//
// Draw order is fixed: arms ascending, agents ascending within an arm, so a
// given stream state always reproduces the same trajectory. Argmax ties
// break to the lowest arm index.

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "combiner.hpp"
#include "posterior.hpp"
#include "random.hpp"

namespace tsvha {

enum class PolicyKind { TS, TSVHA, Greedy, STS };

enum class PosteriorFamily { Gaussian, Beta };

struct PolicySpec {
    PolicyKind kind = PolicyKind::TS;
    PosteriorFamily family = PosteriorFamily::Gaussian;
    CombinerSpec combiner;  // TSVHA only
    double epsilon = 0.0;   // STS only
};

struct HistoryEntry {
    std::int64_t period = 0;
    int arm = 0;
    double theta = 0.0;
};

struct PolicyState {
    std::vector<ArmPosterior> posteriors;
    std::vector<HistoryEntry> history;  // retained only for STS
    std::int64_t t = 1;

    int arms() const { return static_cast<int>(posteriors.size()); }
};

inline void validate_policy_spec(const PolicySpec& spec) {
    if (spec.epsilon < 0.0) throw std::domain_error("policy epsilon must be nonnegative");
    if (spec.kind == PolicyKind::TSVHA) {
        const auto& c = spec.combiner;
        switch (c.kind) {
            case CombinerKind::Identity:
                if (c.agents != 1) throw std::domain_error("identity combiner requires exactly 1 agent");
                break;
            case CombinerKind::C1:
                if (c.agents < 1) throw std::domain_error("c1 combiner requires at least 1 agent");
                break;
            case CombinerKind::C2:
                if (c.agents < 2) throw std::domain_error("c2 combiner requires at least 2 agents");
                break;
            case CombinerKind::C3:
                if (c.c3_agent_cap < 1) throw std::domain_error("c3 agent cap must be positive");
                break;
        }
    }
}

inline PolicyState make_policy_state(const PolicySpec& spec, int arms) {
    validate_policy_spec(spec);
    if (arms < 1) throw std::domain_error("policy requires at least 1 arm");
    PolicyState state;
    state.posteriors.reserve(static_cast<std::size_t>(arms));
    for (int i = 0; i < arms; ++i) {
        if (spec.family == PosteriorFamily::Gaussian) {
            state.posteriors.emplace_back(GaussianArmState{});
        } else {
            state.posteriors.emplace_back(BetaArmState{});
        }
    }
    return state;
}

struct Selection {
    int arm = 0;
    double theta = 0.0;
};

namespace detail {

inline int argmax_lowest(std::span<const double> values) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(values.size()); ++i) {
        if (values[static_cast<std::size_t>(i)] > values[static_cast<std::size_t>(best)]) best = i;
    }
    return best;
}

inline std::vector<double> collect_empirical_means(const PolicyState& state) {
    std::vector<double> means;
    means.reserve(state.posteriors.size());
    for (const auto& post : state.posteriors) means.push_back(empirical_mean(post));
    return means;
}

inline std::vector<double> combined_thetas(const PolicyState& state, const CombinerSpec& combiner,
                                           rng::Stream& stream) {
    const auto arms = state.posteriors.size();
    std::vector<double> thetas(arms);
    switch (combiner.kind) {
        case CombinerKind::Identity: {
            for (std::size_t i = 0; i < arms; ++i) thetas[i] = sample(state.posteriors[i], stream);
            break;
        }
        case CombinerKind::C1:
        case CombinerKind::C2: {
            const CoefficientVector coeffs = combiner.kind == CombinerKind::C1
                                                 ? c1_coefficients(combiner.agents)
                                                 : c2_coefficients(combiner.agents);
            std::vector<double> draws(static_cast<std::size_t>(combiner.agents));
            for (std::size_t i = 0; i < arms; ++i) {
                for (auto& d : draws) d = sample(state.posteriors[i], stream);
                thetas[i] = linear_combine(coeffs, draws);
            }
            break;
        }
        case CombinerKind::C3: {
            const std::vector<double> means = collect_empirical_means(state);
            const int agents = arms >= 2 ? c3_agent_count(state.t, means, combiner.c3_agent_cap) : 1;
            const double floor_mean = *std::min_element(means.begin(), means.end());
            for (std::size_t i = 0; i < arms; ++i) {
                double avg;
                if (const auto* g = std::get_if<GaussianArmState>(&state.posteriors[i])) {
                    // Averaging `agents` Gaussian draws equals one draw with
                    // the variance scaled by 1/agents.
                    avg = scaled_gaussian_sample(*g, static_cast<double>(agents), stream);
                } else {
                    double sum = 0.0;
                    for (int n = 0; n < agents; ++n) sum += sample(state.posteriors[i], stream);
                    avg = sum / static_cast<double>(agents);
                }
                thetas[i] = std::max(avg, floor_mean);
            }
            break;
        }
    }
    return thetas;
}

inline Selection sts_selection(const PolicyState& state, double epsilon, rng::Stream& stream) {
    std::vector<double> thetas(state.posteriors.size());
    for (std::size_t i = 0; i < thetas.size(); ++i) thetas[i] = sample(state.posteriors[i], stream);
    const int candidate = argmax_lowest(thetas);
    for (const auto& entry : state.history) {
        if (entry.theta + epsilon >= thetas[static_cast<std::size_t>(candidate)]) {
            return {entry.arm, thetas[static_cast<std::size_t>(entry.arm)]};
        }
    }
    return {candidate, thetas[static_cast<std::size_t>(candidate)]};
}

}  // namespace detail

inline Selection select_arm(const PolicyState& state, const PolicySpec& spec, rng::Stream& stream) {
    if (state.posteriors.empty()) throw std::domain_error("policy state has no arms");
    std::vector<double> thetas;
    switch (spec.kind) {
        case PolicyKind::TS: {
            thetas.resize(state.posteriors.size());
            for (std::size_t i = 0; i < thetas.size(); ++i) thetas[i] = sample(state.posteriors[i], stream);
            break;
        }
        case PolicyKind::Greedy: {
            thetas = detail::collect_empirical_means(state);
            break;
        }
        case PolicyKind::TSVHA: {
            thetas = detail::combined_thetas(state, spec.combiner, stream);
            break;
        }
        case PolicyKind::STS: {
            return detail::sts_selection(state, spec.epsilon, stream);
        }
    }
    const int arm = detail::argmax_lowest(thetas);
    return {arm, thetas[static_cast<std::size_t>(arm)]};
}

/// Satisficing selection: draw TS samples, then replay the arm of the
/// earliest past period whose recorded sample is within epsilon of the
/// current best draw; fall back to the current argmax.
inline int sts_select(const PolicyState& state, double epsilon, rng::Stream& stream) {
    if (state.posteriors.empty()) throw std::domain_error("policy state has no arms");
    if (epsilon < 0.0) throw std::domain_error("policy epsilon must be nonnegative");
    return detail::sts_selection(state, epsilon, stream).arm;
}

inline PolicyState step(PolicyState state, const PolicySpec& spec, int arm, double reward, double theta) {
    if (arm < 0 || arm >= state.arms()) throw std::domain_error("invalid arm index");
    state.posteriors[static_cast<std::size_t>(arm)] =
        update(state.posteriors[static_cast<std::size_t>(arm)], reward);
    if (spec.kind == PolicyKind::STS) state.history.push_back({state.t, arm, theta});
    state.t += 1;
    return state;
}

}  // namespace tsvha
